"""Two-stage training-set purification for fully unsupervised anomaly
detection.

Stage 1 partitions a contaminated training set, fits one sub-model per
subset, scores every sample under every sub-model, and keeps the lowest
t-fraction by consensus score. Stage 2 fits the final detector on the
purified set.
"""

try:
    from ._purifier import *  # noqa: F401,F403
    from ._purifier import __version__  # noqa: F401
except ImportError:  # development layout: extension built outside the package
    from _purifier import *  # noqa: F401,F403
    from _purifier import __version__  # noqa: F401
