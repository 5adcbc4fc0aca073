#pragma once

#include <cstddef>
#include <functional>

namespace purifier {

// 0 means auto (hardware concurrency), otherwise the request itself.
std::size_t resolve_threads(std::size_t requested);

// Runs fn over contiguous chunks of [0, n). Chunk boundaries depend only on
// (n, threads), and workers write disjoint ranges, so results never depend
// on scheduling. Exceptions propagate (first one wins).
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace purifier
