"""Smoke tests for the python bindings."""

import math

import pytest

import purifier as pf


def default_data(alpha=0.2, seed=3, n_train=200):
    cfg = pf.SyntheticConfig(
        n_train=n_train,
        alpha=alpha,
        n_test_normal=100,
        n_test_anomalous=100,
        seed=seed,
    )
    return pf.generate(cfg)


def test_generate_counts_and_labels():
    data = default_data()
    assert len(data.train) == 200
    assert data.train.dim == 8
    labels = data.train.labels()
    assert labels.count(1) == 40  # round(0.2 * 200)
    assert len(data.test) == 200
    assert len(data.mode_centers) == 32


def test_partition_balanced_cover():
    data = default_data()
    plan = pf.partition_dataset(data.train, 5, seed=7)
    counts = [0] * 5
    for j in plan.assignment:
        counts[j] += 1
    assert sum(counts) == 200
    assert max(counts) - min(counts) <= 1
    again = pf.partition_dataset(data.train, 5, seed=7)
    assert list(again.assignment) == list(plan.assignment)


def test_quantile_and_selection():
    scores = [x / 10.0 for x in range(1, 11)]
    assert pf.compute_threshold(scores, 0.4) == pytest.approx(0.4)
    data = pf.Dataset.from_features([[float(i)] for i in range(10)])
    pure = pf.select_pure(data, scores, 0.4)
    assert list(pure.retained_ids) == [0, 1, 2, 3]
    assert pure.tau == pytest.approx(0.4)


def test_stage1_purifies():
    data = default_data(alpha=0.2, seed=5)
    options = pf.Stage1Options(k=5, t=0.4, master_seed=5)
    result = pf.run_stage1(data.train, options)
    assert result.matrix.rows == 200 and result.matrix.cols == 5
    assert len(result.pure.retained_ids) == 80
    rate = pf.contamination_rate(result.pure.retained_ids, data.train)
    assert rate <= 0.1
    breakdown = pf.purity_breakdown(result.pure, data.train)
    total = (
        breakdown.retained_normal
        + breakdown.retained_anomalous
        + breakdown.discarded_normal
        + breakdown.discarded_anomalous
    )
    assert total == 200


def test_stage2_and_auroc():
    data = default_data(alpha=0.2, seed=9)
    options = pf.Stage1Options(k=5, t=0.4, master_seed=9)
    stage1 = pf.run_stage1(data.train, options)
    detection = pf.run_stage2(
        data.train, stage1.pure, data.test, pf.ScorerConfig(), seed=9
    )
    assert len(detection.test_scores) == len(data.test)
    assert detection.final_model.train_size == 80
    score = pf.auroc(data.test.labels(), detection.test_scores)
    assert score >= 0.99


def test_scorers_and_divergence():
    data = default_data(seed=1)
    plan = pf.partition_dataset(data.train, 5, seed=1)
    submodels = pf.train_submodels(data.train, plan, pf.ScorerConfig())
    matrix = pf.build_score_matrix(submodels, data.train)
    cons = pf.consensus(matrix)
    assert len(cons) == len(data.train)
    assert min(cons) >= 0.0
    delta = pf.cross_model_divergence(submodels, plan, data.train, 0)
    assert delta >= 0.0

    knn = pf.fit_scorer(pf.ScorerConfig(knn_neighbors=1), data.train)
    first = data.train[0]
    assert knn.score(first.features) == 0.0
    assert knn.representation(first.features) == pytest.approx(first.features)

    pca = pf.fit_scorer(pf.ScorerConfig(kind=pf.ScorerKind.Pca), data.train)
    assert pca.score(first.features) >= 0.0


def test_auroc_worked_example():
    assert pf.auroc([0, 0, 1, 1], [0.1, 0.4, 0.35, 0.8]) == pytest.approx(0.75)


def test_csv_round_trip(tmp_path):
    data = default_data(seed=2)
    path = tmp_path / "train.csv"
    pf.write_dataset_csv(data.train, path)
    loaded = pf.read_dataset_csv(path, pf.DatasetRole.Train)
    assert len(loaded) == len(data.train)
    for i in (0, 57, 199):
        assert loaded[i].features == pytest.approx(data.train[i].features, abs=0)
        assert loaded[i].label == data.train[i].label


def test_errors_surface_as_purifier_error():
    data = default_data()
    with pytest.raises(pf.PurifierError):
        pf.partition_dataset(data.train, 0, seed=1)
    with pytest.raises(pf.PurifierError):
        pf.compute_threshold([1.0, 2.0], 0.0)
    with pytest.raises(pf.PurifierError):
        pf.auroc([0, 0], [0.1, 0.2])
    with pytest.raises(pf.PurifierError):
        pf.SyntheticConfig(alpha=1.5)


def test_score_batch_threads_match():
    data = default_data(seed=8)
    scorer = pf.fit_scorer(pf.ScorerConfig(), data.train)
    serial = scorer.score_batch(data.test, threads=1)
    parallel = scorer.score_batch(data.test, threads=8)
    assert serial == parallel
    assert all(math.isfinite(s) and s >= 0.0 for s in serial)
