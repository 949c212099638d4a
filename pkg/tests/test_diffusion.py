import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from erarec import (
    Algorithm,
    BipartiteDataset,
    ModelConfig,
    ScoreVector,
    build_ra,
    enhance,
    full_ranking,
    recommend,
    score_matrix,
    score_user,
    split,
    transfer_weight,
)

from .oracles import ranking_bruteforce, random_network, scores_bruteforce


def test_toy_probs_scores(toy):
    sim = build_ra(toy)
    sv = score_user(ModelConfig("probs"), toy, sim, 0)
    np.testing.assert_allclose(sv.scores, [0.75, 1.0, 0.25], rtol=0, atol=1e-12)
    assert sv.scores.sum() == pytest.approx(2.0, rel=1e-12)
    assert sv.collected_mask.tolist() == [True, True, False]


def test_toy_heats_scores(toy):
    sv = score_user(ModelConfig("heats"), toy, build_ra(toy), 0)
    np.testing.assert_allclose(sv.scores, [1.0, 0.75, 0.5], rtol=0, atol=1e-12)


def test_zero_degree_user_scores_zero():
    ds = BipartiteDataset.from_edges([(0, 0), (0, 1)], 2, 3)
    sv = score_user(ModelConfig("hhp", 0.8, 0.3), ds, enhance(build_ra(ds), 0.8), 1)
    assert not sv.scores.any()
    with pytest.raises(IndexError):
        score_user(ModelConfig("probs"), ds, build_ra(ds), 2)


def test_transfer_weight_examples():
    assert transfer_weight(ModelConfig("probs"), 7, 2, 0.5) == 0.25
    assert transfer_weight(ModelConfig("hhp", lam=0.5), 4, 1, 1.0) == 0.5
    assert transfer_weight(ModelConfig("heats"), 4, 1, 0.0) == 0.0


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 50), st.integers(1, 500), st.integers(1, 500))
def test_transfer_weight_reduction(s_ab, k_a, k_b):
    assert transfer_weight(ModelConfig("hhp", lam=1.0), k_a, k_b, s_ab) == transfer_weight(
        ModelConfig("probs"), k_a, k_b, s_ab
    )
    assert transfer_weight(ModelConfig("hhp", lam=0.0), k_a, k_b, s_ab) == transfer_weight(
        ModelConfig("heats"), k_a, k_b, s_ab
    )


def test_config_validation():
    with pytest.raises(ValueError):
        ModelConfig("hhp", 1.0, 1.2)
    with pytest.raises(ValueError):
        ModelConfig("probs", 0.0)
    with pytest.raises(ValueError):
        ModelConfig("nbi")
    # lambda is ignored (pinned to the matching HHP end) for ProbS and HeatS
    assert ModelConfig("probs", lam=0.3).lam == 1.0
    assert ModelConfig(Algorithm.HEATS, lam=0.3).lam == 0.0


@pytest.mark.parametrize("algo", ["probs", "heats", "hhp"])
def test_matches_dense_transfer_matrix(algo, rng):
    for _ in range(15):
        ds = random_network(rng, max_users=15, max_objects=20)
        sigma = float(rng.uniform(0.1, 1.5))
        lam = float(rng.uniform(0, 1))
        cfg = ModelConfig(algo, sigma, lam)
        sim = enhance(build_ra(ds), sigma)
        for u in range(ds.user_count):
            got = score_user(cfg, ds, sim, u).scores
            want = scores_bruteforce(ds, u, algo, sigma, cfg.lam)
            np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-12)


def test_reduction_identities(rng):
    for _ in range(20):
        ds = random_network(rng)
        sim = build_ra(ds)
        for a, b in ((ModelConfig("hhp", lam=1.0), ModelConfig("probs")), (ModelConfig("hhp", lam=0.0), ModelConfig("heats"))):
            assert np.array_equal(score_matrix(a, ds, sim), score_matrix(b, ds, sim))


def test_probs_conservation_movielens(movielens):
    training = split(movielens, 1, 0.9).training
    totals = score_matrix(ModelConfig("probs"), training, build_ra(training)).sum(axis=1)
    k = training.user_degrees
    np.testing.assert_allclose(totals, k, rtol=1e-9)


def test_batch_and_single_user_scores_agree(rng):
    ds = random_network(rng)
    cfg = ModelConfig("hhp", 0.7, 0.4)
    sim = enhance(build_ra(ds), 0.7)
    batch = score_matrix(cfg, ds, sim)
    for u in range(ds.user_count):
        assert np.array_equal(batch[u], score_user(cfg, ds, sim, u).scores)


def test_recommend_toy(toy):
    sv = score_user(ModelConfig("probs"), toy, build_ra(toy), 0)
    assert recommend(sv, 5).tolist() == [2]
    assert full_ranking(sv).tolist() == [2]


def test_recommend_tie_break_and_truncation():
    sv = ScoreVector(0, np.zeros(3), np.zeros(3, dtype=bool))
    assert recommend(sv, 2).tolist() == [0, 1]
    sv = ScoreVector(0, np.array([0.1, 0.5, 0.5, 0.2]), np.array([False, False, True, False]))
    assert recommend(sv, 10).tolist() == [1, 3, 0]
    with pytest.raises(ValueError):
        recommend(sv, 0)


def test_full_ranking_sorted_input():
    sv = ScoreVector(0, np.linspace(1, 0, 8), np.zeros(8, dtype=bool))
    assert full_ranking(sv).tolist() == list(range(8))


def test_full_ranking_matches_stable_sort_oracle(rng):
    for _ in range(50):
        # coarse values force plenty of ties
        scores = rng.integers(0, 5, size=20) / 4.0
        mask = rng.random(20) < 0.3
        got = full_ranking(ScoreVector(0, scores, mask)).tolist()
        assert got == ranking_bruteforce(scores, mask)


def test_rankings_deterministic(rng):
    ds = random_network(rng)
    cfg = ModelConfig("hhp", 0.9, 0.2)
    sim = enhance(build_ra(ds), 0.9)
    a = [full_ranking(score_user(cfg, ds, sim, u)) for u in range(ds.user_count)]
    b = [full_ranking(score_user(cfg, ds, enhance(build_ra(ds), 0.9), u)) for u in range(ds.user_count)]
    assert all(np.array_equal(x, y) for x, y in zip(a, b))


def test_scores_finite_nonnegative(rng):
    for _ in range(10):
        ds = random_network(rng)
        s = float(rng.uniform(0.1, 2.0))
        f = score_matrix(ModelConfig("hhp", s, float(rng.uniform())), ds, enhance(build_ra(ds), s))
        assert np.all(np.isfinite(f)) and np.all(f >= 0)
