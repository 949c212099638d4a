"""Accuracy and diversity metrics over a train/probe split.

Probe links whose user has no training links cannot be scored; they are
left out of every metric and reported as ``excluded_links``.
"""

from dataclasses import dataclass

import numpy as np

from .diffusion import ModelConfig, full_ranking, score_matrix, score_user, similarity_for

BLOCK_USERS = 1024


class UndefinedMetricError(ValueError):
    pass


class ConsistencyError(RuntimeError):
    pass


REPORT_FIELDS = (
    "algorithm", "sigma", "lambda", "L", "rs", "ep", "h", "probe_links", "excluded_links", "seed",
)


@dataclass(frozen=True)
class EvaluationReport:
    config: ModelConfig
    L: int
    rs: float
    ep: float
    h: float
    probe_link_count: int
    excluded_links: int = 0
    seed: int = None

    def to_row(self):
        c = self.config
        return {
            "algorithm": c.algorithm.value,
            "sigma": repr(c.sigma),
            "lambda": repr(c.lam),
            "L": str(self.L),
            "rs": repr(self.rs),
            "ep": repr(self.ep),
            "h": repr(self.h),
            "probe_links": str(self.probe_link_count),
            "excluded_links": str(self.excluded_links),
            "seed": "" if self.seed is None else str(self.seed),
        }


def eligible_users(split):
    """Users with at least one probe link and one training link, ascending."""
    kp = split.probe_degrees()
    kt = split.training.user_degrees
    return np.flatnonzero((kp > 0) & (kt > 0))


def training_object_count(training):
    """Objects with at least one training link."""
    return int(np.count_nonzero(training.object_degrees))


def ranking_score(rankings, split):
    """Mean of ``position / (n - k_T)`` over probe links of ranked users.

    ``rankings`` maps a user index to that user's full ranking of
    uncollected objects. Probe links of users missing from ``rankings`` are
    skipped.
    """
    n = split.object_count
    kt = split.training.user_degrees
    values = []
    for user, objects in sorted(split.probe_by_user().items()):
        if user not in rankings:
            continue
        ranking = np.asarray(rankings[user])
        pos = np.empty(n, dtype=np.int64)
        pos.fill(-1)
        pos[ranking] = np.arange(len(ranking))
        l_i = n - kt[user]
        for obj in objects:
            if pos[obj] < 0:
                raise ConsistencyError(f"probe object {obj} missing from ranking of user {user}")
            values.append((pos[obj] + 1) / l_i)
    if not values:
        raise UndefinedMetricError("no probe links to evaluate")
    return float(np.mean(values))


def enhanced_precision(recommendations, split, L):
    """Top-L precision relative to random recommendation, averaged over users."""
    if L < 1:
        raise ValueError("L must be >= 1")
    n_train = training_object_count(split.training)
    kt = split.training.user_degrees
    terms = []
    for user, objects in sorted(split.probe_by_user().items()):
        if user not in recommendations:
            continue
        top = np.asarray(recommendations[user])[:L]
        hits = np.intersect1d(top, objects).size
        terms.append(hits / L * (n_train - kt[user]) / len(objects))
    if not terms:
        raise UndefinedMetricError("no users with probe links")
    return float(np.mean(terms))


def hamming_distance(recommendations, split, L):
    """Mean of ``1 - overlap/L`` over all pairs of users that have probe links."""
    if L < 1:
        raise ValueError("L must be >= 1")
    probe_users = split.probe_by_user()
    users = sorted(u for u in recommendations if u in probe_users)
    if len(users) < 2:
        raise UndefinedMetricError("hamming distance needs at least two users")
    lists = [set(np.asarray(recommendations[u])[:L].tolist()) for u in users]
    total, pairs = 0.0, 0
    for i in range(len(users)):
        for j in range(i + 1, len(users)):
            total += 1.0 - len(lists[i] & lists[j]) / L
            pairs += 1
    return total / pairs


def rank_block(scores, collected):
    """Stable descending order of each row with collected objects pushed last.

    Returns ``(order, position)`` where ``position[r, obj]`` is the 0-based
    rank of ``obj`` in row ``r``.
    """
    keyed = np.where(collected, np.inf, -scores)
    order = np.argsort(keyed, axis=1, kind="stable")
    position = np.empty_like(order)
    rows = np.arange(order.shape[0])[:, None]
    position[rows, order] = np.arange(order.shape[1])
    return order, position


def evaluate(config, split, L=20, sim=None, ra=None):
    """Score every eligible user and compute RS, ep(L) and h(L) in one pass.

    Gives the same numbers as building per-user rankings and feeding them to
    :func:`ranking_score`, :func:`enhanced_precision` and
    :func:`hamming_distance`, but works on blocks of users.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    training = split.training
    if sim is None:
        sim = similarity_for(config, training, ra)
    elif sim.exponent != config.sigma:
        raise ValueError(f"similarity exponent {sim.exponent} does not match sigma {config.sigma}")

    n = split.object_count
    kt = training.user_degrees
    kp = split.probe_degrees()
    users = eligible_users(split)
    if len(users) == 0:
        raise UndefinedMetricError("no user has both training and probe links")
    excluded = int(kp[kt == 0].sum())
    n_train = training_object_count(training)

    probe = split.probe
    probe = probe[kt[probe[:, 0]] > 0]
    # probe is sorted by user, so each user's links form a contiguous run
    starts = np.searchsorted(probe[:, 0], users, side="left")
    ends = np.searchsorted(probe[:, 0], users, side="right")

    rs_values = np.empty(len(probe), dtype=np.float64)
    hits = np.zeros(len(users), dtype=np.int64)
    list_counts = np.zeros(n, dtype=np.int64)

    for b0 in range(0, len(users), BLOCK_USERS):
        block = users[b0 : b0 + BLOCK_USERS]
        scores = score_matrix(config, training, sim, block)
        collected = training.adjacency[block].toarray() > 0
        order, position = rank_block(scores, collected)

        lo, hi = starts[b0], ends[b0 + len(block) - 1]
        link_users = probe[lo:hi, 0]
        link_rows = np.searchsorted(block, link_users)
        link_objs = probe[lo:hi, 1]
        if collected[link_rows, link_objs].any():
            raise ConsistencyError("probe link also present in training set")
        pos = position[link_rows, link_objs]
        rs_values[lo:hi] = (pos + 1) / (n - kt[link_users])
        hits[b0 : b0 + len(block)] = np.bincount(link_rows[pos < L], minlength=len(block))

        list_len = np.minimum(L, n - kt[block])
        top = order[:, :L]
        valid = np.arange(top.shape[1])[None, :] < list_len[:, None]
        list_counts += np.bincount(top[valid], minlength=n)

    rs = float(np.mean(rs_values))
    ep = float(np.mean(hits / L * (n_train - kt[users]) / kp[users]))

    u = len(users)
    if u < 2:
        h = float("nan")
    else:
        pairs = u * (u - 1) // 2
        shared = int(np.sum(list_counts * (list_counts - 1)) // 2)
        h = 1.0 - shared / (L * pairs)

    return EvaluationReport(config, int(L), rs, ep, h, int(len(probe)), excluded, split.seed)


def rankings_for(config, split, sim=None, users=None):
    """Full per-user rankings, keyed by user, for the list-based metrics."""
    training = split.training
    if sim is None:
        sim = similarity_for(config, training)
    if users is None:
        users = eligible_users(split)
    return {int(u): full_ranking(score_user(config, training, sim, int(u))) for u in users}
