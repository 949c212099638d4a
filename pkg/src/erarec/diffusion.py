"""ProbS, HeatS and HHP scoring on top of an RA or ERA similarity matrix.

All three models share one transfer weight

    w[alpha, beta] = s[alpha, beta] / (k[alpha] ** (1 - lam) * k[beta] ** lam)

with ``lam = 1`` for ProbS and ``lam = 0`` for HeatS. Passing an enhanced
similarity gives the ERA variants.
"""

import enum
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .similarity import build_ra, enhance

# above this fill ratio the similarity is multiplied as a dense array
DENSE_FILL = 0.05


class Algorithm(str, enum.Enum):
    PROBS = "probs"
    HEATS = "heats"
    HHP = "hhp"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown algorithm {value!r}; expected probs, heats or hhp") from None


@dataclass(frozen=True)
class ModelConfig:
    algorithm: Algorithm = Algorithm.HHP
    sigma: float = 1.0
    lam: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "algorithm", Algorithm.parse(self.algorithm))
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "lam", float(self.lam))
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.algorithm is Algorithm.HHP and not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")
        # ProbS and HeatS are the lambda = 1 and lambda = 0 ends of HHP
        if self.algorithm is Algorithm.PROBS:
            object.__setattr__(self, "lam", 1.0)
        elif self.algorithm is Algorithm.HEATS:
            object.__setattr__(self, "lam", 0.0)

    def degree_exponents(self):
        """Exponents ``(e_alpha, e_beta)`` on the receiving and sending object degrees."""
        return 1.0 - self.lam, self.lam

    def label(self):
        if self.algorithm is Algorithm.HHP:
            return f"{self.algorithm.value}(sigma={self.sigma:g}, lambda={self.lam:g})"
        return f"{self.algorithm.value}(sigma={self.sigma:g})"


@dataclass(frozen=True, eq=False)
class ScoreVector:
    user_index: int
    scores: np.ndarray
    collected_mask: np.ndarray


def transfer_weight(config, k_alpha, k_beta, s_ab):
    """Weight of resource moving from object beta to object alpha."""
    if s_ab == 0:
        return 0.0
    e_a, e_b = config.degree_exponents()
    return s_ab / (k_alpha**e_a * k_beta**e_b)


def _inverse_power(k, e):
    k = np.asarray(k, dtype=np.float64)
    out = np.zeros_like(k)
    nz = k > 0
    out[nz] = 1.0 / np.power(k[nz], e)
    return out


def similarity_for(config, training, ra=None):
    """RA matrix of ``training`` enhanced with ``config.sigma``."""
    if ra is None:
        ra = build_ra(training)
    return enhance(ra, config.sigma)


def _similarity_operand(sim):
    n = sim.object_count
    if n and sim.nnz / float(n * n) > DENSE_FILL:
        cached = getattr(sim, "_dense", None)
        if cached is None:
            cached = sim.matrix.toarray()
            object.__setattr__(sim, "_dense", cached)
        return cached
    return sim.matrix


def score_matrix(config, training, sim, users=None):
    """One diffusion step ``f' = W f`` for many users at once.

    Row ``i`` of the result is the score vector of ``users[i]`` (all users
    when None), with the user's training row as initial resource.
    """
    if sim.object_count != training.object_count:
        raise ValueError("similarity and training set disagree on object count")
    e_a, e_b = config.degree_exponents()
    k_o = training.object_degrees
    send = _inverse_power(k_o, e_b)
    recv = _inverse_power(k_o, e_a)
    rows = training.adjacency if users is None else training.adjacency[np.asarray(users)]
    rows = rows @ sp.diags(send)
    product = rows @ _similarity_operand(sim)
    if sp.issparse(product):
        product = product.toarray()
    return np.asarray(product) * recv


def score_user(config, training, sim, user):
    if not 0 <= user < training.user_count:
        raise IndexError(f"user {user} out of range [0, {training.user_count})")
    scores = score_matrix(config, training, sim, [user])[0]
    mask = np.zeros(training.object_count, dtype=bool)
    mask[training.user_objects(user)] = True
    return ScoreVector(int(user), scores, mask)


def full_ranking(score):
    """All uncollected objects by descending score, ties by ascending index."""
    candidates = np.flatnonzero(~score.collected_mask)
    order = np.argsort(-score.scores[candidates], kind="stable")
    return candidates[order]


def recommend(score, L):
    if L < 1:
        raise ValueError("L must be >= 1")
    return full_ranking(score)[:L]
