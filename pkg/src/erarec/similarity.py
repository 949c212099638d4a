"""Resource-allocation similarity between objects and its enhanced (powered) form."""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """Symmetric sparse object-object similarity.

    ``matrix`` is an n x n CSR matrix holding only positive values, diagonal
    included. ``exponent`` is the power applied to the raw RA values (1.0
    for plain RA).
    """

    matrix: sp.csr_matrix
    exponent: float = 1.0

    @property
    def object_count(self):
        return self.matrix.shape[0]

    @property
    def nnz(self):
        return self.matrix.nnz

    def get(self, alpha, beta):
        return float(self.matrix[alpha, beta])

    def toarray(self):
        return self.matrix.toarray()

    def offdiagonal_values(self):
        """Values of stored unordered pairs with alpha < beta."""
        upper = sp.triu(self.matrix, k=1, format="coo")
        return upper.data


def build_ra(training):
    """RA index for every object pair sharing a training user.

    Equivalent to accumulating ``1/k_u`` into every pair of each user's
    objects; done here as ``A^T diag(1/k_u) A``. Only the upper triangle is
    kept and mirrored so the result is exactly symmetric.
    """
    adj = training.adjacency
    if adj.nnz == 0:
        raise ValueError("training set has no edges")
    k_u = training.user_degrees.astype(np.float64)
    inv = np.zeros_like(k_u)
    nz = k_u > 0
    inv[nz] = 1.0 / k_u[nz]
    weighted = sp.diags(inv) @ adj
    full = (adj.T.tocsr() @ weighted).tocsr()
    upper = sp.triu(full, k=0, format="csr")
    strict = sp.triu(full, k=1, format="csr")
    sym = (upper + strict.T).tocsr()
    sym.eliminate_zeros()
    sym.sort_indices()
    return SimilarityMatrix(sym, 1.0)


def enhance(ra, sigma):
    """Raise every stored RA value to the power ``sigma`` (ERA index).

    The sparsity pattern is unchanged, absent pairs stay zero.
    """
    if ra.exponent != 1.0:
        raise ValueError("enhance expects a plain RA matrix (exponent 1.0)")
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    mat = ra.matrix.copy()
    if sigma != 1.0:
        mat.data = np.power(mat.data, sigma)
    return SimilarityMatrix(mat, float(sigma))


def similarity_histogram(sim, bins=30):
    """Count stored off-diagonal values in logarithmic bins.

    ``bins`` is either a number of log-spaced bins spanning the observed
    range or an explicit increasing array of edges. Returns
    ``(edges, counts)``. Values outside explicit edges are not counted.
    """
    values = sim.offdiagonal_values()
    if values.size == 0:
        raise ValueError("similarity matrix has no off-diagonal entries")
    if np.ndim(bins) == 0:
        lo, hi = values.min(), values.max()
        if lo == hi:
            return np.array([lo, hi]), np.array([values.size], dtype=np.int64)
        edges = np.logspace(np.log10(lo), np.log10(hi), int(bins) + 1)
        edges[0], edges[-1] = lo, hi
    else:
        edges = np.asarray(bins, dtype=np.float64)
    counts, _ = np.histogram(values, bins=edges)
    return edges, counts.astype(np.int64)


def degree_bin_edges(object_degrees, degree_bins):
    kmax = max(int(np.max(object_degrees)), 1)
    return np.linspace(1.0, float(kmax), degree_bins + 1)


def degree_heatmap(sim, training, degree_bins=10):
    """Mean similarity of object pairs grouped by the two objects' degrees.

    Degrees are cut into ``degree_bins`` linear bins over ``[1, max k_o]``;
    zero-degree objects fall in the lowest bin. Each cell averages over all
    unordered distinct pairs in that (row, column) bin combination, with
    absent pairs contributing 0. Cells with no pairs are NaN.

    Returns ``(edges, grid)`` where ``grid`` is symmetric.
    """
    if degree_bins < 1:
        raise ValueError("degree_bins must be >= 1")
    k = training.object_degrees
    n = sim.object_count
    edges = degree_bin_edges(k, degree_bins)
    which = np.clip(np.searchsorted(edges, k, side="right") - 1, 0, degree_bins - 1)
    member = sp.csr_matrix((np.ones(n), (np.arange(n), which)), shape=(n, degree_bins))

    offdiag = sim.matrix - sp.diags(sim.matrix.diagonal())
    sums = np.asarray((member.T @ offdiag @ member).todense())
    sums = (sums + sums.T) / 2.0
    counts = np.bincount(which, minlength=degree_bins).astype(np.float64)
    pairs = np.outer(counts, counts)
    # each unordered pair inside a diagonal cell is summed twice
    np.fill_diagonal(sums, np.diag(sums) / 2.0)
    np.fill_diagonal(pairs, counts * (counts - 1) / 2.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        grid = np.where(pairs > 0, sums / np.where(pairs > 0, pairs, 1.0), np.nan)
    return edges, grid
