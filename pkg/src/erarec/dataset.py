"""Binary user-object interaction networks and seeded train/probe splits.

Splits shuffle the canonical edge order with numpy's ``PCG64`` bit
generator (``numpy.random.Generator(numpy.random.PCG64(seed))``), so a
given ``(dataset, seed, train_fraction)`` always yields the same split.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp


class ParseError(ValueError):
    """A line of an interaction file could not be parsed."""


class EmptyDatasetError(ValueError):
    """An interaction file produced no edges."""


def _edge_matrix(users, objects, m, n):
    data = np.ones(len(users), dtype=np.float64)
    mat = sp.csr_matrix((data, (users, objects)), shape=(m, n))
    mat.sum_duplicates()
    mat.sort_indices()
    return mat


@dataclass(frozen=True, eq=False)
class BipartiteDataset:
    """Immutable binary user-object network.

    ``adjacency`` is the m x n 0/1 matrix in CSR form, so a user's objects
    are one row slice; ``adjacency_csc`` gives an object's users the same
    way.
    """

    adjacency: sp.csr_matrix
    user_ids: tuple = None
    object_ids: tuple = None
    adjacency_csc: sp.csc_matrix = field(init=False, repr=False)
    user_degrees: np.ndarray = field(init=False, repr=False)
    object_degrees: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        adj = sp.csr_matrix(self.adjacency, dtype=np.float64)
        adj.sum_duplicates()
        adj.eliminate_zeros()
        if adj.nnz and not np.all(adj.data == 1.0):
            raise ValueError("adjacency must be binary")
        adj.sort_indices()
        object.__setattr__(self, "adjacency", adj)
        object.__setattr__(self, "adjacency_csc", adj.tocsc())
        object.__setattr__(self, "user_degrees", np.diff(adj.indptr).astype(np.int64))
        object.__setattr__(
            self, "object_degrees", np.bincount(adj.indices, minlength=adj.shape[1]).astype(np.int64)
        )
        for ids, size in ((self.user_ids, adj.shape[0]), (self.object_ids, adj.shape[1])):
            if ids is not None and len(ids) != size:
                raise ValueError("id map length does not match matrix shape")

    @classmethod
    def from_edges(cls, edges, user_count, object_count, user_ids=None, object_ids=None):
        """Build from an iterable of ``(user_index, object_index)`` pairs; duplicates collapse."""
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        arr = arr.reshape(-1, 2)
        if arr.size and (
            arr[:, 0].min() < 0
            or arr[:, 1].min() < 0
            or arr[:, 0].max() >= user_count
            or arr[:, 1].max() >= object_count
        ):
            raise ValueError("edge index out of range")
        adj = _edge_matrix(arr[:, 0], arr[:, 1], user_count, object_count)
        adj.data[:] = 1.0
        return cls(adj, user_ids, object_ids)

    @property
    def user_count(self):
        return self.adjacency.shape[0]

    @property
    def object_count(self):
        return self.adjacency.shape[1]

    @property
    def edge_count(self):
        return self.adjacency.nnz

    @property
    def edges(self):
        """All edges as an ``(q, 2)`` int array in (user, object) lexicographic order."""
        users = np.repeat(np.arange(self.user_count, dtype=np.int64), self.user_degrees)
        return np.column_stack([users, self.adjacency.indices.astype(np.int64)])

    def user_objects(self, user):
        a = self.adjacency
        return a.indices[a.indptr[user] : a.indptr[user + 1]]

    def object_users(self, obj):
        a = self.adjacency_csc
        return a.indices[a.indptr[obj] : a.indptr[obj + 1]]

    def __eq__(self, other):
        if not isinstance(other, BipartiteDataset):
            return NotImplemented
        return (
            self.adjacency.shape == other.adjacency.shape
            and np.array_equal(self.adjacency.indptr, other.adjacency.indptr)
            and np.array_equal(self.adjacency.indices, other.adjacency.indices)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class SplitPair:
    training: BipartiteDataset
    probe: np.ndarray
    seed: int
    train_fraction: float = 0.9

    @property
    def user_count(self):
        return self.training.user_count

    @property
    def object_count(self):
        return self.training.object_count

    def probe_degrees(self):
        return np.bincount(self.probe[:, 0], minlength=self.user_count).astype(np.int64)

    def probe_by_user(self):
        """Map each user with probe links to the sorted array of their probe objects."""
        out = {}
        if len(self.probe) == 0:
            return out
        order = np.lexsort((self.probe[:, 1], self.probe[:, 0]))
        p = self.probe[order]
        users, starts = np.unique(p[:, 0], return_index=True)
        for u, chunk in zip(users, np.split(p[:, 1], starts[1:])):
            out[int(u)] = chunk
        return out

    def full_dataset(self):
        """Reassemble the original network from training and probe edges."""
        edges = np.vstack([self.training.edges, self.probe])
        return BipartiteDataset.from_edges(
            edges, self.user_count, self.object_count, self.training.user_ids, self.training.object_ids
        )


def _sort_ids(raw):
    uniq = set(raw)
    try:
        return sorted(uniq, key=lambda s: (int(s), s))
    except ValueError:
        return sorted(uniq)


def ingest(path, min_rating=None):
    """Read a whitespace-separated interaction file into a binary network.

    Each line is ``user object [rating [timestamp]]``; lines starting with
    ``#`` are skipped. Raw ids are re-indexed densely from 0 in sorted order
    (numeric when every id parses as an integer).
    """
    path = Path(path)
    users, objects = [], []
    with path.open() as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) < 2:
                raise ParseError(f"{path}:{lineno}: expected at least user and object fields")
            if min_rating is not None:
                if len(parts) < 3:
                    raise ParseError(f"{path}:{lineno}: min_rating given but line has no rating")
                try:
                    rating = float(parts[2])
                except ValueError as exc:
                    raise ParseError(f"{path}:{lineno}: bad rating {parts[2]!r}") from exc
                if rating < min_rating:
                    continue
            users.append(parts[0])
            objects.append(parts[1])
    if not users:
        raise EmptyDatasetError(f"{path}: no interactions")

    user_ids = _sort_ids(users)
    object_ids = _sort_ids(objects)
    uidx = {u: i for i, u in enumerate(user_ids)}
    oidx = {o: i for i, o in enumerate(object_ids)}
    edges = np.array([(uidx[u], oidx[o]) for u, o in zip(users, objects)], dtype=np.int64)
    return BipartiteDataset.from_edges(
        edges, len(user_ids), len(object_ids), tuple(user_ids), tuple(object_ids)
    )


def split(dataset, seed, train_fraction=0.9):
    """Randomly partition the edges into training and probe sets.

    The canonical (user, object)-sorted edge list is permuted with a PCG64
    generator seeded by ``seed``; the first ``round(train_fraction * q)``
    edges are the training set.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must lie in (0, 1)")
    edges = dataset.edges
    rng = np.random.Generator(np.random.PCG64(seed))
    perm = rng.permutation(len(edges))
    n_train = int(round(train_fraction * len(edges)))
    train_edges = edges[perm[:n_train]]
    probe = edges[perm[n_train:]]
    probe = probe[np.lexsort((probe[:, 1], probe[:, 0]))]
    training = BipartiteDataset.from_edges(
        train_edges, dataset.user_count, dataset.object_count, dataset.user_ids, dataset.object_ids
    )
    return SplitPair(training, probe, int(seed), float(train_fraction))


def stats(dataset):
    m, n, q = dataset.user_count, dataset.object_count, dataset.edge_count
    return {
        "m": m,
        "n": n,
        "q": q,
        "mean_user_degree": q / m if m else 0.0,
        "mean_object_degree": q / n if n else 0.0,
    }


# on-disk layout ----------------------------------------------------------

def _write_edges(path, edges):
    with open(path, "w") as fh:
        for u, o in edges:
            fh.write(f"{u}\t{o}\n")


def _read_edges(path):
    arr = np.loadtxt(path, dtype=np.int64, ndmin=2)
    return arr.reshape(-1, 2)


def _write_ids(path, ids):
    with open(path, "w") as fh:
        for i, raw in enumerate(ids):
            fh.write(f"{i}\t{raw}\n")


def _read_ids(path):
    if not Path(path).exists():
        return None
    with open(path) as fh:
        return tuple(line.rstrip("\n").split("\t", 1)[1] for line in fh if line.strip())


def save_dataset(dataset, directory):
    """Write ``edges.tsv``, the two id maps and ``dataset.json`` into ``directory``."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    _write_edges(d / "edges.tsv", dataset.edges)
    if dataset.user_ids is not None:
        _write_ids(d / "user_ids.tsv", dataset.user_ids)
    if dataset.object_ids is not None:
        _write_ids(d / "object_ids.tsv", dataset.object_ids)
    header = {"kind": "dataset", **stats(dataset)}
    (d / "dataset.json").write_text(json.dumps(header, indent=2, sort_keys=True) + "\n")


def save_split(split_pair, directory):
    """Write a split manifest: ``train.tsv``, ``probe.tsv``, id maps and ``split.json``."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    _write_edges(d / "train.tsv", split_pair.training.edges)
    _write_edges(d / "probe.tsv", split_pair.probe)
    tr = split_pair.training
    if tr.user_ids is not None:
        _write_ids(d / "user_ids.tsv", tr.user_ids)
    if tr.object_ids is not None:
        _write_ids(d / "object_ids.tsv", tr.object_ids)
    header = {
        "kind": "split",
        "seed": split_pair.seed,
        "train_fraction": split_pair.train_fraction,
        "m": tr.user_count,
        "n": tr.object_count,
        "train_edges": tr.edge_count,
        "probe_edges": int(len(split_pair.probe)),
    }
    (d / "split.json").write_text(json.dumps(header, indent=2, sort_keys=True) + "\n")


def load(directory):
    """Load a directory written by :func:`save_dataset` or :func:`save_split`.

    Returns ``(dataset, split_pair)``; ``split_pair`` is None for a plain
    dataset directory.
    """
    d = Path(directory)
    user_ids = _read_ids(d / "user_ids.tsv")
    object_ids = _read_ids(d / "object_ids.tsv")
    if (d / "split.json").exists():
        h = json.loads((d / "split.json").read_text())
        m, n = h["m"], h["n"]
        training = BipartiteDataset.from_edges(_read_edges(d / "train.tsv"), m, n, user_ids, object_ids)
        probe = _read_edges(d / "probe.tsv")
        sp_ = SplitPair(training, probe, int(h["seed"]), float(h["train_fraction"]))
        return sp_.full_dataset(), sp_
    if (d / "dataset.json").exists():
        h = json.loads((d / "dataset.json").read_text())
        ds = BipartiteDataset.from_edges(_read_edges(d / "edges.tsv"), h["m"], h["n"], user_ids, object_ids)
        return ds, None
    raise FileNotFoundError(f"{d}: neither dataset.json nor split.json found")
