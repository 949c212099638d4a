"""Parameter sweeps, optimum selection and CSV exports for experiments."""

import csv
import os
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dataset import SplitPair, split as make_split
from .diffusion import Algorithm, ModelConfig
from .evaluation import REPORT_FIELDS, evaluate
from .similarity import build_ra, degree_heatmap, enhance, similarity_histogram


def frange(start, stop, step):
    """Inclusive arithmetic grid rounded to 10 decimals, e.g. ``frange(0.1, 1.2, 0.1)``."""
    if step <= 0:
        raise ValueError("step must be positive")
    count = int(round((stop - start) / step)) + 1
    return [round(start + i * step, 10) for i in range(count) if start + i * step <= stop + 1e-9]


def parse_grid(text):
    """Parse ``"a:b:step"`` or a comma list ``"0.5,0.7,1"`` into a sorted list of floats."""
    text = text.strip()
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 3:
            raise ValueError(f"grid {text!r} must look like start:stop:step")
        values = frange(*parts)
    else:
        values = [float(p) for p in text.split(",") if p.strip()]
    if not values:
        raise ValueError(f"empty grid {text!r}")
    return sorted(set(values))


def parse_seeds(text):
    return [int(s) for s in str(text).split(",") if s.strip()]


def default_sigma_grid():
    return frange(0.1, 1.2, 0.1)


def default_lambda_grid():
    return frange(0.0, 1.0, 0.05)


def worker_count():
    env = os.environ.get("ERA_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class SweepSpec:
    """A (sigma, lambda) grid over one or more split seeds.

    For HHP the lambda grid is scanned coarsely first; when ``refine_step``
    is set, every point within one coarse step of the best coarse lambda
    (by mean RS over seeds) is then evaluated at the finer step.
    """

    algorithm: Algorithm = Algorithm.HHP
    sigma_grid: tuple = field(default_factory=lambda: tuple(default_sigma_grid()))
    lambda_grid: tuple = field(default_factory=lambda: tuple(default_lambda_grid()))
    L: int = 20
    seeds: tuple = (1,)
    objective: str = "min_rs"
    refine_step: float = 0.01
    train_fraction: float = 0.9

    def __post_init__(self):
        object.__setattr__(self, "algorithm", Algorithm.parse(self.algorithm))
        sig = sorted(set(round(float(s), 10) for s in self.sigma_grid) | {1.0})
        object.__setattr__(self, "sigma_grid", tuple(sig))
        object.__setattr__(self, "lambda_grid", tuple(sorted(set(round(float(x), 10) for x in self.lambda_grid))))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        if not self.lambda_grid or not self.seeds:
            raise ValueError("lambda grid and seeds must be non-empty")
        if any(s <= 0 for s in self.sigma_grid):
            raise ValueError("sigma values must be positive")
        if self.L < 1:
            raise ValueError("L must be >= 1")
        if self.objective != "min_rs":
            raise ValueError(f"unsupported objective {self.objective!r}")

    def config(self, sigma, lam):
        if self.algorithm is not Algorithm.HHP:
            lam = 1.0 if self.algorithm is Algorithm.PROBS else 0.0
        return ModelConfig(self.algorithm, sigma, lam)


@dataclass(frozen=True)
class OptimumRow:
    sigma: float
    lam: float
    rs: float
    ep: float
    h: float
    seeds: int


@dataclass
class SweepResult:
    spec: SweepSpec
    reports: list
    optima: list  # one OptimumRow per sigma, ascending sigma

    @property
    def best(self):
        return min(self.optima, key=lambda r: (r.rs, r.sigma))

    def optimum_at(self, sigma):
        for row in self.optima:
            if abs(row.sigma - sigma) < 1e-9:
                return row
        raise KeyError(f"sigma {sigma} not in sweep")

    def mean_table(self):
        """Seed-averaged metrics for every evaluated (sigma, lambda) point."""
        return _aggregate(self.reports)


def _aggregate(reports):
    groups = defaultdict(list)
    for r in reports:
        groups[(r.config.sigma, r.config.lam)].append(r)
    out = {}
    for key in sorted(groups):
        rs = sorted(groups[key], key=lambda r: r.seed)
        out[key] = OptimumRow(
            key[0],
            key[1],
            float(np.mean([r.rs for r in rs])),
            float(np.mean([r.ep for r in rs])),
            float(np.mean([r.h for r in rs])),
            len(rs),
        )
    return out


def _sigma_job(spec, split_pair, ra, sigma, lambdas):
    sim = enhance(ra, sigma)
    out = []
    for lam in lambdas:
        cfg = spec.config(sigma, lam)
        try:
            out.append(evaluate(cfg, split_pair, spec.L, sim=sim))
        except Exception as exc:
            raise RuntimeError(f"{cfg.label()} seed={split_pair.seed}: {exc}") from exc
    return out


def _run_jobs(spec, splits, ras, plan):
    """Evaluate ``plan`` ({sigma: lambdas}) on every split."""
    jobs = [(i, s) for i in range(len(splits)) for s in sorted(plan) if plan[s]]
    fn = lambda job: _sigma_job(spec, splits[job[0]], ras[job[0]], job[1], plan[job[1]])  # noqa: E731
    workers = min(worker_count(), max(len(jobs), 1))
    if workers == 1:
        results = [fn(j) for j in jobs]
    else:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(fn, jobs))
    return [r for batch in results for r in batch]


def run_sweep(spec, data, splits=None):
    """Evaluate every grid point on every seed and pick per-sigma optima.

    ``data`` is a :class:`BipartiteDataset` (split once per seed in
    ``spec.seeds``) or a single :class:`SplitPair`, which is then the only
    split used. ``splits`` may pass precomputed splits instead.
    """
    if splits is None:
        if isinstance(data, SplitPair):
            splits = [data]
        else:
            splits = [make_split(data, s, spec.train_fraction) for s in spec.seeds]
    splits = list(splits)
    ras = [build_ra(sp_.training) for sp_ in splits]

    hhp = spec.algorithm is Algorithm.HHP
    lambdas = list(spec.lambda_grid) if hhp else [spec.config(1.0, 0.0).lam]
    reports = _run_jobs(spec, splits, ras, {s: lambdas for s in spec.sigma_grid})

    if hhp and spec.refine_step and len(lambdas) > 1:
        means = _aggregate(reports)
        coarse = float(np.min(np.diff(lambdas)))
        plan = {}
        for sigma in spec.sigma_grid:
            best = min((means[(sigma, lam)] for lam in lambdas), key=lambda r: (r.rs, r.lam))
            fine = frange(max(0.0, best.lam - coarse), min(1.0, best.lam + coarse), spec.refine_step)
            plan[sigma] = [lam for lam in fine if (sigma, lam) not in means]
        reports += _run_jobs(spec, splits, ras, plan)

    reports.sort(key=lambda r: (r.config.sigma, r.config.lam, r.seed))
    means = _aggregate(reports)
    optima = []
    for sigma in spec.sigma_grid:
        rows = [row for (s, _), row in means.items() if s == sigma]
        optima.append(min(rows, key=lambda r: (r.rs, r.lam)))
    return SweepResult(spec, reports, optima)


def improvement_table(base, enhanced, base_sigma=1.0):
    """Percentage change from the unenhanced optimum to the overall enhanced optimum.

    RS is lower-is-better, so its delta is ``(base - enhanced) / base``;
    ep and h use ``(enhanced - base) / base``. Both in percent.
    """
    b = base.optimum_at(base_sigma)
    e = enhanced.best
    for name in ("rs", "ep", "h"):
        if getattr(b, name) == 0:
            raise ZeroDivisionError(f"base {name} is zero; percentage change undefined")
    return {
        "base": b,
        "enhanced": e,
        "rs": (b.rs - e.rs) / b.rs * 100.0,
        "ep": (e.ep - b.ep) / b.ep * 100.0,
        "h": (e.h - b.h) / b.h * 100.0,
    }


# CSV output --------------------------------------------------------------

def _write_csv(path, header, rows):
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def write_reports(path, reports):
    return _write_csv(path, REPORT_FIELDS, [[r.to_row()[k] for k in REPORT_FIELDS] for r in reports])


def _optimum_rows(optima):
    return [[repr(o.sigma), repr(o.lam), repr(o.rs), repr(o.ep), repr(o.h), o.seeds] for o in optima]


def write_sweep(result, directory):
    """Write ``reports.csv``, ``optima.csv`` (per-sigma best lambda) and ``best.csv``."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    header = ["sigma", "lambda_opt", "rs", "ep", "h", "seeds"]
    return [
        write_reports(d / "reports.csv", result.reports),
        _write_csv(d / "optima.csv", header, _optimum_rows(result.optima)),
        _write_csv(d / "best.csv", header, _optimum_rows([result.best])),
    ]


def export_figures(split_pair, sigma, directory, sweep=None, spec=None, bins=30, degree_bins=10):
    """Write the CSV data behind the RA/ERA distribution, heat-map and sweep plots.

    Files: ``ra_histogram.csv``, ``era_histogram.csv`` (bin_low,bin_high,count),
    ``ra_heatmap.csv``, ``era_heatmap.csv`` (row_bin,col_bin,mean_similarity)
    and ``sweep_curves.csv``. Without ``sweep`` an HHP sweep (or ``spec``) is
    run on ``split_pair``.
    """
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    ra = build_ra(split_pair.training)
    era = enhance(ra, sigma)
    written = []
    for name, sim in (("ra", ra), ("era", era)):
        edges, counts = similarity_histogram(sim, bins)
        rows = [[repr(float(edges[i])), repr(float(edges[i + 1])), int(c)] for i, c in enumerate(counts)]
        written.append(_write_csv(d / f"{name}_histogram.csv", ["bin_low", "bin_high", "count"], rows))
        _, grid = degree_heatmap(sim, split_pair.training, degree_bins)
        rows = [[i, j, repr(float(grid[i, j]))] for i in range(grid.shape[0]) for j in range(grid.shape[1])]
        written.append(_write_csv(d / f"{name}_heatmap.csv", ["row_bin", "col_bin", "mean_similarity"], rows))
    if sweep is None:
        sweep = run_sweep(spec or SweepSpec(seeds=(split_pair.seed,)), split_pair)
    written.append(
        _write_csv(d / "sweep_curves.csv", ["sigma", "lambda_opt", "rs", "ep", "h", "seeds"], _optimum_rows(sweep.optima))
    )
    return written
