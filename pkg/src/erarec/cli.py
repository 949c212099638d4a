"""Command line entry point: ``erarec {ingest,split,eval,sweep,figures}``."""

import argparse
import sys
from pathlib import Path

from . import dataset as ds
from .diffusion import ModelConfig
from .evaluation import evaluate
from .harness import (
    SweepSpec,
    default_lambda_grid,
    export_figures,
    parse_grid,
    parse_seeds,
    run_sweep,
    write_reports,
    write_sweep,
)


def _split_from(directory, seed, fraction):
    data, split_pair = ds.load(directory)
    if split_pair is None or (seed is not None and seed != split_pair.seed):
        split_pair = ds.split(data, 0 if seed is None else seed, fraction)
    return data, split_pair


def cmd_ingest(args):
    data = ds.ingest(args.input, args.min_rating)
    ds.save_dataset(data, args.out)
    s = ds.stats(data)
    print(f"m={s['m']} n={s['n']} q={s['q']} <k_u>={s['mean_user_degree']:.4g} <k_o>={s['mean_object_degree']:.4g}")


def cmd_split(args):
    data, _ = ds.load(args.data)
    pair = ds.split(data, args.seed, args.fraction)
    ds.save_split(pair, args.out)
    print(f"train={pair.training.edge_count} probe={len(pair.probe)} seed={pair.seed}")


def cmd_eval(args):
    _, pair = _split_from(args.data, args.seed, args.fraction)
    config = ModelConfig(args.algo, args.sigma, args.lam)
    report = evaluate(config, pair, args.list_len)
    write_reports(args.out, [report])
    print(f"{config.label()}: RS={report.rs:.5f} ep({args.list_len})={report.ep:.4f} h({args.list_len})={report.h:.4f}")


def cmd_sweep(args):
    data, stored = ds.load(args.data)
    spec = SweepSpec(
        algorithm=args.algo,
        sigma_grid=parse_grid(args.sigma_grid),
        lambda_grid=parse_grid(args.lambda_grid) if args.lambda_grid else default_lambda_grid(),
        L=args.list_len,
        seeds=parse_seeds(args.seeds) if args.seeds else ((stored.seed,) if stored else (1,)),
        refine_step=args.refine_step or None,
        train_fraction=args.fraction,
    )
    splits = [stored] if stored is not None and not args.seeds else None
    result = run_sweep(spec, data, splits=splits)
    write_sweep(result, args.out)
    b = result.best
    print(f"best sigma={b.sigma:g} lambda={b.lam:g} RS={b.rs:.5f} ep={b.ep:.4f} h={b.h:.4f}")


def cmd_figures(args):
    _, pair = _split_from(args.data, args.seed, args.fraction)
    spec = SweepSpec(
        algorithm=args.algo,
        sigma_grid=parse_grid(args.sigma_grid),
        seeds=(pair.seed,),
        L=args.list_len,
    )
    for path in export_figures(pair, args.sigma, args.out, spec=spec, bins=args.bins, degree_bins=args.degree_bins):
        print(path)


def build_parser():
    p = argparse.ArgumentParser(prog="erarec", description="Diffusion recommenders with enhanced RA similarity")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest", help="read an interaction file into a dataset directory")
    s.add_argument("--input", required=True, type=Path)
    s.add_argument("--min-rating", type=float, default=None)
    s.add_argument("--out", required=True, type=Path)
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("split", help="write a seeded train/probe split")
    s.add_argument("--data", required=True, type=Path)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--fraction", type=float, default=0.9)
    s.add_argument("--out", required=True, type=Path)
    s.set_defaults(func=cmd_split)

    def common(s):
        s.add_argument("--data", required=True, type=Path, help="dataset or split directory")
        s.add_argument("--list-len", type=int, default=20)
        s.add_argument("--fraction", type=float, default=0.9)

    s = sub.add_parser("eval", help="evaluate one configuration")
    common(s)
    s.add_argument("--algo", required=True, choices=["probs", "heats", "hhp"])
    s.add_argument("--sigma", type=float, default=1.0)
    s.add_argument("--lambda", dest="lam", type=float, default=0.5)
    s.add_argument("--seed", type=int, default=None, help="split seed when --data is not a split directory")
    s.add_argument("--out", required=True, type=Path)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("sweep", help="grid over sigma (and lambda for hhp)")
    common(s)
    s.add_argument("--algo", required=True, choices=["probs", "heats", "hhp"])
    s.add_argument("--sigma-grid", default="0.1:1.2:0.1")
    s.add_argument("--lambda-grid", default=None, help='default "0:1:0.05"')
    s.add_argument("--refine-step", type=float, default=0.01, help="0 disables the fine lambda pass")
    s.add_argument("--seeds", default=None, help='comma list, e.g. "1,2,3"')
    s.add_argument("--out", required=True, type=Path)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("figures", help="export CSV data for the similarity and sweep figures")
    common(s)
    s.add_argument("--sigma", type=float, required=True)
    s.add_argument("--algo", default="hhp", choices=["probs", "heats", "hhp"])
    s.add_argument("--sigma-grid", default="0.1:1.2:0.1")
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--bins", type=int, default=30)
    s.add_argument("--degree-bins", type=int, default=10)
    s.add_argument("--out", required=True, type=Path)
    s.set_defaults(func=cmd_figures)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except Exception as exc:  # noqa: BLE001
        print(f"erarec {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
