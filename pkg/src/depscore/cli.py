"""Command-line surface: ingestion, measure reports, ranking, equivalent
sample size, and experiment execution.

Two input formats are understood. A *count table file* is a
delimiter-separated integer matrix, `#` comment lines allowed. A *dataset
file* has a header row of variable names followed by one sample per row of
arbitrary categorical labels; labels map to dense indices in first-appearance
order per column, and the mapping is echoed in output comments so sparse-label
behavior is reproducible. Fields are split on commas if the header contains
one, else on tabs if present, else on whitespace.

Every command is deterministic given its flags (plus `--seed` where
relevant): output contains no timestamps or environment state. Exit codes:
0 success, 2 usage errors, 3 no-root (equivalent sample size), 4 solver
non-convergence, 1 other input or domain errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .ess import NonConvergenceError, NoRootError, solve_ess
from .experiments import (
    DEFAULT_MEASURES,
    ess_constraint_curve,
    format_curve,
    run_discretization_experiment,
    run_feature_selection_experiment,
)
from .measures import MeasureKind, mi_bias_corrected, mi_plugin, normalized_mi, report
from .ranking import is_notable, rank, score_candidates
from .tables import CountTable, DofMode, dof, from_counts, from_samples, make_prob_table

REPORT_FIELDS = ("n", "dof", "mi_plugin", "mi_bc", "indep_std", "r_score",
                 "si", "si_fisher", "ni", "p_naive", "log_p")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_ROOT = 3
EXIT_NO_CONVERGENCE = 4


def _emit(text: str, out_path) -> None:
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


# ---------------------------------------------------------------------------
# ingestion
# ---------------------------------------------------------------------------

def _data_lines(path) -> list[str]:
    with open(path, "r", encoding="utf-8") as fh:
        raw = fh.read().splitlines()
    return [ln for ln in raw if ln.strip() and not ln.lstrip().startswith("#")]


def _split(line: str, delim: str | None) -> list[str]:
    return line.split(delim) if delim else line.split()


def _sniff_delim(line: str) -> str | None:
    if "," in line:
        return ","
    if "\t" in line:
        return "\t"
    return None


def read_count_table(path) -> CountTable:
    """Parse a delimiter-separated integer matrix into a CountTable."""
    lines = _data_lines(path)
    if not lines:
        raise ValueError(f"{path}: no data rows")
    delim = _sniff_delim(lines[0])
    rows = []
    width = None
    for ln in lines:
        fields = [f for f in _split(ln, delim) if f != ""]
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise ValueError(f"{path}: ragged row (expected {width} fields, got {len(fields)})")
        try:
            rows.append([int(f) for f in fields])
        except ValueError:
            raise ValueError(f"{path}: non-integer entry in count table") from None
    return from_counts(rows)


class Dataset:
    """Categorical dataset: column names, index-coded columns, label maps."""

    def __init__(self, names: list[str], columns: list[np.ndarray],
                 labels: list[list[str]]):
        self.names = names
        self.columns = columns
        self.labels = labels

    def column(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ValueError(f"unknown column {name!r}; have {', '.join(self.names)}") from None

    def pair_table(self, name_a: str, name_b: str) -> CountTable:
        ia, ib = self.column(name_a), self.column(name_b)
        return from_samples(
            list(zip(self.columns[ia].tolist(), self.columns[ib].tolist())),
            card_a=len(self.labels[ia]),
            card_b=len(self.labels[ib]),
        )


def read_dataset(path) -> Dataset:
    """Parse a header-plus-samples categorical data file."""
    lines = _data_lines(path)
    if len(lines) < 2:
        raise ValueError(f"{path}: need a header row and at least one sample row")
    delim = _sniff_delim(lines[0])
    names = [f for f in _split(lines[0], delim) if f != ""]
    arity = len(names)
    if arity < 2:
        raise ValueError(f"{path}: need at least two columns")
    maps: list[dict[str, int]] = [dict() for _ in names]
    cols: list[list[int]] = [[] for _ in names]
    for ln in lines[1:]:
        fields = [f for f in _split(ln, delim) if f != ""]
        if len(fields) != arity:
            raise ValueError(f"{path}: row arity {len(fields)} != header arity {arity}")
        for j, val in enumerate(fields):
            idx = maps[j].setdefault(val, len(maps[j]))
            cols[j].append(idx)
    labels = [[lab for lab, _ in sorted(m.items(), key=lambda kv: kv[1])] for m in maps]
    return Dataset(names, [np.asarray(c, dtype=np.int64) for c in cols], labels)


def _detect_format(path) -> str:
    lines = _data_lines(path)
    if not lines:
        raise ValueError(f"{path}: empty input")
    delim = _sniff_delim(lines[0])
    head = [f for f in _split(lines[0], delim) if f != ""]
    try:
        [int(f) for f in head]
        return "counts"
    except ValueError:
        return "dataset"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _dof_mode(args) -> DofMode:
    return DofMode(args.dof)


def _cmd_measure(args) -> int:
    fmt = args.format if args.format != "auto" else _detect_format(args.input)
    out_lines = []
    if fmt == "counts":
        if args.pair:
            raise ValueError("--pair applies to dataset input; a count file is one pair")
        table = read_count_table(args.input)
    else:
        ds = read_dataset(args.input)
        if args.pair:
            name_a, name_b = args.pair
        elif len(ds.names) == 2:
            name_a, name_b = ds.names
        else:
            raise ValueError("--pair NAME NAME required for datasets with more than two columns")
        table = ds.pair_table(name_a, name_b)
        for nm in (name_a, name_b):
            j = ds.column(nm)
            out_lines.append(f"# labels {nm}: " + " ".join(ds.labels[j]))
    mode = _dof_mode(args)
    d = dof(table, mode)
    if d > 0:
        rep = report(table, mode)
        for fld in REPORT_FIELDS:
            out_lines.append(f"{fld}\t{_fmt(getattr(rep, fld))}")
    else:
        # dof-based measures are undefined; emit what remains
        out_lines.append(f"# partial report: {mode.value} dof is 0")
        out_lines.append(f"n\t{_fmt(table.n)}")
        out_lines.append(f"dof\t{_fmt(d)}")
        out_lines.append(f"mi_plugin\t{_fmt(mi_plugin(table))}")
        out_lines.append(f"mi_bc\t{_fmt(mi_bias_corrected(table, mode))}")
        try:
            out_lines.append(f"ni\t{_fmt(normalized_mi(table))}")
        except ValueError:
            pass
    _emit("\n".join(out_lines) + "\n", args.out)
    return EXIT_OK


def _cmd_rank(args) -> int:
    ds = read_dataset(args.input)
    cls = args.class_column
    ci = ds.column(cls)
    features = [nm for nm in ds.names if nm != cls]
    if not features:
        raise ValueError("dataset has no feature columns besides the class column")
    kind = MeasureKind(args.measure)
    mode = _dof_mode(args)
    tables = [(nm, ds.pair_table(nm, cls)) for nm in features]
    ranking = rank(score_candidates(tables, kind, mode))
    lines = [f"# measure: {kind.value}", f"# class: {cls}", f"# dof_mode: {mode.value}"]
    show_notable = kind in (MeasureKind.SI, MeasureKind.SI_FISHER)
    header = ["rank", "id", "score"]
    if kind is MeasureKind.P_VALUE:
        header.append("log_p")
    if show_notable:
        header.append("notable")
    lines.append("\t".join(header))
    for pos, cand in enumerate(ranking.candidates, start=1):
        row = [str(pos), cand.id, _fmt(cand.score)]
        if kind is MeasureKind.P_VALUE:
            row.append(_fmt(-cand.key))
        if show_notable:
            row.append(_fmt(is_notable(cand.score, args.alpha)))
        lines.append("\t".join(row))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_ess(args) -> int:
    table = read_count_table(args.input)
    prior = None
    if args.prior != "uniform":
        prior_counts = read_count_table(args.prior)
        weights = prior_counts.counts.astype(float)
        prior = make_prob_table(weights / weights.sum())
    mode = _dof_mode(args)
    result = solve_ess(table, prior, mode, tol=args.tol)
    lines = [
        f"n_prime_exact\t{_fmt(result.n_prime_exact)}",
        f"n_prime_approx\t{_fmt(result.n_prime_approx)}",
        f"rhs\t{_fmt(result.rhs)}",
        f"used_safe_joint\t{_fmt(result.used_safe_joint)}",
        f"iterations\t{_fmt(result.iterations)}",
    ]
    print("\n".join(lines))
    if args.curve is not None:
        grid = np.linspace(0.0, float(args.curve), int(args.curve_points))
        lhs, rhs = ess_constraint_curve(table, prior, grid, mode)
        rows = ["n_prime\tlhs\trhs"]
        rows += [f"{g:g}\t{v!r}\t{rhs!r}" for g, v in zip(grid, lhs)]
        text = "\n".join(rows) + "\n"
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
            print(f"# curve written to {args.out}")
        else:
            sys.stdout.write(text)
    return EXIT_OK


def _parse_measures(names: str):
    kinds = []
    for name in names.split(","):
        name = name.strip()
        if name:
            kinds.append(MeasureKind(name))
    if not kinds:
        raise ValueError("no measures given")
    return tuple(kinds)


def _with_suffix(path: Path, tag: str) -> Path:
    return path.with_name(path.stem + tag + path.suffix) if path.suffix \
        else path.with_name(path.name + tag)


def _cmd_experiment(args) -> int:
    mode = _dof_mode(args)
    kinds = _parse_measures(args.measures) if args.measures else DEFAULT_MEASURES
    if args.name == "fig3":
        curve = run_feature_selection_experiment(
            z=args.z,
            n_values=[int(v) for v in args.n_values.split(",")] if args.n_values else
            (32, 64, 128, 256, 512, 1024, 2048, 4096, 8192, 16384),
            replicates=args.replicates,
            measure_kinds=kinds,
            master_seed=args.seed,
            alpha=args.alpha,
            mode=mode,
        )
        text = format_curve(curve)
        Path(args.out).write_text(text, encoding="utf-8")
        tail = {m: curve.fractions[m][-1] for m in curve.measure_names}
        print(f"wrote {args.out}")
        print("fraction favoring 2 states at n=%g: %s"
              % (curve.x_values[-1], " ".join(f"{m}={v:.3f}" for m, v in tail.items())))
        return EXIT_OK
    if args.name == "fig2":
        z_grid = ([float(v) for v in args.z_grid.split(",")] if args.z_grid
                  else [round(0.01 * i, 10) for i in range(11)])
        n_values = ([int(v) for v in args.n_values.split(",")] if args.n_values
                    else (25, 100, 500))
        curves = run_discretization_experiment(
            z_grid=z_grid,
            n_values=n_values,
            replicates=args.replicates,
            measure_kinds=kinds,
            master_seed=args.seed,
            alpha=args.alpha,
            mode=mode,
        )
        out = Path(args.out)
        for n, curve in curves.items():
            path = _with_suffix(out, f"_n{n}") if len(curves) > 1 else out
            path.write_text(format_curve(curve), encoding="utf-8")
            print(f"wrote {path}")
        return EXIT_OK
    if args.name == "ess-curve":
        if not args.input:
            raise ValueError("ess-curve requires --input COUNTFILE")
        table = read_count_table(args.input)
        prior = None
        if args.prior != "uniform":
            pc = read_count_table(args.prior)
            prior = make_prob_table(pc.counts / pc.counts.sum())
        grid = np.linspace(0.0, float(args.nprime_max), int(args.nprime_points))
        lhs, rhs = ess_constraint_curve(table, prior, grid, mode)
        rows = ["n_prime\tlhs\trhs"]
        rows += [f"{g:g}\t{v!r}\t{rhs!r}" for g, v in zip(grid, lhs)]
        Path(args.out).write_text("\n".join(rows) + "\n", encoding="utf-8")
        print(f"wrote {args.out}")
        return EXIT_OK
    raise ValueError(f"unknown experiment {args.name!r}")  # pragma: no cover


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="depscore",
        description="Dependence measures, fair ranking, and equivalent-sample-size "
                    "estimation for discrete variable pairs.",
    )
    parser.add_argument("--version", action="version", version=f"depscore {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=False, dof_default="effective"):
        p.add_argument("--dof", choices=["nominal", "effective"], default=dof_default,
                       help=f"degrees-of-freedom mode (default: {dof_default})")
        if seed:
            p.add_argument("--seed", type=int, default=0, help="master seed (u64)")

    p = sub.add_parser("measure", help="full dependence report for one pair")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["auto", "dataset", "counts"], default="auto")
    p.add_argument("--pair", nargs=2, metavar=("COL_A", "COL_B"))
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    common(p)
    p.set_defaults(func=_cmd_measure)

    p = sub.add_parser("rank", help="rank feature columns against a class column")
    p.add_argument("--input", required=True)
    p.add_argument("--class-column", required=True)
    p.add_argument("--measure", default="si",
                   choices=[k.value for k in MeasureKind])
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--out", default=None, help="write the ranking here instead of stdout")
    common(p)
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("ess", help="equivalent sample size for a count table")
    p.add_argument("--input", required=True)
    p.add_argument("--prior", default="uniform",
                   help="'uniform' or a path to a weight table (default: uniform)")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--curve", type=float, default=None, metavar="NPRIME_MAX",
                   help="also tabulate the constraint over [0, NPRIME_MAX]")
    p.add_argument("--curve-points", type=int, default=101)
    p.add_argument("--out", default=None, help="write the curve here instead of stdout")
    common(p)
    p.set_defaults(func=_cmd_ess)

    p = sub.add_parser("experiment", help="run a seeded study and write its curve")
    p.add_argument("name", choices=["fig2", "fig3", "ess-curve"])
    p.add_argument("--out", required=True)
    p.add_argument("--replicates", type=int, default=100)
    p.add_argument("--z", type=float, default=0.10, help="dependence parameter (fig3)")
    p.add_argument("--z-grid", default=None, help="comma-separated z values (fig2)")
    p.add_argument("--n-values", default=None, help="comma-separated sample sizes")
    p.add_argument("--measures", default=None,
                   help="comma-separated measure names (default: mi_bc,si,ni,p_value)")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--input", default=None, help="count table (ess-curve)")
    p.add_argument("--prior", default="uniform")
    p.add_argument("--nprime-max", type=float, default=200.0)
    p.add_argument("--nprime-points", type=int, default=101)
    # the study decision rules are calibrated on nominal dof
    common(p, seed=True, dof_default="nominal")
    p.set_defaults(func=_cmd_experiment)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NoRootError as exc:
        print(f"error: no-root: {exc}", file=sys.stderr)
        return EXIT_NO_ROOT
    except NonConvergenceError as exc:
        print(f"error: non-convergence: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
