"""
Command-line front end. Every subcommand reads the same run configuration and
writes CSV (or JSON for operator dumps) into the output directory.

Exit codes: 0 ok, 2 configuration error, 3 numerical error, 4 I/O error.
Errors are reported as a single JSON line on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import analysis, oracle_quad, phase_ops, serialization
from .errors import InvalidConfig, NonPositiveSpectrum
from .fock_core import build_basis
from .wavefunc import evaluate_grid, wavefunction

OUTPUT_ENV = "PHASEKIT_OUTPUT_DIR"
FIELD_SAMPLES = 256

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


@dataclass
class RunConfig:
    n_max: int = 40
    margin: Optional[int] = None
    k: float = 1.0
    quad_order: Optional[int] = None
    rel_floor: float = phase_ops.DEFAULT_REL_FLOOR
    output_dir: Path = Path(".")

    def __post_init__(self):
        if self.margin is None:
            self.margin = max(1, self.n_max // 2)
        if self.quad_order is None:
            self.quad_order = self.n_max + 8
        self.output_dir = Path(self.output_dir)

    def validate(self) -> "RunConfig":
        if self.n_max < 1:
            raise InvalidConfig(f"n_max must be positive, got {self.n_max}")
        if not 0 < self.margin < self.n_max:
            raise InvalidConfig(f"margin must satisfy 0 < margin < n_max, got {self.margin}")
        if not (math.isfinite(self.k) and self.k > 0):
            raise InvalidConfig(f"k must be positive, got {self.k}")
        if self.quad_order < 1:
            raise InvalidConfig(f"quad_order must be positive, got {self.quad_order}")
        if not self.rel_floor > 0:
            raise InvalidConfig(f"rel_floor must be positive, got {self.rel_floor}")
        return self


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidConfig(message)


def _config_parent() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    g = p.add_argument_group("run configuration")
    g.add_argument("--n-max", type=int, default=40)
    g.add_argument("--margin", type=int, default=None, help="default: n_max // 2")
    g.add_argument("--k", type=float, default=1.0)
    g.add_argument("--quad-order", type=int, default=None, help="default: n_max + 8")
    g.add_argument("--rel-floor", type=float, default=phase_ops.DEFAULT_REL_FLOOR)
    g.add_argument("--output-dir", type=Path, default=None, help=f"default: ${OUTPUT_ENV} or '.'")
    return p


def build_parser() -> argparse.ArgumentParser:
    parent = _config_parent()
    parser = _Parser(prog="phasekit", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("an-table", parents=[parent], help="CSV of the forward phase coefficients a_n")
    p.add_argument("--count", type=int, required=True)

    sub.add_parser("phase-matrix", parents=[parent], help="JSON dump of E plus consistency reports")
    sub.add_parser("oracle-compare", parents=[parent], help="operator vs quadrature elements on the interior")

    p = sub.add_parser("variance", parents=[parent], help="window-state phase variances")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--m-list", type=int, nargs="+", required=True)

    p = sub.add_parser("evolve", parents=[parent], help="trajectory of <E_+>(t) for a window state")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--t-grid", type=float, nargs="+", required=True)

    p = sub.add_parser("wavefunction-grid", parents=[parent], help="polar samples of one wavefunction")
    p.add_argument("--nfwd", type=int, required=True)
    p.add_argument("--nbwd", type=int, required=True)
    p.add_argument("--rho-max", type=float, required=True)
    p.add_argument("--resolution", type=int, required=True)

    p = sub.add_parser("field", parents=[parent], help="expected A field before and after a rotation")
    p.add_argument("--state-file", type=Path, required=True)
    p.add_argument("--theta", type=float, required=True)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    out = args.output_dir
    if out is None:
        out = os.environ.get(OUTPUT_ENV) or "."
    return RunConfig(
        n_max=args.n_max,
        margin=args.margin,
        k=args.k,
        quad_order=args.quad_order,
        rel_floor=args.rel_floor,
        output_dir=Path(out),
    ).validate()


def cmd_an_table(args, cfg: RunConfig) -> List[Path]:
    if args.count < 0:
        raise InvalidConfig(f"--count must be non-negative, got {args.count}")
    path = cfg.output_dir / "an_table.csv"
    table = phase_ops.phase_sequence_table(args.count)
    serialization.write_csv(path, ["n", "a_n"], enumerate(table))
    return [path]


def cmd_phase_matrix(args, cfg: RunConfig) -> List[Path]:
    basis = build_basis(cfg.n_max)
    op = phase_ops.phase_operator(basis, cfg.k, cfg.rel_floor)
    matrix_path = cfg.output_dir / "phase_matrix.json"
    matrix_path.write_text(serialization.dumps(op))
    report = {
        "config": {"n_max": cfg.n_max, "margin": cfg.margin, "k": cfg.k, "rel_floor": cfg.rel_floor},
        "selection_rule_violation": phase_ops.selection_rule_violation(op, basis),
        "interior_unitarity": phase_ops.interior_unitarity(op, basis, cfg.margin),
        "interior_max_total": cfg.n_max - cfg.margin,
        "untrusted_rows": f"states with total occupation {cfg.n_max}",
    }
    report_path = cfg.output_dir / "phase_report.json"
    report_path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return [matrix_path, report_path]


def cmd_oracle_compare(args, cfg: RunConfig) -> List[Path]:
    basis = build_basis(cfg.n_max)
    op = phase_ops.phase_operator(basis, cfg.k, cfg.rel_floor)
    rows = oracle_quad.compare_with_operator(op, basis, cfg.margin, cfg.k, cfg.quad_order)
    path = cfg.output_dir / "oracle_compare.csv"
    header = [
        "row_nfwd", "row_nbwd", "col_nfwd", "col_nbwd",
        "oracle_re", "oracle_im", "operator_re", "operator_im", "abs_diff",
    ]
    serialization.write_csv(
        path,
        header,
        (
            [*r.row, *r.col, r.oracle.real, r.oracle.imag, r.operator.real, r.operator.imag, r.abs_diff]
            for r in rows
        ),
    )
    return [path]


def cmd_variance(args, cfg: RunConfig) -> List[Path]:
    if args.l < 0 or any(m < 1 for m in args.m_list):
        raise InvalidConfig("--l must be >= 0 and every --m-list entry >= 1")
    out = []
    for m in args.m_list:
        win = analysis.window_state(args.l, m)
        e_plus = phase_ops.forward_phase_operator(args.l + m)
        var = analysis.variance_phase_forward(win.state, e_plus)
        out.append([m, args.l, var, (2 * m - 1) / m**2])
    path = cfg.output_dir / "variance.csv"
    serialization.write_csv(path, ["m", "l", "variance", "limit"], out)
    return [path]


def cmd_evolve(args, cfg: RunConfig) -> List[Path]:
    if args.l < 0 or args.m < 1:
        raise InvalidConfig("--l must be >= 0 and --m >= 1")
    win = analysis.window_state(args.l, args.m)
    e_plus = phase_ops.forward_phase_operator(args.l + args.m)
    traj = analysis.expectation_trajectory(win.state, e_plus, cfg.k, args.t_grid)
    path = cfg.output_dir / "trajectory.csv"
    serialization.write_csv(
        path, ["t", "re", "im", "abs"], ([t, z.real, z.imag, abs(z)] for t, z in zip(args.t_grid, traj))
    )
    return [path]


def cmd_wavefunction_grid(args, cfg: RunConfig) -> List[Path]:
    if args.nfwd < 0 or args.nbwd < 0:
        raise InvalidConfig("--nfwd and --nbwd must be non-negative")
    if not args.rho_max > 0 or args.resolution < 1:
        raise InvalidConfig("--rho-max must be positive and --resolution >= 1")
    wf = wavefunction((args.nfwd, args.nbwd), cfg.k)
    rho = np.linspace(0.0, args.rho_max, args.resolution)
    phi = np.linspace(0.0, 2 * math.pi, args.resolution, endpoint=False)
    grid = evaluate_grid(wf, rho, phi)
    path = cfg.output_dir / f"wavefunction_{args.nfwd}_{args.nbwd}.csv"
    serialization.write_csv(
        path,
        ["rho", "phi", "re", "im"],
        ([r, p, grid[i, j].real, grid[i, j].imag] for i, r in enumerate(rho) for j, p in enumerate(phi)),
    )
    return [path]


def cmd_field(args, cfg: RunConfig) -> List[Path]:
    try:
        state = serialization.loads(Path(args.state_file).read_text())
    except (ValueError, KeyError, TypeError) as exc:
        raise InvalidConfig(f"cannot parse state file: {exc}") from exc
    if not state.tag.startswith("two-mode:"):
        raise InvalidConfig("state file must hold a two-mode state")
    basis = build_basis(int(state.tag.split(":")[1]))
    if state.dim != basis.dim:
        raise InvalidConfig(f"state has {state.dim} entries, basis needs {basis.dim}")
    norm = state.norm()
    if not norm > 0:
        raise InvalidConfig("state has zero norm")
    state = type(state)(state.coeffs / norm, state.tag)
    x = np.linspace(0.0, 2 * math.pi / cfg.k, FIELD_SAMPLES, endpoint=False)
    fcfg = analysis.FieldSampleConfig(k=cfg.k, x_samples=tuple(x))
    before = analysis.expected_field(state, fcfg, basis)
    after = analysis.expected_field(analysis.rotate(state, basis, args.theta), fcfg, basis)
    paths = [cfg.output_dir / "field.csv", cfg.output_dir / "field_rotated.csv"]
    for path, values in zip(paths, (before, after)):
        serialization.write_csv(path, ["x", "field"], zip(x, values))
    return paths


COMMANDS = {
    "an-table": cmd_an_table,
    "phase-matrix": cmd_phase_matrix,
    "oracle-compare": cmd_oracle_compare,
    "variance": cmd_variance,
    "evolve": cmd_evolve,
    "wavefunction-grid": cmd_wavefunction_grid,
    "field": cmd_field,
}


def _fail(code: str, detail: str, status: int) -> int:
    print(json.dumps({"error": code, "detail": detail}), file=sys.stderr)
    return status


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = config_from_args(args)
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        for path in COMMANDS[args.command](args, cfg):
            print(path)
    except NonPositiveSpectrum as exc:
        return _fail(exc.code, str(exc), EXIT_NUMERIC)
    except ValueError as exc:
        return _fail(getattr(exc, "code", "InvalidConfig"), str(exc), EXIT_CONFIG)
    except ArithmeticError as exc:
        return _fail("NumericalError", str(exc), EXIT_NUMERIC)
    except OSError as exc:
        return _fail("IoError", str(exc), EXIT_IO)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
