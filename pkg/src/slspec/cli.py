"""Command-line front end.

Subcommands:

* ``solve``                   -- eigenvalues of a Dirichlet problem
* ``reproduce-paper-table``   -- the q = e^x on (0, pi) benchmark table
* ``charfn``                  -- characteristic-function samples as CSV
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .grid import DivisionByNearZeroError
from .solver import (
    NormalizedProblem,
    ProblemSpec,
    find_eigenvalues_spps,
    find_eigenvalues_transmutation,
    normalize,
    oracle_spectrum,
)
from .spps import (
    ConvergenceError,
    SeriesTruncationError,
    VanishingSolutionError,
    build_phi_basis,
)
from .transmute import TransmutationChar, chebyshev_table, phi_char, transmuted_images

# Reference Dirichlet eigenvalues for q(x) = e^x on (0, pi), indices as
# published; used by the reproduction command for offline diffing.
REFERENCE_TABLE = (
    (1, 4.8966693800),
    (2, 10.045189893),
    (3, 16.019267250),
    (4, 23.266270940),
    (5, 32.26370704),
    (6, 43.2200196),
    (7, 56.18159),
    (8, 71.15299),
    (9, 88.1321),
    (10, 107.11),
    (11, 128.10),
    (17, 296.07),
    (28, 791.05),
    (43, 1856.05),
    (50, 2507.0),
)
REPRODUCE_BETA_MAX = 160.0  # covers the table through index 50


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    potential: object = None
    interval: tuple = (0.0, 1.0)
    method: str = "transmutation"
    N: int = 18
    K_max: int = 100
    n_points: int = 5001
    beta_max: float = 55.0
    scan_step: float = 0.25
    output: str = "table"
    out_path: str | None = None


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def load_potential_csv(path: str):
    """Read ``x,re[,im]`` sample lines (no header) into arrays."""
    xs, ys = [], []
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.reader(fh):
                if not row or not "".join(row).strip():
                    continue
                if len(row) not in (2, 3):
                    raise ValueError(f"bad potential row {row!r}: expected x,re[,im]")
                x = float(row[0])
                y = float(row[1]) + 1j * (float(row[2]) if len(row) == 3 else 0.0)
                xs.append(x)
                ys.append(y)
    except OSError as exc:
        raise ValueError(f"cannot read potential file {path!r}: {exc}") from exc
    if len(xs) < 4:
        raise ValueError(f"potential file {path!r} has fewer than 4 samples")
    return np.asarray(xs), np.asarray(ys)


def _potential_argument(text: str):
    if text.startswith("file:"):
        return load_potential_csv(text.split(":", 1)[1])
    if text in ("zero", "exp") or text.startswith(("const:", "poly:")):
        return text
    raise argparse.ArgumentTypeError(
        f"unknown potential {text!r}; expected zero | const:C | exp | "
        "poly:c0,c1,... | file:PATH"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slspec",
        description="Sturm-Liouville Dirichlet eigenvalue solver "
        "(transmutation-operator and power-series methods)",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p, need_potential=True):
        if need_potential:
            p.add_argument("--potential", type=_potential_argument, required=True,
                           help="zero | const:C | exp | poly:c0,c1,... | file:PATH")
            p.add_argument("--interval", nargs=2, type=float, required=True,
                           metavar=("A", "B"))
        p.add_argument("--N", type=int, default=18,
                       help="characteristic-sum truncation (default 18)")
        p.add_argument("--k-max", type=int, default=100, dest="k_max",
                       help="basis size (default 100)")
        p.add_argument("--grid-points", type=int, default=5001, dest="grid_points")
        p.add_argument("--scan-step", type=float, default=0.25, dest="scan_step")
        p.add_argument("--out", dest="out_path", default=None,
                       help="write output to this path instead of stdout")

    p_solve = sub.add_parser("solve", help="compute the Dirichlet spectrum")
    add_common(p_solve)
    p_solve.add_argument("--method", default="transmutation",
                         choices=("transmutation", "spps", "both", "oracle"))
    p_solve.add_argument("--beta-max", type=float, default=55.0, dest="beta_max")
    p_solve.add_argument("--output", default="table", choices=("table", "json", "csv"))

    p_rep = sub.add_parser(
        "reproduce-paper-table",
        help="q = e^x on (0, pi): computed vs reference eigenvalues",
    )
    add_common(p_rep, need_potential=False)
    p_rep.add_argument("--beta-max", type=float, default=REPRODUCE_BETA_MAX,
                       dest="beta_max")

    p_chr = sub.add_parser(
        "charfn", help="CSV samples (beta, Re Phi, Im Phi) over the scan range"
    )
    add_common(p_chr)
    p_chr.add_argument("--beta-max", type=float, default=55.0, dest="beta_max")

    return parser


def parse_args(argv) -> RunConfig:
    """Validated run configuration; exits with code 2 on usage errors."""
    parser = _build_parser()
    ns = parser.parse_args(argv)
    interval = tuple(getattr(ns, "interval", (0.0, math.pi)))
    if not (math.isfinite(interval[0]) and math.isfinite(interval[1])
            and interval[0] < interval[1]):
        parser.error(f"--interval needs finite A < B, got {interval}")
    if not 1 <= ns.N <= 29:
        parser.error(f"--N must be in [1, 29] (Chebyshev rows reach order 2N+1), got {ns.N}")
    if ns.k_max < 2 * ns.N + 1:
        parser.error(f"need --k-max >= 2N+1, got N={ns.N}, k-max={ns.k_max}")
    if ns.grid_points < 5 or ns.grid_points % 2 == 0:
        parser.error(f"--grid-points must be odd and >= 5, got {ns.grid_points}")
    return RunConfig(
        subcommand=ns.subcommand,
        potential=getattr(ns, "potential", "exp"),
        interval=interval,
        method=getattr(ns, "method", "transmutation"),
        N=ns.N,
        K_max=ns.k_max,
        n_points=ns.grid_points,
        beta_max=ns.beta_max,
        scan_step=ns.scan_step,
        output=getattr(ns, "output", "table"),
        out_path=ns.out_path,
    )


def _problem_spec(config: RunConfig) -> ProblemSpec:
    return ProblemSpec(
        potential=config.potential,
        interval=config.interval,
        n_points=config.n_points,
        K_max=config.K_max,
        N=config.N,
        beta_max=config.beta_max,
        scan_step=config.scan_step,
    )


def _merge_diagnostics(spectra) -> dict:
    return {
        "max_im_residual": max((s.diagnostics.get("max_im_residual", 0.0) for s in spectra),
                               default=0.0),
        "terms_used": max((s.diagnostics.get("terms_used", 0) for s in spectra), default=0),
        "wall_ms": sum(s.diagnostics.get("wall_ms", 0.0) for s in spectra),
    }


def _spectra_for(config: RunConfig, norm: NormalizedProblem, spec: ProblemSpec):
    out = []
    if config.method in ("transmutation", "both"):
        out.append(find_eigenvalues_transmutation(norm, spec))
    if config.method in ("spps", "both"):
        out.append(find_eigenvalues_spps(norm, spec))
    if config.method == "oracle":
        out.append(oracle_spectrum(norm, spec))
    return out


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _records_json(config: RunConfig, spectra) -> str:
    problem = {
        "potential": config.potential if isinstance(config.potential, str) else "tabulated",
        "interval": list(config.interval),
        "method": config.method,
        "N": config.N,
        "K_max": config.K_max,
        "n_points": config.n_points,
        "beta_max": config.beta_max,
        "scan_step": config.scan_step,
    }
    eigs = []
    for s in spectra:
        for r in s.records:
            eigs.append(
                {
                    "index": r.index,
                    "beta": None if r.beta is None else float(_fmt(r.beta)),
                    "lambda": float(_fmt(r.lam)),
                    "residual": float(_fmt(r.residual)),
                    "method": r.method,
                }
            )
    doc = {"problem": problem, "eigenvalues": eigs,
           "diagnostics": _merge_diagnostics(spectra)}
    return json.dumps(doc, indent=2) + "\n"


def _records_csv(spectra) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["index", "beta", "lambda", "residual", "method"])
    for s in spectra:
        for r in s.records:
            writer.writerow(
                [r.index, "" if r.beta is None else _fmt(r.beta),
                 _fmt(r.lam), _fmt(r.residual), r.method]
            )
    return buf.getvalue()


def _records_table(spectra) -> str:
    lines = [f"{'idx':>4}  {'beta':>14}  {'lambda':>18}  {'residual':>10}  method"]
    for s in spectra:
        for r in s.records:
            beta = "-" if r.beta is None else f"{r.beta:14.8f}"
            lines.append(
                f"{r.index:>4}  {beta:>14}  {r.lam:>18.11g}  {r.residual:>10.2e}  {r.method}"
            )
        diag = s.diagnostics
        lines.append(
            f"# {s.records[0].method if s.records else '-'}: "
            f"{len(s.records)} eigenvalue(s), terms_used={diag.get('terms_used')}, "
            f"max_im_residual={diag.get('max_im_residual', 0):.2e}, "
            f"wall={diag.get('wall_ms', 0):.0f} ms"
        )
    return "\n".join(lines) + "\n"


def _run_solve(config: RunConfig) -> int:
    spec = _problem_spec(config)
    norm = normalize(spec)
    spectra = _spectra_for(config, norm, spec)
    if config.output == "json":
        _emit(_records_json(config, spectra), config.out_path)
    elif config.output == "csv":
        _emit(_records_csv(spectra), config.out_path)
    else:
        _emit(_records_table(spectra), config.out_path)
    return 0


def _run_reproduce(config: RunConfig) -> int:
    spec = ProblemSpec(
        potential="exp",
        interval=(0.0, math.pi),
        n_points=config.n_points,
        K_max=config.K_max,
        N=config.N,
        beta_max=config.beta_max,
        scan_step=config.scan_step,
    )
    norm = normalize(spec)
    spectrum = find_eigenvalues_transmutation(norm, spec)
    by_index = {r.index: r for r in spectrum.records}
    lines = [
        f"{'idx':>4}  {'computed':>16}  {'reference':>16}  {'abs err':>10}  {'rel err':>10}"
    ]
    for idx, ref in REFERENCE_TABLE:
        rec = by_index.get(idx)
        if rec is None:
            lines.append(f"{idx:>4}  {'n/a':>16}  {ref:>16.10g}  {'-':>10}  {'-':>10}")
            continue
        abs_err = abs(rec.lam - ref)
        rel_err = abs_err / abs(ref)
        lines.append(
            f"{idx:>4}  {rec.lam:>16.10f}  {ref:>16.10g}  {abs_err:>10.2e}  {rel_err:>10.2e}"
        )
    diag = spectrum.diagnostics
    lines.append(
        f"# N={config.N}, grid={config.n_points}, beta_max={config.beta_max}, "
        f"wall={diag.get('wall_ms', 0):.0f} ms"
    )
    _emit("\n".join(lines) + "\n", config.out_path)
    return 0


def _run_charfn(config: RunConfig) -> int:
    spec = _problem_spec(config)
    norm = normalize(spec)
    if not norm.q_unit.is_real:
        raise ValueError("charfn requires a real potential")
    basis = build_phi_basis(norm.q_unit, spec.K_max)
    char = TransmutationChar(
        transmuted_images(basis, chebyshev_table(2 * spec.N + 1)), spec.N
    )
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["beta", "re_phi", "im_phi"])
    start = 0.5 * spec.scan_step
    count = int(math.floor((spec.beta_max - start) / spec.scan_step)) + 1
    for k in range(count):
        beta = start + k * spec.scan_step
        z = phi_char(char, beta)
        writer.writerow([_fmt(beta), _fmt(z.real), _fmt(z.imag)])
    _emit(buf.getvalue(), config.out_path)
    return 0


def run(config: RunConfig) -> int:
    """Execute a parsed configuration; 0 on success, 1 on numerical failure."""
    try:
        if config.subcommand == "solve":
            return _run_solve(config)
        if config.subcommand == "reproduce-paper-table":
            return _run_reproduce(config)
        if config.subcommand == "charfn":
            return _run_charfn(config)
        raise ValueError(f"unknown subcommand {config.subcommand!r}")
    except (
        ConvergenceError,
        SeriesTruncationError,
        VanishingSolutionError,
        DivisionByNearZeroError,
        ValueError,
    ) as exc:
        print(f"slspec: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    config = parse_args(sys.argv[1:] if argv is None else argv)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
