"""Command-line front end.

Exit codes: 0 separable / ok, 3 entangled (``analyze``), 2 usage error,
1 runtime error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import re
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .homsim import ShotEstimate, estimate_all
from .hybrid import hybrid_scan
from .linalg import min_eigenvalue, overlap, partial_transpose_b
from .singlet import singlet_fraction
from .spa import (
    lim_decomposition,
    minimal_cp_weight,
    partial_transpose_map,
    printed_form_deviation,
    spa_pt,
    spa_pt_mixing_weight,
)
from .states import (
    DensityMatrix,
    StateError,
    make_bell,
    make_werner,
    product_state,
    pure_to_density,
    random_density,
    validate,
)
from .witness import (
    build_V,
    build_V_tilde,
    lambda_from_favg,
    min_eig_spa,
    v_tilde_weight_slack,
    verdict,
)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2
EXIT_ENTANGLED = 3
SEED_ENV = "SPA_SINGLET_SEED"


class StateFileError(ValueError):
    pass


# -- state files -----------------------------------------------------------


def state_to_json(rho) -> str:
    m = np.asarray(rho, dtype=complex)
    rows = [[[float(z.real) + 0.0, float(z.imag) + 0.0] for z in row] for row in m]
    return json.dumps({"dim": int(m.shape[0]), "matrix": rows}) + "\n"


def parse_state_text(text: str) -> DensityMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict) or "matrix" not in doc:
        raise StateFileError("state file must be an object with 'dim' and 'matrix'")
    dim = doc.get("dim")
    rows = doc["matrix"]
    if dim not in (2, 4) or not isinstance(rows, list) or len(rows) != dim:
        raise StateFileError(f"expected 'dim' in (2, 4) and {dim} matrix rows")
    m = np.zeros((dim, dim), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise StateFileError(f"row {i} must hold {dim} entries")
        for j, entry in enumerate(row):
            if (not isinstance(entry, list) or len(entry) != 2
                    or not all(isinstance(x, (int, float)) for x in entry)):
                raise StateFileError(f"entry ({i},{j}) must be a [re, im] pair of numbers")
            m[i, j] = complex(entry[0], entry[1])
    return validate(m)


def parse_state_file(path) -> DensityMatrix:
    return parse_state_text(Path(path).read_text())


def file_digest(path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


# -- reports ---------------------------------------------------------------


@dataclass
class AnalysisReport:
    input_digest: str
    lambda_min: float
    verdict: str
    entangled: bool
    witness_value: float
    w_opt_value: float
    f_opt: float
    teleport_fidelity: float
    f_avg: float
    singlet_fraction: float
    residuals: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    estimates: dict | None = None
    notes: list = field(default_factory=list)
    tool_version: str = __version__

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls(**json.loads(text))

    def summary(self) -> str:
        lines = [
            f"verdict           {self.verdict}",
            f"lambda_min        {self.lambda_min:.12g}",
            f"Tr(V rho~)        {self.witness_value:.12g}",
            f"F_avg             {self.f_avg:.12g}",
            f"optimal F         {self.f_opt:.12g}",
            f"teleport fidelity {self.teleport_fidelity:.12g}",
        ]
        for name, est in (self.estimates or {}).items():
            lines.append(f"{name:<17} {est['point']:.6g}  [{est['ci_low']:.6g}, {est['ci_high']:.6g}]"
                         f"  shots={est['shots']}")
        return "\n".join(lines) + "\n"


def analyze(rho: DensityMatrix, digest: str = "") -> AnalysisReport:
    v = verdict(rho)
    lam, phi = min_eig_spa(rho)
    rho_t = spa_pt(rho)
    f_avg = overlap(build_V_tilde(build_V(phi)).matrix, rho_t.matrix)
    lam_pt = min_eigenvalue(partial_transpose_b(rho.matrix))
    residuals = {
        "w_opt_vs_v": abs(v.w_opt_value - v.witness_value),
        "lambda_vs_f_avg": abs(lambda_from_favg(f_avg) - lam),
        "f_opt_vs_partial_transpose": abs(v.f_opt_singlet_fraction - (0.5 - lam_pt)),
        "local_decomposition_vs_spa_pt":
            float(np.max(np.abs(lim_decomposition(rho).matrix - rho_t.matrix))),
    }
    slack = v_tilde_weight_slack()
    diagnostics = {
        "printed_spa_pt_deviation": printed_form_deviation(rho),
        "v_tilde_weight": slack["adopted"],
        "v_tilde_weight_psd_max": slack["psd_max"],
        "q_star": spa_pt_mixing_weight(),
        "minimal_cp_weight": minimal_cp_weight(partial_transpose_map()),
    }
    return AnalysisReport(
        input_digest=digest,
        lambda_min=lam,
        verdict="entangled" if v.entangled else "separable",
        entangled=v.entangled,
        witness_value=v.witness_value,
        w_opt_value=v.w_opt_value,
        f_opt=v.f_opt_singlet_fraction,
        teleport_fidelity=v.teleport_fidelity,
        f_avg=f_avg,
        singlet_fraction=singlet_fraction(rho),
        residuals=residuals,
        diagnostics=diagnostics,
    )


def _estimate_block(est: ShotEstimate, analytic: ShotEstimate) -> dict:
    d = asdict(est)
    d["analytic"] = analytic.point
    return d


def estimate_report(rho: DensityMatrix, shots: int, seed: int, digest: str = "") -> AnalysisReport:
    report = analyze(rho, digest)
    sampled = estimate_all(rho, shots, seed)
    exact = estimate_all(rho, None)
    report.estimates = {k: _estimate_block(sampled[k], exact[k]) for k in sampled}
    report.notes.append(
        "V~ is normalised by 52/27 and assumed preparable as an interferometer input")
    return report


# -- argument parsing helpers ----------------------------------------------

_ANGLE = re.compile(r"^\s*(?:([0-9.eE+-]+)\s*\*?\s*)?pi(?:\s*/\s*([0-9.eE+-]+))?\s*$")


def parse_angle(text: str) -> float:
    """Radians, or tokens like ``pi/4``, ``3pi/16``, ``3*pi/16``."""
    m = _ANGLE.match(text)
    if m:
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * math.pi / den
    return float(text)


def parse_grid(text: str, parse=float) -> list[float]:
    """``start:stop:step`` inclusive of stop, or a single value."""
    parts = text.split(":")
    if len(parts) == 1:
        return [parse(parts[0])]
    if len(parts) != 3:
        raise ValueError(f"grid must look like start:stop:step, got {text!r}")
    start, stop, step = (parse(x) for x in parts)
    if step <= 0 or stop < start:
        raise ValueError(f"grid needs step > 0 and stop >= start, got {text!r}")
    n = int(math.floor((stop - start) / step + 1e-9))
    return [start + k * step for k in range(n + 1)]


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def scan_csv(p_grid, theta_grid, outcome: int = 0) -> str:
    scan = hybrid_scan(p_grid, theta_grid, outcome)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["p", "theta", "f_opt", "teleport_fidelity", "entangled"])
    for r in sorted(scan.rows, key=lambda r: (r.p, r.theta)):
        writer.writerow([_fmt(r.p), _fmt(r.theta), _fmt(r.f_opt), _fmt(r.teleport_fidelity),
                         "true" if r.entangled else "false"])
    flag = {True: "true", False: "false"}
    buf.write(f"# decreasing_in_p={flag[scan.decreasing_in_p]} "
              f"increasing_in_theta={flag[scan.increasing_in_theta]} "
              f"interior_useful={flag[scan.interior_useful]}\n")
    return buf.getvalue()


def generate_state(args) -> DensityMatrix:
    if args.type == "bell":
        return pure_to_density(make_bell(args.which))
    if args.type == "werner":
        return make_werner(args.w)
    if args.type == "random":
        return random_density(args.seed, args.rank)
    # product of two pure qubits given by Bloch angles
    def qubit(theta, phi):
        v = np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])
        return np.outer(v, v.conj())
    return product_state(qubit(args.theta_a, args.phi_a), qubit(args.theta_b, args.phi_b))


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    return int(raw) if raw not in (None, "") else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spa-singlet",
        description="Entanglement, optimal singlet fraction and teleportation fidelity via SPA-PT.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="exact pipeline on a state file (exit 3 if entangled)")
    p.add_argument("state")
    p.add_argument("--text", action="store_true", help="plain-text summary instead of JSON")

    p = sub.add_parser("estimate", help="shot-based two-detector estimate")
    p.add_argument("state")
    p.add_argument("--shots", type=int, required=True)
    p.add_argument("--seed", type=int, default=None,
                   help=f"RNG seed (default: ${SEED_ENV} or 0)")
    p.add_argument("--text", action="store_true")

    p = sub.add_parser("hybrid-scan", help="F_opt(p, theta) grid as CSV")
    p.add_argument("--p-grid", required=True, help="start:stop:step")
    p.add_argument("--theta-grid", required=True, help="start:stop:step, accepts pi/16 etc.")
    p.add_argument("--outcome", type=int, choices=(0, 1), default=0)
    p.add_argument("--out", default="-")

    p = sub.add_parser("generate", help="write a state file")
    p.add_argument("--type", required=True, choices=("bell", "werner", "random", "product"))
    p.add_argument("--which", default="psi-", help="Bell state: phi+, phi-, psi+, psi- (or psi-minus ...)")
    p.add_argument("--w", type=float, default=1.0, help="Werner weight")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--rank", type=int, default=4)
    p.add_argument("--theta-a", type=parse_angle, default=0.0)
    p.add_argument("--phi-a", type=parse_angle, default=0.0)
    p.add_argument("--theta-b", type=parse_angle, default=0.0)
    p.add_argument("--phi-b", type=parse_angle, default=0.0)
    p.add_argument("--out", default="-")

    p = sub.add_parser("spa", help="dump SPA-PT of a state file")
    p.add_argument("state")
    p.add_argument("--out", default="-")
    return parser


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "hybrid-scan":
        try:
            ps = parse_grid(args.p_grid)
            thetas = parse_grid(args.theta_grid, parse_angle)
        except ValueError as exc:
            parser.error(str(exc))
        if any(not 0 <= p <= 1 for p in ps) or any(not 0 < t <= math.pi / 4 + 1e-12 for t in thetas):
            parser.error("p must lie in [0, 1] and theta in (0, pi/4]")
        thetas = [min(t, math.pi / 4) for t in thetas]
    if args.command == "estimate" and args.shots < 1:
        parser.error("--shots must be at least 1")
    if args.command == "generate" and args.type == "random" and args.seed is None:
        args.seed = _default_seed()

    try:
        if args.command == "analyze":
            rho = parse_state_file(args.state)
            report = analyze(rho, file_digest(args.state))
            sys.stdout.write(report.summary() if args.text else report.to_json())
            return EXIT_ENTANGLED if report.entangled else EXIT_OK
        if args.command == "estimate":
            rho = parse_state_file(args.state)
            seed = args.seed if args.seed is not None else _default_seed()
            report = estimate_report(rho, args.shots, seed, file_digest(args.state))
            sys.stdout.write(report.summary() if args.text else report.to_json())
            return EXIT_OK
        if args.command == "hybrid-scan":
            _write(args.out, scan_csv(ps, thetas, args.outcome))
            return EXIT_OK
        if args.command == "generate":
            _write(args.out, state_to_json(generate_state(args)))
            return EXIT_OK
        if args.command == "spa":
            _write(args.out, state_to_json(spa_pt(parse_state_file(args.state))))
            return EXIT_OK
    except (OSError, StateFileError, StateError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_USAGE  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
