"""Command-line front end: run the constructions, sweeps, and the
verification suite; emit machine-readable reports.

Exit codes: 0 when all checks of a run pass, 1 when some check fails
(failing names go to stderr), 2 for unusable flags or inputs.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import acceptance
from .bloch import pc_check, predictability_circle, to_operator, transverse_frame
from .discrimination import (
    clone_protocol,
    detection_probabilities,
    discriminate,
    hyperplane_pair,
    overlap,
)
from .highdim import (
    CERTAIN,
    NULL,
    build_probe_state,
    build_violating_state,
    detection_probability,
    entangled_projector,
)
from .nonlocal_box import (
    TSIRELSON_SETTINGS,
    build_box,
    chsh_settings_for,
    chsh_value,
    closed_form_box,
    setting_tables,
    signalling_deviation,
)
from .operators import kron
from .reporting import CheckResult, RunReport, emit_report

SQRT2 = float(np.sqrt(2.0))


def _vector(text: str) -> np.ndarray:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected 3 components, got {len(parts)}")
    return np.array(parts)


def _run_pc_check(args) -> RunReport:
    result = pc_check(args.r)
    state = to_operator(args.r)
    outputs = {
        "norm": result.norm,
        "mean_square_sum": result.mean_square_sum,
        "min_eigenvalue": state.min_eigenvalue,
    }
    circle = predictability_circle(args.r)
    if circle is not None:
        outputs["certain_circle_center"] = circle.center
        outputs["certain_circle_radius"] = circle.radius
    excess = result.norm - 1.0
    return RunReport(
        command="pc-check",
        inputs={"r": args.r},
        outputs=outputs,
        checks=[CheckResult("complementarity", result.satisfied, excess, 1e-12)],
    )


def _resolve_settings(choice: str, norm: float):
    if choice == "tsirelson" or norm == 0.0:
        return TSIRELSON_SETTINGS
    return chsh_settings_for(norm)


def _run_box(args) -> RunReport:
    box = build_box(args.r)
    settings = _resolve_settings(args.settings, box.r)
    value = chsh_value(box, settings)
    tables = setting_tables(box, settings)

    if args.settings == "auto" and box.r > SQRT2:
        expected = 4.0
    else:
        expected = 2.0 * SQRT2 * box.r
    closed_dev = float(np.max(np.abs(box.state.matrix - closed_form_box(box.r))))
    signalling = signalling_deviation(tables)

    outputs = {
        "r_norm": box.r,
        "chsh": value,
        "chsh_expected": expected,
        "box_eigenvalues": np.sort(np.linalg.eigvalsh(box.state.matrix))[::-1],
        "all_tables_valid": all(t.valid for t in tables.values()),
    }
    for name, vec in (("a1", settings.a1), ("a2", settings.a2), ("b1", settings.b1), ("b2", settings.b2)):
        outputs[f"setting_{name}"] = vec
    for (i, j), table in sorted(tables.items()):
        outputs[f"p_a{i}_b{j}"] = table.table.ravel()
        outputs[f"valid_a{i}_b{j}"] = table.valid
    return RunReport(
        command="box",
        inputs={"r": args.r, "settings": args.settings},
        outputs=outputs,
        checks=[
            CheckResult("chsh-law", abs(value - expected) <= 1e-9, abs(value - expected), 1e-9),
            CheckResult("closed-form-match", closed_dev <= 1e-10, closed_dev, 1e-10),
            CheckResult("nonsignalling", signalling <= 1e-12, signalling, 1e-12),
        ],
    )


def _run_chsh_sweep(args) -> RunReport:
    if args.r_min <= 0 or args.r_max < args.r_min or args.steps < 1:
        raise ValueError("sweep needs 0 < r-min <= r-max and steps >= 1")
    grid = np.linspace(args.r_min, args.r_max, args.steps)
    values, valids = [], []
    for r in grid:
        box = build_box(np.array([0.0, 0.0, r]))
        settings = chsh_settings_for(r)
        values.append(chsh_value(box, settings))
        valids.append(all(t.valid for t in setting_tables(box, settings).values()))
    return RunReport(
        command="chsh-sweep",
        inputs={"r_min": args.r_min, "r_max": args.r_max, "steps": args.steps},
        outputs={"r": list(grid), "chsh": values, "valid": valids},
    )


def _run_discriminate(args) -> RunReport:
    pair = hyperplane_pair(args.r, args.y, args.z)
    q_plus, miss_plus = detection_probabilities(args.r, pair, +1)
    miss_minus, q_minus = detection_probabilities(args.r, pair, -1)
    det_dev = max(abs(q_plus - 1.0), abs(miss_plus), abs(q_minus - 1.0), abs(miss_minus))

    rng = np.random.default_rng(args.seed)
    hidden = rng.choice([+1, -1], size=args.trials)
    correct = sum(discriminate(args.r, pair, int(w)) == w for w in hidden)

    return RunReport(
        command="discriminate",
        inputs={"r": args.r, "y": args.y, "z": args.z, "trials": args.trials, "seed": args.seed},
        outputs={
            "r_plus": pair.r_plus,
            "r_minus": pair.r_minus,
            "overlap": overlap(pair.r_plus, pair.r_minus),
            "q_plus_given_plus": q_plus,
            "q_minus_given_plus": miss_plus,
            "q_minus_given_minus": q_minus,
            "q_plus_given_minus": miss_minus,
            "trials": args.trials,
            "correct": int(correct),
        },
        checks=[
            CheckResult("deterministic-detection", det_dev <= 1e-10, det_dev, 1e-10),
            CheckResult("all-trials-correct", correct == args.trials, float(args.trials - correct), 0.0),
        ],
    )


def _run_clone_demo(args) -> RunReport:
    pair = hyperplane_pair(args.r, args.y, args.z)
    outputs = {"r_plus": pair.r_plus, "r_minus": pair.r_minus, "overlap": overlap(pair.r_plus, pair.r_minus)}
    clone_dev = 0.0
    fidelity_dev = 0.0
    for which, name in ((+1, "plus"), (-1, "minus")):
        label, out = clone_protocol(args.r, pair, which)
        target_vec = pair.r_plus if which == +1 else pair.r_minus
        single = to_operator(target_vec).matrix
        target = kron(single, single)
        clone_dev = max(clone_dev, float(np.max(np.abs(out.matrix - target))))
        fidelity = float(np.trace(target @ out.matrix).real)
        purity_sq = (0.5 * (1.0 + float(target_vec @ target_vec))) ** 2
        fidelity_dev = max(fidelity_dev, abs(fidelity - purity_sq))
        outputs[f"label_{name}"] = label
        outputs[f"fidelity_{name}"] = fidelity
        outputs[f"purity_squared_{name}"] = purity_sq
    return RunReport(
        command="clone-demo",
        inputs={"r": args.r, "y": args.y, "z": args.z},
        outputs=outputs,
        checks=[
            CheckResult("clone-output-exact", clone_dev <= 1e-12, clone_dev, 1e-12),
            CheckResult("fidelity-matches-purity-squared", fidelity_dev <= 1e-12, fidelity_dev, 1e-12),
        ],
    )


def _run_highdim(args) -> RunReport:
    lambdas = np.array(args.lambdas) if args.lambdas else None
    vs = build_violating_state(args.d, args.epsilon, lambdas=lambdas)
    rng = np.random.default_rng(args.seed)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=args.d) if args.phases == "random" else None
    certain = build_probe_state(vs, CERTAIN, phases=phases)
    null = build_probe_state(vs, NULL, phases=phases)

    q1_certain = detection_probability(vs, certain)
    q1_null = detection_probability(vs, null)
    det_dev = max(abs(q1_certain - 1.0), abs(q1_null))

    p1, _ = entangled_projector(vs)
    doubled = np.stack([kron(vs.basis[:, j : j + 1], vs.basis[:, j : j + 1]).ravel() for j in range(vs.dim)])
    oracle_dev = float(np.max(np.abs(p1 - doubled.T @ doubled.conj())))

    pin_dev = max(
        abs(float(np.real(certain.vector.conj() @ vs.state.matrix @ certain.vector)) - 1.0),
        abs(float(np.real(null.vector.conj() @ vs.state.matrix @ null.vector))),
    )
    return RunReport(
        command="highdim",
        inputs={
            "d": args.d,
            "epsilon": args.epsilon,
            "lambdas": list(args.lambdas) if args.lambdas else "uniform",
            "phases": args.phases,
            "seed": args.seed,
        },
        outputs={
            "spectrum": vs.spectrum,
            "leading_weight_certain": certain.magnitudes_sq[0],
            "leading_weight_null": null.magnitudes_sq[0],
            "probe_overlap": float(np.abs(certain.vector.conj() @ null.vector)),
            "q1_certain": q1_certain,
            "q1_null": q1_null,
        },
        checks=[
            CheckResult("probe-pinning", pin_dev <= 1e-12, pin_dev, 1e-12),
            CheckResult("doubled-projector-detection", det_dev <= 1e-10, det_dev, 1e-10),
            CheckResult("projector-oracle", oracle_dev <= 1e-10, oracle_dev, 1e-10),
        ],
    )


def _run_planes(args) -> RunReport:
    norm = float(np.linalg.norm(args.r))
    if norm <= 1.0:
        raise ValueError(f"the certainty planes cross the ball only for norm > 1, got {norm:.15g}")
    r_hat = np.asarray(args.r, dtype=float) / norm
    m, n = transverse_frame(r_hat)
    radius = float(np.sqrt(1.0 - 1.0 / norm**2))
    thetas = np.linspace(0.0, 2.0 * np.pi, args.points, endpoint=False)
    planes, angles, xs, ys, zs = [], [], [], [], []
    for sign in (+1, -1):
        center = sign * r_hat / norm
        for theta in thetas:
            point = center + radius * (np.cos(theta) * m + np.sin(theta) * n)
            planes.append(sign)
            angles.append(float(theta))
            xs.append(float(point[0]))
            ys.append(float(point[1]))
            zs.append(float(point[2]))
    return RunReport(
        command="planes",
        inputs={"r": args.r, "points": args.points},
        outputs={"plane": planes, "theta": angles, "x": xs, "y": ys, "z": zs},
    )


def _run_verify_all(args) -> RunReport:
    start = time.perf_counter()
    criteria = acceptance.run_all(seed=args.seed)
    duration = (time.perf_counter() - start) * 1000.0
    for criterion in criteria:
        print(criterion.line(), file=sys.stderr)
    return acceptance.as_report(criteria, seed=args.seed, duration_ms=duration)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quasilab",
        description="Constructions over unit-trace Hermitian preparations that "
        "may have negative eigenvalues: complementarity checks, superquantum "
        "CHSH boxes, perfect discrimination and cloning.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, default_format, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=("json", "csv", "text"), default=default_format)
        return p

    p = add("pc-check", _run_pc_check, "json", "check the complementarity bound for a Bloch vector")
    p.add_argument("--r", type=_vector, required=True, metavar="X,Y,Z")

    p = add("box", _run_box, "json", "build the bipartite box and evaluate CHSH")
    p.add_argument("--r", type=_vector, required=True, metavar="X,Y,Z")
    p.add_argument("--settings", choices=("auto", "tsirelson"), default="auto")

    p = add("chsh-sweep", _run_chsh_sweep, "csv", "CHSH value over a grid of source norms")
    p.add_argument("--r-min", type=float, required=True)
    p.add_argument("--r-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)

    p = add("discriminate", _run_discriminate, "json", "identify hyperplane states with certainty")
    p.add_argument("--r", type=_vector, required=True, metavar="X,Y,Z")
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--trials", type=int, default=12)
    p.add_argument("--seed", type=int, default=42)

    p = add("clone-demo", _run_clone_demo, "json", "discriminate and duplicate both hyperplane states")
    p.add_argument("--r", type=_vector, required=True, metavar="X,Y,Z")
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--z", type=float, required=True)

    p = add("highdim", _run_highdim, "json", "d-dimensional probe discrimination")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--lambdas", type=float, nargs="*", default=None)
    p.add_argument("--phases", choices=("zero", "random"), default="zero")
    p.add_argument("--seed", type=int, default=42)

    p = add("planes", _run_planes, "csv", "plot data for the two certainty planes in the Bloch ball")
    p.add_argument("--r", type=_vector, required=True, metavar="X,Y,Z")
    p.add_argument("--points", type=int, default=64)

    p = add("verify-all", _run_verify_all, "text", "run the full acceptance suite")
    p.add_argument("--seed", type=int, default=42)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        report = args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if report.duration_ms == 0.0:
        report.duration_ms = (time.perf_counter() - start) * 1000.0
    sys.stdout.write(emit_report(report, args.format))
    if not report.all_passed:
        print("failed checks: " + ", ".join(report.failing()), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
