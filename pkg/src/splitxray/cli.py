"""Experiment harness: named verification suites with machine-readable reports.

Each subcommand runs a fixed list of checks against the tolerances in
defaults.TOLERANCES (overridable per check), assembles a Report, and exits
0 when every check passes, 1 on check failure, and 2 on usage or
configuration errors.  Reports are deterministic for a fixed seed up to
the timestamp field.

Configuration is a JSON object (see CONFIG_SCHEMA); a --config file is
merged under the command-line flags, which use the same long names as the
config keys.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass
from datetime import datetime, timezone

import numpy as np

from . import fields, geometry, instanton, inversion, operators, penrose, xray
from .defaults import DEFAULTS
from .poly import Poly4

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "command": {"type": "string"},
        "nodes": {"type": "integer", "minimum": 4},
        "nodes_john": {"type": "integer", "minimum": 4},
        "fd_step": {"type": "number", "exclusiveMinimum": 0},
        "richardson": {"type": "boolean"},
        "seed": {"type": "integer"},
        "max_degree": {"type": "integer", "minimum": 0},
        "n_frames": {"type": "integer", "minimum": 1},
        "connection": {"type": "string"},
        "pole_margin": {"type": "number", "exclusiveMinimum": 0},
        "state_a": {"type": "array", "minItems": 4, "maxItems": 4,
                    "items": {"type": ["string", "number"]}},
        "state_b": {"type": "array", "minItems": 4, "maxItems": 4,
                    "items": {"type": ["string", "number"]}},
        "save_design": {"type": ["string", "null"]},
        "noise": {"type": "number", "minimum": 0},
        "output": {"type": ["string", "null"]},
        "format": {"enum": ["json", "csv"]},
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {k: {"type": "number", "minimum": 0}
                           for k in DEFAULTS["tolerances"]},
        },
    },
}


class ConfigError(ValueError):
    """Invalid configuration or unsatisfiable precondition; exit code 2."""


@dataclass
class CheckRecord:
    name: str
    value: float
    tolerance: float
    passed: bool


@dataclass
class Report:
    command: str
    checks: list
    environment: dict
    overall: bool
    timestamp: str

    def to_json(self):
        payload = {
            "command": self.command,
            "checks": [asdict(c) for c in self.checks],
            "environment": self.environment,
            "overall": self.overall,
            "timestamp": self.timestamp,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["name", "value", "tolerance", "pass"])
        for c in self.checks:
            writer.writerow([c.name, repr(c.value), repr(c.tolerance),
                             str(c.passed).lower()])
        return buf.getvalue()


def _merge_config(command, file_config, flag_values):
    cfg = {k: v for k, v in DEFAULTS.items()}
    cfg["tolerances"] = dict(DEFAULTS["tolerances"])
    cfg["command"] = command
    cfg["output"] = None
    cfg["format"] = "json"
    for source in (file_config, flag_values):
        for key, value in source.items():
            if value is None:
                continue
            if key == "tolerances":
                cfg["tolerances"].update(value)
            else:
                cfg[key] = value
    return cfg


def _validate_config(cfg):
    import jsonschema
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as e:
        raise ConfigError(f"invalid configuration: {e.message}") from e


def _record(cfg, name, value):
    tol = cfg["tolerances"][name.split(":")[0]]
    value = float(value)
    return CheckRecord(name=name, value=value, tolerance=tol,
                       passed=bool(value <= tol))


def _chart_points(rng, count, scale=0.35):
    return [scale * rng.normal(size=(2, 2)) for _ in range(count)]


# ---- suites ----------------------------------------------------------------

def _suite_verify_john(cfg):
    rng = np.random.default_rng(cfg["seed"])
    q = xray.QuadratureSpec(cfg["nodes_john"])
    fd = operators.FDSpec(cfg["fd_step"], cfg["richardson"])
    checks = []
    for k in range(0, cfg["max_degree"] + 1, 2):
        worst = 0.0
        for h in fields.harmonic_basis(k):
            phi = xray.xray_chart_field(fields.basis_to_degree_minus_2(h), q)
            for X in _chart_points(rng, 10):
                worst = max(worst, abs(operators.john_operator(phi, X, fd)))
        checks.append(_record(cfg, f"john:deg{k}", worst))
    return checks


def _suite_verify_weight_law(cfg):
    rng = np.random.default_rng(cfg["seed"])
    q = xray.QuadratureSpec(max(cfg["nodes"], 128))
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    checks = []
    for k in (0, 2):
        basis = fields.harmonic_basis(k)
        worst = 0.0
        for h in basis[: min(3, len(basis))]:
            phi = xray.xray_weighted_field(fields.basis_to_degree_minus_2(h), q)
            frame = inversion.sample_frames(1, int(rng.integers(2 ** 31)))[0]
            gs = [xray.random_gl2(rng) for _ in range(20)] + [swap]
            for g in gs:
                worst = max(worst, fields.weight_transform_residual(phi, frame, g))
        checks.append(_record(cfg, f"weight_law:deg{k}", worst))
    return checks


def _suite_verify_equivariance(cfg):
    rng = np.random.default_rng(cfg["seed"])
    q = xray.QuadratureSpec(cfg["nodes"])
    frames = inversion.sample_frames(20, cfg["seed"])
    checks = []
    for k in (0, 2):
        worst = 0.0
        for h in fields.harmonic_basis(k):
            f = fields.basis_to_degree_minus_2(h)
            for _ in range(10):
                g = xray.random_sl4(rng)
                worst = max(worst, xray.equivariance_residual(f, g, frames, q))
        checks.append(_record(cfg, f"equivariance:deg{k}", worst))
    return checks


def _suite_verify_moments(cfg):
    rng = np.random.default_rng(cfg["seed"])
    q = xray.QuadratureSpec(cfg["nodes"])
    fd = operators.FDSpec(cfg["fd_step"], cfg["richardson"])
    checks = []
    for n in (1, 2):
        worst = 0.0
        for h in fields.harmonic_basis(n):
            f = (fields.HomogeneousFunction.from_poly(h.poly)
                 * fields.HomogeneousFunction.radial_power(-2 * n - 2))
            m = xray.moment_chart_field(f, n, q)
            for X in _chart_points(rng, 5):
                worst = max(worst, operators.dn_residual(m, X, fd))
        checks.append(_record(cfg, f"moments:n{n}", worst))
    return checks


def _instanton_points(rng, count=5, scale=0.8):
    return [scale * rng.normal(size=4) for _ in range(count)]


def _suite_verify_selfdual(cfg):
    rng = np.random.default_rng(cfg["seed"])
    fd = operators.FDSpec(cfg["fd_step"], cfg["richardson"])
    conn = instanton.connection_preset(cfg["connection"])
    points = _instanton_points(rng)
    checks = [_record(cfg, f"selfdual:{conn.name}",
                      instanton.selfdual_residual(conn, points, fd))]
    worst = 0.0
    for i, j in ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)):
        F = instanton.Curvature(1, {p: np.array([[1.0 + 0.0j if p == (i, j) else 0.0]])
                                    for p in ((0, 1), (0, 2), (0, 3),
                                              (1, 2), (1, 3), (2, 3))})
        twice = instanton.hodge_star(instanton.hodge_star(F))
        worst = max(worst, (twice - F).norm())
    checks.append(_record(cfg, "star_involution", worst))
    return checks


def _suite_verify_gauge(cfg):
    rng = np.random.default_rng(cfg["seed"])
    fd = operators.FDSpec(cfg["fd_step"], cfg["richardson"])
    conn = instanton.connection_preset(cfg["connection"])
    g = instanton.scalar_phase(Poly4.monomial((1, 1, 0, 0)), n=conn.n)
    moved = instanton.gauge_transform(conn, g)
    points = _instanton_points(rng)
    base = instanton.selfdual_residual(conn, points, fd)
    after = instanton.selfdual_residual(moved, points, fd)
    return [_record(cfg, f"gauge_invariance:{conn.name}", abs(after - base))]


def _suite_verify_coupled_box(cfg):
    fd = operators.FDSpec(cfg["fd_step"], cfg["richardson"])
    conn = instanton.connection_preset("flagship-u1")
    x0 = np.array([1.0, 0.0, 2.0, 0.0])
    one = lambda x: np.array([1.0 + 0.0j])
    value = operators.coupled_box(conn, one, x0, fd)[0]
    checks = [_record(cfg, "coupled_box:hand-value",
                      abs(value - (-x0[0] ** 2 + x0[2] ** 2)))]

    g = instanton.scalar_phase(Poly4.monomial((1, 1, 0, 0)))
    moved = instanton.gauge_transform(conn, g)
    psi = lambda x: np.array([np.exp(0.3 * x[0]) * np.sin(x[2]) + 0.2 * x[1],
                              ], dtype=complex)
    gpsi = lambda x: g.at(x) @ psi(x)
    worst = 0.0
    rng = np.random.default_rng(cfg["seed"])
    for x in _instanton_points(rng, 3):
        lhs = operators.coupled_box(moved, gpsi, x, fd)
        rhs = g.at(x) @ operators.coupled_box(conn, psi, x, fd)
        worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    checks.append(_record(cfg, "gauge_covariance", worst))
    return checks


DEFAULT_STATE_A = ("1", "0", "1j", "0")
DEFAULT_STATE_B = ("1j", "0", "1", "0")


def _parse_covector(entries, key):
    try:
        return np.array([complex(str(e).replace(" ", "")) for e in entries])
    except ValueError as e:
        raise ConfigError(f"{key}: cannot parse covector component: {e}") from e


def _penrose_base_frame(state, rng):
    """A seeded chart-friendly frame with a wide pole margin, sitting in a
    component where the transform is not identically zero (mixed factor
    orientation)."""
    for _ in range(2000):
        fr = inversion.sample_frames(1, int(rng.integers(2 ** 31)))[0]
        if abs(np.linalg.det(fr.matrix()[:, :2])) < 0.3:
            continue
        if penrose.normalized_pole_margin(state, fr) < 0.3:
            continue
        if len(set(penrose.factor_orientation(state, fr))) != 2:
            continue
        return fr
    raise ConfigError("no wide-margin pole-safe frame found for this "
                      "elementary state")


def _suite_penrose_elementary(cfg):
    q = xray.QuadratureSpec(cfg["nodes"])
    fd = operators.FDSpec(cfg["fd_step"], cfg["richardson"])
    a = _parse_covector(cfg["state_a"], "state_a")
    b = _parse_covector(cfg["state_b"], "state_b")
    try:
        state = penrose.elementary_state(a, b)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    is_default = (tuple(cfg["state_a"]) == DEFAULT_STATE_A
                  and tuple(cfg["state_b"]) == DEFAULT_STATE_B)
    rng = np.random.default_rng(cfg["seed"])

    checks = []
    if is_default:
        # closed-form anchor: this state integrates to -2 pi i on (e1, e3)
        frame = geometry.Frame(np.array([1.0, 0, 0, 0]), np.array([0.0, 0, 1, 0]))
        value = penrose.contour_transform(state, frame, q, cfg["pole_margin"])
        checks.append(_record(cfg, "penrose_value", abs(value - (-2j * np.pi))))

    base = _penrose_base_frame(state, rng)
    signature = penrose.factor_orientation(state, base)

    # ratio constancy holds per component; stay in the component of `base`
    ratios = []
    attempts = 0
    while len(ratios) < 10:
        attempts += 1
        if attempts > 2000:
            raise ConfigError("pole-safe component around the base frame is "
                              "too small for the ratio check")
        fr = geometry.Frame(base.u + 0.1 * rng.normal(size=4),
                            base.v + 0.1 * rng.normal(size=4))
        if penrose.normalized_pole_margin(state, fr) < 0.15:
            continue
        if penrose.factor_orientation(state, fr) != signature:
            continue
        ratios.append(penrose.contour_transform(state, fr, q, cfg["pole_margin"])
                      * penrose.wedge_pairing(a, b, fr))
    ratios = np.array(ratios)
    spread = float(np.max(np.abs(ratios - np.mean(ratios)))
                   / max(abs(np.mean(ratios)), 1e-30))
    checks.append(_record(cfg, "penrose_ratio_spread", spread))

    X0 = np.asarray(geometry.chart_from_plane(base))
    phi = penrose.contour_chart_field(state, xray.QuadratureSpec(cfg["nodes_john"]),
                                      cfg["pole_margin"])
    worst = 0.0
    tried = 0
    for dX in _chart_points(rng, 40, scale=0.05):
        if tried == 5:
            break
        X = X0 + dX
        fr = geometry.plane_from_chart(X)
        if penrose.normalized_pole_margin(state, fr) < 0.15:
            continue
        if penrose.factor_orientation(state, fr) != signature:
            continue
        worst = max(worst,
                    abs(operators.john_operator(lambda Y: phi(Y).real, X, fd)),
                    abs(operators.john_operator(lambda Y: phi(Y).imag, X, fd)))
        tried += 1
    if tried == 0:
        raise ConfigError("no pole-safe chart neighborhood for the John check")
    checks.append(_record(cfg, "penrose_john", worst))
    return checks


def _suite_geometry_roundtrip(cfg):
    rng = np.random.default_rng(cfg["seed"])
    worst_round = 0.0
    worst_orient = 0.0
    for _ in range(100):
        z = geometry.ComplexProjectivePoint(rng.normal(size=4)
                                            + 1j * rng.normal(size=4))
        if z.is_real(1e-6):
            continue
        gp = geometry.mu_inverse(z)
        back = geometry.mu_restrict(gp)
        worst_round = max(worst_round,
                          1.0 - abs(complex(np.conj(z.rep) @ back.rep)))
        gp2 = geometry.mu_inverse(back)
        p = geometry.plucker_embed(gp.plane).as_array()
        p2 = geometry.plucker_embed(gp2.plane).as_array()
        p, p2 = p / np.linalg.norm(p), p2 / np.linalg.norm(p2)
        worst_round = max(worst_round,
                          min(np.linalg.norm(p - p2), np.linalg.norm(p + p2)))
        lam = rng.normal() + 1j * rng.normal()
        scaled = geometry.ComplexProjectivePoint(lam * z.rep)
        sign = geometry.pi_project(z).orientation_sign(geometry.pi_project(scaled))
        conj_sign = geometry.pi_project(z).orientation_sign(
            geometry.pi_project(z.conj()))
        if sign < 0 or conj_sign > 0:
            worst_orient = 1.0
    return [_record(cfg, "geometry_roundtrip", worst_round),
            _record(cfg, "geometry_roundtrip:orientation", worst_orient)]


def _suite_reconstruct(cfg):
    q = xray.QuadratureSpec(max(cfg["nodes"], 128))
    basis = inversion.transform_basis(cfg["max_degree"])
    if cfg["n_frames"] < len(basis):
        raise ConfigError(
            f"reconstruction at max_degree {cfg['max_degree']} needs at "
            f"least {len(basis)} frames, got {cfg['n_frames']}")
    frames = inversion.sample_frames(cfg["n_frames"], cfg["seed"])
    d = inversion.design_matrix(basis, frames, q, seed=cfg["seed"])
    if cfg["save_design"]:
        inversion.save_design_matrix(d, cfg["save_design"])
    rng = np.random.default_rng(cfg["seed"] + 1)
    worst = 0.0
    for _ in range(3):
        c = rng.normal(size=len(basis))
        samples = d.matrix @ c
        if cfg["noise"] > 0.0:
            samples = samples + cfg["noise"] * rng.normal(size=samples.shape)
        report = inversion.reconstruct(samples, d, true_coefficients=c)
        worst = max(worst, report.relative_coefficient_error)
    return [_record(cfg, "reconstruction", worst)]


def _suite_injectivity(cfg):
    q = xray.QuadratureSpec(max(cfg["nodes"], 128))
    try:
        report = inversion.injectivity_report(cfg["max_degree"], cfg["n_frames"],
                                              cfg["seed"], q)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    return [_record(cfg, "rank_defect", float(report.dimension - report.rank))]


SUITES = {
    "verify-john": _suite_verify_john,
    "verify-weight-law": _suite_verify_weight_law,
    "verify-equivariance": _suite_verify_equivariance,
    "verify-moments": _suite_verify_moments,
    "verify-selfdual": _suite_verify_selfdual,
    "verify-gauge": _suite_verify_gauge,
    "verify-coupled-box": _suite_verify_coupled_box,
    "penrose-elementary": _suite_penrose_elementary,
    "geometry-roundtrip": _suite_geometry_roundtrip,
    "reconstruct": _suite_reconstruct,
    "injectivity": _suite_injectivity,
}


def run(config) -> Report:
    """Run one suite from a validated configuration dict."""
    cfg = _merge_config(config.get("command"), config, {})
    _validate_config(cfg)
    command = cfg.get("command")
    if command not in SUITES:
        raise ConfigError(f"unknown command {command!r}")
    checks = SUITES[command](cfg)
    env = {k: cfg[k] for k in ("nodes", "nodes_john", "fd_step", "richardson",
                               "seed", "max_degree", "n_frames", "connection",
                               "pole_margin", "state_a", "state_b")}
    env["tolerances"] = cfg["tolerances"]
    return Report(command=command, checks=checks, environment=env,
                  overall=all(c.passed for c in checks),
                  timestamp=datetime.now(timezone.utc).isoformat())


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="splitxray",
        description="verification suites for the circle transform laboratory")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUITES:
        p = sub.add_parser(name, help=f"run the {name} suite")
        p.add_argument("--config", help="JSON config file merged under flags")
        p.add_argument("--nodes", type=int)
        p.add_argument("--nodes-john", dest="nodes_john", type=int)
        p.add_argument("--fd-step", dest="fd_step", type=float)
        p.add_argument("--richardson", choices=("on", "off"))
        p.add_argument("--seed", type=int)
        p.add_argument("--max-degree", dest="max_degree", type=int)
        p.add_argument("--n-frames", dest="n_frames", type=int)
        p.add_argument("--connection")
        p.add_argument("--pole-margin", dest="pole_margin", type=float)
        p.add_argument("--state-a", dest="state_a",
                       help="comma-separated covector, e.g. '1,0,1j,0'")
        p.add_argument("--state-b", dest="state_b",
                       help="comma-separated covector, e.g. '1j,0,1,0'")
        p.add_argument("--save-design", dest="save_design",
                       help="path prefix for the design matrix CSV + sidecar")
        p.add_argument("--noise", type=float,
                       help="sample noise level for reconstruct (default 0)")
        p.add_argument("--tolerances",
                       help="JSON object of per-check tolerance overrides")
        p.add_argument("--output", help="write the report to this path")
        p.add_argument("--format", choices=("json", "csv"))
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)

    file_config = {}
    if args.config:
        try:
            with open(args.config) as fh:
                file_config = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            print(f"error: cannot read config: {e}", file=sys.stderr)
            return 2

    flags = {
        "nodes": args.nodes,
        "nodes_john": args.nodes_john,
        "fd_step": args.fd_step,
        "richardson": None if args.richardson is None else args.richardson == "on",
        "seed": args.seed,
        "max_degree": args.max_degree,
        "n_frames": args.n_frames,
        "connection": args.connection,
        "pole_margin": args.pole_margin,
        "state_a": None if args.state_a is None else args.state_a.split(","),
        "state_b": None if args.state_b is None else args.state_b.split(","),
        "save_design": args.save_design,
        "noise": args.noise,
        "output": args.output,
        "format": args.format,
    }
    if args.tolerances:
        try:
            flags["tolerances"] = json.loads(args.tolerances)
        except json.JSONDecodeError as e:
            print(f"error: --tolerances is not valid JSON: {e}", file=sys.stderr)
            return 2

    cfg = _merge_config(args.command, file_config, flags)
    try:
        _validate_config(cfg)
        report = run(cfg)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    text = report.to_json() if cfg["format"] == "json" else report.to_csv()
    if cfg["output"]:
        with open(cfg["output"], "w") as fh:
            fh.write(text)
    print(text, end="")

    if report.overall:
        return 0
    failing = [c.name for c in report.checks if not c.passed]
    print(f"FAILED checks: {', '.join(failing)}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
