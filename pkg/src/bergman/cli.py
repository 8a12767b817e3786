"""Command-line front-end.

    bergman validate CONFIG [--out DIR] [--nmax N] [--radius R] ...
    bergman sweep CONFIG --param quad.circle_n --values 256,512,1024
    bergman basis CONFIG --export basis.json
    bergman alpha CONFIG --n 8 --kmax 24

Exit status: 0 when every verdict passes, 1 when some verdict fails,
2 for configuration errors, 3 for numerical failures.
"""

from __future__ import annotations

import argparse
import copy
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import asymptotics as asy
from .faber import laurent_coeffs
from .kernel import KernelConvergenceError, UnsupportedWeightError, make_kernel
from .orthosystem import QuadratureResolutionError, analytic_orthonormalize, bergman_orthonormalize
from .quadrature import build_disk_rule, suggest_orders
from .representation import (
    AlphaCrossCheckError,
    RecursionCorruptionError,
    Qn_eval,
    alpha_table,
    circle_count_for,
    hg_recursion,
    theorem1_eval,
)
from .weightspec import DomainError, ExpPolynomial, PolyZerosOutside, PowerProduct, critical_radii, parse_weight

FAMILIES = (
    "gamma",
    "strong",
    "faber",
    "alpha",
    "alpha_decay",
    "representation",
    "kernel",
    "tau",
    "rational",
    "branch",
    "exp_identity",
    "bs_zero",
    "rk0",
)

DEFAULT_TOL = {"alpha": 1e-8, "representation": 1e-6, "exp_identity": 1e-7, "kernel": 1e-7, "tau": 0.05}

NUMERICAL_ERRORS = (
    QuadratureResolutionError,
    KernelConvergenceError,
    AlphaCrossCheckError,
    RecursionCorruptionError,
    FloatingPointError,
    ArithmeticError,
    RuntimeError,
)


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


@dataclass
class RunConfig:
    weight: object
    weight_json: dict
    nmax: int
    n_list: list
    radial: int | None
    angular: int | None
    circle_n: int | None
    radius: float
    families: list
    out_dir: Path
    tol: dict = field(default_factory=dict)
    dps: int | None = None
    oracle: str = "auto"
    options: dict = field(default_factory=dict)


def _load_raw(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc


def build_config(raw: dict, overrides: dict | None = None) -> RunConfig:
    """Validate a raw config dict (after applying dotted-key overrides)."""
    raw = copy.deepcopy(raw)
    for key, value in (overrides or {}).items():
        node = raw
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = value
    if overrides and "nmax" in overrides and "n_list" not in overrides and raw.get("n_list"):
        # a command-line nmax trims the configured degrees instead of contradicting them
        raw["n_list"] = [n for n in raw["n_list"] if not isinstance(n, int) or n <= raw["nmax"]]
    try:
        weight = parse_weight(raw.get("weight", {}))
    except (ValueError, TypeError, KeyError, IndexError) as exc:
        raise ConfigError(f"weight: {exc}") from exc
    radii = critical_radii(weight)
    nmax = raw.get("nmax", 64)
    if not isinstance(nmax, int) or nmax < 1:
        raise ConfigError("nmax must be a positive integer")
    n_list = raw.get("n_list") or [n for n in (8, 16, 32, 64, 128, 256) if n <= nmax]
    if any(not isinstance(n, int) or not 0 < n <= nmax for n in n_list):
        raise ConfigError(f"n_list must be a subset of 1..nmax={nmax}")
    radius = float(raw.get("radius", (1 + radii.rho_w) / 2))
    if not radii.rho_w < radius < 1:
        raise ConfigError(f"radius {radius} violates rho_w < radius < 1 (rho_w = {radii.rho_w})")
    families = raw.get("families", ["gamma", "strong"])
    unknown = [f for f in families if f not in FAMILIES]
    if unknown:
        raise ConfigError(f"unknown families {unknown}; known: {list(FAMILIES)}")
    if len(set(families)) != len(families):
        raise ConfigError("families must not repeat")
    quad = raw.get("quad", {})
    for key in ("radial", "angular", "circle_n"):
        value = quad.get(key)
        if value is not None and (not isinstance(value, int) or value < 4):
            raise ConfigError(f"quad.{key} must be an integer >= 4")
    oracle = raw.get("oracle", "auto")
    if oracle not in ("auto", "quadrature", "taylor"):
        raise ConfigError("oracle must be auto, quadrature or taylor")
    if oracle == "taylor" and not weight.analytic_weight:
        raise ConfigError("oracle 'taylor' needs every exponent m_k even and positive")
    dps = raw.get("dps")
    if dps is not None and (not isinstance(dps, int) or dps < 20):
        raise ConfigError("dps must be an integer >= 20")
    tol = dict(DEFAULT_TOL)
    tol.update(raw.get("tol", {}))
    return RunConfig(
        weight=weight,
        weight_json=weight.to_json(),
        nmax=nmax,
        n_list=sorted(n_list),
        radial=quad.get("radial"),
        angular=quad.get("angular"),
        circle_n=quad.get("circle_n"),
        radius=radius,
        families=list(families),
        out_dir=Path(raw.get("out_dir", "bergman_out")),
        tol=tol,
        dps=dps,
        oracle=oracle,
        options=raw.get("options", {}),
    )


class Context:
    """Objects shared across families, built lazily and at most once."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.spec = cfg.weight
        self.radii = critical_radii(cfg.weight)
        self._rule = None
        self._basis = None
        self._hp_basis = None
        self._kernel = None

    @property
    def rule(self):
        if self._rule is None:
            rad, ang = suggest_orders(self.spec, self.cfg.nmax)
            self._rule = build_disk_rule(self.spec, self.cfg.radial or rad, self.cfg.angular or ang)
        return self._rule

    @property
    def basis(self):
        if self._basis is None:
            oracle = self.cfg.oracle
            use_taylor = oracle == "taylor" or (oracle == "auto" and self.spec.analytic_weight)
            if use_taylor:
                self._basis = analytic_orthonormalize(self.spec, self.cfg.nmax)
            else:
                self._basis = bergman_orthonormalize(self.spec, self.cfg.nmax, self.rule)
        return self._basis

    @property
    def precise_basis(self):
        """Multiprecision basis when ``dps`` is configured and applicable, else the double one."""
        if self.cfg.dps is None or not self.spec.analytic_weight:
            return self.basis
        if self._hp_basis is None:
            self._hp_basis = analytic_orthonormalize(self.spec, self.cfg.nmax, self.cfg.dps)
        return self._hp_basis

    @property
    def kernel(self):
        if self._kernel is None:
            self._kernel = make_kernel(self.spec)
        return self._kernel


class Skipped(Exception):
    pass


def _representation(ctx: Context):
    cfg = ctx.cfg
    tol = cfg.tol["representation"]
    spec = ctx.spec
    if spec.s > 2:
        raise Skipped("kernel L unavailable for s > 2")
    ns = [n for n in cfg.n_list if n <= 40 and 3 * n <= cfg.nmax]
    if len(ns) < 2:
        raise Skipped("needs at least two n <= 40 with 3n <= nmax")
    r = cfg.radius
    count = 20
    mods = r * np.linspace(0.8, 0.95, count)
    pts = mods * np.exp(2j * np.pi * (np.arange(count) + 0.25) / count * 3)
    basis = ctx.basis
    v0 = spec.outer.v0()
    rows, rows_q = [], []
    for n in ns:
        hs = hg_recursion(alpha_table(spec, basis, n, 3 * n), 2 * n)
        ref = v0 * basis.gammas[n] * basis.values(pts, n)[:, n]
        # circle_n is a floor on the node count; the automatic count already adapts to |z| / r
        counts = [max(cfg.circle_n or 0, circle_count_for(n, r, z, ctx.radii.rho_w)) for z in pts]
        with_h = max(abs(theorem1_eval(spec, n, r, z, hs, ctx.kernel, c) / y - 1) for z, y, c in zip(pts, ref, counts))
        without = max(abs(Qn_eval(spec, n, r, z, ctx.kernel, c) / y - 1) for z, y, c in zip(pts, ref, counts))
        rows.append((n, with_h, 0.0, with_h))
        rows_q.append((n, without, 0.0, n * without))
    ok = all(row[3] < tol for row in rows)
    main = asy.ConvergenceReport("representation", rows, "pass" if ok else "fail", max(x[3] for x in rows) / tol,
                                 f"relative error with H_n < {tol:g}")
    trunc = asy._report("representation_noH", rows_q, "n x relative error without H_n bounded")
    return asy.combine("representation", main, trunc)


def _family(name: str, ctx: Context):
    cfg, spec = ctx.cfg, ctx.spec
    n_list = cfg.n_list
    if name == "gamma":
        return asy.gamma_report(spec, ctx.basis, n_list)
    if name == "strong":
        return asy.strong_asymptotics_report(spec, ctx.basis, n_list, cfg.options.get("strong_radius", 1.0))
    if name == "faber":
        return asy.faber_report(spec, ctx.rule, n_list)
    if name == "alpha":
        ns = [n for n in n_list if n + 16 <= cfg.nmax] or [min(n_list)]
        rep = asy.alpha_structure_report(spec, ctx.basis, ns, K_extra=min(16, cfg.nmax - max(ns)), tol=cfg.tol["alpha"])
        return rep
    if name == "alpha_decay":
        n = int(cfg.options.get("alpha_decay_n", 8))
        if n + 32 > cfg.nmax:
            raise Skipped("needs nmax >= n + 32")
        return asy.alpha_decay_report(spec, ctx.basis, n)
    if name == "representation":
        return _representation(ctx)
    if name == "kernel":
        if spec.s > 2:
            raise Skipped("kernel L unavailable for s > 2")
        return asy.kernel_consistency_report(spec, tol=cfg.tol["kernel"])
    if name == "tau":
        zeta = complex(*cfg.options.get("tau_zeta", [0.2, 0.0]))
        est = asy.tau_estimate(ctx.precise_basis, zeta, ctx.radii, spec)
        rows = [(ctx.cfg.nmax, est.estimate, est.predicted, est.deviation)]
        ok = est.deviation < cfg.tol["tau"] or est.exceptional_candidate
        return asy.ConvergenceReport("tau", rows, "pass" if ok else "fail", est.deviation / cfg.tol["tau"],
                                     "|estimate - max(|zeta|, rho_w)| below tolerance",
                                     {"exceptional_candidate": est.exceptional_candidate})
    if name == "rational":
        if spec.s or not isinstance(spec.outer, PolyZerosOutside):
            raise Skipped("needs s = 0 and a polynomial outer factor")
        zs = [complex(*z) for z in cfg.options.get("z_samples", [[0.2, 0.0], [0.0, 0.3], [0.6, 0.2], [-0.7, 0.0]])]
        return asy.rational_v_residue_report(spec, ctx.precise_basis, n_list, zs)
    if name == "branch":
        outer = spec.outer
        if spec.s or not isinstance(outer, PowerProduct) or len(outer.factors) != 1:
            raise Skipped("needs s = 0 and a single power factor")
        b, r = outer.factors[0]
        if not 0 < r < 1:
            raise Skipped("branch formula validated for 0 < r < 1 only")
        z = complex(*cfg.options.get("branch_z", [0.0, 0.0]))
        return asy.branch_ratio_report(b, r, z, n_list, ctx.precise_basis)
    if name == "exp_identity":
        outer = spec.outer
        if spec.s or not (isinstance(outer, ExpPolynomial) and outer.coeffs == (0j, 1 + 0j) and outer.scale == 1.0):
            raise Skipped("needs the weight |exp(z)|^2")
        N = min(cfg.nmax, int(cfg.options.get("exp_identity_n", 24)))
        return asy.exp_weight_identity_residual(N, cfg.circle_n or 256, ctx.rule, tol=cfg.tol["exp_identity"])
    if name == "bs_zero":
        try:
            asy._bs_structure(spec)
            if not spec.s or not spec.analytic_weight:
                raise ValueError("needs s >= 1 with every m_k even and positive")
        except ValueError as exc:
            raise Skipped(str(exc)) from exc
        return asy.bs_zero_report(spec, ctx.precise_basis, n_list)
    if name == "rk0":
        normalization = cfg.options.get("rk0_normalization", "corrected")
        try:
            return asy.rk0_point_report(spec, ctx.precise_basis, n_list, normalization=normalization)
        except ValueError as exc:
            raise Skipped(str(exc)) from exc
    raise ConfigError(f"unknown family {name}")


def _dump_json(obj) -> str:
    def default(x):
        if isinstance(x, complex):
            return [x.real, x.imag]
        if isinstance(x, np.generic):
            return x.item()
        if isinstance(x, Path):
            return str(x)
        raise TypeError(f"cannot serialize {type(x).__name__}")

    return json.dumps(obj, indent=2, sort_keys=True, default=default) + "\n"


def run(cfg: RunConfig, threads: int = 1) -> dict:
    """Run every family; returns the summary dict.  Raises on numerical failure."""
    ctx = Context(cfg)

    def one(name):
        try:
            return name, _family(name, ctx), None
        except Skipped as exc:
            return name, None, str(exc)

    if threads > 1:
        # shared objects first, so worker threads only read them
        if any(f in cfg.families for f in ("gamma", "strong", "alpha", "alpha_decay", "representation")):
            ctx.basis
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, cfg.families))
    else:
        results = [one(name) for name in cfg.families]
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    summary = {"weight": cfg.weight_json, "nmax": cfg.nmax, "n_list": cfg.n_list, "radius": cfg.radius, "families": {}}
    for name, report, reason in results:
        if report is None:
            summary["families"][name] = {"verdict": "skipped", "reason": reason}
            continue
        (cfg.out_dir / f"{name}.csv").write_text(report.to_csv())
        (cfg.out_dir / f"{name}.json").write_text(_dump_json(report.to_json()))
        summary["families"][name] = {"verdict": report.verdict, "slack": report.slack}
    (cfg.out_dir / "summary.json").write_text(_dump_json(summary))
    return summary


def _all_pass(summary) -> bool:
    return all(v["verdict"] != "fail" for v in summary["families"].values())


def _threads() -> int:
    raw = os.environ.get("BERGMAN_SEED_THREADS", "1")
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigError(f"BERGMAN_SEED_THREADS must be an integer, got {raw!r}") from exc
    return max(1, value)


def _overrides(args) -> dict:
    out = {}
    if getattr(args, "nmax", None) is not None:
        out["nmax"] = args.nmax
    if getattr(args, "radius", None) is not None:
        out["radius"] = args.radius
    if getattr(args, "quad_radial", None) is not None:
        out["quad.radial"] = args.quad_radial
    if getattr(args, "quad_angular", None) is not None:
        out["quad.angular"] = args.quad_angular
    if getattr(args, "circle_n", None) is not None:
        out["quad.circle_n"] = args.circle_n
    if getattr(args, "out", None) is not None:
        out["out_dir"] = args.out
    for item in getattr(args, "tol", None) or []:
        key, _, value = item.partition("=")
        if not value:
            raise ConfigError(f"--tol expects FAMILY=VALUE, got {item!r}")
        try:
            out[f"tol.{key}"] = float(value)
        except ValueError as exc:
            raise ConfigError(f"--tol value for {key} is not a number") from exc
    return out


def _parse_value(param: str, text: str):
    if param == "radius":
        return float(text)
    return int(text)


def cmd_validate(args) -> int:
    cfg = build_config(_load_raw(args.config), _overrides(args))
    summary = run(cfg, _threads())
    for name, entry in summary["families"].items():
        print(f"{name}: {entry['verdict']}" + (f" ({entry['reason']})" if "reason" in entry else ""))
    return 0 if _all_pass(summary) else 1


SWEEP_PARAMS = {"nmax": "nmax", "radius": "radius", "quad.radial": "quad.radial",
                "quad.angular": "quad.angular", "quad.circle_n": "quad.circle_n"}


def cmd_sweep(args) -> int:
    if args.param not in SWEEP_PARAMS:
        raise ConfigError(f"--param must be one of {sorted(SWEEP_PARAMS)}")
    try:
        values = [_parse_value(args.param, v) for v in args.values.split(",") if v]
    except ValueError as exc:
        raise ConfigError(f"bad --values: {exc}") from exc
    raw = _load_raw(args.config)
    base = _overrides(args)
    root = Path(base.pop("out_dir", raw.get("out_dir", "bergman_out")))
    runs = []
    for value in values:
        over = dict(base)
        over[SWEEP_PARAMS[args.param]] = value
        over["out_dir"] = str(root / f"{args.param}={value}")
        cfg = build_config(raw, over)
        runs.append({"value": value, "summary": run(cfg, _threads())})
    verdicts = {}
    for entry in runs:
        for name, fam in entry["summary"]["families"].items():
            verdicts.setdefault(name, []).append(fam["verdict"])
    flips = sorted(name for name, vs in verdicts.items() if len(set(vs)) > 1)
    root.mkdir(parents=True, exist_ok=True)
    combined = {"param": args.param, "values": values, "runs": runs, "non_robust": flips}
    (root / "sweep_summary.json").write_text(_dump_json(combined))
    for name, vs in sorted(verdicts.items()):
        flag = "  NON-ROBUST" if name in flips else ""
        print(f"{name}: {' '.join(vs)}{flag}")
    return 0 if all(_all_pass(e["summary"]) for e in runs) else 1


def cmd_basis(args) -> int:
    cfg = build_config(_load_raw(args.config), _overrides(args))
    ctx = Context(cfg)
    data = ctx.basis.to_json()
    text = _dump_json(data)
    if args.export:
        Path(args.export).write_text(text)
        print(f"wrote degree-{cfg.nmax} basis to {args.export}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_alpha(args) -> int:
    cfg = build_config(_load_raw(args.config), _overrides(args))
    if not 0 <= args.n <= args.kmax <= cfg.nmax:
        raise ConfigError(f"need 0 <= n <= kmax <= nmax ({cfg.nmax})")
    ctx = Context(cfg)
    table = alpha_table(ctx.spec, ctx.basis, args.n, args.kmax, laurent_coeffs(ctx.spec, cfg.nmax),
                        tol=cfg.tol["alpha"])
    text = _dump_json(table.to_json())
    if args.export:
        Path(args.export).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bergman", description="Bergman orthonormal polynomials for weights on the unit disk.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", help="JSON run configuration")
        p.add_argument("--nmax", type=int)
        p.add_argument("--radius", type=float)
        p.add_argument("--quad-radial", type=int)
        p.add_argument("--quad-angular", type=int)
        p.add_argument("--circle-n", type=int)
        p.add_argument("--tol", action="append", metavar="FAMILY=VALUE")
        p.add_argument("--out", help="output directory")

    p = sub.add_parser("validate", help="run the validator families of a config")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sweep", help="re-run a config over values of one parameter")
    common(p)
    p.add_argument("--param", required=True, help="nmax, radius, quad.radial, quad.angular or quad.circle_n")
    p.add_argument("--values", required=True, help="comma-separated values")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("basis", help="compute and export the orthonormal basis")
    common(p)
    p.add_argument("--export", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("alpha", help="print the alpha_{n,k} table")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--export", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_alpha)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (UnsupportedWeightError, DomainError) as exc:
        print(f"numerical failure ({type(exc).__module__}.{type(exc).__name__}): {exc}", file=sys.stderr)
        return 3
    except NUMERICAL_ERRORS as exc:
        print(f"numerical failure ({type(exc).__module__}.{type(exc).__name__}): {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
