"""Suite configuration, suite runners, and the refinement-ladder logic."""
from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .algebra import StructuralSet, validate_structural_set
from .corpus import polynomial_corpus, select, smooth_pairs, standard_corpus
from .errors import ConfigError
from .fracfueter import AnchoredPoint, FracOrderVec, verify_frac_identity
from .fraccalc import (Profile1D, rl_const_derivative_oracle, rl_derivative_left,
                       rl_derivative_right, rl_integral_left, rl_integral_right)
from .fueter import (Field, borel_pompeiu_classical_residual, fueter_left,
                     stokes_classical_residual, teodorescu_field)
from .geometry import Box4
from .perturbed import (Perturbation, PerturbedContext, borel_pompeiu_perturbed_residual,
                        cauchy_corollary_check, stokes_perturbed_residual,
                        verify_proposition, PROPOSITION_IDS)
from .quadrature import QuadratureSpec
from .reports import IdentityReport, RunReport, residual_report

SUITES = ("classical", "fractional", "perturbed", "all")

DEFAULT_TOLERANCES = {
    "stokes-classical": 1e-8,
    "borel-pompeiu-classical": 5e-2,
    "fueter-inverse": 5e-2,
    "fundamental-theorem": 1e-3,
    "const-derivative": 1e-4,
    "eq5": 1e-3, "eq6": 1e-3, "eq7": 1e-3, "laplacian": 1e-3,
    "eq8": 1e-3, "eq9": 1e-3,
    "proposition": 1e-3,
    "stokes-perturbed": 5e-2,
    "borel-pompeiu-perturbed": 1e-1,
    "corollary": 1.0,
}


@dataclass
class SuiteConfig:
    """Inputs of a suite run; defaults reproduce the acceptance setup."""

    suite: str = "all"
    box_a: np.ndarray = field(default_factory=lambda: np.zeros(4))
    box_b: np.ndarray = field(default_factory=lambda: np.ones(4))
    alpha: np.ndarray = field(default_factory=lambda: np.full(4, 0.5 + 0.0j))
    beta: np.ndarray = field(default_factory=lambda: np.full(4, 0.25 + 0.0j))
    u: np.ndarray = field(default_factory=lambda: np.array([0.25, 0, 0, 0], dtype=complex))
    v: np.ndarray = field(default_factory=lambda: np.array([0.15, 0, 0, 0], dtype=complex))
    nodes_ladder: tuple = (8, 12, 16)
    tolerances: dict = field(default_factory=dict)
    seed: int = 12345
    corpus_names: Optional[tuple] = None   # None = full standard corpus
    jobs: int = 1

    def validate(self) -> "SuiteConfig":
        if self.suite not in SUITES:
            raise ConfigError(f"suite must be one of {SUITES}, got {self.suite!r}")
        if len(self.nodes_ladder) < 1:
            raise ConfigError("nodes ladder must not be empty")
        if any(n2 <= n1 for n1, n2 in zip(self.nodes_ladder, self.nodes_ladder[1:])):
            raise ConfigError("nodes ladder must be strictly increasing")
        for key, tol in self.tolerances.items():
            if tol <= 0:
                raise ConfigError(f"tolerance {key} must be positive, got {tol}")
        a = np.asarray(self.alpha, dtype=complex)
        b = np.asarray(self.beta, dtype=complex)
        for name, vec in (("alpha", a), ("beta", b)):
            if np.any(vec.real <= 0) or np.any(vec.real >= 1):
                raise ConfigError(f"{name} must lie in the open strip 0 < Re < 1")
        if self.corpus_names is not None and len(self.corpus_names) == 0:
            raise ConfigError("corpus selection must not be empty")
        return self

    def tolerance(self, key: str) -> float:
        return self.tolerances.get(key, DEFAULT_TOLERANCES[key])

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "box_a": list(map(float, self.box_a)),
            "box_b": list(map(float, self.box_b)),
            "alpha": [[z.real, z.imag] for z in np.asarray(self.alpha, dtype=complex)],
            "beta": [[z.real, z.imag] for z in np.asarray(self.beta, dtype=complex)],
            "u": [[z.real, z.imag] for z in np.asarray(self.u, dtype=complex)],
            "v": [[z.real, z.imag] for z in np.asarray(self.v, dtype=complex)],
            "nodes_ladder": list(self.nodes_ladder),
            "tolerances": dict(self.tolerances),
            "seed": self.seed,
            "corpus": list(self.corpus_names) if self.corpus_names else "standard",
            "jobs": self.jobs,
        }


def parse_config_file(path: str) -> dict:
    """Flat key = value grammar with # comments; raises ConfigError with a
    line diagnostic on malformed input."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


def _parse_complex_vector(text: str, field_name: str) -> np.ndarray:
    try:
        parts = [complex(p.strip().replace("i", "j")) for p in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"field {field_name}: {exc}") from exc
    if len(parts) == 1:
        parts = parts * 4
    if len(parts) != 4:
        raise ConfigError(f"field {field_name}: expected 1 or 4 entries, got {len(parts)}")
    return np.array(parts, dtype=complex)


def config_from_mapping(values: dict) -> SuiteConfig:
    """Build a SuiteConfig from a flat string mapping (file and/or CLI)."""
    cfg = SuiteConfig()
    for key, value in values.items():
        if key == "suite":
            cfg.suite = value
        elif key in ("box_a", "box_b"):
            vec = np.array([float(p) for p in value.split(",")], dtype=float)
            if vec.size == 1:
                vec = np.full(4, vec[0])
            if vec.size != 4:
                raise ConfigError(f"field {key}: expected 1 or 4 entries")
            setattr(cfg, key, vec)
        elif key in ("alpha", "beta", "u", "v"):
            setattr(cfg, key, _parse_complex_vector(value, key))
        elif key == "nodes":
            try:
                cfg.nodes_ladder = tuple(int(p) for p in value.split(","))
            except ValueError as exc:
                raise ConfigError(f"field nodes: {exc}") from exc
        elif key == "seed":
            cfg.seed = int(value)
        elif key == "jobs":
            cfg.jobs = int(value)
        elif key == "corpus":
            cfg.corpus_names = tuple(p.strip() for p in value.split(",") if p.strip())
        elif key.startswith("tol."):
            cfg.tolerances[key[4:]] = float(value)
        else:
            raise ConfigError(f"unknown configuration key {key!r}")
    return cfg.validate()


# ---------------------------------------------------------------------------
# suite runners
# ---------------------------------------------------------------------------

def _frames(seed: int) -> list[tuple[str, StructuralSet]]:
    c = 1 / np.sqrt(2)
    rotated = validate_structural_set([
        np.array([1.0, 0, 0, 0]),
        np.array([0.0, c, c, 0]),
        np.array([0.0, -c, c, 0]),
        np.array([0.0, 0, 0, 1]),
    ])
    flipped = validate_structural_set([
        np.array([1.0, 0, 0, 0]),
        np.array([0.0, -1, 0, 0]),
        np.array([0.0, 0, 1, 0]),
        np.array([0.0, 0, 0, 1]),
    ])
    return [("std", StructuralSet.standard()), ("rot", rotated), ("flip", flipped)]


def _anchors(box: Box4, seed: int, count: int = 4) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    anchors = [box.center]
    for _ in range(count):
        anchors.append(box.a + (0.25 + 0.5 * rng.random(4)) * box.edges)
    return anchors


def _convergence_ratios(residuals: list[float]) -> list[float]:
    out = []
    for r1, r2 in zip(residuals, residuals[1:]):
        out.append(r1 / max(r2, 1e-300))
    return out


def _run_tasks(tasks: list[Callable[[], IdentityReport]], jobs: int) -> list[IdentityReport]:
    if jobs <= 1:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(t) for t in tasks]
        return [f.result() for f in futures]


def run_classical_suite(cfg: SuiteConfig) -> tuple[list[IdentityReport], dict]:
    box = Box4(cfg.box_a, cfg.box_b)
    reports: list[IdentityReport] = []
    convergence: dict = {}
    frames = _frames(cfg.seed)
    n_top = cfg.nodes_ladder[-1]

    # integral Stokes identity on the polynomial corpus, all frames
    spec = QuadratureSpec(nodes_per_axis=max(12, cfg.nodes_ladder[0]))
    polys = polynomial_corpus(box)
    for frame_name, psi in frames:
        for g, f in [(polys[0], polys[2]), (polys[2], polys[4]), (polys[3], polys[5])]:
            rep = stokes_classical_residual(psi, f, g, box, spec,
                                            tolerance=cfg.tolerance("stokes-classical"))
            rep.corpus += f",frame={frame_name}"
            reports.append(rep)

    # smooth-field Stokes at the top ladder level
    psi = frames[0][1]
    corp = {f.name: f for f in standard_corpus(box)}
    rep = stokes_classical_residual(psi, corp["sin-x0"], corp["const-1"], box,
                                    QuadratureSpec(nodes_per_axis=n_top), tolerance=1e-6)
    rep.identity = "stokes-classical-smooth"
    reports.append(rep)

    # reproduction formula: ladder at the center probe, plus exterior
    ladder_resid = []
    for pair_g, pair_f in smooth_pairs(box)[:2]:
        for n in cfg.nodes_ladder:
            rep = borel_pompeiu_classical_residual(
                psi, pair_f, pair_g, box, box.center, QuadratureSpec(nodes_per_axis=n),
                tolerance=cfg.tolerance("borel-pompeiu-classical"))
            reports.append(rep)
            if pair_g.name == smooth_pairs(box)[0][0].name:
                ladder_resid.append(rep.residual_rel)
        x_out = box.b + box.edges
        rep = borel_pompeiu_classical_residual(
            psi, pair_f, pair_g, box, x_out, QuadratureSpec(nodes_per_axis=n_top),
            tolerance=cfg.tolerance("borel-pompeiu-classical"))
        rep.identity += "-exterior"
        reports.append(rep)
    if len(cfg.nodes_ladder) >= 2:
        convergence["borel-pompeiu-classical"] = _convergence_ratios(
            ladder_resid[:len(cfg.nodes_ladder)])
    else:
        convergence["borel-pompeiu-classical"] = "insufficient ladder"

    # left/right inverse of the volume transform, with refinement
    fld = {f.name: f for f in standard_corpus(box)}
    f_probe = fld["exp-x2"]
    inv_resid = []
    for n in cfg.nodes_ladder:
        spec_n = QuadratureSpec(nodes_per_axis=n)
        for side, op in (("left", fueter_left),):
            T = teodorescu_field(frames[0][1], f_probe, box, spec_n, side=side)
            got = op(frames[0][1], T, box.center)
            want = f_probe(box.center[None, :])[0]
            rep = residual_report("fueter-inverse", got, want,
                                  cfg.tolerance("fueter-inverse"),
                                  nodes=n, corpus=f_probe.name,
                                  probe_points=[box.center])
            reports.append(rep)
            inv_resid.append(rep.residual_rel)
    from .fueter import fueter_right
    T = teodorescu_field(frames[0][1], f_probe, box, QuadratureSpec(nodes_per_axis=n_top),
                         side="right")
    got = fueter_right(frames[0][1], T, box.center)
    want = f_probe(box.center[None, :])[0]
    rep = residual_report("fueter-inverse-right", got, want, cfg.tolerance("fueter-inverse"),
                          nodes=n_top, corpus=f_probe.name)
    reports.append(rep)
    if len(cfg.nodes_ladder) >= 2:
        convergence["fueter-inverse"] = _convergence_ratios(inv_resid)
    else:
        convergence["fueter-inverse"] = "insufficient ladder"
    return reports, convergence


def run_fractional_suite(cfg: SuiteConfig) -> tuple[list[IdentityReport], dict]:
    box = Box4(cfg.box_a, cfg.box_b)
    reports: list[IdentityReport] = []
    convergence: dict = {}
    psi = StructuralSet.standard()
    alpha = FracOrderVec(cfg.alpha)
    corp = standard_corpus(box)
    if cfg.corpus_names:
        corp = select(corp, cfg.corpus_names)
    spec = QuadratureSpec(nodes_per_axis=max(10, cfg.nodes_ladder[0]))

    # constant-derivative closed form
    worst = 0.0
    for a_ord in (0.25, 0.5, 0.75):
        for x in np.linspace(0.1, 1.0, 16):
            got = rl_derivative_left(Profile1D(lambda t: np.ones_like(t),
                                               lambda t: np.zeros_like(t)),
                                     a_ord, 0.0, float(x), spec)
            want = rl_const_derivative_oracle(a_ord, 0.0, float(x))
            worst = max(worst, abs(got[0] - want) / abs(want))
    reports.append(IdentityReport("const-derivative", worst, 1.0,
                                  cfg.tolerance("const-derivative"),
                                  nodes=spec.n1d, corpus="const"))

    # fundamental theorem, both sides
    worst = 0.0
    for name, fn in (("1", lambda t: np.ones_like(t)), ("t", lambda t: t),
                     ("t2", lambda t: t ** 2), ("sin", np.sin)):
        for a_ord in (0.25, 0.5, 0.75):
            for x in (0.35, 0.7):
                left = rl_derivative_left(
                    lambda z, _fn=fn, _a=a_ord: np.stack(
                        [rl_integral_left(_fn, _a, 0.0, float(t), spec,
                                          _allow_endpoint=True) for t in np.atleast_1d(z)]),
                    a_ord, 0.0, x, spec)
                want = np.zeros(4)
                want[0] = fn(np.array([x]))[0]
                worst = max(worst, float(np.abs(left - want).max()) / max(abs(want[0]), 1e-1))
                right = rl_derivative_right(
                    lambda z, _fn=fn, _a=a_ord: np.stack(
                        [rl_integral_right(_fn, _a, 1.0, float(t), spec,
                                           _allow_endpoint=True) for t in np.atleast_1d(z)]),
                    a_ord, 1.0, x, spec)
                worst = max(worst, float(np.abs(right - want).max()) / max(abs(want[0]), 1e-1))
    reports.append(IdentityReport("fundamental-theorem", worst, 1.0,
                                  cfg.tolerance("fundamental-theorem"),
                                  nodes=spec.n1d, corpus="1,t,t2,sin"))

    anchors = _anchors(box, cfg.seed)
    probe = box.a + 0.6 * box.edges

    def frac_task(ident, f, anchor):
        def run():
            anch = AnchoredPoint(anchor, probe)
            kwargs = {}
            if ident in ("eq8", "eq9"):
                kwargs["beta"] = FracOrderVec(cfg.beta)
                alpha_used = FracOrderVec(cfg.beta)
            else:
                alpha_used = alpha
            rep = verify_frac_identity(ident, psi, alpha_used, f, box, anch, spec,
                                       tolerance=cfg.tolerance(ident), **kwargs)
            rep.extra["anchor"] = [float(c) for c in anchor]
            return rep
        return run

    tasks = []
    for ident in ("eq5", "eq6", "eq7", "laplacian"):
        for f in corp:
            for anchor in anchors:
                tasks.append(frac_task(ident, f, anchor))
    for ident in ("eq8", "eq9"):
        for f in corp:
            tasks.append(frac_task(ident, f, anchors[0]))
    reports.extend(_run_tasks(tasks, cfg.jobs))
    return reports, convergence


def run_perturbed_suite(cfg: SuiteConfig) -> tuple[list[IdentityReport], dict]:
    box = Box4(cfg.box_a, cfg.box_b)
    reports: list[IdentityReport] = []
    convergence: dict = {}
    psi = StructuralSet.standard()
    alpha = FracOrderVec(cfg.alpha)
    beta = FracOrderVec(cfg.beta)
    corp = {f.name: f for f in standard_corpus(box)}
    spec = QuadratureSpec(nodes_per_axis=10)
    q = box.center
    probe = box.a + np.array([0.55, 0.6, 0.45, 0.5]) * box.edges
    anch = AnchoredPoint(q, probe)
    pert = Perturbation(cfg.u, cfg.v)
    pert_sum = Perturbation(np.asarray(cfg.u) + np.asarray(cfg.v),
                            np.conj(np.asarray(cfg.u) + np.asarray(cfg.v)))

    tol = cfg.tolerance("proposition")

    def prop_task(ident, f):
        def run():
            needs_strip = ident in ("p1e-left", "p1e-right", "p1e-laplace", "p2e")
            ctx = PerturbedContext(psi, beta if needs_strip else alpha, f, box, anch, spec,
                                   beta=beta if needs_strip else None,
                                   g=None,
                                   pert=pert_sum if ident == "p1e-laplace" else pert)
            return verify_proposition(ident, ctx, tolerance=tol)
        return run

    tasks = [prop_task(ident, corp["sin-x0"]) for ident in PROPOSITION_IDS]
    tasks += [prop_task(ident, corp["coord-x1"]) for ident in ("p1a", "p1c", "p2a", "p2e")]
    reports.extend(_run_tasks(tasks, cfg.jobs))

    # perturbed Stokes ladder, both parts
    for part in (1, 2):
        resid = []
        for n in cfg.nodes_ladder:
            ctx = PerturbedContext(psi, alpha, corp["coord-x1"], box, anch,
                                   QuadratureSpec(nodes_per_axis=n), beta=beta,
                                   g=corp["const-1"], pert=pert)
            rep = stokes_perturbed_residual(part, ctx,
                                            tolerance=cfg.tolerance("stokes-perturbed"))
            reports.append(rep)
            resid.append(rep.residual_rel)
        if len(resid) >= 2:
            convergence[f"stokes-perturbed-{part}"] = _convergence_ratios(resid)
        else:
            convergence[f"stokes-perturbed-{part}"] = "insufficient ladder"

    # reproduction formulas: part 2 full ladder, part 1 short ladder (heavier)
    bp_tol = cfg.tolerance("borel-pompeiu-perturbed")
    for part, ladder, pert_used in ((2, cfg.nodes_ladder, pert),
                                    (1, cfg.nodes_ladder[:2], Perturbation(cfg.u, np.zeros(4)))):
        resid = []
        for n in ladder:
            ctx = PerturbedContext(psi, alpha, corp["const-1"], box, anch,
                                   QuadratureSpec(nodes_per_axis=n), beta=beta,
                                   g=corp["const-1"], pert=pert_used)
            rep = borel_pompeiu_perturbed_residual(part, ctx, q, tolerance=bp_tol)
            reports.append(rep)
            resid.append(rep.residual_rel)
        if len(resid) >= 2:
            convergence[f"borel-pompeiu-perturbed-{part}"] = _convergence_ratios(resid)
        else:
            convergence[f"borel-pompeiu-perturbed-{part}"] = "insufficient ladder"
        n_mid = ladder[min(1, len(ladder) - 1)]
        ctx = PerturbedContext(psi, alpha, corp["coord-x1"], box, anch,
                               QuadratureSpec(nodes_per_axis=n_mid), beta=beta,
                               g=corp["const-1"], pert=pert_used)
        rep = borel_pompeiu_perturbed_residual(part, ctx, q, tolerance=bp_tol)
        reports.append(rep)
        x_out = box.b + 0.75 * box.edges
        ctx = PerturbedContext(psi, alpha, corp["coord-x1"], box, anch,
                               QuadratureSpec(nodes_per_axis=ladder[0]), beta=beta,
                               g=corp["const-1"], pert=pert_used)
        rep = borel_pompeiu_perturbed_residual(part, ctx, x_out, tolerance=bp_tol)
        reports.append(rep)

    # Cauchy corollaries: exact-null, not-applicable gate, near-null synthetic
    from .fueter import constant_field
    zero = constant_field(0.0, box, name="zero")
    ctx = PerturbedContext(psi, alpha, zero, box, anch, spec, beta=beta, g=zero, pert=pert)
    for which in ("stokes-cauchy-1", "stokes-cauchy-2", "bp-cauchy-2"):
        rep = cauchy_corollary_check(which, ctx, q)
        rep.corpus += ",null-data"
        reports.append(rep)
    ctx = PerturbedContext(psi, alpha, corp["const-1"], box, anch, spec, beta=beta,
                           g=corp["const-1"], pert=Perturbation.none())
    rep = cauchy_corollary_check("stokes-cauchy-1", ctx, q)
    reports.append(rep)  # not-applicable gate on non-null data

    from .perturbed import frac_integral_j_based_field
    small = frac_integral_j_based_field(psi, alpha, corp["sin-x0"], box, q, spec,
                                        scale=1e-3)
    ctx = PerturbedContext(psi, alpha, small, box, anch, spec, beta=alpha, g=zero,
                           pert=Perturbation.none())
    rep = cauchy_corollary_check("bp-cauchy-2", ctx, q)
    rep.corpus += ",near-null"
    reports.append(rep)
    return reports, convergence


def run_suite(cfg: SuiteConfig) -> RunReport:
    """Execute the named suite; deterministic for a fixed (config, seed)."""
    cfg.validate()
    runners = {
        "classical": [("classical", run_classical_suite)],
        "fractional": [("fractional", run_fractional_suite)],
        "perturbed": [("perturbed", run_perturbed_suite)],
    }
    chosen = runners.get(cfg.suite, None)
    if chosen is None:  # all
        chosen = runners["classical"] + runners["fractional"] + runners["perturbed"]

    reports: list[IdentityReport] = []
    convergence: dict = {}
    clocks: dict = {}
    for name, runner in chosen:
        t0 = time.perf_counter()
        reps, conv = runner(cfg)
        clocks[name] = time.perf_counter() - t0
        reports.extend(reps)
        convergence.update(conv)
    if len(cfg.nodes_ladder) < 2:
        for key in list(convergence):
            convergence[key] = "insufficient ladder"
    return RunReport(suite=cfg.suite, config=cfg.to_dict(), reports=reports,
                     convergence=convergence, wall_clock=clocks)
