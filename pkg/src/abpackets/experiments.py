"""Declarative experiments: two-packet and comb momentum curves, free evolution,
the invariant suite, and parameter sweeps.

Every run returns a :class:`RunResult`; :func:`write_result` persists it as
plain CSV tables plus a ``key=value`` sidecar that echoes the config, so a
sidecar can be fed back as ``--config`` to repeat the run exactly.
"""
from __future__ import annotations

import ast
import csv
import itertools
import math
import operator
import os
import platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
from scipy.integrate import simpson

from . import __version__
from .evolution import (PropagationSpec, free_evolve, overlap_time, position_density,
                        split_at)
from .spectral import (DensityCurve, analytic_density_boosted_tophat,
                       analytic_density_two_packet, band_mass, boosted_overlap_closed_form,
                       fft_momentum_density, l1_distance, modular_expectation, moment,
                       momentum_amplitude, momentum_density, overlap, peak_location,
                       sinc2_mass)
from .wavefunctions import (Grid, PhaseProgram, apply_phase_program, comb_geometry, gaussian,
                            grid_for, make_boosted_tophat, make_comb, make_tophat,
                            make_two_packet, sample, smooth_edges)

EXPERIMENTS = ("two-packet", "comb", "evolve", "verify", "sweep")
OUT_ENV = "ABPACKETS_OUT"
DEFAULT_OUT = "abpackets-out"
FAULTS = ("perturb-phase",)


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit code 2)."""


# --------------------------------------------------------------------------
# config


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}


def parse_number(text: str) -> float:
    """Evaluate a numeric literal or simple arithmetic such as ``pi/2`` or ``0.01*2*pi``."""
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        raise ConfigError(f"cannot parse number {text!r}")
    try:
        value = ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ArithmeticError) as exc:
        raise ConfigError(f"cannot parse number {text!r}: {exc}") from exc
    if not math.isfinite(value):
        raise ConfigError(f"number {text!r} is not finite")
    return value


_FLOAT_KEYS = ("d", "a", "eps", "xi", "L", "alpha", "p0", "sigma", "t", "dx", "pmax", "domain")
_POSITIVE_KEYS = ("d", "L", "sigma", "dx", "pmax", "domain")


@dataclass
class ExperimentConfig:
    """Inputs for one experiment.  ``None`` means "use the experiment's default"."""

    experiment: str = "two-packet"
    d: float | None = None
    a: float | None = None
    eps: float | None = None
    xi: float | None = None
    N: int | None = None
    L: float | None = None
    alpha: float | None = None
    p0: float | None = None
    sigma: float | None = None
    t: float | None = None
    dx: float | None = None
    pmax: float | None = None
    domain: float | None = None
    target: str | None = None
    fault: str | None = None
    jobs: int = 1
    out: str | None = None
    sweep: dict[str, list[float]] = field(default_factory=dict)

    def set(self, key: str, value: str) -> None:
        """Set one field from its text form (as found in a config file)."""
        key = key.strip()
        value = value.strip()
        if key.startswith("sweep."):
            name = key[len("sweep."):]
            if name not in _FLOAT_KEYS and name != "N":
                raise ConfigError(f"cannot sweep over {name!r}")
            self.sweep[name] = [parse_number(v) for v in value.split(",") if v.strip()]
        elif key in _FLOAT_KEYS:
            num = None if value in ("", "None") else parse_number(value)
            if num is not None and key in _POSITIVE_KEYS and not num > 0:
                raise ConfigError(f"{key} must be positive, got {value!r}")
            setattr(self, key, num)
        elif key in ("N", "jobs"):
            if value in ("", "None"):
                setattr(self, key, None if key == "N" else 1)
            else:
                num = parse_number(value)
                if num != int(num):
                    raise ConfigError(f"{key} must be an integer, got {value!r}")
                setattr(self, key, int(num))
        elif key in ("experiment", "target", "fault", "out"):
            setattr(self, key, value or None)
        else:
            raise ConfigError(f"unknown config key {key!r}")

    def items(self) -> list[tuple[str, str]]:
        """Text form of every set field, in a stable order."""
        out = []
        for f in fields(self):
            val = getattr(self, f.name)
            if f.name == "sweep":
                for k, vals in val.items():
                    out.append((f"sweep.{k}", ", ".join(repr(float(v)) for v in vals)))
            elif val is not None:
                out.append((f.name, repr(float(val)) if isinstance(val, float) else str(val)))
        return out


def read_config(path, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Read ``key = value`` lines.

    Blank lines and ``#`` comments are skipped.  Sidecar files written by
    :func:`write_result` are accepted: ``config.``-prefixed keys are used,
    other namespaced keys (``metric.``, ``check.``, ...) are ignored.
    """
    cfg = base if base is not None else ExperimentConfig()
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = line.split("=", 1)
        key = key.strip()
        if key.startswith("config."):
            key = key[len("config."):]
        elif key == "status" or ("." in key and not key.startswith("sweep.")):
            continue
        cfg.set(key, value)
    return cfg


# --------------------------------------------------------------------------
# results


@dataclass
class RunResult:
    config: ExperimentConfig
    tables: dict[str, dict[str, np.ndarray]] = field(default_factory=dict)
    metrics: dict[str, float | str] = field(default_factory=dict)
    checks: dict[str, bool] = field(default_factory=dict)
    provenance: dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def check(self, name: str, ok) -> bool:
        self.checks[name] = bool(ok)
        return bool(ok)


def _provenance() -> dict[str, str]:
    return {
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "python": platform.python_version(),
        "numpy": np.__version__,
    }


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if isinstance(v, (bool, np.bool_)):
        return "pass" if v else "fail"
    return str(v)


def write_table(path: Path, columns: dict[str, np.ndarray]) -> None:
    names = list(columns)
    cols = [columns[n] for n in names]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names)
        for row in zip(*cols):
            writer.writerow(_fmt(v) for v in row)


def write_result(result: RunResult, out_dir) -> Path:
    """Write every table as ``<name>.csv`` and the sidecar ``<experiment>.txt``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, columns in result.tables.items():
        write_table(out_dir / f"{name}.csv", columns)
    lines = [f"config.{k}={v}" for k, v in result.config.items()]
    lines += [f"metric.{k}={_fmt(v)}" for k, v in result.metrics.items()]
    lines += [f"check.{k}={_fmt(v)}" for k, v in result.checks.items()]
    lines += [f"provenance.{k}={v}" for k, v in result.provenance.items()]
    lines.append(f"status={'pass' if result.passed else 'fail'}")
    sidecar = out_dir / f"{result.config.experiment}.txt"
    sidecar.write_text("\n".join(lines) + "\n")
    return sidecar


def default_out_dir() -> Path:
    return Path(os.environ.get(OUT_ENV, DEFAULT_OUT))


# --------------------------------------------------------------------------
# shared helpers


def _band_grid(curve: DensityCurve, pmax: float) -> np.ndarray:
    """Indices of the FFT grid points with ``|p| <= pmax``, symmetric about 0."""
    k = np.rint(curve.p / curve.dp).astype(int)
    kmax = int(math.floor(pmax / curve.dp + 1e-9))
    return np.flatnonzero(np.abs(k) <= kmax)


def _curve_normalization_error(p: np.ndarray, density: np.ndarray, exact_mass: float) -> float:
    # Simpson: the trapezoid end correction grows when the band edge cuts a steep lobe
    return abs(float(simpson(density, x=p)) - exact_mass)


def _momentum_tables(initial, final, cfg: ExperimentConfig, d_feature: float, result: RunResult,
                     curve_tol: float = 1e-6):
    """Analytic and oracle curves of two piecewise waves on a shared FFT grid."""
    dx = cfg.dx
    lo = min(initial.support[0], final.support[0])
    hi = max(initial.support[1], final.support[1])
    grid = grid_for(initial, dx, length=cfg.domain)
    if grid.dx > d_feature / 64 * (1 + 1e-9):
        raise ConfigError(f"grid step {grid.dx:.4g} exceeds d/64 = {d_feature / 64:.4g}")
    if grid.lo > lo or grid.hi < hi:
        raise ConfigError("domain does not cover both waves")
    nyquist = math.pi / grid.dx
    if cfg.pmax > nyquist:
        raise ConfigError(f"pmax {cfg.pmax:.4g} exceeds the grid Nyquist momentum {nyquist:.4g}")
    oracle_i = fft_momentum_density(sample(initial, grid))
    oracle_f = fft_momentum_density(sample(final, grid))
    idx = _band_grid(oracle_i, cfg.pmax)
    p = oracle_i.p[idx]
    dens_i = momentum_density(initial, p)
    dens_f = momentum_density(final, p)
    oi, of = oracle_i.density[idx], oracle_f.density[idx]
    result.tables[cfg.experiment] = {
        "p": p, "density_initial": dens_i, "density_final": dens_f,
        "density_oracle_initial": oi, "density_oracle_final": of,
    }
    err_i = float(np.max(np.abs(dens_i - oi)))
    err_f = float(np.max(np.abs(dens_f - of)))
    result.metrics.update(grid_dx=grid.dx, grid_points=grid.n, dp=oracle_i.dp,
                          band_edge=float(p[-1]), oracle_error_initial=err_i,
                          oracle_error_final=err_f)
    result.check("oracle_initial", err_i <= 1e-6)
    result.check("oracle_final", err_f <= 1e-6)
    P = float(p[-1])
    mass_i, mass_f = band_mass(initial, P), band_mass(final, P)
    norm_err = max(_curve_normalization_error(p, c, m) for c, m in
                   ((dens_i, mass_i), (dens_f, mass_f), (oi, mass_i), (of, mass_f)))
    result.metrics.update(tail_mass_initial=1 - mass_i, tail_mass_final=1 - mass_f,
                          curve_normalization_error=norm_err)
    result.check("curves_normalized", norm_err <= curve_tol)
    return p, dens_i, dens_f


def _fine_peak(w, lo: float, hi: float, dp: float) -> float:
    p = np.arange(math.floor(lo / dp), math.ceil(hi / dp) + 1) * dp
    return peak_location(DensityCurve(p, momentum_density(w, p), dp))


def _mass_window(w, lo: float, hi: float, points: int = 4001) -> float:
    p = np.linspace(lo, hi, points)
    return float(simpson(momentum_density(w, p), x=p))


# --------------------------------------------------------------------------
# experiments


def resolve_two_packet(cfg: ExperimentConfig) -> ExperimentConfig:
    d = 2 * math.pi if cfg.d is None else cfg.d
    if not d > 0:
        raise ConfigError(f"d must be positive, got {d}")
    a = 0.01 * d if cfg.a is None else cfg.a
    if not a > 0:
        raise ConfigError(f"a must be positive, got {a}")
    return replace(cfg, experiment="two-packet", d=d, a=a,
                   alpha=math.pi / 2 if cfg.alpha is None else cfg.alpha,
                   dx=d / 256 if cfg.dx is None else cfg.dx,
                   pmax=64 / d if cfg.pmax is None else cfg.pmax,
                   domain=64 * d if cfg.domain is None else cfg.domain)


def run_two_packet(cfg: ExperimentConfig) -> RunResult:
    """Initial and phase-shifted momentum densities of the two-packet state."""
    cfg = resolve_two_packet(cfg)
    d, a, alpha = cfg.d, cfg.a, cfg.alpha
    result = RunResult(cfg, provenance=_provenance())
    initial = make_two_packet(d, a, 0.0)
    final = make_two_packet(d, a, alpha)
    p, dens_i, dens_f = _momentum_tables(initial, final, cfg, d, result)
    D = d + 2 * a
    eq_err = float(np.max(np.abs(dens_f - analytic_density_two_packet(d, D, alpha, p))))
    result.check("closed_form_matches_cos2_sinc2", eq_err <= 1e-12)

    fine = 1e-4 / d
    peak_i = _fine_peak(initial, -8 / d, 8 / d, fine)
    peak_f = _fine_peak(final, -8 / d, 8 / d, fine)
    final_at_zero = float(momentum_density(final, 0.0))
    result.metrics.update(peak_initial=peak_i, peak_final=peak_f, peak_final_times_d=peak_f * d,
                          density_final_at_zero=final_at_zero,
                          l1_change=float(np.sum(np.abs(dens_f - dens_i)) * (p[1] - p[0])),
                          overlap_magnitude=abs(overlap(initial, final)))
    wrapped = math.remainder(alpha, 2 * math.pi)
    if abs(wrapped) < 1e-15:
        result.check("alpha_zero_identity", np.max(np.abs(dens_f - dens_i)) < 1e-12)
    if abs(abs(wrapped) - math.pi) < 1e-15:
        result.check("alpha_pi_null_at_zero", final_at_zero < 1e-12)
    if abs(wrapped - math.pi / 2) < 1e-15 and a <= 0.05 * d:
        result.check("peak_near_1.2_over_d", abs(peak_f * d - 1.2) <= 0.05)
    return result


def resolve_comb(cfg: ExperimentConfig) -> ExperimentConfig:
    L = 20 * math.pi if cfg.L is None else cfg.L
    p0 = 1.0 if cfg.p0 is None else cfg.p0
    N = 200 if cfg.N is None else cfg.N
    if cfg.xi is None and cfg.eps is not None:
        xi = cfg.eps / (L / N)
    else:
        xi = 0.01 if cfg.xi is None else cfg.xi
    if not L > 0 or N < 1:
        raise ConfigError("comb needs L > 0 and N >= 1")
    if not 0 <= xi < 0.5:
        raise ConfigError(f"gap fraction xi must lie in [0, 0.5), got {xi}")
    if p0 <= 0:
        raise ConfigError(f"p0 must be positive, got {p0}")
    l = L / N
    wavelength = 2 * math.pi / p0
    if l >= wavelength:
        raise ConfigError(
            f"period l = {l:.4g} is not below the target wavelength 2*pi/p0 = {wavelength:.4g}; "
            f"the staircase phase cannot approximate the boost"
        )
    d, eps = comb_geometry(N, L, xi)
    return replace(cfg, experiment="comb", L=L, p0=p0, N=N, xi=xi, eps=eps, d=d,
                   dx=d / 256 if cfg.dx is None else cfg.dx,
                   pmax=64 / d if cfg.pmax is None else cfg.pmax,
                   domain=4 * L if cfg.domain is None else cfg.domain)


def run_comb(cfg: ExperimentConfig) -> RunResult:
    """Unboosted and staircase-boosted comb states and their overlap with
    the ideal boosted top-hat."""
    cfg = resolve_comb(cfg)
    L, p0, N, d, eps = cfg.L, cfg.p0, cfg.N, cfg.d, cfg.eps
    l = L / N
    alpha = p0 * l if cfg.alpha is None else cfg.alpha
    result = RunResult(cfg, provenance=_provenance())
    initial = make_comb(N, d, eps, 0.0)
    final = make_comb(N, d, eps, alpha)
    p, dens_i, dens_f = _momentum_tables(initial, final, cfg, d, result)
    dp = p[1] - p[0]

    ref_i = analytic_density_boosted_tophat(L, 0.0, p)
    ref_f = analytic_density_boosted_tophat(L, p0, p)
    result.tables["comb_reference"] = {"p": p, "density_tophat": ref_i,
                                       "density_boosted_tophat": ref_f}
    ref_err = max(_curve_normalization_error(p, ref_i, sinc2_mass(L, 0.0, p[0], p[-1])),
                  _curve_normalization_error(p, ref_f, sinc2_mass(L, p0, p[0], p[-1])))
    result.check("reference_curves_normalized", ref_err <= 1e-6)

    delta = 2 * (2 * math.pi / L)
    peak_i = peak_location(DensityCurve(p, dens_i, dp))
    peak_f = peak_location(DensityCurve(p, dens_f, dp))
    target = make_boosted_tophat(L, p0)
    ov = overlap(target, final)
    closed = boosted_overlap_closed_form(N, l, d, p0)
    result.metrics.update(
        l=l, alpha=alpha, wavelength=2 * math.pi / p0, peak_initial=peak_i, peak_final=peak_f,
        overlap_magnitude=abs(ov), overlap_closed_form_magnitude=abs(closed),
        overlap_initial_tophat=abs(overlap(make_tophat(L), initial)),
        window_halfwidth=delta,
        mass_window_initial=_mass_window(initial, -delta, delta),
        mass_window_final=_mass_window(final, p0 - delta, p0 + delta),
        l1_change=float(np.sum(np.abs(dens_f - dens_i)) * dp),
    )
    if cfg.alpha is None:
        result.check("overlap_matches_closed_form", abs(ov - closed) <= 1e-12)
        result.check("peak_final_at_p0", abs(peak_f - p0) <= dp)
    elif abs(math.remainder(alpha, 2 * math.pi)) < 1e-15:
        result.check("alpha_zero_identity", np.max(np.abs(dens_f - dens_i)) < 1e-12)
    return result


def resolve_evolve(cfg: ExperimentConfig) -> ExperimentConfig:
    d = 1.0 if cfg.d is None else cfg.d
    a = 0.5 * d if cfg.a is None else cfg.a
    sigma = min(0.4 * d, 0.8 * a) if cfg.sigma is None else cfg.sigma
    if not (d > 0 and a > 0):
        raise ConfigError("evolve needs d > 0 and a > 0")
    if not 0 < sigma < min(0.5 * d, 2 * a):
        raise ConfigError(f"sigma must lie in (0, min(d/2, 2a)) so packets stay disjoint; got {sigma}")
    return replace(cfg, experiment="evolve", d=d, a=a, sigma=sigma,
                   alpha=math.pi if cfg.alpha is None else cfg.alpha,
                   dx=sigma / 32 if cfg.dx is None else cfg.dx,
                   domain=200 * d if cfg.domain is None else cfg.domain)


def run_evolve(cfg: ExperimentConfig) -> RunResult:
    """Position densities of the smoothed two-packet state for phases 0 and
    ``alpha``, at ``t = 0`` and after the packets overlap."""
    cfg = resolve_evolve(cfg)
    d, a, sigma, alpha = cfg.d, cfg.a, cfg.sigma, cfg.alpha
    result = RunResult(cfg, provenance=_provenance())
    grid = Grid.covering(-(d + a), d + a, cfg.dx, margin=5 * sigma, length=cfg.domain)
    w0 = smooth_edges(make_two_packet(d, a, 0.0), sigma, grid)
    wa = smooth_edges(make_two_packet(d, a, alpha), sigma, grid)
    left, right = split_at(w0, 0.0)
    t_overlap = overlap_time(left, right, 0.1, t_start=0.01 * d * d)
    t = 1.5 * t_overlap if cfg.t is None else cfg.t
    e0 = free_evolve(w0, PropagationSpec(t))
    ea = free_evolve(wa, PropagationSpec(t))
    rho0, rhoa = position_density(w0), position_density(wa)
    rho0t, rhoat = position_density(e0), position_density(ea)
    l1_before = l1_distance(rho0, rhoa)
    l1_after = l1_distance(rho0t, rhoat)
    norm_err = max(abs(e0.norm() - 1), abs(ea.norm() - 1))
    mom_change = float(np.max(np.abs(fft_momentum_density(ea).density
                                     - fft_momentum_density(wa).density)))
    result.tables["evolve"] = {"x": grid.x, "density_t0_alpha0": rho0.density,
                               "density_t0": rhoa.density, "density_t_alpha0": rho0t.density,
                               "density_t": rhoat.density}
    result.metrics.update(t=t, overlap_time=t_overlap, l1_before=l1_before, l1_after=l1_after,
                          norm_error=norm_err, momentum_density_change=mom_change,
                          grid_points=grid.n)
    result.check("unitary", norm_err <= 1e-9)
    result.check("momentum_density_invariant", mom_change <= 1e-9)
    result.check("curves_normalized", max(abs(c.integral() - 1) for c in
                                          (rho0, rhoa, rho0t, rhoat)) <= 1e-6)
    result.check("alpha_invisible_before_overlap", l1_before < 1e-9)
    if abs(math.remainder(alpha, 2 * math.pi)) > 1e-3:
        result.check("alpha_visible_after_overlap", l1_after > 0.05)
    return result


# --------------------------------------------------------------------------
# invariant suite


def _moment_spread(states, orders=(1, 2, 3, 4)) -> float:
    """Largest change of ``<p^n>`` across ``states``, relative to ``<|p|^n>``."""
    worst = 0.0
    ref = states[0]
    curve = fft_momentum_density(ref, zero_order_hold=False, check_resolution=False)
    for n in orders:
        scale = float(np.sum(np.abs(curve.p) ** n * curve.density) * curve.dp)
        base = moment(ref, n)
        for s in states[1:]:
            worst = max(worst, abs(moment(s, n) - base) / scale)
    return worst


def _parseval_error(w) -> float:
    c = fft_momentum_density(w, zero_order_hold=False, check_resolution=False)
    return abs(float(np.sum(c.density) * c.dp) - w.norm())


def run_verify(cfg: ExperimentConfig | None = None) -> RunResult:
    """Run the invariant suite; every item becomes one check.

    ``cfg.fault = "perturb-phase"`` adds 0.5 rad to one packet of the comb
    used by the moment and modular items.  Moment invariance must still hold
    (it holds for any phases of disjoint packets) while the modular-momentum
    comparison against the staircase closed form must fail.
    """
    cfg = cfg or ExperimentConfig(experiment="verify")
    cfg = replace(cfg, experiment="verify")
    if cfg.fault is not None and cfg.fault not in FAULTS:
        raise ConfigError(f"unknown fault {cfg.fault!r}; known: {', '.join(FAULTS)}")
    result = RunResult(cfg, provenance=_provenance())
    m = result.metrics
    alphas = (0.0, math.pi / 4, math.pi / 2, math.pi)

    # constructors
    d, a = 2 * math.pi, 0.01 * 2 * math.pi
    D = d + 2 * a
    N, L, xi = 20, 20 * math.pi, 0.04
    l = L / N
    dc, eps = comb_geometry(N, L, xi)
    waves = [make_tophat(d), make_two_packet(d, a, math.pi / 2), make_comb(N, dc, eps, 0.3),
             make_boosted_tophat(L, 1.0)]
    m["norm_error"] = max(abs(w.norm() - 1) for w in waves)
    result.check("norm_constructors", m["norm_error"] <= 1e-12)

    # FFT oracle against closed forms
    two = make_two_packet(d, a, math.pi / 2)
    g2 = grid_for(two, d / 256, length=16 * d)
    s2 = sample(two, g2)
    c2 = fft_momentum_density(s2)
    band = np.abs(c2.p) <= 64 / d
    m["oracle_error_two_packet"] = float(np.max(np.abs(
        c2.density[band] - analytic_density_two_packet(d, D, math.pi / 2, c2.p[band]))))
    comb = make_comb(N, dc, eps, math.pi / 2)
    gc = grid_for(comb, dc / 256, length=2 * L)
    sc = sample(comb, gc)
    cc = fft_momentum_density(sc)
    band = np.abs(cc.p) <= 64 / dc
    m["oracle_error_comb"] = float(np.max(np.abs(
        cc.density[band] - momentum_density(comb, cc.p[band]))))
    result.check("oracle_equivalence", max(m["oracle_error_two_packet"],
                                           m["oracle_error_comb"]) <= 1e-6)

    # Gaussian calibration
    s = 1.3
    gg = Grid.covering(-20 * s, 20 * s, s / 16)
    gw = gaussian(gg, s)
    gcurve = fft_momentum_density(gw)
    exact = np.sqrt(2 / np.pi) * s * np.exp(-2 * s**2 * gcurve.p**2)
    m["gaussian_self_duality_error"] = float(np.max(np.abs(gcurve.density - exact)))
    result.check("gaussian_self_duality", m["gaussian_self_duality_error"] <= 1e-8)

    # smoothed states for moments and evolution
    sig2 = 0.05
    gs2 = Grid.covering(-(d + a), d + a, sig2 / 256, margin=5 * sig2)
    two_sm = [smooth_edges(make_two_packet(d, a, al), sig2, gs2) for al in alphas]
    sigc = eps / 2.5
    gsc = Grid.covering(0.0, L, sigc / 256, margin=5 * sigc)
    combs = [make_comb(N, dc, eps, al) for al in alphas]
    if cfg.fault == "perturb-phase":
        kick = [0.0] * N
        kick[N // 2] = 0.5
        combs.append(apply_phase_program(combs[2], PhaseProgram(tuple(kick))))
    comb_sm = [smooth_edges(w, sigc, gsc) for w in combs]

    m["parseval_error"] = max(_parseval_error(w) for w in [s2, sc, gw, *two_sm, *comb_sm])
    result.check("parseval", m["parseval_error"] <= 1e-9)

    m["moment0_error"] = max(abs(moment(w, 0) - 1) for w in [s2, *two_sm, *comb_sm])
    result.check("moment_n0", m["moment0_error"] <= 1e-9)
    m["moment_spread_two_packet"] = _moment_spread(two_sm)
    m["moment_spread_comb"] = _moment_spread(comb_sm)
    result.check("moment_invariance_two_packet", m["moment_spread_two_packet"] <= 1e-6)
    result.check("moment_invariance_comb", m["moment_spread_comb"] <= 1e-6)

    rho_0 = fft_momentum_density(two_sm[0])
    rho_h = fft_momentum_density(two_sm[2])
    m["l1_change_two_packet"] = l1_distance(rho_0, rho_h)
    m["max_change_over_peak"] = float(np.max(np.abs(rho_h.density - rho_0.density))
                                      / rho_0.density.max())
    result.check("distribution_changes", m["l1_change_two_packet"] > 0.2
                 and m["max_change_over_peak"] > 0.1)

    # modular momentum
    h = 1e-4

    def dmod(build, b):
        return abs(modular_expectation(build(h), b).value
                   - modular_expectation(build(-h), b).value) / (2 * h)

    def two_at(alpha):
        return lambda dh: make_two_packet(d, a, alpha + dh)

    small = max(dmod(two_at(al), b) for al in alphas for b in (0.0, 0.5 * a, 1.9 * a))
    aligned = min(dmod(two_at(al), D) for al in alphas)
    m["modular_small_shift_derivative"] = small
    m["modular_aligned_shift_derivative"] = aligned
    result.check("modular_dichotomy_two_packet", small < 1e-10 and aligned > 0.01)

    def comb_at(alpha):
        return lambda dh: make_comb(N, dc, eps, alpha + dh)

    outside = max(dmod(comb_at(0.7), b) for b in (0.0, 0.5 * eps, 0.99 * eps,
                                                 L - 0.99 * eps, L + 1.0))
    inside = min(dmod(comb_at(0.7), k * l) for k in range(1, N))
    m["modular_comb_outside_derivative"] = outside
    m["modular_comb_aligned_derivative"] = inside
    result.check("modular_dichotomy_comb", outside < 1e-10 and inside > 0.01)

    staircase = combs[-1] if cfg.fault else combs[2]
    step = alphas[2]
    ref_err = max(abs(modular_expectation(staircase, k * l).value
                      - (N - k) / N * np.exp(-1j * k * step)) for k in range(1, N))
    m["modular_reference_error"] = ref_err
    result.check("modular_matches_staircase", ref_err <= 1e-12)

    # overlap of the staircase comb with the ideal boosted top-hat
    rng = np.random.default_rng(20250701)
    worst = 0.0
    for _ in range(20):
        Nr = int(rng.integers(1, 60))
        lr = float(rng.uniform(0.05, 2.0))
        dr = lr * float(rng.uniform(0.5, 1.0))
        p0 = float(rng.uniform(-3.0, 3.0))
        psi = make_comb(Nr, dr, lr - dr, p0 * lr)
        phi = make_boosted_tophat(Nr * lr, p0)
        worst = max(worst, abs(overlap(phi, psi) - boosted_overlap_closed_form(Nr, lr, dr, p0)))
    m["boosted_overlap_error"] = worst
    result.check("boosted_overlap_closed_form", worst <= 1e-12)

    # free evolution
    ev = run_evolve(ExperimentConfig(experiment="evolve"))
    ecfg = resolve_evolve(ExperimentConfig(experiment="evolve"))
    ge = Grid.covering(-(ecfg.d + ecfg.a), ecfg.d + ecfg.a, ecfg.dx, margin=5 * ecfg.sigma,
                       length=ecfg.domain)
    wsm = smooth_edges(make_two_packet(ecfg.d, ecfg.a, math.pi / 4), ecfg.sigma, ge)
    t1, t2 = 0.1, 0.2
    e12 = free_evolve(free_evolve(wsm, PropagationSpec(t1)), PropagationSpec(t2))
    e3 = free_evolve(wsm, PropagationSpec(t1 + t2))
    m["evolution_composition_error"] = float(np.max(np.abs(e12.samples - e3.samples)))
    m["evolution_norm_error"] = ev.metrics["norm_error"]
    m["evolution_momentum_change"] = ev.metrics["momentum_density_change"]
    m["evolution_l1_before"] = ev.metrics["l1_before"]
    m["evolution_l1_after"] = ev.metrics["l1_after"]
    result.check("evolution_unitary", ev.checks["unitary"])
    result.check("evolution_momentum_invariant", ev.checks["momentum_density_invariant"])
    result.check("evolution_composition", m["evolution_composition_error"] <= 1e-9)
    result.check("evolution_phase_latency", ev.checks["alpha_invisible_before_overlap"]
                 and ev.checks["alpha_visible_after_overlap"])
    return result


# --------------------------------------------------------------------------
# sweeps


RUNNERS = {"two-packet": run_two_packet, "comb": run_comb, "evolve": run_evolve}


def _run_point(args):
    index, point_cfg, out_dir = args
    try:
        res = RUNNERS[point_cfg.experiment](point_cfg)
    except ValueError as exc:
        return index, None, f"{type(exc).__name__}: {exc}"
    write_result(res, Path(out_dir) / f"point_{index:04d}")
    return index, res, ""


def run_sweep(cfg: ExperimentConfig, out_dir=None) -> RunResult:
    """Cartesian sweep of ``cfg.target`` over ``cfg.sweep``.

    Each point is written to ``point_NNNN/`` under ``out_dir``; the returned
    result carries a ``summary`` table and fails if any point fails.
    """
    target = cfg.target or "two-packet"
    if target not in RUNNERS:
        raise ConfigError(f"cannot sweep experiment {target!r}; choose from {', '.join(RUNNERS)}")
    out_dir = Path(out_dir if out_dir is not None else (cfg.out or default_out_dir()))
    names = list(cfg.sweep)
    values = [cfg.sweep[n] for n in names]
    points = [] if any(len(v) == 0 for v in values) or not names else \
        list(itertools.product(*values))
    base = replace(cfg, experiment=target, sweep={}, target=None)
    jobs = []
    for i, combo in enumerate(points):
        pc = replace(base)
        for name, val in zip(names, combo):
            setattr(pc, name, int(val) if name == "N" else float(val))
        jobs.append((i, pc, str(out_dir)))
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            outcomes = list(pool.map(_run_point, jobs))
    else:
        outcomes = [_run_point(j) for j in jobs]
    outcomes.sort(key=lambda o: o[0])

    summary: dict[str, list] = {"index": [], **{n: [] for n in names}, "status": [],
                                "peak_final": [], "overlap_magnitude": [], "l1_change": [],
                                "message": []}
    nan = float("nan")
    failures = []
    for (i, res, err), combo in zip(outcomes, points):
        summary["index"].append(i)
        for n, v in zip(names, combo):
            summary[n].append(float(v))
        if res is None:
            status = "error"
        else:
            status = "pass" if res.passed else "fail"
        if status != "pass":
            failures.append(i)
        summary["status"].append(status)
        metrics = res.metrics if res is not None else {}
        summary["peak_final"].append(float(metrics.get("peak_final", nan)))
        summary["overlap_magnitude"].append(float(metrics.get("overlap_magnitude", nan)))
        summary["l1_change"].append(float(metrics.get("l1_change", nan)))
        summary["message"].append(err or ",".join(k for k, ok in res.checks.items() if not ok))
    result = RunResult(replace(cfg, experiment="sweep", target=target),
                       tables={"summary": summary}, provenance=_provenance())
    result.metrics.update(points=len(points), failures=len(failures),
                          failed_points=" ".join(str(i) for i in failures) or "none")
    result.check("all_points_pass", not failures)
    return result
