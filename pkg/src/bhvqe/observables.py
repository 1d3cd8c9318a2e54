"""Mass/radius sweeps and the Hawking-style observable pipeline.

A sweep evaluates the chain ground energy over a mass x radius grid, by
exact diagonalization and optionally by the variational optimizer, then
converts energies to temperature and power. The conversion prefers the
quartic curve fit E^4 = b0 + b1 * M inverted back to an effective mass;
whenever a fit is impossible or unstable for a record (too few distinct
masses, degenerate data, nonpositive inverted mass) the record falls back
to the definitional values kappa_t / M and kappa_p / M^2. Both routes are
kept on every record so they can be compared downstream.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .ansatz import AnsatzKind
from .errors import (
    DegenerateDataError,
    DomainError,
    NegativeInterceptError,
    OutOfRangeError,
)
from .hamiltonian import (
    PAPER_CHAIN,
    BlackHoleParams,
    HamiltonianLayout,
    PauliHamiltonian,
    assemble,
    exact_ground_energy,
)
from .lattice import LatticeSpec
from .vqe import SpsaConfig, vqe_run

RADIUS_ABSOLUTE = "absolute"
RADIUS_GM_MULTIPLE = "gm-multiple"

METHOD_EXACT = "exact"
METHOD_VQE = "vqe"

MIN_FIT_POINTS = 3


@dataclass(frozen=True)
class FitResult:
    """Coefficients of E = a * (b + c * x)^(1/4) with b normalized to 1."""

    a: float
    b: float
    c: float
    rms_residual: float
    n_points: int


@dataclass(frozen=True)
class SweepRecord:
    """One sweep evaluation: a grid point plus its energies and observables.

    temperature and power hold the fit-inverted values when a curve fit was
    available for the record's (seed, radius) family, and otherwise equal
    the direct values. temperature_direct and power_direct always hold
    kappa_t / M and kappa_p / M^2.
    """

    mass: float
    radius: float
    rho: float
    energy_exact: float
    energy_vqe: float | None
    temperature: float
    power: float
    temperature_direct: float
    power_direct: float
    method: str
    ansatz: str
    seed: int | None
    shots: int
    iterations: int
    converged: bool | None

    @property
    def energy(self) -> float:
        """The headline energy for the record's method."""
        return self.energy_exact if self.energy_vqe is None else self.energy_vqe


def _fit_quartic(x: np.ndarray, energies: np.ndarray) -> FitResult:
    if x.size < MIN_FIT_POINTS:
        raise DegenerateDataError(f"need at least {MIN_FIT_POINTS} points, got {x.size}")
    if np.unique(x).size < 2:
        raise DegenerateDataError("regressor values are all identical")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(energies))):
        raise DegenerateDataError("fit inputs must be finite")
    if np.any(energies <= 0):
        raise DegenerateDataError("energies must be positive to fit the quartic model")
    design = np.column_stack([np.ones_like(x), x])
    beta, *_ = np.linalg.lstsq(design, energies**4, rcond=None)
    b0, b1 = float(beta[0]), float(beta[1])
    if b0 <= 0:
        raise NegativeInterceptError(f"fitted intercept {b0:.6g} is not positive")
    predicted_quartic = b0 + b1 * x
    if np.any(predicted_quartic <= 0):
        raise NegativeInterceptError("fitted curve is nonpositive at a sample point")
    rms = float(np.sqrt(np.mean((predicted_quartic**0.25 - energies) ** 2)))
    return FitResult(a=b0**0.25, b=1.0, c=b1 / b0, rms_residual=rms, n_points=int(x.size))


def fit_energy_vs_mass(points: list[tuple[float, float]]) -> FitResult:
    """Fit E^4 linear in mass; returns E = a * (1 + c * M)^(1/4) coefficients."""
    masses = np.array([p[0] for p in points], dtype=float)
    energies = np.array([p[1] for p in points], dtype=float)
    return _fit_quartic(masses, energies)


def fit_energy_vs_radius(points: list[tuple[float, float]]) -> FitResult:
    """Fit E^4 linear in 1/radius; returns E = a * (1 + c / r)^(1/4) coefficients."""
    radii = np.array([p[0] for p in points], dtype=float)
    energies = np.array([p[1] for p in points], dtype=float)
    if np.any(radii <= 0):
        raise DomainError("radii must be positive")
    return _fit_quartic(1.0 / radii, energies)


def mass_from_energy(fit: FitResult, energy: float) -> float:
    """Invert the mass-curve fit: M = ((E / a)^4 - b) / c.

    Raises DomainError when the fit has no mass dependence (c == 0) and
    OutOfRangeError when the energy sits at or below the M -> 0 floor
    a * b^(1/4), where the inverse is not defined.
    """
    if fit.c == 0:
        raise DomainError("fit has zero mass coefficient; cannot invert")
    floor = fit.a * fit.b**0.25
    if energy <= floor:
        raise OutOfRangeError(f"energy {energy:.6g} at or below the zero-mass floor {floor:.6g}")
    return ((energy / fit.a) ** 4 - fit.b) / fit.c


def temperature(mass: float, kappa_t: float = 1.0) -> float:
    """Hawking-style temperature kappa_t / M for mass in Planck units."""
    if mass <= 0:
        raise DomainError(f"mass must be positive, got {mass}")
    return kappa_t / mass


def power(mass: float, kappa_p: float = 1.0) -> float:
    """Radiated power kappa_p / M^2 for mass in Planck units."""
    if mass <= 0:
        raise DomainError(f"mass must be positive, got {mass}")
    return kappa_p / mass**2


@dataclass(frozen=True)
class _Point:
    index: int
    mass: float
    radius: float
    radius_key: int


@dataclass(frozen=True)
class _VqeTask:
    h: PauliHamiltonian
    kind: AnsatzKind
    cfg: SpsaConfig
    shots: int


def _run_vqe_task(task: _VqeTask) -> tuple[float, int, bool]:
    result = vqe_run(task.h, task.kind, task.cfg, shots=task.shots)
    return result.best_energy, result.iterations_used, result.converged


def _derived_seed(base_seed: int, point_index: int) -> int:
    return int(np.random.SeedSequence([base_seed, point_index]).generate_state(1)[0])


def _resolve_points(
    mass_grid: list[float],
    radius_grid: list[float],
    radius_mode: str,
    g_const: float,
) -> list[_Point]:
    points = []
    for mass, (radius_key, radius) in itertools.product(mass_grid, enumerate(radius_grid)):
        r_abs = radius * g_const * mass if radius_mode == RADIUS_GM_MULTIPLE else radius
        points.append(_Point(index=len(points), mass=mass, radius=r_abs, radius_key=radius_key))
    return points


def _fitted_observables(
    group: list[tuple[_Point, float]],
    kappa_t: float,
    kappa_p: float,
) -> dict[int, tuple[float, float]]:
    """Fit E vs M over one (seed, radius) family; map point index -> (T, P).

    Points whose inversion fails or lands at a nonpositive mass are simply
    omitted; the caller falls back to the direct values for them.
    """
    masses = [p.mass for p, _ in group]
    if len(set(masses)) < MIN_FIT_POINTS:
        return {}
    try:
        fit = fit_energy_vs_mass([(p.mass, e) for p, e in group])
    except (DegenerateDataError, NegativeInterceptError):
        return {}
    out = {}
    for point, energy in group:
        try:
            m_hat = mass_from_energy(fit, energy)
        except (DomainError, OutOfRangeError):
            continue
        if not np.isfinite(m_hat) or m_hat <= 0:
            continue
        out[point.index] = (kappa_t / m_hat, kappa_p / m_hat**2)
    return out


def sweep(
    mass_grid: list[float],
    radius_grid: list[float],
    method: str,
    cfg: SpsaConfig,
    shots: int = 0,
    *,
    ansatz: AnsatzKind | None = None,
    seeds: list[int] | None = None,
    layout: HamiltonianLayout | None = None,
    lattice: LatticeSpec | None = None,
    inner_half: bool = False,
    radius_mode: str = RADIUS_ABSOLUTE,
    g_const: float = 1.0,
    kappa_t: float = 1.0,
    kappa_p: float = 1.0,
    max_workers: int = 1,
) -> list[SweepRecord]:
    """Evaluate the ground energy over a mass x radius grid.

    Exact sweeps yield one record per grid point; variational sweeps yield
    one per (grid point, seed), with per-run seeds derived deterministically
    from the base seed and the point index. Records come back in grid order
    (mass-major, then radius, then seed). max_workers > 1 distributes the
    variational runs over worker processes.
    """
    if not mass_grid or not radius_grid:
        raise DomainError("mass and radius grids must be non-empty")
    if radius_mode not in (RADIUS_ABSOLUTE, RADIUS_GM_MULTIPLE):
        raise DomainError(f"unknown radius mode {radius_mode!r}")
    if method not in (METHOD_EXACT, METHOD_VQE):
        raise DomainError(f"unknown method {method!r}")
    if method == METHOD_VQE and ansatz is None:
        raise DomainError("variational sweeps need an ansatz")
    layout = layout if layout is not None else HamiltonianLayout(variant=PAPER_CHAIN)
    lattice = lattice if lattice is not None else LatticeSpec()
    seeds = list(seeds) if seeds else [cfg.seed]

    points = _resolve_points(mass_grid, radius_grid, radius_mode, g_const)
    hams = [
        assemble(
            BlackHoleParams(mass=p.mass, radius=p.radius, g_const=g_const),
            layout,
            lattice,
            inner_half=inner_half,
        )
        for p in points
    ]
    exact_energies = [exact_ground_energy(h) for h in hams]

    if method == METHOD_EXACT:
        runs = [(point, None, exact_energies[point.index], 0, None) for point in points]
    else:
        tasks = []
        for point, seed in itertools.product(points, seeds):
            run_cfg = replace(cfg, seed=_derived_seed(seed, point.index))
            tasks.append(_VqeTask(hams[point.index], ansatz, run_cfg, shots))
        if max_workers > 1:
            with ProcessPoolExecutor(max_workers=max_workers) as pool:
                outcomes = list(pool.map(_run_vqe_task, tasks))
        else:
            outcomes = [_run_vqe_task(t) for t in tasks]
        runs = [
            (point, seed, energy, iterations, converged)
            for (point, seed), (energy, iterations, converged) in zip(
                itertools.product(points, seeds), outcomes
            )
        ]

    fitted: dict[tuple[int, int], tuple[float, float]] = {}
    group_key = lambda item: (-1 if item[1] is None else item[1], item[0].radius_key)  # noqa: E731
    for (seed, _), group_iter in itertools.groupby(sorted(runs, key=group_key), key=group_key):
        group = list(group_iter)
        per_point = _fitted_observables([(p, e) for p, _, e, _, _ in group], kappa_t, kappa_p)
        fitted.update({(seed, index): obs for index, obs in per_point.items()})

    records = []
    for point, seed, energy, iterations, converged in runs:
        rho = BlackHoleParams(mass=point.mass, radius=point.radius, g_const=g_const).rho
        t_direct = temperature(point.mass, kappa_t)
        p_direct = power(point.mass, kappa_p)
        fit_key = (-1 if seed is None else seed, point.index)
        t_fit, p_fit = fitted.get(fit_key, (t_direct, p_direct))
        records.append(
            SweepRecord(
                mass=point.mass,
                radius=point.radius,
                rho=rho,
                energy_exact=exact_energies[point.index],
                energy_vqe=None if method == METHOD_EXACT else energy,
                temperature=t_fit,
                power=p_fit,
                temperature_direct=t_direct,
                power_direct=p_direct,
                method=method,
                ansatz="" if ansatz is None else ansatz.family.value,
                seed=seed,
                shots=shots,
                iterations=iterations,
                converged=converged,
            )
        )
    return records
