"""Finite-difference Sturm-Liouville eigensolvers for the separated ODEs.

Every separated equation in this package has the self-adjoint form

    -(1/w(x)) d/dx ( w(x) dR/dx ) + q(x) R = mu m(x) R

on an interval (lo, hi) with a power-law or sin^7 weight w, an optional
positive eigenvalue weight m (the parabolic equations carry m = 1/w with
w the parabolic coordinate), and Dirichlet values at both ends.  The
conservative three-point scheme

    A_ii  = (w_{i-1/2} + w_{i+1/2}) / h^2 + q_i w_i
    A_i,i+1 = -w_{i+1/2} / h^2

is symmetrized exactly by the diagonal similarity diag(sqrt(w_i)) (the
discrete version of substituting R = w^{-1/2} chi), so the assembled
matrix is symmetric tridiagonal to machine precision and a direct
selected-eigenvalue solve is cheap.  Vanishing endpoint weights make the
Dirichlet ghost values the natural regular boundary condition at
coordinate singularities (r = 0, theta in {0, pi}).

Accuracy strategy: the scheme is second order; by default each solve is
repeated on a doubled grid and Richardson-extrapolated, the difference
between the two grids serving as the convergence check demanded of every
reported eigenvalue.  An optional exponentially stretched grid clusters
nodes near the origin for Coulomb-like tails.

Solves share no mutable state; concurrent sector sweeps are safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from .errors import AccuracyError, BracketError
from .potentials import (
    MiczParams,
    OscillatorModel,
    Potential8D,
    micz_centrifugal_strengths,
    parabolic_W,
    require_spherically_separable,
)

__all__ = [
    "Grid",
    "RadialProblem",
    "Spectrum",
    "JointState",
    "fd_eigensolve",
    "build_radial_problem",
    "parabolic_joint_solve",
    "qes_verification_problem",
    "spherical_micz_energies",
]

_TAIL_LIMIT = math.exp(-20.0)


@dataclass(frozen=True)
class Grid:
    """Interior point count and node placement (uniform or log-stretched)."""

    n: int = 2000
    spacing: str = "uniform"
    stretch: float = 6.0

    def __post_init__(self):
        if self.n < 16:
            raise ValueError("grid needs at least 16 points")
        if self.spacing not in ("uniform", "log"):
            raise ValueError("spacing must be 'uniform' or 'log'")
        if self.spacing == "log" and self.stretch <= 0.0:
            raise ValueError("log stretch must be positive")


@dataclass(frozen=True)
class RadialProblem:
    """One separated 1-D eigenproblem.

    ``weight_exponent`` is the power k of the x^k weight (7, 8 or 4 here);
    ``weight_kind = 'sin7'`` selects the sin^7 weight of the polar
    equation instead.  ``centrifugal_coeff`` multiplies 1/x^2;
    ``effective_term`` is the remaining vectorized source.  The raw
    eigenvalue mu is reported as ``eigenvalue_scale * mu`` in the slot
    named by ``slot`` (2Z -> Z, 2E -> E, Lambda, -P / +P).
    """

    weight_exponent: int
    centrifugal_coeff: float
    effective_term: Callable
    domain: tuple
    weight_kind: str = "power"
    mass_term: Callable | None = None
    eigenvalue_scale: float = 1.0
    slot: str = "mu"
    extendable: bool = True
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        lo, hi = self.domain
        if not (hi > lo >= 0.0):
            raise ValueError("domain must satisfy hi > lo >= 0")
        if self.weight_kind not in ("power", "sin7"):
            raise ValueError("weight_kind must be 'power' or 'sin7'")

    def weight(self, x):
        if self.weight_kind == "sin7":
            return np.sin(x) ** 7
        return x ** float(self.weight_exponent)


@dataclass(frozen=True)
class Spectrum:
    """Lowest eigenpairs of a radial problem, ascending.

    ``eigenvalues`` are in the problem's physical slot, ``convergence``
    holds the estimated remaining error per state (from grid doubling) and
    ``residuals`` the discrete eigenpair defect, both in slot units.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    grid: np.ndarray
    residuals: np.ndarray
    convergence: np.ndarray | None
    node_counts: tuple
    slot: str


def _mapped_nodes(grid: Grid, lo: float, hi: float, n: int):
    ht = 1.0 / (n + 1)
    t_nodes = ht * np.arange(1, n + 1)
    t_half = ht * (np.arange(0, n + 1) + 0.5)
    if grid.spacing == "uniform":
        span = hi - lo
        return (
            lo + span * t_nodes,
            np.full(n, span),
            lo + span * t_half,
            np.full(n + 1, span),
            ht,
        )
    gam = grid.stretch
    den = math.expm1(gam)
    span = hi - lo
    x_nodes = lo + span * np.expm1(gam * t_nodes) / den
    g_nodes = span * gam * np.exp(gam * t_nodes) / den
    x_half = lo + span * np.expm1(gam * t_half) / den
    g_half = span * gam * np.exp(gam * t_half) / den
    return x_nodes, g_nodes, x_half, g_half, ht


def _solve_once(problem: RadialProblem, grid: Grid, lo: float, hi: float, n: int, k: int):
    x, g, xh, gh, ht = _mapped_nodes(grid, lo, hi, n)
    s_half = problem.weight(xh) / gh
    wm = problem.weight(x) * g
    q = problem.effective_term(x)
    if problem.centrifugal_coeff != 0.0:
        q = q + problem.centrifugal_coeff / x**2
    mass = wm if problem.mass_term is None else wm * problem.mass_term(x)
    a_diag = (s_half[:-1] + s_half[1:]) / ht**2 + q * wm
    a_off = -s_half[1:-1] / ht**2
    d = a_diag / mass
    e = a_off / np.sqrt(mass[:-1] * mass[1:])
    vals, chi = eigh_tridiagonal(d, e, select="i", select_range=(0, k - 1))
    # defect of the symmetric tridiagonal eigenpairs, scale-normalized
    res = np.empty(k)
    for j in range(k):
        v = chi[:, j]
        tv = d * v
        tv[:-1] += e * v[1:]
        tv[1:] += e * v[:-1]
        res[j] = np.linalg.norm(tv - vals[j] * v) / (1.0 + abs(vals[j]))
    vecs = chi / np.sqrt(mass)[:, None]
    for j in range(k):
        peak = np.max(np.abs(vecs[:, j]))
        vecs[:, j] /= peak
        lead = np.argmax(np.abs(vecs[:, j]) > 1e-3)
        if vecs[lead, j] < 0.0:
            vecs[:, j] = -vecs[:, j]
    return vals, vecs, x, res, chi


def _count_nodes(vec: np.ndarray) -> int:
    scale = np.max(np.abs(vec))
    sig = vec[np.abs(vec) > 1e-8 * scale]
    return int(np.count_nonzero(np.sign(sig[1:]) != np.sign(sig[:-1])))


def fd_eigensolve(
    problem: RadialProblem,
    grid: Grid,
    k: int,
    richardson: bool = True,
    conv_tol: float = 1e-5,
    auto_extend: bool = True,
    max_extensions: int = 6,
) -> Spectrum:
    """Lowest ``k`` eigenpairs of ``problem`` on ``grid``.

    With ``richardson`` (default) the solve runs on the grid and on its
    doubling; each eigenvalue is extrapolated and the residual grid change
    must stay below ``conv_tol * max(1, |mu|)`` or :class:`AccuracyError`
    is raised.  When the requested states have not decayed to e^-20 at the
    upper end, the domain is extended (times 1.5, preserving the node
    spacing) up to ``max_extensions`` times unless the problem is marked
    non-extendable or ``auto_extend`` is off.
    """
    if k < 1:
        raise ValueError("need at least one eigenvalue")
    if k > grid.n // 4:
        raise ValueError(f"k = {k} exceeds n/4 = {grid.n // 4}")
    lo, hi = problem.domain
    n = grid.n
    for attempt in range(max_extensions + 1):
        vals_f, vecs_f, x_f, res_f, chi_f = _solve_once(problem, grid, lo, hi, 2 * n + 1, k)
        tail = np.max(np.abs(chi_f[-2:, :k]), axis=0) / np.max(np.abs(chi_f[:, :k]), axis=0)
        if problem.extendable and np.any(tail > _TAIL_LIMIT):
            if not auto_extend:
                raise AccuracyError(
                    f"states have not decayed at hi = {hi:.6g} "
                    f"(tail fraction {np.max(tail):.3g}); enable auto_extend or enlarge hi"
                )
            if attempt == max_extensions:
                raise AccuracyError(
                    f"domain extension failed to contain the states (hi = {hi:.6g})"
                )
            hi = lo + (hi - lo) * 1.5
            n = int(n * 1.5)
            continue
        break
    if richardson:
        vals_c, _, _, _, _ = _solve_once(problem, grid, lo, hi, n, k)
        extrap = (4.0 * vals_f - vals_c) / 3.0
        conv = np.abs(vals_f - vals_c) / 3.0
        rel = conv / np.maximum(1.0, np.abs(extrap))
        if np.any(rel > conv_tol):
            worst = int(np.argmax(rel))
            raise AccuracyError(
                "grid doubling did not converge: state "
                f"{worst} changed by {conv[worst]:.3g} "
                f"(n = {n} vs {2 * n + 1}, tol = {conv_tol:.1g})"
            )
        values = extrap
    else:
        values = vals_f
        conv = None
    scale = problem.eigenvalue_scale
    return Spectrum(
        eigenvalues=values * scale,
        eigenvectors=vecs_f,
        grid=x_f,
        residuals=res_f * scale,
        convergence=None if conv is None else conv * scale,
        node_counts=tuple(_count_nodes(vecs_f[:, j]) for j in range(k)),
        slot=problem.slot,
    )


# ---------------------------------------------------------------------------
# Problem builders


def _osc_effective(potential: Potential8D):
    om2, a, b, variant = potential.omega**2, potential.a, potential.b, potential.variant

    def eff(r):
        v = 0.5 * om2 * r**2
        if variant == "sub2":
            v = v + a * r + b / r
        elif variant == "super2":
            v = v + b * r**4 + a * r**6
        return 2.0 * v

    return eff


def build_radial_problem(kind: str, **params) -> RadialProblem:
    """Assemble a :class:`RadialProblem` for one separated equation.

    kind = 'osc8'   : 8-D radial oscillator; needs potential, optional L,
                      rmax.  Slot Z (weight r^7, raw eigenvalue 2Z).
    kind = 'coul9'  : spherical-chart radial equation; needs Z (or a
                      separable model), lam (the angular eigenvalue) and
                      rmax.  Slot E (weight r^8, raw 2E).
    kind = 'theta'  : polar equation; needs micz.  Slot Lambda.
    kind = 'para_u' : parabolic u-equation; needs model, micz, energy,
                      wmax.  Slot -P (raw eigenvalue is -P).
    kind = 'para_v' : parabolic v-equation, slot +P.
    """
    kind = kind.lower()
    if kind == "osc8":
        potential: Potential8D = params["potential"]
        L = int(params.get("L", 0))
        rmax = params.get("rmax") or 14.0 / math.sqrt(potential.omega)
        return RadialProblem(
            weight_exponent=7,
            centrifugal_coeff=L * (L + 6) + 2.0 * potential.c,
            effective_term=_osc_effective(potential),
            domain=(0.0, rmax),
            eigenvalue_scale=0.5,
            slot="Z",
            meta={"L": L, "omega": potential.omega},
        )
    if kind == "coul9":
        model: OscillatorModel | None = params.get("model")
        if model is not None:
            require_spherically_separable(model)
            Z = model.Z
        else:
            Z = float(params["Z"])
        lam = float(params["lam"])
        rmax = float(params["rmax"])
        return RadialProblem(
            weight_exponent=8,
            centrifugal_coeff=lam,
            effective_term=lambda r: -2.0 * Z / r,
            domain=(0.0, rmax),
            eigenvalue_scale=0.5,
            slot="E",
            meta={"Z": Z, "lam": lam},
        )
    if kind == "theta":
        micz: MiczParams = params["micz"]
        alpha_u, alpha_v = micz_centrifugal_strengths(micz)

        def eff(th):
            q = np.zeros_like(th)
            if alpha_u != 0.0:
                q = q + alpha_u / np.cos(th / 2.0) ** 2
            if alpha_v != 0.0:
                q = q + alpha_v / np.sin(th / 2.0) ** 2
            return q

        return RadialProblem(
            weight_exponent=7,
            weight_kind="sin7",
            centrifugal_coeff=0.0,
            effective_term=eff,
            domain=(0.0, math.pi),
            slot="Lambda",
            extendable=False,
            meta={"alpha_u": alpha_u, "alpha_v": alpha_v},
        )
    if kind in ("para_u", "para_v"):
        model: OscillatorModel = params["model"]
        micz: MiczParams = params["micz"]
        energy = params.get("energy")
        wmax = float(params["wmax"])
        alpha_u, alpha_v = micz_centrifugal_strengths(micz)
        wu, wv = parabolic_W(model, E1=energy, E2=energy)
        if kind == "para_u":
            alpha, weval, slot = alpha_u, wu, "-P"
        else:
            alpha, weval, slot = alpha_v, wv, "P"
        return RadialProblem(
            weight_exponent=4,
            centrifugal_coeff=alpha,
            effective_term=lambda w: weval(w) / w,
            domain=(0.0, wmax),
            mass_term=lambda w: 1.0 / w,
            slot=slot,
            meta={"alpha": alpha, "energy": energy, "W": weval},
        )
    raise ValueError(f"unknown problem kind {kind!r}")


def qes_verification_problem(potential: Potential8D, dim: int, rmax: float) -> RadialProblem:
    """Radial problem matching the QES reduced operator -f'' - (dim/r)f' + V f."""

    def eff(r):
        v = 0.5 * potential.omega**2 * r**2
        if potential.c != 0.0:
            v = v + potential.c / r**2
        if potential.variant == "sub2":
            v = v + potential.a * r + potential.b / r
        elif potential.variant == "super2":
            v = v + potential.b * r**4 + potential.a * r**6
        return v

    return RadialProblem(
        weight_exponent=int(dim),
        centrifugal_coeff=0.0,
        effective_term=eff,
        domain=(0.0, rmax),
        slot="E",
        meta={"dim": dim},
    )


# ---------------------------------------------------------------------------
# Parabolic joint eigenvalue search


@dataclass(frozen=True)
class JointState:
    """A matched parabolic eigenstate: energy, separation constant, nodes."""

    E: float
    P: float
    node_u: int
    node_v: int
    mismatch: float
    residual_u: float
    residual_v: float


def parabolic_joint_solve(
    model: OscillatorModel,
    micz: MiczParams,
    grid: Grid,
    bracket: tuple,
    branch_max: int = 2,
    conv_tol: float = 1e-5,
) -> JointState:
    """Find E in ``bracket`` where the u- and v-equations share a P.

    For fixed E, the u-equation eigenvalues are -P-candidates and the
    v-equation eigenvalues are +P-candidates; a physical state needs a
    branch pair (i, j) with mu_u[i](E) + mu_v[j](E) = 0, the branch index
    being the node count.  Sign changes of the mismatch over the bracket
    are refined by bracketed root finding; with several states in the
    bracket the lowest E wins and degenerate pairs are broken by the
    smallest |P|.
    """
    e_lo, e_hi = bracket
    if not (e_lo < e_hi < 0.0):
        raise ValueError("bracket must satisfy E_lo < E_hi < 0")
    kappa_min = math.sqrt(-2.0 * e_hi)
    wmax = 50.0 / kappa_min
    n = max(grid.n, int(wmax / 0.1))
    work = Grid(n=n, spacing=grid.spacing, stretch=grid.stretch)
    kb = branch_max + 1
    cache: dict = {}

    def spectra(energy: float):
        if energy not in cache:
            pu = build_radial_problem(
                "para_u", model=model, micz=micz, energy=energy, wmax=wmax
            )
            pv = build_radial_problem(
                "para_v", model=model, micz=micz, energy=energy, wmax=wmax
            )
            su = fd_eigensolve(pu, work, kb, conv_tol=conv_tol)
            sv = fd_eigensolve(pv, work, kb, conv_tol=conv_tol)
            cache[energy] = (su, sv)
        return cache[energy]

    states = []
    for i in range(kb):
        for j in range(kb):
            if i + j > branch_max:
                continue

            def mism(energy, i=i, j=j):
                su, sv = spectra(energy)
                return su.eigenvalues[i] + sv.eigenvalues[j]

            f_lo, f_hi = mism(e_lo), mism(e_hi)
            if f_lo == 0.0:
                root = e_lo
            elif f_hi == 0.0:
                root = e_hi
            elif f_lo * f_hi < 0.0:
                root = brentq(mism, e_lo, e_hi, xtol=1e-14, rtol=1e-14)
            else:
                continue
            su, sv = spectra(root)
            states.append(
                JointState(
                    E=root,
                    P=sv.eigenvalues[j],
                    node_u=su.node_counts[i],
                    node_v=sv.node_counts[j],
                    mismatch=abs(su.eigenvalues[i] + sv.eigenvalues[j]),
                    residual_u=float(su.residuals[i]),
                    residual_v=float(sv.residuals[j]),
                )
            )
    if not states:
        raise BracketError(
            f"no eigenvalue match changes sign in the bracket ({e_lo:.6g}, {e_hi:.6g})"
        )
    best_e = min(s.E for s in states)
    group = [s for s in states if abs(s.E - best_e) <= 1e-8 * abs(best_e)]
    return min(group, key=lambda s: abs(s.P))


def spherical_micz_energies(
    micz: MiczParams,
    n_theta: int,
    n_radial: int,
    grid_theta: Grid,
    grid_radial: Grid,
    rmax: float,
) -> list:
    """Spherical-chart energies: polar eigenvalues then radial solves.

    Returns tuples (E, n_theta_index, N, Lambda) sorted by energy.
    """
    theta_spec = fd_eigensolve(build_radial_problem("theta", micz=micz), grid_theta, n_theta)
    out = []
    for it, lam in enumerate(theta_spec.eigenvalues):
        prob = build_radial_problem("coul9", Z=micz.Z, lam=max(lam, 0.0), rmax=rmax)
        spec = fd_eigensolve(prob, grid_radial, n_radial)
        for N in range(n_radial):
            out.append((float(spec.eigenvalues[N]), it, N, float(lam)))
    out.sort(key=lambda t: t[0])
    return out
