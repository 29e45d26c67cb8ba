"""Bound-state bands from the transcendental eigenvalue equation.

Energies are ``eps = (E - hbar*omega) / 2J`` and momenta are in radians per
cell. On the attractive branch (``eps < delta``) the eigenvalue condition is
the zero of

    G(eps) = sqrt((delta - eps)**2 - cos(K/2)**2) - (a - b**2 / (eps + cos K))

which is strictly decreasing on both brackets used here:

* Band 1 on ``(-cos K + b**2/a, delta - |cos(K/2)|)``,
* Band 2 on ``(eps_lower, -cos K)`` just below the photon line.
"""
from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from qpbands import kernels
from qpbands.errors import DomainError, PoleError
from qpbands.params import NormalizedParams

DEFAULT_TOL = 1e-12
DEFAULT_GTOL = 1e-12
DEFAULT_MAXITER = 200
DEFAULT_K_POINTS = 401

_EPS = sys.float_info.epsilon


class Band(str, enum.Enum):
    BAND1 = "band1"
    BAND2 = "band2"


class Branch(str, enum.Enum):
    ATTRACTIVE = "attractive"
    REPULSIVE = "repulsive"


@dataclass(frozen=True)
class ContinuumSlice:
    k: float
    lo: float
    hi: float


@dataclass(frozen=True)
class BandPoint:
    k: float
    eps: float
    band: Band
    residual: float
    a_prime: float


@dataclass
class BandCurve:
    """Band over a K grid; ``points[i]`` is ``None`` where no root exists."""

    k: np.ndarray
    points: list
    params: NormalizedParams
    band: Band
    errors: dict = field(default_factory=dict)

    def energies(self) -> np.ndarray:
        """Energies aligned with ``k``; NaN marks gaps (internal use only)."""
        return np.array([np.nan if p is None else p.eps for p in self.points])

    def solved(self) -> list:
        return [p for p in self.points if p is not None]


@dataclass
class BandScan:
    k: np.ndarray
    band1: BandCurve
    band2: BandCurve
    continuum: list
    photon: np.ndarray
    params: NormalizedParams


@dataclass(frozen=True)
class BandEdges:
    """Both roots of the band-edge quadratic at ``K = pi``.

    ``eps_plus``/``eps_minus`` carry the sign in front of the square root;
    both are ``None`` when the discriminant is negative (``real=False``).
    """

    branch: Branch
    eps_plus: Optional[float]
    eps_minus: Optional[float]
    real: bool


@dataclass(frozen=True)
class AsymptoticEdges:
    branch: Branch
    eps_plus: float
    eps_minus: float
    expansion_parameter: float
    warning: Optional[str] = None


@dataclass(frozen=True)
class RepulsiveExistence:
    exists: bool
    margin: float


@dataclass(frozen=True)
class Flatness:
    bandwidth: float
    relative: float


def continuum_dispersion(q: float, K: float, np_: NormalizedParams) -> float:
    return np_.delta - math.cos(q) * math.cos(0.5 * K)


def continuum_edges(K: float, np_: NormalizedParams) -> ContinuumSlice:
    c = abs(math.cos(0.5 * K))
    return ContinuumSlice(k=K, lo=np_.delta - c, hi=np_.delta + c)


def photon_line(K: float) -> float:
    return -math.cos(K)


def _at_pole(eps: float, K: float) -> bool:
    return abs(eps + math.cos(K)) <= 4.0 * _EPS * max(1.0, abs(eps))


def effective_coupling(eps: float, K: float, np_: NormalizedParams) -> float:
    """Energy-dependent defect strength ``a'(K) = -a + b**2/(eps + cos K)``."""
    if np_.b == 0.0:
        return -np_.a
    if _at_pole(eps, K):
        raise PoleError(f"eps={eps!r} sits on the photon line -cos K at K={K!r}")
    return -np_.a + np_.b**2 / (eps + math.cos(K))


def residual(eps: float, K: float, np_: NormalizedParams) -> float:
    """Residual ``G(eps)`` of the eigenvalue equation on the attractive branch.

    Raises
    ------
    DomainError
        If ``eps`` is not strictly below the lower continuum edge.
    PoleError
        If ``eps`` coincides with ``-cos K`` (only when ``b != 0``).
    """
    c = abs(math.cos(0.5 * K))
    if not eps < np_.delta - c:
        raise DomainError(
            f"eps={eps!r} is not below the continuum edge delta-|cos(K/2)|={np_.delta - c!r}"
        )
    if np_.b != 0.0 and _at_pole(eps, K):
        raise PoleError(f"eps={eps!r} sits on the photon line at K={K!r}")
    return kernels.residual(eps, math.cos(K), c, np_.a, np_.b**2, np_.delta)


def _check_solver_args(tol, maxiter):
    if not tol > 0.0:
        raise DomainError(f"tol must be > 0, got {tol!r}")
    if maxiter < 1:
        raise DomainError(f"maxiter must be >= 1, got {maxiter!r}")


def _point(K, eps, res, status, band, np_):
    if status == kernels.ABSENT:
        return None
    if status == kernels.MAXITER:
        raise RuntimeError(f"{band.value}: bisection hit the iteration cap at K={K!r}")
    return BandPoint(k=K, eps=eps, band=band, residual=res,
                     a_prime=effective_coupling(eps, K, np_))


def solve_band1(K: float, np_: NormalizedParams, tol: float = DEFAULT_TOL, *,
                gtol: float = DEFAULT_GTOL, maxiter: int = DEFAULT_MAXITER) -> Optional[BandPoint]:
    """Upper bound state, between the photon line and the continuum.

    Returns ``None`` if ``G`` does not change sign on the bracket.
    """
    _check_solver_args(tol, maxiter)
    eps, res, status = kernels.band1_root(K, np_.a, np_.b, np_.delta, tol, gtol, maxiter)
    return _point(K, eps, res, status, Band.BAND1, np_)


def solve_band2(K: float, np_: NormalizedParams, tol: float = DEFAULT_TOL, *,
                gtol: float = DEFAULT_GTOL, maxiter: int = DEFAULT_MAXITER) -> Optional[BandPoint]:
    """Photon-like bound state just below ``-cos K``; ``None`` when ``b = 0``.

    The lower end of the bracket is found by doubling a step away from the
    pole, starting at ``b**2/(delta + a)``.
    """
    _check_solver_args(tol, maxiter)
    eps, res, status = kernels.band2_root(K, np_.a, np_.b, np_.delta, tol, gtol, maxiter)
    return _point(K, eps, res, status, Band.BAND2, np_)


def k_grid(k_points: int = DEFAULT_K_POINTS) -> np.ndarray:
    """Uniform grid on ``[-pi, pi]``; odd counts put ``0`` and ``+-pi`` on it.

    The two halves are mirrored exactly so ``K`` and ``-K`` give bitwise-equal
    cosines.
    """
    if k_points < 3 or k_points % 2 == 0:
        raise DomainError(f"k_points must be odd and >= 3, got {k_points!r}")
    half = np.linspace(0.0, math.pi, k_points // 2 + 1)
    return np.concatenate([-half[:0:-1], half])


def scan_bands(np_: NormalizedParams, k=None, tol: float = DEFAULT_TOL, *,
               gtol: float = DEFAULT_GTOL, maxiter: int = DEFAULT_MAXITER) -> BandScan:
    """Solve both bands on a K grid.

    Absent roots stay as gaps. A point that fails (iteration cap, a pole at
    the root) is recorded in ``BandCurve.errors`` keyed by grid index and the
    scan carries on.
    """
    _check_solver_args(tol, maxiter)
    k = k_grid() if k is None else np.asarray(k, dtype=np.float64)
    if k.ndim != 1 or np.any(np.abs(k) > math.pi):
        raise DomainError("K grid must be one-dimensional and within [-pi, pi]")
    eps1, res1, st1, eps2, res2, st2 = kernels.solve_grid(
        k, np_.a, np_.b, np_.delta, tol, gtol, maxiter)

    curves = []
    for band, eps, res, st in ((Band.BAND1, eps1, res1, st1), (Band.BAND2, eps2, res2, st2)):
        points, errors = [], {}
        for i, K in enumerate(k.tolist()):
            try:
                points.append(_point(K, float(eps[i]), float(res[i]), int(st[i]), band, np_))
            except (RuntimeError, PoleError) as exc:
                points.append(None)
                errors[i] = str(exc)
        curves.append(BandCurve(k=k, points=points, params=np_, band=band, errors=errors))

    continuum = [continuum_edges(K, np_) for K in k.tolist()]
    photon = -np.cos(k)
    return BandScan(k=k, band1=curves[0], band2=curves[1], continuum=continuum,
                    photon=photon, params=np_)


def pure_attractive(K, np_: NormalizedParams):
    """Band 1 with the repulsive channel switched off: ``delta - sqrt(a**2 + cos(K/2)**2)``."""
    return np_.delta - np.sqrt(np_.a**2 + np.cos(0.5 * np.asarray(K)) ** 2)


def band_edge_closed_form(np_: NormalizedParams, branch: Branch = Branch.ATTRACTIVE) -> BandEdges:
    """Exact roots of the band-edge quadratic at ``K = pi``.

    Attractive::

        eps_pm = (1 + delta - a)/2 +- (1 - delta + a)/2 * sqrt(1 + (2b/(1 - delta + a))**2)

    Repulsive is the same with ``a -> -a`` and a minus sign under the root,
    which can go negative. ``a*gamma`` is written as ``2b`` throughout.
    """
    a, b, d = np_.a, np_.b, np_.delta
    if Branch(branch) is Branch.ATTRACTIVE:
        s = 1.0 - d + a
        disc = 1.0 + (2.0 * b / s) ** 2
        centre = 0.5 * (1.0 + d - a)
    else:
        s = 1.0 - d - a
        disc = 1.0 - (2.0 * b / s) ** 2
        centre = 0.5 * (1.0 + d + a)
    if disc < 0.0:
        return BandEdges(branch=Branch(branch), eps_plus=None, eps_minus=None, real=False)
    half = 0.5 * s * math.sqrt(disc)
    return BandEdges(branch=Branch(branch), eps_plus=centre + half, eps_minus=centre - half, real=True)


def band_edge_asymptotic(np_: NormalizedParams, branch: Branch = Branch.ATTRACTIVE) -> AsymptoticEdges:
    """Leading-order expansion of :func:`band_edge_closed_form` in ``(2b/(1 - delta -+ a))**2``.

    A warning string is attached when the expansion parameter is not below 1.
    """
    a, b, d = np_.a, np_.b, np_.delta
    if Branch(branch) is Branch.ATTRACTIVE:
        s = 1.0 - d + a
        eps_minus = d - a - b * b / s
        eps_plus = 1.0 + b * b / s
    else:
        s = 1.0 - d - a
        eps_minus = d + a - b * b / (d + a - 1.0)
        eps_plus = 1.0 - b * b / s
    x = abs(2.0 * b / s)
    warning = None
    if x >= 1.0:
        warning = f"expansion parameter |2b/(1-delta{'+' if branch == Branch.ATTRACTIVE else '-'}a)| = {x:.3g} >= 1"
    return AsymptoticEdges(branch=Branch(branch), eps_plus=eps_plus, eps_minus=eps_minus,
                           expansion_parameter=x, warning=warning)


def edge_root_consistent(eps: float, np_: NormalizedParams) -> bool:
    """Whether a ``K = pi`` root is admissible: ``sign(eps - delta) == sign(a'(pi))``."""
    ap = effective_coupling(eps, math.pi, np_)
    return (eps - np_.delta) * ap > 0.0


def repulsive_existence(np_: NormalizedParams) -> RepulsiveExistence:
    """Existence test ``delta + a < 1 + a*(gamma/2)**2`` for the repulsive branch."""
    if np_.a > 0.0:
        gain = np_.b**2 / np_.a
    else:
        gain = math.inf if np_.b > 0.0 else 0.0
    margin = 1.0 + gain - np_.delta - np_.a
    return RepulsiveExistence(exists=bool(margin > 0.0), margin=margin)


def flatness(curve: BandCurve) -> Flatness:
    eps = [p.eps for p in curve.solved()]
    if not eps:
        raise DomainError("flatness of an empty band")
    width = max(eps) - min(eps)
    return Flatness(bandwidth=width, relative=width / curve.params.delta)
