"""Finite-ring exact diagonalization of the one-photon sector.

The Hilbert space is spanned by a photon on site ``m`` with all qubits in the
ground state (amplitude ``u_m``) and by a photon on ``m`` together with an
excited qubit on ``n`` (amplitude ``Psi_{m,n}``). Matrix elements are in units
of ``2J`` with the photon energy ``hbar*omega`` removed:

* ``u``-sector hopping ``-1/2`` between neighbouring sites,
* ``Psi``-sector: diagonal ``delta``, each coordinate hops with ``-1/4``,
  on-site defect ``-a`` on ``Psi_{m,m}``,
* coupling ``b`` between ``u_m`` and ``Psi_{m,m}``.

At fixed total momentum ``K = 2*pi*j/N`` the ``Psi`` sector collapses to a
ring in the relative coordinate ``l = m - n`` with hopping
``-cos(K/2)/2`` and a wrap-bond sign ``(-1)**j``; the photon sector is a
single level ``-cos K`` coupled to ``l = 0``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from qpbands import spectrum
from qpbands.errors import AmbiguityError, DomainError
from qpbands.params import NormalizedParams

BOUND_FACTOR = 5.0
MIN_THRESHOLD = 1e-9


class Level(str, enum.Enum):
    BOUND_BELOW = "bound_below"
    CONTINUUM = "continuum"
    BOUND_ABOVE = "bound_above"
    PHOTON_LINE = "photon_line"


@dataclass(frozen=True)
class RingModel:
    """Ring of ``n_cells`` unit cells; ``k_index=None`` selects the full
    real-space representation, an integer selects one momentum block."""

    n_cells: int
    params: NormalizedParams
    k_index: Optional[int] = None

    def __post_init__(self):
        if self.n_cells < 4:
            raise DomainError(f"ring needs at least 4 cells, got {self.n_cells}")
        if self.n_cells % 2:
            raise DomainError(f"odd ring sizes are not supported, got {self.n_cells}")
        if self.k_index is not None and not 0 <= self.k_index < self.n_cells:
            raise DomainError(f"k_index must lie in [0, {self.n_cells}), got {self.k_index}")

    @property
    def k(self) -> float:
        if self.k_index is None:
            raise DomainError("full real-space model has no single K")
        return ring_momentum(self.k_index, self.n_cells)


@dataclass
class SpectralResult:
    eigenvalues: np.ndarray
    classes: list
    eigenvectors: Optional[np.ndarray] = None
    k: Optional[float] = None


@dataclass
class BoundStates:
    band1: Optional[float]
    band2: Optional[float]
    band1_resolvable: bool
    band2_resolvable: bool


@dataclass
class KComparison:
    k_index: int
    k: float
    oracle_band1: Optional[float]
    oracle_band2: Optional[float]
    solver_band1: Optional[float]
    solver_band2: Optional[float]
    delta_band1: Optional[float]
    delta_band2: Optional[float]
    band1_resolvable: bool
    band2_resolvable: bool


@dataclass
class ComparisonReport:
    n_cells: int
    rows: list
    max_delta_band1: float
    max_delta_band2: float
    unresolvable: list
    multiset_max_delta: Optional[float] = None
    notes: list = field(default_factory=list)

    def failures(self, tol: float, multiset_tol: float = 1e-9) -> list:
        out = []
        for r in self.rows:
            for band in ("band1", "band2"):
                resolvable = getattr(r, f"{band}_resolvable")
                delta = getattr(r, f"delta_{band}")
                solver = getattr(r, f"solver_{band}")
                oracle = getattr(r, f"oracle_{band}")
                if not resolvable:
                    continue
                if (solver is None) != (oracle is None):
                    out.append({"k_index": r.k_index, "band": band, "reason": "presence mismatch"})
                elif delta is not None and not delta < tol:
                    out.append({"k_index": r.k_index, "band": band, "reason": "delta",
                                "delta": delta})
        if self.multiset_max_delta is not None and not self.multiset_max_delta < multiset_tol:
            out.append({"reason": "block spectra differ from full spectrum",
                        "delta": self.multiset_max_delta})
        return out


def ring_momentum(k_index: int, n_cells: int) -> float:
    """``2*pi*j/N`` folded into ``[-pi, pi]`` (``j = N/2`` maps to ``+pi``)."""
    k = 2.0 * math.pi * k_index / n_cells
    if k_index > n_cells // 2:
        k = 2.0 * math.pi * (k_index - n_cells) / n_cells
    return k


def relative_momenta(k_index: int, n_cells: int) -> np.ndarray:
    """Momenta of the free relative-coordinate ring with wrap sign ``(-1)**j``."""
    return (2.0 * math.pi * np.arange(n_cells) + math.pi * k_index) / n_cells


def build_full_hamiltonian(m: RingModel) -> np.ndarray:
    """Dense real symmetric matrix of dimension ``N + N**2``.

    Basis order: ``u_0 .. u_{N-1}`` then ``Psi_{m,n}`` at ``N + m*N + n``
    (photon site ``m``, qubit site ``n``).
    """
    if m.k_index is not None:
        raise DomainError("build_full_hamiltonian needs the full real-space representation")
    N, p = m.n_cells, m.params
    dim = N + N * N
    H = np.zeros((dim, dim))
    site = np.arange(N)
    nxt = (site + 1) % N
    H[site, nxt] = -0.5
    H[nxt, site] = -0.5

    mm, nn = np.meshgrid(site, site, indexing="ij")
    idx = N + mm * N + nn
    H[idx, idx] = p.delta
    for shifted in (N + nxt[mm] * N + nn, N + mm * N + nxt[nn]):
        H[idx, shifted] += -0.25
        H[shifted, idx] += -0.25

    diag = N + site * N + site
    H[diag, diag] -= p.a
    H[site, diag] = p.b
    H[diag, site] = p.b
    return H


def build_k_block(m: RingModel) -> np.ndarray:
    """Real symmetric ``(N+1) x (N+1)`` block at ``K = 2*pi*j/N``.

    Rows ``0..N-1`` are ``Phi_l``; row ``N`` is the photon amplitude ``u_K``.
    """
    if m.k_index is None:
        raise DomainError("build_k_block needs a k_index")
    N, p, j = m.n_cells, m.params, m.k_index
    K = m.k
    t = -0.5 * math.cos(0.5 * 2.0 * math.pi * j / N)
    H = np.zeros((N + 1, N + 1))
    l = np.arange(N - 1)
    H[np.arange(N), np.arange(N)] = p.delta
    H[l, l + 1] = t
    H[l + 1, l] = t
    wrap = t * (-1.0) ** j
    H[N - 1, 0] += wrap
    H[0, N - 1] += wrap
    H[0, 0] -= p.a
    H[0, N] = p.b
    H[N, 0] = p.b
    H[N, N] = -math.cos(K)
    return H


def schur_defect(m: RingModel, eps: float) -> float:
    """On-site energy of ``Phi_0`` after eliminating ``u_K`` at energy ``eps``."""
    H = build_k_block(m)
    N = m.n_cells
    return H[0, 0] + H[0, N] * H[N, 0] / (eps - H[N, N])


def _free_spacing(levels: np.ndarray) -> float:
    levels = np.sort(levels)
    gaps = np.diff(levels)
    gaps = gaps[gaps > 1e-12 * max(1.0, abs(levels[0]))]
    return float(gaps[0]) if gaps.size else 0.0


def continuum_spacing(k_index: int, n_cells: int) -> float:
    """Level spacing at the bottom of the free relative-coordinate ring."""
    c = math.cos(math.pi * k_index / n_cells)
    return _free_spacing(-c * np.cos(relative_momenta(k_index, n_cells)))


def photon_spacing(k_index: int, n_cells: int) -> float:
    """Largest gap between ``-cos K`` and the neighbouring ring photon levels."""
    dk = 2.0 * math.pi / n_cells
    K = ring_momentum(k_index, n_cells)
    return max(abs(math.cos(K) - math.cos(K + dk)), abs(math.cos(K) - math.cos(K - dk)))


def _threshold(spacing: float) -> float:
    return max(BOUND_FACTOR * spacing, MIN_THRESHOLD)


def eigensolve(matrix, model: Optional[RingModel] = None, vectors: bool = False) -> SpectralResult:
    """Full spectrum of a real symmetric matrix with per-level classification.

    Without a model every level is tagged continuum. A k-block model
    classifies against ``[delta - |cos(K/2)|, delta + |cos(K/2)|]`` widened by
    the resolvability threshold; the full model uses ``[delta - 1, delta + 1]``.
    Levels within ``1e-9`` of the free photon level ``-cos K`` are tagged
    ``photon_line``.
    """
    H = np.asarray(matrix)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DomainError("eigensolve needs a square matrix")
    if not np.all(np.isfinite(H)):
        raise DomainError("matrix has non-finite entries")
    if vectors:
        w, v = np.linalg.eigh(H)
    else:
        w, v = np.linalg.eigvalsh(H), None

    k = None
    if model is None:
        classes = [Level.CONTINUUM] * len(w)
    else:
        p = model.params
        if model.k_index is None:
            lo, hi = p.delta - 1.0, p.delta + 1.0
            thr = _threshold(continuum_spacing(0, model.n_cells))
            photon = None
        else:
            k = model.k
            c = abs(math.cos(0.5 * k))
            lo, hi = p.delta - c, p.delta + c
            thr = _threshold(continuum_spacing(model.k_index, model.n_cells))
            photon = -math.cos(k)
        classes = []
        for e in w:
            if photon is not None and abs(e - photon) <= MIN_THRESHOLD:
                classes.append(Level.PHOTON_LINE)
            elif e < lo - thr:
                classes.append(Level.BOUND_BELOW)
            elif e > hi + thr:
                classes.append(Level.BOUND_ABOVE)
            else:
                classes.append(Level.CONTINUUM)
    return SpectralResult(eigenvalues=w, classes=classes, eigenvectors=v, k=k)


def extract_bound_states(r: SpectralResult, model: RingModel) -> BoundStates:
    """Pick Band 1 (between ``-cos K`` and the continuum) and Band 2 (below
    ``-cos K``) out of a block spectrum.

    Band 1 candidates closer to the continuum than the threshold, and Band 2
    candidates whose offset below the photon line is smaller than five ring
    photon spacings, are reported absent and flagged unresolvable.
    """
    if model.k_index is None or r.k is None:
        raise DomainError("extract_bound_states needs a k-block spectrum")
    K, p = r.k, model.params
    photon = -math.cos(K)
    c = abs(math.cos(0.5 * K))
    lo = p.delta - c

    below_photon = [e for e in r.eigenvalues if e < photon - MIN_THRESHOLD]
    between = [e for e in r.eigenvalues if photon + MIN_THRESHOLD < e < lo - MIN_THRESHOLD]
    if len(between) > 1:
        raise AmbiguityError(f"{len(between)} Band 1 candidates at K={K!r}")
    if len(below_photon) > 1:
        raise AmbiguityError(f"{len(below_photon)} Band 2 candidates at K={K!r}")

    band1 = between[0] if between else None
    band2 = below_photon[0] if below_photon else None
    res1 = res2 = True
    if band1 is not None and not lo - band1 > _threshold(continuum_spacing(model.k_index, model.n_cells)):
        band1, res1 = None, False
    if band2 is not None and not photon - band2 > _threshold(photon_spacing(model.k_index, model.n_cells)):
        band2, res2 = None, False
    return BoundStates(band1=None if band1 is None else float(band1),
                       band2=None if band2 is None else float(band2),
                       band1_resolvable=res1, band2_resolvable=res2)


def secular_residual(eps: float, k_index: int, n_cells: int, np_: NormalizedParams) -> float:
    """``1 - a'(K, eps) * (1/N) * sum_q 1/(eps - delta + cos(K/2) cos q)`` on the
    twisted relative-momentum grid."""
    K = ring_momentum(k_index, n_cells)
    c = math.cos(math.pi * k_index / n_cells)
    q = relative_momenta(k_index, n_cells)
    mean = float(np.mean(1.0 / (eps - np_.delta + c * np.cos(q))))
    return 1.0 - spectrum.effective_coupling(eps, K, np_) * mean


def block_secular_residuals(model: RingModel, gap: float = 1e-6) -> list:
    """Secular residuals of every block eigenvalue at least ``gap`` outside the continuum."""
    w = np.linalg.eigvalsh(build_k_block(model))
    K = model.k
    c = abs(math.cos(0.5 * K))
    p = model.params
    out = []
    for e in w:
        if abs(e - p.delta) <= c + gap:
            continue
        if p.b == 0.0 and abs(e + math.cos(K)) <= MIN_THRESHOLD:
            continue  # decoupled photon level, no secular equation
        out.append((float(e), secular_residual(float(e), model.k_index, model.n_cells, p)))
    return out


def block_spectra(np_: NormalizedParams, n_cells: int) -> np.ndarray:
    return np.sort(np.concatenate([
        np.linalg.eigvalsh(build_k_block(RingModel(n_cells, np_, j))) for j in range(n_cells)
    ]))


def full_spectrum(np_: NormalizedParams, n_cells: int) -> np.ndarray:
    return np.linalg.eigvalsh(build_full_hamiltonian(RingModel(n_cells, np_)))


def exchange_asymmetry(vector: np.ndarray, n_cells: int) -> float:
    """``||Psi - Psi^T|| / ||Psi||`` for the two-particle part of a full-space vector."""
    psi = np.asarray(vector)[n_cells:].reshape(n_cells, n_cells)
    norm = np.linalg.norm(psi)
    return float(np.linalg.norm(psi - psi.T) / norm) if norm > 0 else 0.0


def compare_with_solver(np_: NormalizedParams, n_cells: int = 64,
                        tol: float = spectrum.DEFAULT_TOL, full_check: bool = True) -> ComparisonReport:
    """Oracle vs. transcendental solver at every ring momentum.

    Unresolvable points are listed, not failed. With ``full_check`` the
    union of block spectra is also compared against the full real-space
    spectrum (dense, ``(N + N**2)``-dimensional).
    """
    if n_cells < 16:
        raise DomainError(f"comparison needs at least 16 cells, got {n_cells}")
    RingModel(n_cells, np_)  # validates parity
    rows, unresolvable = [], []
    for j in range(n_cells):
        model = RingModel(n_cells, np_, j)
        K = model.k
        bs = extract_bound_states(eigensolve(build_k_block(model), model), model)
        s1 = spectrum.solve_band1(K, np_, tol)
        s2 = spectrum.solve_band2(K, np_, tol)
        e1 = None if s1 is None else s1.eps
        e2 = None if s2 is None else s2.eps
        d1 = abs(e1 - bs.band1) if e1 is not None and bs.band1 is not None else None
        d2 = abs(e2 - bs.band2) if e2 is not None and bs.band2 is not None else None
        rows.append(KComparison(j, K, bs.band1, bs.band2, e1, e2, d1, d2,
                                bs.band1_resolvable, bs.band2_resolvable))
        for band, ok in (("band1", bs.band1_resolvable), ("band2", bs.band2_resolvable)):
            if not ok:
                unresolvable.append({"k_index": j, "band": band})

    d1s = [r.delta_band1 for r in rows if r.delta_band1 is not None]
    d2s = [r.delta_band2 for r in rows if r.delta_band2 is not None]
    report = ComparisonReport(
        n_cells=n_cells, rows=rows,
        max_delta_band1=max(d1s) if d1s else 0.0,
        max_delta_band2=max(d2s) if d2s else 0.0,
        unresolvable=unresolvable,
    )
    if full_check:
        report.multiset_max_delta = float(np.max(np.abs(
            full_spectrum(np_, n_cells) - block_spectra(np_, n_cells))))
    return report
