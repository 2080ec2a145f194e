"""Physics payloads on top of the distance: piecewise-constant evolution,
achievability checks, charging-power bounds, the two-qubit classical
protocols, and the charging-distance speed limits t_CD and t_mCD.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from . import matcore, states
from .config import DEFAULT_TOLERANCES
from .distance import DistanceResult, OptimizerOptions, distance_general
from .errors import DegeneratePower, DegenerateSpeed, InvalidDimension, InvalidProtocol
from .states import DensityMatrix


@dataclass(frozen=True)
class DriveProtocol:
    """Piecewise-constant drive schedule: ordered (Hamiltonian, duration) segments."""

    segments: tuple[tuple[np.ndarray, float], ...]

    def __post_init__(self):
        checked = []
        for k, (h, tau) in enumerate(self.segments):
            if tau <= 0:
                raise InvalidProtocol(f"segment {k} duration {tau!r} must be positive")
            checked.append((matcore.check_hermitian(h), float(tau)))
        object.__setattr__(self, "segments", tuple(checked))

    @property
    def total_time(self) -> float:
        return sum(tau for _, tau in self.segments)

    @property
    def dim(self) -> int:
        if not self.segments:
            raise InvalidProtocol("empty protocol has no dimension")
        return self.segments[0][0].shape[0]

    def truncated(self, t: float) -> "DriveProtocol":
        """Prefix of the schedule covering [0, t], splitting the last segment."""
        out = []
        left = t
        for h, tau in self.segments:
            if left <= 0:
                break
            out.append((h, min(tau, left)))
            left -= tau
        return DriveProtocol(tuple(out))


def segment_propagator(h: np.ndarray, tau: float) -> np.ndarray:
    """exp(-i h tau) for Hermitian h, via eigendecomposition."""
    w, v = np.linalg.eigh(matcore.hermitize(h))
    return (v * np.exp(-1j * w * tau)) @ v.conj().T


def propagator(protocol: DriveProtocol, dim: int | None = None) -> np.ndarray:
    """Total time-ordered propagator; the first segment acts first."""
    if not protocol.segments:
        if dim is None:
            raise InvalidProtocol("empty protocol needs an explicit dimension")
        return np.eye(dim, dtype=complex)
    u = np.eye(protocol.dim, dtype=complex)
    for h, tau in protocol.segments:
        u = segment_propagator(h, tau) @ u
    return u


def evolve(protocol: DriveProtocol, rho: DensityMatrix) -> DensityMatrix:
    """Apply the protocol's propagator to rho."""
    if protocol.segments and protocol.dim != rho.dim:
        raise InvalidDimension(
            f"protocol dim {protocol.dim} does not match state dim {rho.dim}")
    u = propagator(protocol, dim=rho.dim)
    return DensityMatrix(matcore.hermitize(u @ rho.matrix @ u.conj().T))


@dataclass(frozen=True)
class AchievabilityReport:
    residual: float
    passed: bool
    tolerance: float


def verify_achievability(result: DistanceResult, rho: DensityMatrix,
                         sigma: DensityMatrix,
                         tol: float | None = None) -> AchievabilityReport:
    """Evolve rho for time `value` under the result's drive and compare to sigma."""
    tol = DEFAULT_TOLERANCES.achievability if tol is None else tol
    if result.optimal_hamiltonian is None or result.value == 0.0:
        evolved = rho
    else:
        protocol = DriveProtocol(((result.optimal_hamiltonian, result.value),))
        evolved = evolve(protocol, rho)
    residual = float(np.linalg.norm(evolved.matrix - sigma.matrix))
    return AchievabilityReport(residual=residual, passed=residual <= tol, tolerance=tol)


# ---------------------------------------------------------------------------
# two-qubit charging
# ---------------------------------------------------------------------------

_LOWER = 1j * np.array([[0, 1], [-1, 0]], dtype=complex)  # i(|0><1| - |1><0|)
_I2 = np.eye(2, dtype=complex)


def classical_two_qubit_protocols() -> tuple[DriveProtocol, DriveProtocol]:
    """The two local |00> -> |11> schedules, both of duration pi.

    Parallel: both qubits driven together at half power. Sequential: one
    qubit at a time at full power. Each segment has operator norm 1, and
    neither schedule ever entangles the qubits.
    """
    parallel = DriveProtocol((
        (0.5 * (np.kron(_LOWER, _I2) + np.kron(_I2, _LOWER)), np.pi),
    ))
    sequential = DriveProtocol((
        (np.kron(_LOWER, _I2), np.pi / 2),
        (np.kron(_I2, _LOWER), np.pi / 2),
    ))
    return parallel, sequential


def reduced_qubit_state(rho: DensityMatrix, which: int = 0) -> np.ndarray:
    """Partial trace of a two-qubit state onto one qubit."""
    if rho.dim != 4:
        raise InvalidDimension(f"expected a two-qubit state, got dim {rho.dim}")
    m = rho.matrix.reshape(2, 2, 2, 2)
    return np.einsum("ijkj->ik", m) if which == 0 else np.einsum("jijk->ik", m)


def two_qubit_entanglement_entropy(rho: DensityMatrix) -> float:
    """Von Neumann entropy (natural log) of the first qubit's reduced state.

    For a pure two-qubit state this is the bipartite entanglement entropy.
    """
    w = np.linalg.eigvalsh(matcore.hermitize(reduced_qubit_state(rho)))
    w = w[w > 1e-15]
    return float(-np.sum(w * np.log(w)))


# ---------------------------------------------------------------------------
# charging power
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerReport:
    """Mean charging power bounds for a battery Hamiltonian and a norm-1 drive.

    bound_new = 2 ||H|| * D_Tr / D improves on bound_old = 2 ||H||; the
    ratio D_Tr / D never exceeds 1 and reaches it only as the states merge.
    """

    energy_gap: float
    distance: float
    trace_dist: float
    bound_new: float
    bound_old: float
    ratio: float


def power_report(h: np.ndarray, rho: DensityMatrix, sigma: DensityMatrix,
                 opts: OptimizerOptions | None = None) -> PowerReport:
    from . import metrics

    h = matcore.check_hermitian(h)
    d_tr = metrics.trace_distance(rho, sigma)
    dist = distance_general(rho, sigma, opts).value
    if dist <= 1e-12:
        raise DegeneratePower("states coincide; the power ratio is undefined")
    h_norm = matcore.operator_norm(h)
    gap = abs(float(np.trace(h @ rho.matrix).real - np.trace(h @ sigma.matrix).real))
    ratio = d_tr / dist
    return PowerReport(
        energy_gap=gap,
        distance=dist,
        trace_dist=d_tr,
        bound_new=2.0 * h_norm * ratio,
        bound_old=2.0 * h_norm,
        ratio=ratio,
    )


# ---------------------------------------------------------------------------
# quantum speed limits
# ---------------------------------------------------------------------------

def qsl_t_cd(protocol: DriveProtocol, rho: DensityMatrix,
             opts: OptimizerOptions | None = None) -> float:
    """Charging-distance speed limit D(rho, sigma) / mean drive norm.

    sigma is the protocol's output state. Always at most the protocol
    duration, with equality on an optimal one-segment drive.
    """
    if not protocol.segments:
        raise InvalidProtocol("protocol has no segments")
    total = protocol.total_time
    v_cd = sum(matcore.operator_norm(h) * tau for h, tau in protocol.segments) / total
    if v_cd <= 1e-12:
        raise InvalidProtocol("protocol has zero total drive norm")
    sigma = evolve(protocol, rho)
    dist = distance_general(rho, sigma, opts).value
    return dist / v_cd


def _pack_hermitian(blocks: list[np.ndarray]) -> np.ndarray:
    parts = []
    for h in blocks:
        n = h.shape[0]
        parts.append(np.diagonal(h).real)
        if n > 1:
            iu = np.triu_indices(n, 1)
            parts.append(h[iu].real)
            parts.append(h[iu].imag)
    return np.concatenate(parts) if parts else np.zeros(0)


def _unpack_hermitian(x: np.ndarray, mults) -> list[np.ndarray]:
    out = []
    pos = 0
    for n in mults:
        diag = x[pos:pos + n]
        pos += n
        m = n * (n - 1) // 2
        upper = np.zeros((n, n), dtype=complex)
        if m:
            iu = np.triu_indices(n, 1)
            upper[iu] = x[pos:pos + m] + 1j * x[pos + m:pos + 2 * m]
            pos += 2 * m
        out.append(np.diag(diag.astype(complex)) + upper + upper.conj().T)
    return out


def _min_commutant_norm(v: np.ndarray, rho_t: DensityMatrix,
                        opts: OptimizerOptions) -> tuple[float, bool]:
    """min ||v + D|| over Hermitian D commuting with rho_t.

    The commutant at the grouping tolerance is the set of Hermitians
    block-diagonal in rho_t's eigenspaces. The objective is convex, so
    Nelder-Mead runs from two seeds: D = 0 and D = minus the block-diagonal
    part of v.
    """
    sf = states.spectral_form(rho_t, group_tol=opts.group_tol)
    bases = [g.basis for g in sf.groups]
    mults = [g.multiplicity for g in sf.groups]

    def assemble(x):
        d_op = np.zeros_like(v)
        for b, h in zip(bases, _unpack_hermitian(x, mults)):
            d_op += b @ h @ b.conj().T
        return d_op

    def objective(x):
        w = np.linalg.eigvalsh(matcore.hermitize(v + assemble(x)))
        return float(np.max(np.abs(w)))

    seed_zero = np.zeros(sum(n * n for n in mults))
    seed_block = _pack_hermitian([-b.conj().T @ v @ b for b in bases])
    nm_options = {
        "maxiter": opts.max_iter,
        "maxfev": 2 * opts.max_iter,
        "xatol": opts.xatol,
        "fatol": opts.fatol,
    }
    best = np.inf
    converged = False
    for x0 in (seed_zero, seed_block):
        res = scipy.optimize.minimize(objective, x0, method="Nelder-Mead",
                                      options=nm_options)
        if res.fun < best:
            best = float(res.fun)
            converged = bool(res.success)
    return best, converged


def qsl_t_mcd(protocol: DriveProtocol, rho: DensityMatrix,
              opts: OptimizerOptions | None = None) -> float:
    """Modified speed limit: strips drive components that commute with the
    instantaneous state before averaging the norm.

    The state inside each segment is frozen to the segment-start state, so
    refining a protocol into shorter segments tightens the estimate. Always
    between t_CD and the protocol duration.
    """
    if not protocol.segments:
        raise InvalidProtocol("protocol has no segments")
    opts = opts or OptimizerOptions()
    total = protocol.total_time
    current = rho
    weighted = 0.0
    all_converged = True
    for h, tau in protocol.segments:
        norm_k, ok = _min_commutant_norm(h, current, opts)
        all_converged = all_converged and ok
        weighted += norm_k * tau
        u = segment_propagator(h, tau)
        current = DensityMatrix(matcore.hermitize(u @ current.matrix @ u.conj().T))
    v_mcd = weighted / total
    if v_mcd <= 1e-12:
        raise DegenerateSpeed(
            "every segment drive commutes with the instantaneous state")
    if not all_converged:
        warnings.warn("inner commutant minimization did not converge on some segment",
                      RuntimeWarning, stacklevel=2)
    dist = distance_general(rho, evolve(protocol, rho), opts).value
    return dist / v_mcd
