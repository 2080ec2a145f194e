"""The quantum charging distance: minimal unitary-evolution time between
isospectral states under a unit-operator-norm drive.

The distance equals the minimum of ||i log(U)|| over unitaries U that
conjugate one state into the other. Pure couples and qubits have closed
forms; mixed states reduce to an optimization over per-eigenspace block
unitaries (non-degenerate states: one phase per eigenvector). The
objective always folds in the exact global-phase minimum, which removes
one flat direction from the search.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from . import matcore, states
from .config import DEFAULT_TOLERANCES
from .errors import NoEvolutionNeeded, SpectraMismatch, WrongMethod
from .matcore import phase_norm_after_global, principal_phases
from .states import DensityMatrix, SpectralForm


class Method(str, enum.Enum):
    PURE_CLOSED_FORM = "PureClosedForm"
    QUBIT_CLOSED_FORM = "QubitClosedForm"
    PHASE_OPTIMIZED = "PhaseOptimized"
    BLOCK_OPTIMIZED = "BlockOptimized"
    BRUTE_FORCE = "BruteForce"


@dataclass(frozen=True)
class OptimizerOptions:
    """Multi-start Nelder-Mead settings for the mixed-state optimizers."""

    starts: int = 16
    max_iter: int = 2000
    xatol: float = 1e-9
    fatol: float = 1e-10
    seed: int = 0
    group_tol: float | None = None  # None: central default


@dataclass(frozen=True)
class Diagnostics:
    starts_used: int = 0
    best_per_start: tuple[float, ...] = ()
    converged: bool = True


@dataclass(frozen=True)
class DistanceResult:
    """Distance value with the drive that realizes it.

    value               radians; the evolution time under a norm-1 drive
    optimal_unitary     U with ||i log U|| = value conjugating rho to sigma
    optimal_hamiltonian i log(U)/value, Hermitian with operator norm 1;
                        None when value is zero
    """

    value: float
    optimal_unitary: np.ndarray
    optimal_hamiltonian: np.ndarray | None
    method: Method
    diagnostics: Diagnostics = field(default_factory=Diagnostics)

    @property
    def converged(self) -> bool:
        return self.diagnostics.converged


def _trivial_result(dim: int, method: Method,
                    diagnostics: Diagnostics | None = None) -> DistanceResult:
    return DistanceResult(
        value=0.0,
        optimal_unitary=np.eye(dim, dtype=complex),
        optimal_hamiltonian=None,
        method=method,
        diagnostics=diagnostics or Diagnostics(),
    )


def _optimal_global_phase(phases: np.ndarray) -> float:
    """Global phase placing the midpoint of the largest eigenphase gap at pi."""
    s = np.sort(phases)
    gaps = np.diff(s)
    wrap = s[0] + 2 * np.pi - s[-1]
    k = int(np.argmax(np.append(gaps, wrap)))
    if k == len(s) - 1:
        mid = (s[-1] + s[0] + 2 * np.pi) / 2
    else:
        mid = (s[k] + s[k + 1]) / 2
    return np.pi - mid


def _result_from_unitary(u_raw: np.ndarray, method: Method,
                         diagnostics: Diagnostics) -> DistanceResult:
    """Apply the optimal global phase to a connector and extract V = i log(U)/D."""
    phases, vecs = matcore.eig_unitary(u_raw)
    u_opt = np.exp(1j * _optimal_global_phase(phases)) * u_raw
    phases, vecs = matcore.eig_unitary(u_opt)
    value = float(np.max(np.abs(phases)))
    if value < 1e-12:
        return _trivial_result(u_raw.shape[0], method, diagnostics)
    # i log(U) = -sum_k phase_k |v_k><v_k| on the principal branch
    ham = -(vecs * phases) @ vecs.conj().T / value
    return DistanceResult(
        value=value,
        optimal_unitary=u_opt,
        optimal_hamiltonian=matcore.hermitize(ham),
        method=method,
        diagnostics=diagnostics,
    )


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def _pure_frame(psi: np.ndarray, phi: np.ndarray):
    """Orthonormal partners and branch phases for the pure-state construction.

    Returns (psi_perp, phi_perp, e_phi1, e_phi2): the Gram-Schmidt partners
    of psi and phi within their common plane and the unit-modulus phases of
    the rotation block, using the non-orthogonal branch when the overlap is
    nonzero and the orthogonal branch otherwise.
    """
    overlap = np.vdot(psi, phi)  # <psi|phi>
    a = abs(overlap)
    psi_perp = phi - overlap * psi
    psi_perp = psi_perp / np.linalg.norm(psi_perp)
    phi_perp = psi - np.conj(overlap) * phi
    phi_perp = phi_perp / np.linalg.norm(phi_perp)
    if a > 1e-12:
        e1 = np.conj(overlap) / a
        ip = np.vdot(phi_perp, psi_perp)  # <phi_perp|psi_perp>
        e2 = ip / abs(ip)
    else:
        e1 = -np.vdot(phi_perp, psi)
        e2 = np.vdot(phi, psi_perp)
    return psi_perp, phi_perp, e1, e2


def pure_distance(psi: np.ndarray, phi: np.ndarray) -> DistanceResult:
    """Closed-form distance between pure states: arccos |<psi|phi>|.

    The optimal unitary rotates psi to phi inside their common plane and is
    the identity elsewhere; the optimal drive is the norm-1 generator of
    that rotation.
    """
    psi = _unit_vector(psi)
    phi = _unit_vector(phi)
    if psi.shape != phi.shape:
        raise SpectraMismatch(f"vector dims differ: {psi.shape} vs {phi.shape}")
    d = len(psi)
    a = min(abs(np.vdot(psi, phi)), 1.0)
    if a >= 1.0 - 1e-14:
        return _trivial_result(d, Method.PURE_CLOSED_FORM)
    theta = float(np.arccos(a))
    psi_perp, phi_perp, e1, e2 = _pure_frame(psi, phi)
    rest = np.eye(d, dtype=complex) - np.outer(psi, psi.conj()) - np.outer(psi_perp, psi_perp.conj())
    u_opt = e1 * np.outer(phi, psi.conj()) + e2 * np.outer(phi_perp, psi_perp.conj()) + rest
    gamma = e1 * np.conj(e2)  # e^{i(phi_1 - phi_2)}
    ham = 1j * gamma * np.outer(psi_perp, psi.conj()) - 1j * np.conj(gamma) * np.outer(psi, psi_perp.conj())
    return DistanceResult(
        value=theta,
        optimal_unitary=u_opt,
        optimal_hamiltonian=matcore.hermitize(ham),
        method=Method.PURE_CLOSED_FORM,
    )


def pure_optimal_hamiltonian(psi: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Norm-1 Hermitian drive taking psi to phi (up to phase) in time arccos|<psi|phi>|."""
    result = pure_distance(psi, phi)
    if result.optimal_hamiltonian is None:
        raise NoEvolutionNeeded("states are identical up to a global phase")
    return result.optimal_hamiltonian


def _unit_vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    norm = np.linalg.norm(v)
    if not np.isfinite(norm) or abs(norm - 1.0) > 1e-9:
        raise WrongMethod(f"state vector norm {norm!r} is not 1")
    return v / norm


def qubit_distance(a: DensityMatrix, b: DensityMatrix,
                   group_tol: float | None = None) -> DistanceResult:
    """Closed-form qubit distance: half the Bloch angle between the states.

    For r = 0 (both states maximally mixed at the grouping tolerance) the
    distance is zero. The optimal drive is the Pauli rotation about the
    axis perpendicular to both Bloch directions.
    """
    group_tol = DEFAULT_TOLERANCES.grouping if group_tol is None else group_tol
    ba = states.to_bloch(a)
    bb = states.to_bloch(b)
    # spectra (1 +- r)/2 match iff the radii match
    if abs(ba.r - bb.r) > 2 * group_tol:
        raise SpectraMismatch(f"Bloch radii differ: {ba.r:.12g} vs {bb.r:.12g}")
    if ba.r <= group_tol:
        return _trivial_result(2, Method.QUBIT_CLOSED_FORM)
    cos_angle = float(np.clip(np.dot(ba.n, bb.n), -1.0, 1.0))
    value = 0.5 * float(np.arccos(cos_angle))
    if value < 1e-12:
        return _trivial_result(2, Method.QUBIT_CLOSED_FORM)
    axis = np.cross(ba.n, bb.n)
    norm = np.linalg.norm(axis)
    if norm < 1e-12:  # antipodal directions: any axis in the orthogonal plane
        trial = np.eye(3)[np.argmin(np.abs(ba.n))]
        axis = np.cross(ba.n, trial)
        norm = np.linalg.norm(axis)
    axis = axis / norm
    ham = axis[0] * states.PAULI_X + axis[1] * states.PAULI_Y + axis[2] * states.PAULI_Z
    w, v = np.linalg.eigh(ham)
    u_opt = (v * np.exp(-1j * w * value)) @ v.conj().T
    return DistanceResult(
        value=value,
        optimal_unitary=u_opt,
        optimal_hamiltonian=matcore.hermitize(ham),
        method=Method.QUBIT_CLOSED_FORM,
    )


# ---------------------------------------------------------------------------
# connectors and optimizers
# ---------------------------------------------------------------------------

def base_connector(sf_rho: SpectralForm, sf_sigma: SpectralForm) -> np.ndarray:
    """The eigenbasis-mapping unitary sum_i sum_k |s_i^k><r_i^k|."""
    if sf_rho.multiplicities != sf_sigma.multiplicities:
        raise SpectraMismatch(
            f"group structures differ: {sf_rho.multiplicities} vs {sf_sigma.multiplicities}")
    u = np.zeros((sf_rho.dim, sf_rho.dim), dtype=complex)
    for gr, gs in zip(sf_rho.groups, sf_sigma.groups):
        u += gs.basis @ gr.basis.conj().T
    return u


def _phase_unitary(s_mat: np.ndarray, r_dag: np.ndarray, phases: np.ndarray) -> np.ndarray:
    return (s_mat * np.exp(1j * phases)) @ r_dag


def _multistart_nelder_mead(objective, n_params: int, opts: OptimizerOptions):
    """Minimize with `opts.starts` Nelder-Mead runs: one from the origin
    (the bare connector), the rest from uniform random phases/coordinates.

    Returns (best_x, diagnostics)."""
    rng = np.random.default_rng(opts.seed)
    nm_options = {
        "maxiter": opts.max_iter,
        "maxfev": 2 * opts.max_iter,
        "xatol": opts.xatol,
        "fatol": opts.fatol,
    }
    best_x = None
    best_val = np.inf
    best_success = False
    per_start = []
    for s in range(max(opts.starts, 1)):
        x0 = np.zeros(n_params) if s == 0 else rng.uniform(-np.pi, np.pi, n_params)
        res = scipy.optimize.minimize(objective, x0, method="Nelder-Mead", options=nm_options)
        per_start.append(float(res.fun))
        if res.fun < best_val:
            best_val = float(res.fun)
            best_x = res.x
            best_success = bool(res.success)
    diag = Diagnostics(
        starts_used=len(per_start),
        best_per_start=tuple(per_start),
        converged=best_success,
    )
    return best_x, diag


def distance_nondegenerate(rho: DensityMatrix, sigma: DensityMatrix,
                           opts: OptimizerOptions | None = None) -> DistanceResult:
    """Distance for fully non-degenerate spectra: optimize d-1 eigenvector
    phases (the first is fixed, the global phase is folded in exactly)."""
    opts = opts or OptimizerOptions()
    sf_r, sf_s = states.isospectral(rho, sigma, tol=opts.group_tol)
    if not sf_r.is_nondegenerate():
        raise WrongMethod(
            f"degenerate multiplicities {sf_r.multiplicities}; use distance_general")
    if np.linalg.norm(rho.matrix - sigma.matrix) <= DEFAULT_TOLERANCES.zero_distance:
        return _trivial_result(rho.dim, Method.PHASE_OPTIMIZED)
    return _phase_optimize(sf_r, sf_s, opts)


def _phase_optimize(sf_r: SpectralForm, sf_s: SpectralForm,
                    opts: OptimizerOptions) -> DistanceResult:
    d = sf_r.dim
    r_mat = sf_r.eigenvector_matrix()
    s_mat = sf_s.eigenvector_matrix()
    r_dag = r_mat.conj().T

    def objective(x):
        phases = np.concatenate([[0.0], x])
        u = _phase_unitary(s_mat, r_dag, phases)
        return float(phase_norm_after_global(principal_phases(np.linalg.eigvals(u))))

    best_x, diag = _multistart_nelder_mead(objective, d - 1, opts)
    u_raw = _phase_unitary(s_mat, r_dag, np.concatenate([[0.0], best_x]))
    return _result_from_unitary(u_raw, Method.PHASE_OPTIMIZED, diag)


def _hermitian_param_count(mults) -> int:
    return sum(n * n for n in mults)


def _unpack_block_unitaries(x: np.ndarray, mults) -> list[np.ndarray]:
    """Per-group unitaries exp(i H_i) from packed Hermitian coordinates.

    Packing per group: n diagonal reals, then the upper-triangle real parts,
    then the imaginary parts. The very first diagonal coordinate is omitted
    (pinned to zero): it is the global phase, which the objective already
    minimizes exactly.
    """
    out = []
    pos = 0
    for i, n in enumerate(mults):
        if i == 0:
            diag = np.concatenate([[0.0], x[pos:pos + n - 1]])
            pos += n - 1
        else:
            diag = x[pos:pos + n]
            pos += n
        m = n * (n - 1) // 2
        upper = np.zeros((n, n), dtype=complex)
        if m:
            iu = np.triu_indices(n, 1)
            upper[iu] = x[pos:pos + m] + 1j * x[pos + m:pos + 2 * m]
            pos += 2 * m
        h = np.diag(diag.astype(complex)) + upper + upper.conj().T
        w, v = np.linalg.eigh(h)
        out.append((v * np.exp(1j * w)) @ v.conj().T)
    return out


def _block_unitary(sf_r: SpectralForm, sf_s: SpectralForm,
                   blocks: list[np.ndarray]) -> np.ndarray:
    """(direct sum of U_i on sigma's eigenspaces) composed with the base
    connector, collapsed to sum_i S_i U_i R_i^dag."""
    u = np.zeros((sf_r.dim, sf_r.dim), dtype=complex)
    for gr, gs, ui in zip(sf_r.groups, sf_s.groups, blocks):
        u += gs.basis @ ui @ gr.basis.conj().T
    return u


def _block_optimize(sf_r: SpectralForm, sf_s: SpectralForm,
                    opts: OptimizerOptions) -> DistanceResult:
    mults = sf_r.multiplicities
    n_params = _hermitian_param_count(mults) - 1

    def objective(x):
        u = _block_unitary(sf_r, sf_s, _unpack_block_unitaries(x, mults))
        return float(phase_norm_after_global(principal_phases(np.linalg.eigvals(u))))

    best_x, diag = _multistart_nelder_mead(objective, n_params, opts)
    u_raw = _block_unitary(sf_r, sf_s, _unpack_block_unitaries(best_x, mults))
    return _result_from_unitary(u_raw, Method.BLOCK_OPTIMIZED, diag)


def distance_general(rho: DensityMatrix, sigma: DensityMatrix,
                     opts: OptimizerOptions | None = None) -> DistanceResult:
    """Charging distance for any isospectral couple.

    Dispatches to the pure-state closed form, the qubit closed form, the
    non-degenerate phase optimizer, or the general per-eigenspace block
    optimizer. Optimizer non-convergence is reported in the diagnostics,
    never raised.
    """
    opts = opts or OptimizerOptions()
    sf_r, sf_s = states.isospectral(rho, sigma, tol=opts.group_tol)
    pure = states.is_pure(rho) and states.is_pure(sigma)
    if np.linalg.norm(rho.matrix - sigma.matrix) <= DEFAULT_TOLERANCES.zero_distance:
        if pure:
            method = Method.PURE_CLOSED_FORM
        elif rho.dim == 2:
            method = Method.QUBIT_CLOSED_FORM
        elif sf_r.is_nondegenerate():
            method = Method.PHASE_OPTIMIZED
        else:
            method = Method.BLOCK_OPTIMIZED
        return _trivial_result(rho.dim, method)
    if pure:
        return pure_distance(sf_r.groups[0].basis[:, 0], sf_s.groups[0].basis[:, 0])
    if rho.dim == 2:
        return qubit_distance(rho, sigma, group_tol=opts.group_tol)
    if sf_r.is_nondegenerate():
        return _phase_optimize(sf_r, sf_s, opts)
    return _block_optimize(sf_r, sf_s, opts)


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------

_CHUNK = 20000


def _batched_objective(u_batch: np.ndarray) -> np.ndarray:
    return phase_norm_after_global(principal_phases(np.linalg.eigvals(u_batch)))


def brute_force_distance(rho: DensityMatrix, sigma: DensityMatrix,
                         samples: int = 10000, seed: int = 0,
                         group_tol: float | None = None) -> float:
    """Independent sampling oracle: the minimum objective over `samples`
    random feasible connectors (Haar blocks on each eigenspace composed with
    the base connector), plus a dense phase grid when the spectrum is
    non-degenerate. Upper-bounds the true distance and converges to it from
    above as `samples` grows.
    """
    sf_r, sf_s = states.isospectral(rho, sigma, tol=group_tol)
    rng = np.random.default_rng(seed)
    mults = sf_r.multiplicities
    d = sf_r.dim
    best = float(_batched_objective(base_connector(sf_r, sf_s)[None])[0])

    nondegenerate = all(n == 1 for n in mults)
    if nondegenerate:
        r_mat = sf_r.eigenvector_matrix()
        s_mat = sf_s.eigenvector_matrix()
        r_conj = r_mat.conj()

        def eval_phases(phases):  # phases: (batch, d), first column zero
            u = np.einsum("ik,bk,jk->bij", s_mat, np.exp(1j * phases), r_conj)
            return float(np.min(_batched_objective(u)))

        nfree = d - 1
        if nfree > 0:
            side = max(int(samples ** (1.0 / nfree)), 2)
            while side ** nfree > samples and side > 2:
                side -= 1
            axes = np.linspace(-np.pi, np.pi, side, endpoint=False)
            grid = np.stack(np.meshgrid(*([axes] * nfree), indexing="ij"), axis=-1)
            grid = grid.reshape(-1, nfree)
            for lo in range(0, len(grid), _CHUNK):
                block = grid[lo:lo + _CHUNK]
                phases = np.concatenate([np.zeros((len(block), 1)), block], axis=1)
                best = min(best, eval_phases(phases))
        remaining = samples
        while remaining > 0:
            b = min(remaining, _CHUNK)
            remaining -= b
            phases = np.concatenate(
                [np.zeros((b, 1)), rng.uniform(-np.pi, np.pi, (b, nfree))], axis=1)
            best = min(best, eval_phases(phases))
        return best

    remaining = samples
    while remaining > 0:
        b = min(remaining, _CHUNK)
        remaining -= b
        u = np.zeros((b, d, d), dtype=complex)
        for gr, gs in zip(sf_r.groups, sf_s.groups):
            n = gr.multiplicity
            if n == 1:
                blocks = np.exp(1j * rng.uniform(-np.pi, np.pi, b))[:, None, None]
            else:
                blocks = matcore.haar_batch_from_rng(b, n, rng)
            u += np.einsum("ik,bkl,jl->bij", gs.basis, blocks, gr.basis.conj())
        best = min(best, float(np.min(_batched_objective(u))))
    return best
