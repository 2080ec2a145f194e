"""Density matrices, degeneracy-grouped spectral forms, Bloch vectors.

A :class:`SpectralForm` clusters the eigenvalues of a state into
degeneracy groups; the grouping tolerance is exposed everywhere because
the charging distance is discontinuous in the degeneracy pattern, so the
caller must stay in control of what counts as "equal eigenvalues".
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matcore
from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import (
    DegeneracyAmbiguous,
    InvalidDimension,
    InvalidSpectrum,
    NotDensityMatrix,
    SpectraMismatch,
)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, PSD, unit-trace operator. Validated on construction."""

    matrix: np.ndarray

    def __post_init__(self):
        tol = DEFAULT_TOLERANCES
        m = matcore.check_hermitian(self.matrix, tol)
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > tol.trace:
            raise NotDensityMatrix(f"trace {tr!r} is not 1 within {tol.trace:.0e}")
        wmin = float(np.linalg.eigvalsh(matcore.hermitize(m)).min())
        if wmin < -tol.psd_clamp:
            raise NotDensityMatrix(f"eigenvalue {wmin:.3e} below -{tol.psd_clamp:.0e}")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SpectralGroup:
    """One degenerate eigenvalue with its orthonormal eigenspace basis."""

    value: float
    multiplicity: int
    basis: np.ndarray  # dim x multiplicity, orthonormal columns

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T


@dataclass(frozen=True)
class SpectralForm:
    """Eigenvalues grouped into degeneracy classes, strictly decreasing."""

    groups: tuple[SpectralGroup, ...]
    dim: int

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(g.multiplicity for g in self.groups)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(g.value for g in self.groups)

    def is_nondegenerate(self) -> bool:
        return all(g.multiplicity == 1 for g in self.groups)

    def eigenvector_matrix(self) -> np.ndarray:
        """All group bases concatenated into a d x d unitary, descending order."""
        return np.concatenate([g.basis for g in self.groups], axis=1)

    def reconstruct(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for g in self.groups:
            out += g.value * g.projector()
        return out


@dataclass(frozen=True)
class BlochVector:
    """Qubit state parameters: radius r in [0, 1] and unit direction n."""

    r: float
    n: np.ndarray

    def __post_init__(self):
        n = np.asarray(self.n, dtype=float)
        if n.shape != (3,):
            raise InvalidDimension(f"Bloch direction must be a 3-vector, got {n.shape}")
        if abs(np.linalg.norm(n) - 1.0) > 1e-12:
            raise InvalidSpectrum(f"Bloch direction norm {np.linalg.norm(n)!r} is not 1")
        if not 0.0 <= self.r <= 1.0 + 1e-12:
            raise InvalidSpectrum(f"Bloch radius {self.r!r} outside [0, 1]")
        n = n.copy()
        n.flags.writeable = False
        object.__setattr__(self, "n", n)


def spectral_form(rho: DensityMatrix, group_tol: float | None = None,
                  tol: Tolerances = DEFAULT_TOLERANCES) -> SpectralForm:
    """Cluster the eigendecomposition of rho into degeneracy groups.

    Eigenvalues whose consecutive (descending) gaps are below group_tol
    fall into one group; the group eigenvalue is the cluster mean, which
    preserves the trace exactly. If a chain of sub-tolerance gaps spans at
    least group_tol in total, the clustering is ambiguous and
    DegeneracyAmbiguous is raised instead of guessing.
    """
    group_tol = tol.grouping if group_tol is None else group_tol
    if group_tol <= 0:
        raise InvalidSpectrum(f"group_tol must be positive, got {group_tol}")
    w, v = matcore.eig_hermitian(rho.matrix, tol)
    d = len(w)
    groups = []
    start = 0
    for k in range(d):
        if k + 1 < d and w[k] - w[k + 1] < group_tol:
            continue
        spread = w[start] - w[k]
        if spread >= group_tol:
            gaps = tuple(float(w[j] - w[j + 1]) for j in range(start, k))
            raise DegeneracyAmbiguous(
                f"eigenvalue chain [{w[k]:.12g}, {w[start]:.12g}] spans "
                f"{spread:.3e} >= group_tol {group_tol:.3e} through sub-tolerance gaps",
                gaps=gaps,
            )
        groups.append(SpectralGroup(
            value=float(np.mean(w[start:k + 1])),
            multiplicity=k + 1 - start,
            basis=v[:, start:k + 1],
        ))
        start = k + 1
    return SpectralForm(groups=tuple(groups), dim=d)


def isospectral(rho: DensityMatrix, sigma: DensityMatrix,
                tol: float | None = None) -> tuple[SpectralForm, SpectralForm]:
    """Pair the degeneracy groups of two states by descending eigenvalue.

    Returns the two spectral forms with index-aligned groups. Raises
    SpectraMismatch on the first (eigenvalue, multiplicity) disagreement.
    The same tolerance drives the clustering and the value comparison.
    """
    tol = DEFAULT_TOLERANCES.isospectral if tol is None else tol
    if rho.dim != sigma.dim:
        raise SpectraMismatch(f"dimensions differ: {rho.dim} vs {sigma.dim}")
    sf_r = spectral_form(rho, group_tol=tol)
    sf_s = spectral_form(sigma, group_tol=tol)
    if len(sf_r.groups) != len(sf_s.groups):
        raise SpectraMismatch(
            f"group counts differ: {len(sf_r.groups)} vs {len(sf_s.groups)} "
            f"(values {sf_r.values} vs {sf_s.values})")
    for i, (gr, gs) in enumerate(zip(sf_r.groups, sf_s.groups)):
        if gr.multiplicity != gs.multiplicity or abs(gr.value - gs.value) > tol:
            raise SpectraMismatch(
                f"group {i}: ({gr.value:.12g}, n={gr.multiplicity}) vs "
                f"({gs.value:.12g}, n={gs.multiplicity}) beyond tol {tol:.0e}")
    return sf_r, sf_s


def from_bloch(b: BlochVector) -> DensityMatrix:
    """rho = (I + r n.sigma) / 2."""
    m = (np.eye(2, dtype=complex)
         + b.r * (b.n[0] * PAULI_X + b.n[1] * PAULI_Y + b.n[2] * PAULI_Z)) / 2
    return DensityMatrix(matcore.hermitize(m))


def to_bloch(rho: DensityMatrix) -> BlochVector:
    """Inverse of from_bloch; only defined for qubits.

    For r = 0 the direction is conventionally +z.
    """
    if rho.dim != 2:
        raise InvalidDimension(f"Bloch conversion needs dim 2, got {rho.dim}")
    m = rho.matrix
    vec = np.array([
        np.trace(m @ PAULI_X).real,
        np.trace(m @ PAULI_Y).real,
        np.trace(m @ PAULI_Z).real,
    ])
    r = float(np.linalg.norm(vec))
    n = vec / r if r > 0 else np.array([0.0, 0.0, 1.0])
    return BlochVector(r=min(r, 1.0), n=n / np.linalg.norm(n))


def uniform_simplex_spectrum(dim: int, rng: np.random.Generator,
                             min_gap: float | None = None) -> np.ndarray:
    """Spectrum drawn uniformly from the simplex, sorted descending.

    Resamples until all consecutive gaps exceed min_gap (default: the
    grouping tolerance), keeping downstream grouping unambiguous.
    """
    min_gap = DEFAULT_TOLERANCES.grouping if min_gap is None else min_gap
    while True:
        spec = np.sort(rng.dirichlet(np.ones(dim)))[::-1]
        if dim == 1 or np.min(-np.diff(spec)) > min_gap:
            return spec


def validate_spectrum(spectrum, dim: int) -> np.ndarray:
    spec = np.asarray(spectrum, dtype=float)
    if spec.shape != (dim,):
        raise InvalidSpectrum(f"spectrum must have {dim} entries, got shape {spec.shape}")
    if np.min(spec) < -DEFAULT_TOLERANCES.psd_clamp:
        raise InvalidSpectrum(f"negative spectrum entry {np.min(spec)!r}")
    if abs(spec.sum() - 1.0) > DEFAULT_TOLERANCES.trace * dim:
        raise InvalidSpectrum(f"spectrum sums to {spec.sum()!r}, not 1")
    return np.clip(spec, 0.0, None)


def random_isospectral_couple(dim: int, spectrum="random",
                              seed: int = 0) -> tuple[DensityMatrix, DensityMatrix]:
    """Two states with a common spectrum and independent Haar eigenbases.

    `spectrum` is either a probability vector of length `dim` or the string
    "random" for a uniform simplex draw (resampled until non-degenerate at
    the default grouping tolerance). Deterministic per seed.
    """
    if dim < 1:
        raise InvalidDimension(f"dim must be >= 1, got {dim}")
    rng = np.random.default_rng(seed)
    if isinstance(spectrum, str):
        if spectrum != "random":
            raise InvalidSpectrum(f"unknown spectrum keyword {spectrum!r}")
        spec = uniform_simplex_spectrum(dim, rng)
    else:
        spec = validate_spectrum(spectrum, dim)
    out = []
    for _ in range(2):
        u = matcore.haar_from_rng(dim, rng)
        out.append(DensityMatrix(matcore.hermitize((u * spec) @ u.conj().T)))
    return out[0], out[1]


def random_density_matrix(dim: int, seed: int = 0) -> DensityMatrix:
    """Random full-rank mixed state: uniform simplex spectrum, Haar basis."""
    rng = np.random.default_rng(seed)
    spec = uniform_simplex_spectrum(dim, rng)
    u = matcore.haar_from_rng(dim, rng)
    return DensityMatrix(matcore.hermitize((u * spec) @ u.conj().T))


def random_pure_state(dim: int, seed: int = 0) -> DensityMatrix:
    """Haar-random pure state as a rank-1 density matrix."""
    v = random_state_vector(dim, seed)
    return DensityMatrix(np.outer(v, v.conj()))


def random_state_vector(dim: int, seed: int = 0) -> np.ndarray:
    """Haar-random unit vector (first column of a Haar unitary)."""
    rng = np.random.default_rng(seed)
    return matcore.haar_from_rng(dim, rng)[:, 0]


def purity(rho: DensityMatrix) -> float:
    """tr(rho^2)."""
    m = rho.matrix
    return float(np.trace(m @ m).real)


def is_pure(rho: DensityMatrix, tol: float | None = None) -> bool:
    tol = DEFAULT_TOLERANCES.purity if tol is None else tol
    return purity(rho) >= 1.0 - tol
