"""Fidelity, Bures angle, trace distance, and distance bounds.

The charging distance of an isospectral couple always lies in
[max(lower bounds), pi(1 - 1/d)]: it is bounded below by the Bures angle,
below by the largest per-eigenspace Bures angle, and above by the
dimension-only cap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matcore, states
from .errors import InvalidDimension, SpectraMismatch
from .states import DensityMatrix, SpectralForm


@dataclass(frozen=True)
class BoundInterval:
    """Bracket for the charging distance, all entries in radians."""

    lower_bures: float
    lower_tight: float
    upper: float


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Uhlmann fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)), in [0, 1].

    Reduces to |<psi|phi>| for pure inputs. Eigenvalues are clamped at the
    PSD tolerance before each square root, which keeps near-singular
    states well-behaved.
    """
    if rho.dim != sigma.dim:
        raise SpectraMismatch(f"dimensions differ: {rho.dim} vs {sigma.dim}")
    s = matcore.matrix_sqrt_psd(rho.matrix)
    inner = matcore.hermitize(s @ sigma.matrix @ s)
    value = np.trace(matcore.matrix_sqrt_psd(inner)).real
    return float(np.clip(value, 0.0, 1.0))


def bures_angle(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """arccos of the fidelity, in [0, pi/2]."""
    return float(np.arccos(np.clip(fidelity(rho, sigma), -1.0, 1.0)))


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Half the trace norm of the difference, in [0, 1]."""
    return 0.5 * matcore.trace_norm(rho.matrix - sigma.matrix)


def upper_bound(dim: int) -> float:
    """Dimension-only cap pi * (1 - 1/d) on the charging distance."""
    if dim < 1:
        raise InvalidDimension(f"dim must be >= 1, got {dim}")
    return np.pi * (1.0 - 1.0 / dim)


def lower_bound_tight(sf_rho: SpectralForm, sf_sigma: SpectralForm) -> float:
    """Largest Bures angle between matched eigenspaces.

    Each degeneracy group contributes the angle between the maximally mixed
    states P_i/n_i on the paired eigenspaces; the slowest eigenspace
    rotation lower-bounds the whole transport.
    """
    if sf_rho.multiplicities != sf_sigma.multiplicities:
        raise SpectraMismatch(
            f"group structures differ: {sf_rho.multiplicities} vs {sf_sigma.multiplicities}")
    best = 0.0
    for gr, gs in zip(sf_rho.groups, sf_sigma.groups):
        rho_i = DensityMatrix(gr.projector() / gr.multiplicity)
        sigma_i = DensityMatrix(gs.projector() / gs.multiplicity)
        best = max(best, bures_angle(rho_i, sigma_i))
    return best


def bound_interval(rho: DensityMatrix, sigma: DensityMatrix,
                   group_tol: float | None = None) -> BoundInterval:
    """Assemble both lower bounds and the upper bound for an isospectral couple."""
    sf_r, sf_s = states.isospectral(rho, sigma, tol=group_tol)
    return BoundInterval(
        lower_bures=bures_angle(rho, sigma),
        lower_tight=lower_bound_tight(sf_r, sf_s),
        upper=upper_bound(rho.dim),
    )
