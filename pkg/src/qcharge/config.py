"""Central numerical tolerance record.

Every validation and acceptance threshold in the package reads from one
:class:`Tolerances` instance so that tests and the CLI agree on what
"equal", "unitary", or "degenerate" means numerically.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances shared across the package.

    unitarity       max ||U^dag U - I||_F / dim for a matrix to count as unitary
    hermiticity     max ||A - A^dag||_F / ||A||_F for a matrix to count as Hermitian
    psd_clamp       eigenvalues above -psd_clamp are clamped to zero; below raise
    reconstruction  max Frobenius error for eigendecomposition round trips
    trace           max |tr(rho) - 1| for a density matrix
    grouping        default eigenvalue clustering width for degeneracy detection
    isospectral     max (eigenvalue, per-group) deviation for spectra to match
    zero_distance   ||rho - sigma||_F below this short-circuits the distance to 0
    achievability   max Frobenius residual for an optimal drive to count as exact
    purity          1 - tr(rho^2) below this counts as a pure state
    """

    unitarity: float = 1e-10
    hermiticity: float = 1e-12
    psd_clamp: float = 1e-10
    reconstruction: float = 1e-9
    trace: float = 1e-10
    grouping: float = 1e-8
    isospectral: float = 1e-8
    zero_distance: float = 1e-10
    achievability: float = 1e-7
    purity: float = 1e-9


DEFAULT_TOLERANCES = Tolerances()

ENV_VAR = "QCHARGE_TOL"


def tolerances_from_env(environ=None) -> Tolerances:
    """Build the tolerance record, applying any QCHARGE_TOL override.

    The variable holds comma-separated ``name=value`` pairs, e.g.
    ``QCHARGE_TOL="grouping=1e-6,unitarity=1e-9"``. Unknown names or
    malformed values raise ValueError rather than being ignored.
    """
    environ = os.environ if environ is None else environ
    raw = environ.get(ENV_VAR, "").strip()
    if not raw:
        return DEFAULT_TOLERANCES
    known = {f.name for f in fields(Tolerances)}
    overrides = {}
    for item in raw.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ValueError(
                f"{ENV_VAR} entries must look like name=value, got {item!r}")
        name, _, value = item.partition("=")
        name = name.strip()
        if name not in known:
            raise ValueError(
                f"{ENV_VAR}: unknown tolerance {name!r}; known: {sorted(known)}")
        overrides[name] = float(value)
    return replace(DEFAULT_TOLERANCES, **overrides)
