"""Fidelity balloons versus quantum resources.

Closed-form fidelities and resource measures for qubit, Pauli-diagonal,
single-mode and two-mode Gaussian state families, with a grid-scan engine
that maps out the states lying close to a target.
"""

__version__ = "0.1.0"

from . import gaussian1, gaussian2, kernels, linalg, qubits, scan  # noqa: E402
from .gaussian1 import (  # noqa: E402
    STS1Params,
    displaced_sts1,
    fidelity_gaussian1,
    fidelity_sts1,
    is_nonclassical_sts1,
    photon_stats,
    sts1_cm,
)
from .gaussian2 import (  # noqa: E402
    STS2Params,
    fidelity_sts2,
    gaussian_b_discord,
    is_separable,
    sts2_coeffs,
    symplectic_spectrum,
)
from .qubits import (  # noqa: E402
    UnphysicalStateError,
    bloch_fidelity,
    negativity,
    pd_discord,
    pd_fidelity,
    uhlmann_fidelity,
    werner,
)

__all__ = [
    "__version__",
    "gaussian1",
    "gaussian2",
    "kernels",
    "linalg",
    "qubits",
    "scan",
    "STS1Params",
    "STS2Params",
    "UnphysicalStateError",
    "bloch_fidelity",
    "displaced_sts1",
    "fidelity_gaussian1",
    "fidelity_sts1",
    "fidelity_sts2",
    "gaussian_b_discord",
    "is_nonclassical_sts1",
    "is_separable",
    "negativity",
    "pd_discord",
    "pd_fidelity",
    "photon_stats",
    "sts1_cm",
    "sts2_coeffs",
    "symplectic_spectrum",
    "uhlmann_fidelity",
    "werner",
]
