"""Photon streams with cascaded waiting times and their second-order coherence.

Four independent ways to get g2(tau) for a cascade emitter:

* closed forms and the roots-of-unity mixture (:mod:`photonliquid.analytic`)
* poles and residues of the renewal transform (:mod:`photonliquid.renewal`)
* quantum regression on a Lindblad cascade (:mod:`photonliquid.lindblad`)
* coincidence histograms of simulated photon streams (:mod:`photonliquid.stream`)
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CapacityError,
    DomainError,
    EstimationError,
    NumericError,
    PhotonLiquidError,
    PoleError,
    ShapeError,
    ValidationError,
)
from .mixture import ExponentialMixture  # noqa: E402
from .phase_type import StageRates, laplace, mean_rate, pdf, sample_intervals  # noqa: E402
from .curve import CorrelationCurve  # noqa: E402
from .analytic import (  # noqa: E402
    MollowParams,
    find_first_max,
    g2_cascade_closed_form,
    g2_erlang_cascade,
    g2_heitler,
    g2_incoherent_2ls,
    g2_mollow,
    g2_short_time,
)
from .renewal import PoleSet, find_poles, g2_from_renewal, g2_laplace  # noqa: E402
from .stream import PhotonStream, apply_jitter, estimate_g2, merge_histograms, simulate_stream  # noqa: E402
from .lindblad import CascadeModel, g2_qrt, liouvillian, steady_state  # noqa: E402
