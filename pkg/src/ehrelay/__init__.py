"""Outage analysis of energy-harvesting opportunistic decode-and-forward relay networks.

The closed-form outage probability of a power-splitting relay network with
co-channel interference and best-relay selection, a channel-level Monte
Carlo simulator to check it against, and the sweeps built on both.
"""

from .analytic import (
    Branch,
    OutagePoint,
    conditional_pdf_z,
    first_hop_success,
    joint_cdf_below,
    outage_for_config,
    outage_probability,
)
from .errors import (
    DegenerateRates,
    DegenerateTheta,
    EhRelayError,
    InvalidConfig,
    NonConvergent,
)
from .experiments import (
    estimate_diversity_order,
    find_optimal_theta,
    sweep_snr,
    sweep_theta,
    validate,
)
from .model import DerivedRates, SystemConfig, config_from_operating_point, derive_rates
from .montecarlo import OutageEstimate, estimate_outage, sample_trial, simulate
from .numerics import QuadratureSpec, gen_inc_gamma, integrate_semi_infinite

__version__ = "0.1.0"
