"""Physical parameters of the relay network and the rates derived from them."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateTheta, InvalidConfig, InvalidMode

__all__ = [
    "SystemConfig",
    "DerivedRates",
    "derive_rates",
    "config_from_operating_point",
    "db_to_linear",
    "linear_to_db",
    "MODES",
]

MODES = ("no_interference", "fixed_inr", "fixed_sir")


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    return 10.0 * math.log10(value)


@dataclass(frozen=True)
class SystemConfig:
    """One instance of the i.i.d. energy-harvesting relay network.

    All powers and variances are linear. ``p_i`` is the aggregate
    interferer power seen at every relay and ``omega_beta`` the variance of
    the interferer-to-relay channel; either may be zero, which removes the
    interference.

    Attributes
    ----------
    n_relays : int
        Number of relays ``L``.
    p_s : float
        Source transmit power.
    p_i : float
        Interferer power at each relay.
    omega_h, omega_g, omega_beta : float
        Variances of the source-relay, relay-destination and
        interferer-relay Rayleigh channels.
    sigma2_r, sigma2_d : float
        Noise variances at the relays and at the destination.
    eta : float
        Energy conversion efficiency in ``[0, 1]``.
    theta : float
        Power-splitting ratio in ``[0, 1]``: the fraction of received power
        diverted to the harvester.
    gamma_th : float
        Linear SNR threshold.
    """

    n_relays: int
    p_s: float
    p_i: float
    omega_h: float
    omega_g: float
    omega_beta: float
    sigma2_r: float
    sigma2_d: float
    eta: float
    theta: float
    gamma_th: float

    def __post_init__(self):
        if isinstance(self.n_relays, bool) or int(self.n_relays) != self.n_relays \
                or self.n_relays < 1:
            raise InvalidConfig(f"n_relays must be an integer >= 1, got {self.n_relays!r}")
        object.__setattr__(self, "n_relays", int(self.n_relays))
        for name in ("p_s", "omega_h", "omega_g", "sigma2_r", "sigma2_d", "gamma_th"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise InvalidConfig(f"{name} must be positive and finite, got {value!r}")
        for name in ("p_i", "omega_beta"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise InvalidConfig(f"{name} must be nonnegative and finite, got {value!r}")
        for name in ("eta", "theta"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvalidConfig(f"{name} must lie in [0, 1], got {value!r}")

    @property
    def interference_free(self) -> bool:
        return self.p_i * self.omega_beta == 0.0

    @property
    def forced_outage(self) -> bool:
        """True when no relay can ever forward (no split power or no harvest)."""
        return self.theta in (0.0, 1.0) or self.eta == 0.0


@dataclass(frozen=True)
class DerivedRates:
    """Average SNRs that drive the closed-form analysis.

    ``gbar_h`` and ``gbar_beta`` are the means of the post-splitting
    first-hop signal SNR and interference-to-noise ratio; ``gbar_g`` is the
    mean of the second-hop gain ``W``.
    """

    gbar_h: float
    gbar_beta: float
    gbar_g: float

    @property
    def interference_free(self) -> bool:
        return self.gbar_beta == 0.0

    @property
    def forced_outage(self) -> bool:
        return self.gbar_g == 0.0

    @property
    def a(self) -> float:
        """``1/gbar_beta - 1/gbar_h``; infinite without interference."""
        if self.interference_free:
            return math.inf
        return 1.0 / self.gbar_beta - 1.0 / self.gbar_h

    def b_of(self, gamma_th: float) -> float:
        """``1/gbar_h + a/(1 + gamma_th)``, written so it never forms ``a``.

        The rearranged form ``(gamma_th/gbar_h + 1/gbar_beta)/(1 + gamma_th)``
        avoids cancellation when ``gbar_h`` is close to ``gbar_beta``.
        """
        if self.interference_free:
            return math.inf
        return (gamma_th / self.gbar_h + 1.0 / self.gbar_beta) / (1.0 + gamma_th)


def derive_rates(config: SystemConfig) -> DerivedRates:
    """Compute the analysis-level rates of ``config``.

    Raises
    ------
    DegenerateTheta
        If ``theta == 1``: the information branch then receives nothing and
        the second-hop rate ``eta*theta/(1-theta)`` is undefined.
    """
    theta = config.theta
    if theta == 1.0:
        raise DegenerateTheta("theta == 1 leaves no power for decoding")
    keep = 1.0 - theta
    gbar_h = keep * config.p_s * config.omega_h / config.sigma2_r
    gbar_beta = keep * config.p_i * config.omega_beta / config.sigma2_r
    gbar_g = (config.eta * theta / keep) * (config.sigma2_r / config.sigma2_d) * config.omega_g
    return DerivedRates(gbar_h=gbar_h, gbar_beta=gbar_beta, gbar_g=gbar_g)


def config_from_operating_point(n_relays: int, snr1_db: float, mode: str = "no_interference",
                                *, inr_db: float | None = None, sir_db: float | None = None,
                                theta: float = 0.6, eta: float = 1.0,
                                gamma_th_db: float = 5.0) -> SystemConfig:
    """Build a normalized config from figure-axis quantities.

    Noise variances and channel variances are set to one, so the first-hop
    average SNR (measured before power splitting) is ``p_s`` itself. The
    interferer power follows from the requested INR (``p_i`` directly) or
    SIR (``p_s / p_i``).

    >>> config_from_operating_point(2, 20.0, "fixed_sir", sir_db=20.0).p_i
    1.0
    """
    if mode not in MODES:
        raise InvalidMode(f"unknown mode {mode!r}; expected one of {MODES}")
    p_s = db_to_linear(snr1_db)
    if mode == "no_interference":
        if inr_db is not None or sir_db is not None:
            raise InvalidMode("no_interference takes neither inr_db nor sir_db")
        p_i = 0.0
    elif mode == "fixed_inr":
        if inr_db is None or sir_db is not None:
            raise InvalidMode("fixed_inr requires inr_db and no sir_db")
        p_i = db_to_linear(inr_db)
    else:
        if sir_db is None or inr_db is not None:
            raise InvalidMode("fixed_sir requires sir_db and no inr_db")
        p_i = p_s / db_to_linear(sir_db)
    return SystemConfig(
        n_relays=n_relays, p_s=p_s, p_i=p_i,
        omega_h=1.0, omega_g=1.0, omega_beta=1.0,
        sigma2_r=1.0, sigma2_d=1.0,
        eta=eta, theta=theta, gamma_th=db_to_linear(gamma_th_db),
    )
