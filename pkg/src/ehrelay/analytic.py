"""Closed-form outage probability of the opportunistic energy-harvesting relay network.

Per relay, the post-splitting first-hop quantities are

    gamma_h ~ Exp(mean gbar_h),  I ~ Exp(mean gbar_beta),
    gamma_SR = gamma_h / (1 + I),  gamma_RD = W * (gamma_h + I),

with ``W ~ Exp(mean gbar_g)``. A relay decodes when ``gamma_SR >= gamma_th``
(event ``C``). Relay ``i`` is useless when ``gamma_RD * 1_C < gamma_th``,
and the selected relay fails only when all ``L`` relays are useless, which
is why the total-probability sum over the decoding-set size collapses to a
single power.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRates
from .model import DerivedRates, SystemConfig, derive_rates
from .numerics import QuadratureSpec, gen_inc_gamma

__all__ = [
    "Branch",
    "branch_of",
    "OutagePoint",
    "ANALYTIC_SPEC",
    "DEGENERACY_THRESHOLD",
    "DEGENERACY_NUDGE",
    "first_hop_success",
    "first_hop_failure",
    "conditional_pdf_z",
    "joint_cdf_below",
    "outage_probability",
    "outage_sum_literal",
    "outage_for_config",
]

# The joint probability is formed as 1 - (difference of two Gamma terms),
# so the Gamma values need far more precision than the final result.
ANALYTIC_SPEC = QuadratureSpec(rel_tol=1e-13, abs_tol=0.0, max_subdivisions=10_000)

DEGENERACY_THRESHOLD = 1e-9
DEGENERACY_NUDGE = 1e-6


class Branch(str, enum.Enum):
    GENERAL = "general"
    INTERFERENCE_FREE = "interference_free"
    DEGENERATE_EQUAL_RATES = "degenerate_equal_rates"
    FORCED_OUTAGE = "forced_outage"


@dataclass(frozen=True)
class OutagePoint:
    """Analytic outage of one configuration.

    Attributes
    ----------
    p_first_hop_fail : float
        ``Pr{gamma_SR < gamma_th}`` for a single relay.
    p_joint_below : float
        ``Pr{gamma_RD * 1_C < gamma_th}`` for a single relay.
    p_out : float
        End-to-end outage probability with ``L`` relays.
    branch : Branch
        Which evaluation path produced the numbers.
    """

    p_first_hop_fail: float
    p_joint_below: float
    p_out: float
    branch: Branch


def _is_degenerate(rates: DerivedRates) -> bool:
    if rates.interference_free:
        return False
    gap = abs(rates.gbar_h - rates.gbar_beta)
    return gap < DEGENERACY_THRESHOLD * max(rates.gbar_h, rates.gbar_beta)


def branch_of(rates: DerivedRates) -> Branch:
    if rates.forced_outage:
        return Branch.FORCED_OUTAGE
    if rates.interference_free:
        return Branch.INTERFERENCE_FREE
    if _is_degenerate(rates):
        return Branch.DEGENERATE_EQUAL_RATES
    return Branch.GENERAL


def first_hop_success(rates: DerivedRates, gamma_th: float) -> float:
    """``Pr{gamma_SR >= gamma_th}`` for one relay.

    >>> round(first_hop_success(DerivedRates(10.0, 0.0, 1.0), 1.0), 6)
    0.904837
    """
    ratio = rates.gbar_beta / rates.gbar_h
    return math.exp(-gamma_th / rates.gbar_h) / (1.0 + ratio * gamma_th)


def first_hop_failure(rates: DerivedRates, gamma_th: float) -> float:
    """Complement of :func:`first_hop_success`, accurate when it is tiny."""
    r = rates.gbar_beta / rates.gbar_h * gamma_th
    return (r - math.expm1(-gamma_th / rates.gbar_h)) / (1.0 + r)


def conditional_pdf_z(rates: DerivedRates, gamma_th: float, z):
    """Density of ``Z = (gamma_h + I) * 1_C`` on ``z > gamma_th``.

    ``Z`` also has an atom at zero of mass ``Pr{not C}``; this returns the
    continuous part only, so it integrates to :func:`first_hop_success`.
    Accepts scalars or arrays.

    Raises
    ------
    DegenerateRates
        If ``gbar_h`` and ``gbar_beta`` coincide (the density's prefactor is
        singular there).
    """
    z = np.asarray(z, dtype=float)
    above = z > gamma_th
    if rates.interference_free:
        dens = np.exp(-z / rates.gbar_h) / rates.gbar_h
    else:
        if _is_degenerate(rates):
            raise DegenerateRates(
                f"gbar_h={rates.gbar_h!r} and gbar_beta={rates.gbar_beta!r} coincide")
        a = rates.a
        y = a * np.where(above, z - gamma_th, 0.0) / (1.0 + gamma_th)
        x = z / rates.gbar_h
        if a >= 0:
            core = np.exp(-x) * -np.expm1(-y)
        else:
            # 1 - exp(-y) = exp(-y) * expm1(y); keeps the exponent bounded for y < 0.
            core = np.exp(-x - y) * np.expm1(y)
        dens = core / (rates.gbar_h - rates.gbar_beta)
    out = np.where(above, dens, 0.0)
    return out if out.ndim else float(out)


def _joint_general(gbar_h: float, gbar_beta: float, gbar_g: float, gamma_th: float,
                   spec: QuadratureSpec) -> float:
    rates = DerivedRates(gbar_h, gbar_beta, gbar_g)
    b = rates.b_of(gamma_th)
    x1 = gamma_th / gbar_h
    # exp(x) * Gamma(1, x; c) for both terms. The exp(a*gamma_th/(1+gamma_th))
    # prefactor of the second term merges with exp(-b*gamma_th) into
    # exp(-gamma_th/gbar_h), shared with the first term.
    g1 = gen_inc_gamma(1.0, x1, x1 / gbar_g, spec, scaled=True)
    g2 = gen_inc_gamma(1.0, b * gamma_th, b * gamma_th / gbar_g, spec, scaled=True)
    bracket = gbar_h * g1 - g2 / b
    return 1.0 - math.exp(-x1) * bracket / (gbar_h - gbar_beta)


def joint_cdf_below(rates: DerivedRates, gamma_th: float,
                    spec: QuadratureSpec = ANALYTIC_SPEC) -> float:
    """``Pr{gamma_RD * 1_C < gamma_th}`` for one relay, in closed form.

    In the general branch this is

        1 - [gbar_h * G(1, gamma_th/gbar_h; gamma_th/(gbar_h*gbar_g))
             - exp(a*gamma_th/(1+gamma_th)) / b * G(1, b*gamma_th; b*gamma_th/gbar_g)]
            / (gbar_h - gbar_beta)

    with ``G`` the generalized incomplete Gamma function. Without
    interference ``Z`` is ``gamma_h`` restricted to ``gamma_h >= gamma_th``
    and the expression reduces to ``1 - G(1, gamma_th/gbar_h;
    gamma_th/(gbar_h*gbar_g))``. When ``gbar_h == gbar_beta`` the general
    expression is 0/0; it is evaluated at ``gbar_beta * (1 +- nudge)`` and
    the two values averaged.
    """
    branch = branch_of(rates)
    if branch is Branch.FORCED_OUTAGE:
        return 1.0
    if branch is Branch.INTERFERENCE_FREE:
        x1 = gamma_th / rates.gbar_h
        g1 = gen_inc_gamma(1.0, x1, x1 / rates.gbar_g, spec, scaled=True)
        value = 1.0 - math.exp(-x1) * g1
    elif branch is Branch.DEGENERATE_EQUAL_RATES:
        lo = _joint_general(rates.gbar_h, rates.gbar_beta * (1.0 - DEGENERACY_NUDGE),
                            rates.gbar_g, gamma_th, spec)
        hi = _joint_general(rates.gbar_h, rates.gbar_beta * (1.0 + DEGENERACY_NUDGE),
                            rates.gbar_g, gamma_th, spec)
        value = 0.5 * (lo + hi)
    else:
        value = _joint_general(rates.gbar_h, rates.gbar_beta, rates.gbar_g, gamma_th, spec)
    return min(1.0, max(0.0, value))


def outage_sum_literal(p_first_hop_fail: float, p_joint_below: float, n_relays: int) -> float:
    """Total outage summed term by term over the decoding-set size.

    ``p**L * sum_l C(L, l) * (p_joint/p - 1)**l``; equal to ``p_joint**L``
    by the binomial theorem. Kept as an independent cross-check of the
    collapsed form.
    """
    p = p_first_hop_fail
    if p == 0.0:
        return p_joint_below ** n_relays
    ratio = p_joint_below / p - 1.0
    terms = [math.comb(n_relays, l) * ratio ** l for l in range(n_relays + 1)]
    return p ** n_relays * math.fsum(terms)


def outage_probability(rates: DerivedRates, gamma_th: float, n_relays: int,
                       spec: QuadratureSpec = ANALYTIC_SPEC) -> OutagePoint:
    """End-to-end outage with ``n_relays`` i.i.d. relays and best-relay selection."""
    if n_relays < 1:
        raise ValueError(f"n_relays must be >= 1, got {n_relays}")
    branch = branch_of(rates)
    p_fail = first_hop_failure(rates, gamma_th)
    if branch is Branch.FORCED_OUTAGE:
        return OutagePoint(p_fail, 1.0, 1.0, branch)
    p_joint = joint_cdf_below(rates, gamma_th, spec)
    return OutagePoint(p_fail, p_joint, p_joint ** n_relays, branch)


def outage_for_config(config: SystemConfig,
                      spec: QuadratureSpec = ANALYTIC_SPEC) -> OutagePoint:
    """Analytic outage of a full configuration, including ``theta`` in {0, 1}."""
    if config.theta == 1.0:
        return OutagePoint(1.0, 1.0, 1.0, Branch.FORCED_OUTAGE)
    rates = derive_rates(config)
    return outage_probability(rates, config.gamma_th, config.n_relays, spec)
