"""Radio energy and composite link-cost model.

Implements the first-order radio model:

    E_tx(b, d) = e_elec * b + eps_amp * b * d^alpha
    E_rx(b)    = e_elec * b

and a weighted link cost combining normalized transmission energy, the
receiver's depleted battery fraction, and a distance-saturating error term.
The defaults below are workbench conventions, not measured hardware values;
everything is configurable, including via a flat key=value file.

All functions here are pure; battery state is mutated only by the lifetime
simulator.

Args conventions: energies in joules, distances in meters (field units),
packet sizes in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .field import SensorField, distance
from .routes import Route, validate_route

_LN2 = math.log(2.0)


class DeadNodeError(RuntimeError):
    """An operation required a sender whose battery is exhausted."""


@dataclass(frozen=True)
class RadioParams:
    """First-order radio constants.

    Args:
        e_elec: Electronics energy per bit (J/bit).
        eps_amp: Amplifier energy per bit per meter^alpha (J/bit/m^alpha).
        alpha: Path-loss exponent, between 2 (free space) and 4.
        packet_bits: Packet size used by link and lifetime accounting.
    """

    e_elec: float = 50e-9
    eps_amp: float = 100e-12
    alpha: float = 2.0
    packet_bits: int = 2000

    def __post_init__(self):
        if self.e_elec <= 0 or self.eps_amp <= 0 or self.packet_bits <= 0:
            raise ValueError("radio parameters must be positive")
        if not 2.0 <= self.alpha <= 4.0:
            raise ValueError(f"alpha must be in [2, 4], got {self.alpha}")


@dataclass(frozen=True)
class LinkCostParams:
    """Weights for the composite link cost.

    ``error_ref_distance`` is the link length at which the error term equals
    0.5; it also normalizes the energy term to 1.0.
    """

    w_energy: float = 1.0
    w_reserve: float = 1.0
    w_error: float = 1.0
    error_ref_distance: float = 100.0

    def __post_init__(self):
        if min(self.w_energy, self.w_reserve, self.w_error) < 0:
            raise ValueError("link cost weights must be >= 0")
        if self.w_energy == self.w_reserve == self.w_error == 0:
            raise ValueError("at least one link cost weight must be nonzero")
        if self.error_ref_distance <= 0:
            raise ValueError("error_ref_distance must be positive")


@dataclass
class EnergyState:
    """Per-node residual battery; all nodes start at the same level."""

    initial_j: float
    residual_j: list[float]

    @classmethod
    def fresh(cls, n: int, initial_j: float) -> "EnergyState":
        if n < 1:
            raise ValueError(f"need at least one node, got n={n}")
        if initial_j <= 0:
            raise ValueError(f"initial battery must be positive, got {initial_j}")
        return cls(initial_j=initial_j, residual_j=[initial_j] * n)


def tx_energy(p: RadioParams, bits: int, d: float) -> float:
    """Transmission energy for ``bits`` over distance ``d``."""
    if d < 0:
        raise ValueError(f"distance must be >= 0, got {d}")
    return p.e_elec * bits + p.eps_amp * bits * d**p.alpha


def rx_energy(p: RadioParams, bits: int) -> float:
    """Reception energy for ``bits``; distance-independent."""
    return p.e_elec * bits


def per_link_error(d: float, ref: float) -> float:
    """Saturating error term: 0 at d=0, 0.5 at d=ref, approaching 1 as d grows."""
    return 1.0 - math.exp(-_LN2 * d / ref)


def link_cost(
    field: SensorField,
    i: int,
    j: int,
    state: EnergyState,
    rp: RadioParams,
    lcp: LinkCostParams,
) -> float:
    """Composite cost of sending one packet from node i to node j.

    Sum of: w_energy * tx energy normalized so a link at error_ref_distance
    costs exactly 1; w_reserve * receiver's depleted battery fraction;
    w_error * the per-link error term.
    """
    if i == j:
        raise ValueError(f"link endpoints must differ, got i == j == {i}")
    if state.residual_j[i] <= 0:
        raise DeadNodeError(f"node {i} has no residual energy")
    d = distance(field.points[i], field.points[j])
    e_norm = tx_energy(rp, rp.packet_bits, lcp.error_ref_distance)
    energy_term = tx_energy(rp, rp.packet_bits, d) / e_norm
    reserve_term = 1.0 - state.residual_j[j] / state.initial_j
    return (
        lcp.w_energy * energy_term
        + lcp.w_reserve * reserve_term
        + lcp.w_error * per_link_error(d, lcp.error_ref_distance)
    )


def route_cost(
    field: SensorField,
    route: Route,
    state: EnergyState,
    rp: RadioParams,
    lcp: LinkCostParams,
) -> float:
    """Sum of link costs over consecutive pairs (plus the closing link iff closed).

    Note this is not geometric length: with weights (1,0,0) and alpha=2 it
    ranks routes by the sum of squared hop distances.
    """
    validate_route(field, route)
    order = route.order
    total = 0.0
    for a, b in zip(order, order[1:]):
        total += link_cost(field, a, b, state, rp, lcp)
    if route.closed and len(order) > 1:
        total += link_cost(field, order[-1], order[0], state, rp, lcp)
    return total


_FLOAT_KEYS = (
    "e_elec",
    "eps_amp",
    "alpha",
    "w_energy",
    "w_reserve",
    "w_error",
    "error_ref_distance",
    "initial_battery_j",
    "per_hop_s",
    "prop_speed",
    "d_max_s",
)
_INT_KEYS = ("packet_bits",)


@dataclass(frozen=True)
class EnergyConfig:
    """Everything the simulate workflow needs, loadable from key=value text."""

    radio: RadioParams
    link: LinkCostParams
    initial_battery_j: float = 0.5
    per_hop_s: float = 1e-3
    prop_speed: float = 3e8
    d_max_s: float = math.inf


def parse_config(text: str) -> EnergyConfig:
    """Parse flat ``key=value`` lines; ``#`` starts a comment, blanks ignored.

    Unknown keys are rejected so typos fail loudly. Any subset of keys may be
    given; the rest keep their defaults.
    """
    values: dict[str, float | int] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {line_no}: expected key=value, got {raw.strip()!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in _FLOAT_KEYS and key not in _INT_KEYS:
            raise ValueError(f"config line {line_no}: unknown key {key!r}")
        try:
            values[key] = int(val) if key in _INT_KEYS else float(val)
        except ValueError:
            raise ValueError(f"config line {line_no}: bad value for {key}: {val!r}") from None
    radio = RadioParams(
        e_elec=float(values.get("e_elec", 50e-9)),
        eps_amp=float(values.get("eps_amp", 100e-12)),
        alpha=float(values.get("alpha", 2.0)),
        packet_bits=int(values.get("packet_bits", 2000)),
    )
    link = LinkCostParams(
        w_energy=float(values.get("w_energy", 1.0)),
        w_reserve=float(values.get("w_reserve", 1.0)),
        w_error=float(values.get("w_error", 1.0)),
        error_ref_distance=float(values.get("error_ref_distance", 100.0)),
    )
    return EnergyConfig(
        radio=radio,
        link=link,
        initial_battery_j=float(values.get("initial_battery_j", 0.5)),
        per_hop_s=float(values.get("per_hop_s", 1e-3)),
        prop_speed=float(values.get("prop_speed", 3e8)),
        d_max_s=float(values.get("d_max_s", math.inf)),
    )
