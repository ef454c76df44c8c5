"""Error propagation through adaptive protocols ("peeling").

Replacing every transmission of an n-round adaptive protocol by its
teleportation simulation changes the final state by at most n times the
per-use simulation error: monotonicity of the trace distance under channels
peels the outermost use off, the triangle inequality splits it from the
rest, and induction does the counting.  The per-use error delta is measured
in the topology of interest: unconstrained diamond norm (uniform),
energy-constrained diamond norm (bounded-uniform), or per-state trace
distance (strong).
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .channels import GaussianChannel, apply_channel
from .convergence import decide_uniform, diamond_upper_bound
from .errors import DomainError, NoUniformBoundError
from .fidelity import fuchs_vdg, gaussian_fidelity
from .symplectic import SymplecticMatrix, apply_affine, tmsv_state
from .teleportation import simulate_channel

__all__ = [
    "TOPOLOGIES",
    "AdaptiveProtocolSpec",
    "PeelingBound",
    "TwoRoundReport",
    "peel_bound",
    "epsilon_tp_bound",
    "two_round_demo",
]

TOPOLOGIES = ("bounded_uniform", "uniform", "strong")


@dataclasses.dataclass(frozen=True)
class AdaptiveProtocolSpec:
    """Validated description of an n-round adaptive protocol over a channel.

    The uniform topology demands a full-rank noise matrix (otherwise no
    energy-independent bound exists); the bounded-uniform topology demands a
    finite energy bound on the input alphabet.
    """

    rounds: int
    channel: GaussianChannel
    topology: str
    energy_bound: float | None = None

    def __post_init__(self):
        if self.rounds < 1:
            raise DomainError(f"round count must be >= 1, got {self.rounds}")
        if self.topology not in TOPOLOGIES:
            raise DomainError(f"topology must be one of {TOPOLOGIES}, got {self.topology!r}")
        if self.topology == "uniform" and not decide_uniform(self.channel).uniform:
            raise NoUniformBoundError(
                "uniform topology requires a full-rank noise matrix")
        if self.topology == "bounded_uniform" and (
                self.energy_bound is None or not np.isfinite(self.energy_bound)):
            raise DomainError("bounded_uniform topology requires a finite energy bound")


@dataclasses.dataclass(frozen=True)
class PeelingBound:
    """Per-use error and its n-fold accumulation, ``total = n delta``."""

    per_use_delta: float
    total: float
    topology: str


def peel_bound(n: int, delta: float, topology: str) -> PeelingBound:
    """Accumulated output error after n uses at per-use error delta."""
    if n < 1:
        raise DomainError(f"round count must be >= 1, got {n}")
    if topology not in TOPOLOGIES:
        raise DomainError(f"topology must be one of {TOPOLOGIES}, got {topology!r}")
    if not 0.0 <= delta <= 2.0:
        raise DomainError(f"per-use trace-distance error must lie in [0, 2], got {delta}")
    return PeelingBound(per_use_delta=float(delta), total=n * float(delta),
                        topology=topology)


def epsilon_tp_bound(n: int, mu: float, ch: GaussianChannel, topology: str,
                     params: dict | None = None) -> float:
    """Upper bound ``n delta / 2`` on the output infidelity of the simulated
    protocol.

    delta is the computable per-use bound: the diamond upper bound for the
    uniform topology; the same channel-level bound under the bounded-uniform
    topology (the energy bound enters only as metadata, since the bound
    dominates its energy-constrained restriction); and the same quantity
    again for the strong topology, where it dominates the error of every
    state the protocol actually produces rather than a true supremum.
    """
    params = dict(params or {})
    spec = AdaptiveProtocolSpec(rounds=n, channel=ch, topology=topology,
                                energy_bound=params.get("energy_bound"))
    delta = diamond_upper_bound(ch, mu, r=params.get("r", 1.0),
                                a=params.get("a", 1.0), c=params.get("c", 0.0))
    return spec.rounds * delta / 2.0


def _two_mode_squeezer(s: float) -> SymplecticMatrix:
    z = np.diag([1.0, -1.0])
    ch_, sh_ = np.cosh(s), np.sinh(s)
    return SymplecticMatrix(np.block([[ch_ * np.eye(2), sh_ * z],
                                      [sh_ * z, ch_ * np.eye(2)]]))


@dataclasses.dataclass(frozen=True)
class TwoRoundReport:
    """Numbers produced by the two-round interleaving demonstration."""

    mu: float
    per_use_delta: float
    peel_total: float
    fidelity: float
    trace_upper_bound: float
    holds: bool


def two_round_demo(ch: GaussianChannel, mu: float,
                   lo_cc_squeeze: float = 0.2) -> TwoRoundReport:
    """Exercise the two-round peeling chain on a concrete Gaussian protocol.

    A two-mode squeezed probe (variance 2) sends its second mode through the
    channel, the two modes interact through a fixed two-mode squeezer of
    parameter ``lo_cc_squeeze`` (a measurement-free stand-in for the adaptive
    operation), and the second mode is transmitted again.  The run is
    repeated with the mu-resource simulated channel, and the trace distance
    between the two final states, estimated from above via their fidelity, is
    checked against the accumulated peeling bound ``2 delta``.

    The channel must be in canonical form (the per-use bound is evaluated in
    the canonical dilation frame) with full-rank noise.
    """
    delta = diamond_upper_bound(ch, mu)
    effective = simulate_channel(ch, mu).effective
    locc = _two_mode_squeezer(lo_cc_squeeze)

    def run(channel):
        state = tmsv_state(2.0)
        state = apply_channel(channel, state, target_mode=1)
        state = apply_affine(state, locc)
        return apply_channel(channel, state, target_mode=1)

    f = gaussian_fidelity(run(ch), run(effective))
    trace_ub = fuchs_vdg(f).upper
    holds = trace_ub <= 2.0 * delta + 1e-12
    if not holds:
        raise ArithmeticError(
            f"two-round trace bound {trace_ub:g} exceeds peeling total {2 * delta:g}")
    return TwoRoundReport(mu=float(mu), per_use_delta=delta, peel_total=2.0 * delta,
                          fidelity=f, trace_upper_bound=trace_ub, holds=holds)
