"""Closed-form hitting-time guarantees for variance-driven processes.

Each BoundSpec names one guarantee family and carries its parameters; the
two evaluators below turn a spec into an expected-time ceiling or a tail
probability.  Families:

* ``NegativeDriftVariance`` -- potential in [0, b] drifting weakly downward
  (step expectation in [-c/n, 0)) with per-step second moment at least
  delta; target is 0.  E[T] <= (b^2 - (b - x0)^2) / delta and
  Pr(T > tau) <= exp(-tau * delta / (e * b^2)).
* ``StandardVariance`` -- nonnegative drift toward b with second moment at
  least delta, started at x0: E[T] <= (b^2 - x0^2) / delta, same tail shape.
* ``TwoAbsorbing`` -- zero-drift process on [0, b] absorbed at either end,
  second moment at least delta: E[T] <= x0 * (b - x0) / delta and
  Pr(T >= tau) <= exp(-2 * tau * delta / (e * b^2)).
* ``Additive`` -- drift at least epsilon toward the target b:
  E[T] <= (b - x0) / epsilon, Pr(T >= tau) <= exp(-tau * epsilon / (e * b)).
* ``KotzingPolynomial`` -- heavy-step regime with scale parameters
  (ell, c, n): only a tail is available,
  Pr(T >= r * n^2) <= (1/r)^(1 / (ell * ln c)) at tau = r * n^2.
  Logarithms here are natural.

Tail values are clamped into [0, 1]; a clamped bound is vacuous, not wrong.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

KINDS = (
    "NegativeDriftVariance",
    "StandardVariance",
    "TwoAbsorbing",
    "Additive",
    "KotzingPolynomial",
)

_NEEDS_DELTA = {"NegativeDriftVariance", "StandardVariance", "TwoAbsorbing"}


@dataclass(frozen=True)
class BoundSpec:
    """Parameters of one closed-form guarantee.

    b is the potential range endpoint and x0 the start, with 0 <= x0 <= b.
    delta (second-moment floor), epsilon (drift floor), and the
    KotzingPolynomial scale triple (ell, c, n) are required exactly by the
    kinds that use them.
    """

    kind: str
    b: float = 0.0
    x0: float = 0.0
    delta: float | None = None
    epsilon: float | None = None
    ell: float | None = None
    c: float | None = None
    n: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown bound kind {self.kind!r}; choose from {KINDS}")
        if self.kind == "KotzingPolynomial":
            if self.ell is None or self.ell <= 0:
                raise ValueError("KotzingPolynomial requires ell > 0")
            if self.c is None or self.c <= 1:
                raise ValueError("KotzingPolynomial requires c > 1")
            if self.n is None or self.n < 2:
                raise ValueError("KotzingPolynomial requires integer n >= 2")
            return
        if not self.b > 0:
            raise ValueError(f"{self.kind} requires b > 0, got {self.b!r}")
        if not 0 <= self.x0 <= self.b:
            raise ValueError(f"x0 must lie in [0, b], got {self.x0!r}")
        if self.kind in _NEEDS_DELTA:
            if self.delta is None or self.delta <= 0:
                raise ValueError(f"{self.kind} requires delta > 0")
        if self.kind == "Additive":
            if self.epsilon is None or self.epsilon <= 0:
                raise ValueError("Additive requires epsilon > 0")


def expected_time_upper(spec: BoundSpec) -> float:
    """Expected-hitting-time ceiling for the given bound family."""
    if spec.kind == "NegativeDriftVariance":
        return (spec.b**2 - (spec.b - spec.x0) ** 2) / spec.delta
    if spec.kind == "StandardVariance":
        return (spec.b**2 - spec.x0**2) / spec.delta
    if spec.kind == "TwoAbsorbing":
        return spec.x0 * (spec.b - spec.x0) / spec.delta
    if spec.kind == "Additive":
        return (spec.b - spec.x0) / spec.epsilon
    # KotzingPolynomial comes with a tail only; there is no mean guarantee.
    raise ValueError(f"{spec.kind} provides no expected-time bound")


def tail_probability_upper(spec: BoundSpec, tau: float) -> float:
    """Probability ceiling for the event {T at least tau}, clamped to [0, 1]."""
    if tau < 0:
        raise ValueError(f"tau must be nonnegative, got {tau!r}")
    if spec.kind in ("NegativeDriftVariance", "StandardVariance"):
        raw = math.exp(-tau * spec.delta / (math.e * spec.b**2))
    elif spec.kind == "TwoAbsorbing":
        raw = math.exp(-2.0 * tau * spec.delta / (math.e * spec.b**2))
    elif spec.kind == "Additive":
        raw = math.exp(-tau * spec.epsilon / (math.e * spec.b))
    else:  # KotzingPolynomial
        r = tau / spec.n**2
        if r <= 1.0:
            return 1.0
        raw = r ** (-1.0 / (spec.ell * math.log(spec.c)))
    return min(1.0, max(0.0, raw))
