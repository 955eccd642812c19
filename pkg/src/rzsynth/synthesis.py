"""Parameter selection for compiling z-rotations onto Clifford+Toffoli.

Given a target angle theta and an accuracy epsilon, pick an ancilla count n
and a comparison constant k so that the realized rotation angle

    theta_star = 2*atan(k / 2**(n-1) - 1)

lands within epsilon of theta in operator norm.  The half-angle tangent of
theta_star is the exact dyadic rational (k - 2**(n-1)) / 2**(n-1), which this
module keeps as a `Fraction` so success probabilities and k round-trips do
not drift through floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import CapacityError

#: Largest supported ancilla count; 2**n must fit an unsigned 64-bit integer.
MAX_ANCILLAS = 62

#: |2**(n-1)*tan(theta/2) - nearest integer| below this counts as exact.
EXACTNESS_TOL = 2.0**-40

_HALF_PI = math.pi / 2.0


@dataclass(frozen=True)
class RotationSpec:
    """A requested z-rotation: target angle in radians plus an accuracy bound.

    The accuracy is an operator-norm distance, so it is dimensionless.
    """

    theta: float
    epsilon: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.theta):
            raise ValueError(f"theta must be finite, got {self.theta!r}")
        if not (math.isfinite(self.epsilon) and self.epsilon > 0.0):
            raise ValueError(f"epsilon must be a positive real, got {self.epsilon!r}")


@dataclass(frozen=True)
class SynthesisParams:
    """Compiled rotation parameters.

    ``n`` is the control-ancilla count, ``k`` the comparison constant in
    [0, 2**n], and ``clifford_power`` the number m of exact quarter turns
    (S gates) split off so that the originally requested angle equals
    ``theta_reduced + m*pi/2`` modulo 2*pi.  ``theta_star`` and
    ``tan_half_star`` are derived, never stored, so they cannot fall out of
    sync with (n, k).
    """

    n: int
    k: int
    clifford_power: int = 0

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_ANCILLAS:
            raise ValueError(f"n must be in [1, {MAX_ANCILLAS}], got {self.n}")
        if not 0 <= self.k <= (1 << self.n):
            raise ValueError(f"k must be in [0, 2^{self.n}], got {self.k}")
        if self.clifford_power not in (-1, 0, 1, 2):
            raise ValueError(f"clifford_power must be -1, 0, 1 or 2, got {self.clifford_power}")

    @property
    def tan_half_star(self) -> Fraction:
        """tan(theta_star/2) as the exact dyadic rational (k - 2^(n-1)) / 2^(n-1)."""
        half = 1 << (self.n - 1)
        return Fraction(self.k - half, half)

    @property
    def theta_star(self) -> float:
        """Realized rotation angle, in [-pi/2, pi/2]."""
        return theta_star_of(self.n, self.k)

    @property
    def is_identity(self) -> bool:
        """True when theta_star == 0, i.e. the circuit is replaced by the identity."""
        return self.k == 1 << (self.n - 1)


def reduce_angle(theta_raw: float) -> tuple[float, int]:
    """Fold a finite angle into [-pi/2, pi/2] plus a count of exact quarter turns.

    Returns ``(theta, m)`` with ``theta_raw = theta + m*(pi/2)  (mod 2*pi)``
    and ``m`` in {-1, 0, 1, 2}.  The quarter turns are applied exactly by
    S, S_dagger or Z gates, so only the residual angle needs synthesis.
    Angles congruent to pi reduce to (0, 2): a bare Z.
    """
    if not math.isfinite(theta_raw):
        raise ValueError(f"angle must be finite, got {theta_raw!r}")
    r = math.remainder(theta_raw, 2.0 * math.pi)  # lands in [-pi, pi]
    if abs(r) == math.pi:
        return 0.0, 2
    if abs(r) <= _HALF_PI:
        return r, 0
    if r > 0.0:
        return r - _HALF_PI, 1
    return r + _HALF_PI, -1


def choose_parameters(spec: RotationSpec) -> SynthesisParams:
    """Pick (n, k) for an already-reduced angle.

    n = 1 + ceil(log2(1/epsilon)) is the smallest count guaranteeing the
    error bound, and k = 2^(n-1) + floor(2^(n-1)*tan(theta/2) + 1/2) rounds
    the half-angle tangent to the dyadic grid (half-integers round up).
    """
    theta = spec.theta
    if abs(theta) > _HALF_PI + 1e-9:
        raise ValueError(
            f"theta={theta!r} is outside [-pi/2, pi/2]; reduce it first (see reduce_angle/synthesize)"
        )
    theta = min(max(theta, -_HALF_PI), _HALF_PI)
    n = max(1, 1 + math.ceil(math.log2(1.0 / spec.epsilon)))
    if n > MAX_ANCILLAS:
        raise CapacityError(
            f"epsilon={spec.epsilon:g} needs n={n} ancillas, beyond the supported "
            f"maximum of n={MAX_ANCILLAS} (2^n must fit 64 bits)"
        )
    half = 1 << (n - 1)
    k = half + math.floor(half * math.tan(theta / 2.0) + 0.5)
    # The formula keeps k in range for any theta in [-pi/2, pi/2]; the clamp
    # only absorbs float fuzz at the endpoints.
    k = min(max(k, 0), 2 * half)
    return SynthesisParams(n=n, k=k)


def synthesize(theta: float, epsilon: float) -> SynthesisParams:
    """Reduce an arbitrary finite angle, then choose parameters.

    The Clifford quarter-turn count from the reduction is recorded in the
    result so callers can reconstruct the full rotation.
    """
    reduced, power = reduce_angle(theta)
    params = choose_parameters(RotationSpec(theta=reduced, epsilon=epsilon))
    return SynthesisParams(n=params.n, k=params.k, clifford_power=power)


def theta_star_of(n: int, k: int) -> float:
    """Realized angle 2*atan(k/2^(n-1) - 1) for ancilla count n and constant k."""
    if not 1 <= n <= MAX_ANCILLAS:
        raise ValueError(f"n must be in [1, {MAX_ANCILLAS}], got {n}")
    if not 0 <= k <= (1 << n):
        raise ValueError(f"k must be in [0, 2^{n}], got {k}")
    half = 1 << (n - 1)
    return 2.0 * math.atan((k - half) / half)


def success_probability_exact(params: SynthesisParams) -> Fraction:
    """Per-attempt probability of the all-zero outcome, as an exact dyadic rational."""
    t = params.tan_half_star
    return (1 + t * t) / 2


def success_probability(params: SynthesisParams) -> float:
    """Per-attempt success probability (1 + tan^2(theta_star/2)) / 2, in [1/2, 1]."""
    return float(success_probability_exact(params))


def global_phase(params: SynthesisParams) -> float:
    """Phase v = arg(k + i*(2^n - k)) in [0, pi/2] carried by the success branch.

    On the all-zero outcome the circuit applies exp(i*v) * diag(1, exp(i*theta_star)).
    """
    return math.atan2((1 << params.n) - params.k, params.k)


def distance_bound(theta: float, theta_star: float) -> float:
    """Exact operator-norm distance between the two rotations: 2*|sin((theta-theta_star)/2)|.

    Always at most |theta - theta_star|.
    """
    return 2.0 * abs(math.sin((theta - theta_star) / 2.0))


def error_bound(n: int) -> float:
    """Guaranteed angle-error bound 2^(1-n) at ancilla count n."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return 2.0 ** (1 - n)


def is_exact(theta: float, n: int) -> bool:
    """True when n-ancilla synthesis reproduces theta with zero error.

    That happens exactly when 2^(n-1)*tan(theta/2) is an integer; the check
    allows 2^-40 of floating slack.
    """
    if not 1 <= n <= MAX_ANCILLAS:
        raise ValueError(f"n must be in [1, {MAX_ANCILLAS}], got {n}")
    x = (1 << (n - 1)) * math.tan(theta / 2.0)
    return abs(x - round(x)) < EXACTNESS_TOL


def expected_repetitions(params: SynthesisParams) -> float:
    """Mean number of attempts of the retry loop: 1 / success probability.

    Strictly below 2 whenever the circuit runs at all; 0 for the identity
    path (theta_star == 0), which never enters the loop.
    """
    if params.is_identity:
        return 0.0
    return float(1 / success_probability_exact(params))
