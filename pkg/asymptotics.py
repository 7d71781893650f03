"""
Hardy-Ramanujan-Rademacher main terms.

p_sigma(n+1) ~ 2*pi/(n*sqrt(23)) * I_2(4*pi*sqrt(n)/sqrt(23))
p(n)         ~ exp(pi*sqrt(2n/3)) / (4*n*sqrt(3))

Double precision throughout; exact values for comparison come from qseries.
"""

import math
from dataclasses import asdict, dataclass
from typing import Optional

from config import get_logger
from exceptions import OddNorm
from qseries import coefficient, p_sigma_series, partitions

logger = get_logger(__name__)

# Below this argument I_nu is summed from its ascending series, above it from
# the large-argument expansion. Both agree to ~1e-15 relative at the switch.
BESSEL_SWITCHOVER = 30.0
_EXP_LIMIT = 709.0

SQRT23 = math.sqrt(23.0)


@dataclass
class AsymptoticEstimate:
    n: int
    main_term: float
    exact: Optional[int] = None
    relative_error: Optional[float] = None
    error_scale: Optional[float] = None

    def __post_init__(self):
        if self.exact is not None and self.relative_error is None and self.exact != 0:
            self.relative_error = abs(self.main_term - self.exact) / self.exact

    def to_dict(self) -> dict:
        return asdict(self)


def _bessel_i_series(nu: int, x: float) -> float:
    half = x / 2.0
    term = half ** nu / math.factorial(nu)
    total = term
    m = 0
    while True:
        m += 1
        term *= half * half / (m * (m + nu))
        total += term
        if term <= total * 1e-17:
            return total


def _bessel_i_asymptotic(nu: int, x: float) -> float:
    if x > _EXP_LIMIT:
        return math.inf
    mu = 4.0 * nu * nu
    total = 1.0
    term = 1.0
    k = 0
    while True:
        k += 1
        factor = -(mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        next_term = term * factor
        if abs(next_term) < 1e-17 or abs(next_term) > abs(term):
            break
        term = next_term
        total += term
    return math.exp(x) / math.sqrt(2.0 * math.pi * x) * total


def bessel_i(nu: int, x: float) -> float:
    """
    Modified Bessel function of the first kind I_nu(x) for integer nu >= 0, x >= 0.

    Ascending series for x <= BESSEL_SWITCHOVER, large-argument expansion
    e^x/sqrt(2 pi x) * sum_k (-1)^k a_k(nu)/x^k above it. Returns +inf on overflow.
    """
    if nu < 0:
        raise ValueError("nu must be nonnegative")
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x == 0:
        return 1.0 if nu == 0 else 0.0
    if x <= BESSEL_SWITCHOVER:
        return _bessel_i_series(nu, x)
    return _bessel_i_asymptotic(nu, x)


def bessel_i2(x: float) -> float:
    return bessel_i(2, x)


def hrr_main_term(n: int) -> float:
    """Main term 2*pi/(n*sqrt(23)) * I_2(4*pi*sqrt(n)/sqrt(23)), estimating p_sigma(n+1)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return 2.0 * math.pi / (n * SQRT23) * bessel_i2(4.0 * math.pi * math.sqrt(n) / SQRT23)


def hrr_error_scale(n: int) -> float:
    """n^(-1/2) * I_2(2*pi*sqrt(n)/sqrt(23)), the size of the neglected terms."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return bessel_i2(2.0 * math.pi * math.sqrt(n) / SQRT23) / math.sqrt(n)


def p_sigma_leading(n: int) -> float:
    """Exponential form of the main term: e^{4 pi sqrt(n)/sqrt(23)} / (n^{5/4} 23^{1/4} sqrt(2))."""
    if n < 1:
        raise ValueError("n must be at least 1")
    exponent = 4.0 * math.pi * math.sqrt(n) / SQRT23
    if exponent > _EXP_LIMIT:
        return math.inf
    return math.exp(exponent) / (n ** 1.25 * 23.0 ** 0.25 * math.sqrt(2.0))


def classical_partition_main(n: int) -> float:
    if n < 1:
        raise ValueError("n must be at least 1")
    exponent = math.pi * math.sqrt(2.0 * n / 3.0)
    if exponent > _EXP_LIMIT:
        return math.inf
    return math.exp(exponent) / (4.0 * n * math.sqrt(3.0))


def index_from_norm(norm: int) -> int:
    """n = -(alpha|alpha)/2, so the estimated coefficient is p_sigma(n+1)."""
    if norm % 2:
        raise OddNorm(f"Norm {norm} is odd")
    n = -norm // 2
    if n < 1:
        raise OddNorm(f"Norm {norm} gives n = {n}; the main term needs n >= 1")
    return n


def estimate_p_sigma(n: int, max_exact_order: Optional[int] = None) -> AsymptoticEstimate:
    """
    Main term for p_sigma(n+1), with the exact coefficient and relative error
    when n+1 is within max_exact_order (no limit when omitted).
    """
    main = hrr_main_term(n)
    exact = None
    if max_exact_order is None or n + 1 <= max_exact_order:
        exact = coefficient(p_sigma_series, n + 1, order=max_exact_order)
    estimate = AsymptoticEstimate(n=n, main_term=main, exact=exact, error_scale=hrr_error_scale(n))
    logger.debug(f"p_sigma({n + 1}): main term {main:.2f}, exact {exact}")
    return estimate


def estimate_partition(n: int, max_exact_order: Optional[int] = None) -> AsymptoticEstimate:
    """Classical main term for p(n) against the exact value."""
    main = classical_partition_main(n)
    exact = None
    if max_exact_order is None or n <= max_exact_order:
        exact = coefficient(partitions, n, order=max_exact_order)
    return AsymptoticEstimate(n=n, main_term=main, exact=exact)
