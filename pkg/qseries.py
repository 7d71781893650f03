"""
Truncated integer power series and the named q-series.

All coefficients are Python integers, so every value is exact at any order.
Builders are memoized per order through cache.cached.
"""

from typing import Dict, Iterable, Union

from cache import cached
from config import get_logger
from exceptions import IntegrityError, OddNorm

logger = get_logger(__name__)

# Leading terms of ff_level2_series / sum p(n) q^n
FF_LEVEL2_FACTOR_HEAD = {0: 1, 20: -1, 22: 1, 24: -1, 26: 1, 28: -2}


class PowerSeries:
    """
    sum_{n=0}^{order} coeffs[n] q^n, immutable.

    Binary operations between series of different orders truncate to the
    smaller order.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[int], order: int = None):
        values = [int(c) for c in coeffs]
        if order is not None:
            if order < 0:
                raise ValueError("order must be nonnegative")
            values = (values + [0] * (order + 1))[: order + 1]
        if not values:
            raise ValueError("A power series needs at least the constant coefficient")
        self._coeffs = tuple(values)

    @classmethod
    def monomial(cls, exponent: int, order: int, coefficient: int = 1) -> "PowerSeries":
        coeffs = [0] * (order + 1)
        if exponent <= order:
            coeffs[exponent] = coefficient
        return cls(coeffs)

    @classmethod
    def one(cls, order: int) -> "PowerSeries":
        return cls.monomial(0, order)

    @property
    def order(self) -> int:
        return len(self._coeffs) - 1

    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    def __getitem__(self, n: int) -> int:
        if n < 0 or n > self.order:
            raise IndexError(f"Coefficient {n} outside order {self.order}")
        return self._coeffs[n]

    def __len__(self) -> int:
        return len(self._coeffs)

    def __iter__(self):
        return iter(self._coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self._coeffs[:8])
        tail = ", ..." if self.order >= 8 else ""
        return f"PowerSeries([{head}{tail}], order={self.order})"

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries(self._coeffs, order=min(order, self.order))

    def _common(self, other: "PowerSeries"):
        order = min(self.order, other.order)
        return self._coeffs[: order + 1], other._coeffs[: order + 1], order

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        a, b, _ = self._common(other)
        return PowerSeries(x + y for x, y in zip(a, b))

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        a, b, _ = self._common(other)
        return PowerSeries(x - y for x, y in zip(a, b))

    def __neg__(self) -> "PowerSeries":
        return PowerSeries(-c for c in self._coeffs)

    def __mul__(self, other: Union["PowerSeries", int]) -> "PowerSeries":
        if isinstance(other, int):
            return PowerSeries(other * c for c in self._coeffs)
        a, b, order = self._common(other)
        out = [0] * (order + 1)
        nonzero_b = [(j, y) for j, y in enumerate(b) if y]
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in nonzero_b:
                if i + j > order:
                    break
                out[i + j] += x * y
        return PowerSeries(out)

    __rmul__ = __mul__

    def inverse(self) -> "PowerSeries":
        """1/self, defined when the constant term is +1 or -1."""
        a0 = self._coeffs[0]
        if a0 not in (1, -1):
            raise ValueError(f"Series with constant term {a0} has no integer inverse")
        order = self.order
        nonzero = [(k, c) for k, c in enumerate(self._coeffs) if k and c]
        inv = [0] * (order + 1)
        inv[0] = a0
        for n in range(1, order + 1):
            total = 0
            for k, c in nonzero:
                if k > n:
                    break
                total += c * inv[n - k]
            inv[n] = -a0 * total
        return PowerSeries(inv)

    def __pow__(self, exponent: int) -> "PowerSeries":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = PowerSeries.one(self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def compose_qk(self, k: int) -> "PowerSeries":
        """f(q^k) at the same order."""
        if k < 1:
            raise ValueError("k must be a positive integer")
        out = [0] * (self.order + 1)
        for n, c in enumerate(self._coeffs):
            if n * k > self.order:
                break
            out[n * k] = c
        return PowerSeries(out)

    def shift(self, k: int) -> "PowerSeries":
        """q^k * f at the same order; negative k requires the dropped coefficients to vanish."""
        if k >= 0:
            return PowerSeries([0] * k + list(self._coeffs), order=self.order)
        dropped = self._coeffs[:-k]
        if any(dropped):
            raise IntegrityError(f"Cannot divide by q^{-k}: leading coefficients {list(dropped)}")
        return PowerSeries(self._coeffs[-k:])

    def to_dict(self, name: str = None) -> Dict:
        payload = {"order": self.order, "coeffs": list(self._coeffs)}
        if name is not None:
            payload = {"name": name, **payload}
        return payload


def _product_series(exponents: Iterable[int], sign: int, order: int) -> PowerSeries:
    """prod (1 + sign*q^e) over the given exponents, truncated at order."""
    coeffs = [0] * (order + 1)
    coeffs[0] = 1
    for e in exponents:
        if e > order:
            break
        for n in range(order, e - 1, -1):
            coeffs[n] += sign * coeffs[n - e]
    return PowerSeries(coeffs)


@cached
def phi_series(order: int) -> PowerSeries:
    """
    Euler's product prod_{n>=1} (1 - q^n) through q^order.

    Uses the pentagonal number theorem:
        phi(q) = sum_{k in Z} (-1)^k q^{k(3k-1)/2}
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    coeffs = [0] * (order + 1)
    coeffs[0] = 1
    k = 1
    while True:
        first = k * (3 * k - 1) // 2
        if first > order:
            break
        sign = -1 if k % 2 else 1
        coeffs[first] += sign
        second = k * (3 * k + 1) // 2
        if second <= order:
            coeffs[second] += sign
        k += 1
    return PowerSeries(coeffs)


@cached
def partitions(order: int) -> PowerSeries:
    """sum p(n) q^n = 1/phi(q)."""
    return phi_series(order).inverse()


@cached
def colored_partitions(colors: int, order: int) -> PowerSeries:
    """
    sum p^(l)(n) q^n = 1/phi(q)^l, partitions into parts of l colors.

    Args:
        colors (int): Number of colors l >= 1
        order (int): Truncation order N >= 0

    Returns:
        PowerSeries: p^(l)(0..N)
    """
    if colors < 1:
        raise ValueError("colors must be at least 1")
    if order < 0:
        raise ValueError("order must be nonnegative")
    if colors == 1:
        return partitions(order)
    return (phi_series(order) ** colors).inverse()


@cached
def xi_series(order: int) -> PowerSeries:
    """sum xi(n) q^n = phi(q)^-8 * (1 - phi(q^2)/phi(q^4))."""
    phi = phi_series(order)
    ratio = phi.compose_qk(2) * phi.compose_qk(4).inverse()
    bracket = PowerSeries.one(order) - ratio
    return colored_partitions(8, order) * bracket


@cached
def ff_level2_factor(order: int) -> PowerSeries:
    """
    prod(1 - q^{4j-2}) * (prod(1 + q^{2j-1}) - prod(1 - q^{2j-1}) - 2q) / (2q^3).

    This is ff_level2_series divided by sum p(n) q^n. The division by 2q^3
    is checked exactly: the three lowest coefficients must vanish and every
    coefficient must be even.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    work = order + 3
    odd = range(1, work + 1, 2)
    bracket = (
        _product_series(odd, 1, work)
        - _product_series(odd, -1, work)
        - PowerSeries.monomial(1, work, 2)
    )
    raw = _product_series(range(2, work + 1, 4), -1, work) * bracket
    shifted = raw.shift(-3)
    odd_terms = [n for n, c in enumerate(shifted) if c % 2]
    if odd_terms:
        raise IntegrityError(f"Level-2 generating function has odd coefficients at {odd_terms[:5]}")
    factor = PowerSeries(c // 2 for c in shifted)

    for n in range(min(order, 28) + 1):
        expected = FF_LEVEL2_FACTOR_HEAD.get(n, 0)
        if factor[n] != expected:
            raise IntegrityError(f"Level-2 factor coefficient {n} is {factor[n]}, expected {expected}")
    return factor


@cached
def ff_level2_series(order: int) -> PowerSeries:
    """
    sum M(n-1) q^n, the level 2 multiplicities of the rank 3 hyperbolic algebra.

    Equal to (1 - q^20 + q^22 - q^24 + q^26 - 2q^28 + ...) * sum p(n) q^n.
    """
    series = ff_level2_factor(order) * partitions(order)
    negative = [n for n, c in enumerate(series) if c < 0]
    if negative:
        raise IntegrityError(f"Level-2 multiplicities negative at {negative[:5]}")
    return series


@cached
def p_sigma_series(order: int) -> PowerSeries:
    """
    sum p_sigma(n) q^n = 1/(phi(q) phi(q^23)).

    The eta prefactors q^{1/24} q^{23/24} cancel the leading q, so only the
    phi quotient is expanded. Cross-checked against (sum p(n) q^n)(sum p(n) q^{23n}).
    """
    phi = phi_series(order)
    series = (phi * phi.compose_qk(23)).inverse()
    p = partitions(order)
    if series != p * p.compose_qk(23):
        raise IntegrityError("p_sigma expansion disagrees with its product form")
    return series


@cached
def tau_series(order: int) -> PowerSeries:
    """Ramanujan tau: q * phi(q)^24 = sum tau(n) q^n."""
    if order < 1:
        raise ValueError("order must be at least 1")
    return (phi_series(order) ** 24).shift(1)


SERIES_BUILDERS = {
    "p": partitions,
    "xi": xi_series,
    "ff_level2": ff_level2_series,
    "p_sigma": p_sigma_series,
    "tau": tau_series,
}


def build_series(name: str, order: int, colors: int = None) -> PowerSeries:
    """Named series for the CLI: p, p_l (needs colors), xi, ff_level2, p_sigma, tau."""
    if name == "p_l":
        if colors is None:
            raise ValueError("p_l needs a number of colors")
        return colored_partitions(colors, order)
    if name not in SERIES_BUILDERS:
        raise ValueError(f"Unknown series {name!r}; known: {', '.join(sorted(SERIES_BUILDERS) + ['p_l'])}")
    logger.debug(f"Building series {name} to order {order}")
    return SERIES_BUILDERS[name](order)


def partition_index(norm: int, offset: int = 1) -> int:
    """
    offset - norm/2, the argument of the partition-type bounds.

    Raises:
        OddNorm: If norm is odd or the index is negative
    """
    if norm % 2:
        raise OddNorm(f"Norm {norm} is odd")
    index = offset - norm // 2
    if index < 0:
        raise OddNorm(f"Index {offset} - ({norm})/2 = {index} is negative")
    return index


def coefficient(series_builder, index: int, *args, order: int = None) -> int:
    """series_builder(*args, N)[index] with N = max(index, order)."""
    N = index if order is None else max(index, order)
    return series_builder(*args, N)[index]


def f_level1_mult(norm: int) -> int:
    """Level 1 multiplicity of the rank 3 hyperbolic algebra: p(1 - norm/2)."""
    return coefficient(partitions, partition_index(norm))


def e10_level_mult(norm: int, level: int) -> int:
    """
    E10 multiplicities at levels 0, 1 and 2.

    Level 0 roots are the affine E9 roots (norm 2 or 0); level 1 gives
    p^(8)(1 - norm/2); level 2 gives xi(3 - norm/2).
    """
    if level == 0:
        if norm == 2:
            return 1
        if norm == 0:
            return 8
        return 0
    if level == 1:
        return coefficient(colored_partitions, partition_index(norm), 8)
    if level == 2:
        return coefficient(xi_series, partition_index(norm, offset=3))
    raise ValueError(f"No closed formula for level {level}")


