"""
Root lattice arithmetic

Root vectors are plain integer tuples over the simple-root basis. This module
holds the invariant form, simple reflections, the real / imaginary root tests
and the enumeration of the Weyl sums s(w) = rho - w(rho) that index the sum
side of the denominator identity.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

from cache import cached
from cartan import GCM
from config import get_logger
from exceptions import NotInPositiveCone, NotSymmetrizable, ParseError

logger = get_logger(__name__)

RootVector = Tuple[int, ...]

REAL = "real"
IMAGINARY = "imaginary"
NOT_A_ROOT = "none"


def height(alpha: Sequence[int]) -> int:
    return sum(alpha)


def is_positive(alpha: Sequence[int]) -> bool:
    """True for vectors in Q+: all coordinates nonnegative and not all zero."""
    return all(c >= 0 for c in alpha) and any(c > 0 for c in alpha)


def require_positive(alpha: Sequence[int]) -> RootVector:
    alpha = tuple(int(c) for c in alpha)
    if not is_positive(alpha):
        raise NotInPositiveCone(f"{format_root(alpha)} is not in Q+")
    return alpha


def simple_root(n: int, i: int) -> RootVector:
    return tuple(1 if j == i else 0 for j in range(n))


def level(alpha: Sequence[int], node: int) -> int:
    """Coefficient of the over-extending simple root."""
    return alpha[node]


def parse_root(text: str, n: int = None) -> RootVector:
    """Parse '(c1,...,cn)', 'c1,...,cn' or a JSON array."""
    cleaned = text.strip().strip("()[]")
    try:
        coords = tuple(int(part) for part in cleaned.split(",") if part.strip())
    except ValueError as e:
        raise ParseError(f"Invalid root {text!r}: {e}")
    if not coords:
        raise ParseError(f"Empty root {text!r}")
    if n is not None and len(coords) != n:
        raise ParseError(f"Root {text!r} has {len(coords)} coordinates, matrix rank is {n}")
    return coords


def format_root(alpha: Sequence[int]) -> str:
    return "(" + ",".join(str(c) for c in alpha) + ")"


def pairing(g: GCM, alpha: Sequence[int], i: int) -> int:
    """<alpha, alpha_i^vee> = sum_j a[i][j] * alpha[j]."""
    row = g.a[i]
    return sum(row[j] * alpha[j] for j in range(len(row)))


def bilinear(g: GCM, alpha: Sequence[int], beta: Sequence[int]) -> int:
    """
    Invariant form (alpha|beta) = alpha^T B beta with B = diag(d) A.

    With the coprime normalization of d, (alpha_i|alpha_i) = 2*d_i; for a
    symmetric matrix every simple root has norm 2.

    Raises:
        NotSymmetrizable: If g has no symmetrizing vector
    """
    b = g.b
    n = g.n
    total = 0
    for i in range(n):
        if alpha[i] == 0:
            continue
        row = b[i]
        total += alpha[i] * sum(row[j] * beta[j] for j in range(n))
    return total


def norm(g: GCM, alpha: Sequence[int]) -> int:
    return bilinear(g, alpha, alpha)


def form_vector(g: GCM, alpha: Sequence[int]) -> RootVector:
    """B*alpha, so that (beta|alpha) is a dot product with beta."""
    b = g.b
    n = g.n
    return tuple(sum(b[i][j] * alpha[j] for j in range(n)) for i in range(n))


def rho_pairing(g: GCM, alpha: Sequence[int]) -> int:
    """(rho|alpha) = sum_i alpha_i * d_i, since (rho|alpha_i) = (alpha_i|alpha_i)/2."""
    if g.d is None:
        raise NotSymmetrizable(f"{g} is not symmetrizable")
    return sum(c * d for c, d in zip(alpha, g.d))


def reflect(g: GCM, i: int, alpha: Sequence[int]) -> RootVector:
    """Simple reflection r_i(alpha) = alpha - <alpha, alpha_i^vee> alpha_i."""
    if not 0 <= i < g.n:
        raise ValueError(f"Reflection index {i} out of range for rank {g.n}")
    out = list(alpha)
    out[i] -= pairing(g, alpha, i)
    return tuple(out)


def weyl_apply(g: GCM, word: Iterable[int], alpha: Sequence[int]) -> RootVector:
    """Apply w = r_{i1} r_{i2} ... r_{ik} to alpha (rightmost reflection first)."""
    result = tuple(alpha)
    for i in reversed(list(word)):
        result = reflect(g, i, result)
    return result


def _support_connected(a, alpha: Sequence[int]) -> bool:
    support = [i for i, c in enumerate(alpha) if c > 0]
    if not support:
        return False
    members = set(support)
    seen = {support[0]}
    stack = [support[0]]
    while stack:
        i = stack.pop()
        for j in members:
            if j not in seen and a[i][j] != 0:
                seen.add(j)
                stack.append(j)
    return len(seen) == len(members)


@lru_cache(maxsize=200000)
def _positive_root_kind(a, alpha: RootVector) -> str:
    # Height-reducing descent: a positive real root reaches a simple root, a
    # positive imaginary root reaches the fundamental set K, anything else
    # leaves Q+ or stalls outside K.
    n = len(a)
    beta = list(alpha)
    while True:
        if sum(beta) == 1:
            return REAL
        step = None
        for i in range(n):
            p = sum(a[i][j] * beta[j] for j in range(n))
            if p > 0:
                step = (i, p)
                break
        if step is None:
            return IMAGINARY if _support_connected(a, beta) else NOT_A_ROOT
        i, p = step
        beta[i] -= p
        if beta[i] < 0:
            return NOT_A_ROOT


def root_kind(g: GCM, alpha: Sequence[int]) -> str:
    """'real', 'imaginary' or 'none' for a vector of either sign."""
    alpha = tuple(alpha)
    if is_positive(alpha):
        return _positive_root_kind(g.a, alpha)
    negated = tuple(-c for c in alpha)
    if is_positive(negated):
        return _positive_root_kind(g.a, negated)
    return NOT_A_ROOT


def is_real_root(g: GCM, alpha: Sequence[int]) -> bool:
    return root_kind(g, alpha) == REAL


def is_positive_imaginary_root(g: GCM, alpha: Sequence[int]) -> bool:
    alpha = tuple(alpha)
    return is_positive(alpha) and _positive_root_kind(g.a, alpha) == IMAGINARY


def is_root(g: GCM, alpha: Sequence[int]) -> bool:
    return root_kind(g, alpha) != NOT_A_ROOT


def positive_roots(g: GCM, max_height: int) -> Dict[int, List[RootVector]]:
    """
    Positive roots by height up to max_height.

    Every positive non-simple root is some root plus a simple root, so each
    shell is grown from the previous one and filtered by the root test.
    """
    n = g.n
    shells: Dict[int, List[RootVector]] = {}
    if max_height < 1:
        return shells
    shells[1] = sorted(simple_root(n, i) for i in range(n))
    for h in range(2, max_height + 1):
        candidates = set()
        for beta in shells[h - 1]:
            for i in range(n):
                candidates.add(tuple(beta[j] + (1 if j == i else 0) for j in range(n)))
        shells[h] = sorted(c for c in candidates if _positive_root_kind(g.a, c) != NOT_A_ROOT)
    return shells


@dataclass(frozen=True)
class WeylElement:
    """Weyl group element w != 1 recorded by a reduced word and s(w) = rho - w(rho)."""

    word: Tuple[int, ...]
    length: int
    sw: RootVector

    @property
    def epsilon(self) -> int:
        """Sign of s(w) in 1 - sum eps e(-s(w)): (-1)^(l(w)+1)."""
        return -1 if self.length % 2 == 0 else 1

    @property
    def height(self) -> int:
        return sum(self.sw)


@cached
def enumerate_weyl_sums(g: GCM, max_height: int) -> Tuple[WeylElement, ...]:
    """
    All w != 1 with height(s(w)) <= max_height, sorted by (height, coords).

    Breadth-first over right multiplication by simple reflections:
    s(w r_i) = s(w) + w(alpha_i) whenever w(alpha_i) > 0, which strictly
    raises the height, so pruning at max_height loses nothing. Elements are
    deduplicated by s(w) (w -> rho - w(rho) is injective).

    Args:
        g (GCM): Cartan matrix
        max_height (int): Height bound H >= 1

    Returns:
        Tuple[WeylElement, ...]: Each element exactly once
    """
    if max_height < 1:
        raise ValueError("max_height must be at least 1")

    n = g.n
    a = g.a
    identity_images = tuple(simple_root(n, j) for j in range(n))
    zero = tuple([0] * n)
    frontier = [((), zero, identity_images)]
    seen = {zero}
    found: List[WeylElement] = []

    while frontier:
        next_frontier = []
        for word, sw, images in frontier:
            for i in range(n):
                image = images[i]
                if any(c < 0 for c in image):
                    continue
                new_sw = tuple(s + c for s, c in zip(sw, image))
                if sum(new_sw) > max_height or new_sw in seen:
                    continue
                seen.add(new_sw)
                new_images = tuple(
                    tuple(images[j][k] - a[i][j] * image[k] for k in range(n))
                    for j in range(n)
                )
                new_word = word + (i,)
                found.append(WeylElement(word=new_word, length=len(new_word), sw=new_sw))
                next_frontier.append((new_word, new_sw, new_images))
        frontier = next_frontier

    found.sort(key=lambda w: (w.height, w.sw))
    logger.debug(f"Enumerated {len(found)} Weyl sums up to height {max_height} for {g}")
    return tuple(found)
