"""
Generalized Cartan matrices

Validation, symmetrization, type classification and the extended /
over-extended diagram constructions. Every test here is exact: principal
minors and characteristic polynomials are computed over the integers with
sympy, so classification never depends on floating point.
"""

import json
import hashlib
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from itertools import permutations
from math import gcd
from typing import List, Optional, Sequence, Tuple

import sympy

from config import get_logger
from exceptions import DecomposableMatrix, NotGCM, NotSymmetrizable, WrongType

logger = get_logger(__name__)

Matrix = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class GCM:
    """
    Generalized Cartan matrix with its symmetrizing diagonal.

    Attributes:
        a: n x n integer matrix, a[i][j] = <alpha_j, alpha_i^vee>
        d: positive integers with d[i]*a[i][j] symmetric, or None when no such
           vector exists; normalized per connected component to be coprime
        name: optional preset name, not part of equality
    """

    a: Matrix
    d: Optional[Tuple[int, ...]]
    name: Optional[str] = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def symmetrizable(self) -> bool:
        return self.d is not None

    @property
    def is_symmetric(self) -> bool:
        return all(self.a[i][j] == self.a[j][i] for i in range(self.n) for j in range(self.n))

    @cached_property
    def b(self) -> Matrix:
        """Symmetrized matrix B = diag(d)*A, so (alpha_i|alpha_j) = B[i][j]."""
        if self.d is None:
            raise NotSymmetrizable(f"Matrix {self.to_text()} is not symmetrizable")
        return tuple(
            tuple(self.d[i] * self.a[i][j] for j in range(self.n))
            for i in range(self.n)
        )

    @cached_property
    def gcm_id(self) -> str:
        """Content hash of the matrix entries."""
        return hashlib.sha256(json.dumps([list(row) for row in self.a]).encode()).hexdigest()

    def to_text(self) -> str:
        """Render in the 'r1;r2;...' text form, entries separated by commas."""
        return ";".join(",".join(str(x) for x in row) for row in self.a)

    def submatrix(self, indices: Sequence[int]) -> "GCM":
        """Principal submatrix on the given vertices, in the given order."""
        return validate_gcm([[self.a[i][j] for j in indices] for i in indices])

    def permuted(self, order: Sequence[int]) -> "GCM":
        """Simultaneous row/column permutation: new vertex k is old vertex order[k]."""
        return self.submatrix(order)

    def __str__(self) -> str:
        label = f"{self.name} " if self.name else ""
        return f"{label}[{self.to_text()}]"


class AlgebraKind(str, Enum):
    FINITE = "finite"
    AFFINE = "affine"
    INDEFINITE = "indefinite"


@dataclass(frozen=True)
class AlgebraType:
    """Type of an indecomposable Cartan matrix."""

    kind: AlgebraKind
    hyperbolic: bool
    compact_hyperbolic: bool
    lorentzian: Optional[bool]
    det: int
    rank: int

    @property
    def det_sign(self) -> int:
        return (self.det > 0) - (self.det < 0)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "hyperbolic": self.hyperbolic,
            "compact_hyperbolic": self.compact_hyperbolic,
            "lorentzian": self.lorentzian,
            "det": self.det,
            "det_sign": self.det_sign,
            "rank": self.rank,
        }


def _as_integer_rows(matrix) -> Matrix:
    if isinstance(matrix, GCM):
        return matrix.a
    try:
        rows = [list(row) for row in matrix]
    except TypeError:
        raise NotGCM("Matrix must be a sequence of rows")
    n = len(rows)
    if n == 0:
        raise NotGCM("Matrix must be non-empty")
    out = []
    for row in rows:
        if len(row) != n:
            raise NotGCM(f"Matrix must be square, got a row of length {len(row)} in a {n}-row matrix")
        converted = []
        for value in row:
            if isinstance(value, bool) or int(value) != value:
                raise NotGCM(f"Matrix entries must be integers, got {value!r}")
            converted.append(int(value))
        out.append(tuple(converted))
    return tuple(out)


def _components(a: Matrix) -> List[Tuple[int, ...]]:
    n = len(a)
    seen = [False] * n
    result = []
    for start in range(n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        members = []
        while stack:
            i = stack.pop()
            members.append(i)
            for j in range(n):
                if j != i and a[i][j] != 0 and not seen[j]:
                    seen[j] = True
                    stack.append(j)
        result.append(tuple(sorted(members)))
    return result


def _symmetrizer(a: Matrix) -> Optional[Tuple[int, ...]]:
    """Solve d[i]*a[i][j] = d[j]*a[j][i] over each component, or None if inconsistent."""
    n = len(a)
    d: List[Optional[Fraction]] = [None] * n
    for component in _components(a):
        root = component[0]
        d[root] = Fraction(1)
        stack = [root]
        while stack:
            i = stack.pop()
            for j in component:
                if j == i or a[i][j] == 0:
                    continue
                value = d[i] * a[i][j] / a[j][i]
                if d[j] is None:
                    d[j] = value
                    stack.append(j)
                elif d[j] != value:
                    return None

        # Smallest integer vector with these ratios on the component
        denominators = reduce(lambda x, y: x * y // gcd(x, y), (d[i].denominator for i in component), 1)
        scaled = [int(d[i] * denominators) for i in component]
        common = reduce(gcd, scaled)
        for i, value in zip(component, scaled):
            d[i] = Fraction(value // common)

    return tuple(int(x) for x in d)


def validate_gcm(matrix, name: Optional[str] = None) -> GCM:
    """
    Validate an integer matrix as a generalized Cartan matrix.

    Args:
        matrix: Square integer matrix (nested sequences, numpy array or GCM)
        name (str, optional): Preset name to attach

    Returns:
        GCM: Validated matrix with its symmetrizing vector when one exists

    Raises:
        NotGCM: Diagonal entry other than 2, positive off-diagonal entry, or
                asymmetric zero pattern
    """
    a = _as_integer_rows(matrix)
    n = len(a)
    for i in range(n):
        if a[i][i] != 2:
            raise NotGCM(f"Diagonal entry a[{i}][{i}] = {a[i][i]}, expected 2")
        for j in range(n):
            if i == j:
                continue
            if a[i][j] > 0:
                raise NotGCM(f"Positive off-diagonal entry a[{i}][{j}] = {a[i][j]}")
            if (a[i][j] == 0) != (a[j][i] == 0):
                raise NotGCM(f"Zero pattern not symmetric at ({i},{j})")

    d = _symmetrizer(a)
    if d is None:
        logger.debug(f"Matrix {a} is not symmetrizable")
    return GCM(a=a, d=d, name=name)


def components(g: GCM) -> List[Tuple[int, ...]]:
    """Vertex sets of the connected components of the Dynkin diagram."""
    return _components(g.a)


def is_indecomposable(g: GCM) -> bool:
    return len(_components(g.a)) == 1


@lru_cache(maxsize=None)
def _principal_minor(a: Matrix, subset: Tuple[int, ...]) -> int:
    if not subset:
        return 1
    block = sympy.Matrix([[a[i][j] for j in subset] for i in subset])
    return int(block.det(method="bareiss"))


@lru_cache(maxsize=None)
def _all_minors_positive(a: Matrix, subset: Tuple[int, ...]) -> bool:
    if _principal_minor(a, subset) <= 0:
        return False
    if len(subset) == 1:
        return True
    return all(
        _all_minors_positive(a, subset[:k] + subset[k + 1:])
        for k in range(len(subset))
    )


def _is_finite(a: Matrix, subset: Tuple[int, ...], symmetrizable: bool) -> bool:
    # Symmetrizable: minors of A and of the symmetric B share signs, so
    # Sylvester's leading-minor test applies. Otherwise use all principal minors.
    if symmetrizable:
        return all(_principal_minor(a, subset[:k]) > 0 for k in range(1, len(subset) + 1))
    return _all_minors_positive(a, subset)


def _is_affine(a: Matrix, subset: Tuple[int, ...], symmetrizable: bool) -> bool:
    if _principal_minor(a, subset) != 0:
        return False
    return all(
        _is_finite(a, subset[:k] + subset[k + 1:], symmetrizable)
        for k in range(len(subset))
    )


def _kind(a: Matrix, subset: Tuple[int, ...], symmetrizable: bool) -> AlgebraKind:
    if _is_finite(a, subset, symmetrizable):
        return AlgebraKind.FINITE
    if _is_affine(a, subset, symmetrizable):
        return AlgebraKind.AFFINE
    return AlgebraKind.INDEFINITE


def _sub_components(a: Matrix, subset: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    local = tuple(tuple(a[i][j] for j in subset) for i in subset)
    return [tuple(subset[k] for k in comp) for comp in _components(local)]


def _negative_eigenvalue_count(b: Matrix) -> int:
    """Negative eigenvalues of a nonsingular symmetric matrix via Descartes' rule on p(-x)."""
    x = sympy.Symbol("x")
    coeffs = sympy.Matrix(b).charpoly(x).all_coeffs()
    degree = len(coeffs) - 1
    signs = []
    for index, c in enumerate(coeffs):
        power = degree - index
        value = int(c) * (-1) ** power
        if value != 0:
            signs.append(value > 0)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def classify(g: GCM) -> AlgebraType:
    """
    Classify an indecomposable generalized Cartan matrix.

    Args:
        g (GCM): Indecomposable matrix

    Returns:
        AlgebraType: Kind, hyperbolicity flags, Lorentzian flag and determinant

    Raises:
        DecomposableMatrix: If the diagram is disconnected (use classify_components)
    """
    if not is_indecomposable(g):
        raise DecomposableMatrix(f"{g} is decomposable; classify its components separately")

    a = g.a
    symmetrizable = g.symmetrizable
    full = tuple(range(g.n))
    det = _principal_minor(a, full)
    kind = _kind(a, full, symmetrizable)

    hyperbolic = False
    compact = False
    if kind == AlgebraKind.INDEFINITE:
        hyperbolic = True
        compact = True
        for v in full:
            rest = full[:v] + full[v + 1:]
            for comp in _sub_components(a, rest):
                sub_kind = _kind(a, comp, symmetrizable)
                if sub_kind == AlgebraKind.INDEFINITE:
                    hyperbolic = False
                    compact = False
                    break
                if sub_kind == AlgebraKind.AFFINE:
                    compact = False
            if not hyperbolic:
                break

    lorentzian: Optional[bool] = None
    if symmetrizable:
        lorentzian = det != 0 and _negative_eigenvalue_count(g.b) == 1

    result = AlgebraType(
        kind=kind,
        hyperbolic=hyperbolic,
        compact_hyperbolic=compact,
        lorentzian=lorentzian,
        det=det,
        rank=g.n,
    )
    logger.debug(f"Classified {g}: {result}")
    return result


def classify_components(g: GCM) -> List[Tuple[Tuple[int, ...], AlgebraType]]:
    """Classify each connected component; returns (vertex indices, type) pairs."""
    return [(comp, classify(g.submatrix(comp))) for comp in components(g)]


def highest_root(g: GCM) -> Tuple[int, ...]:
    """
    Highest root of a finite-type matrix, by closing the simple roots upward
    under root strings: beta + alpha_i is a root iff p - <beta, alpha_i^vee> > 0,
    where p is the length of the downward alpha_i-string from beta.
    """
    if not is_indecomposable(g) or classify(g).kind != AlgebraKind.FINITE:
        raise WrongType(f"Highest root requires an indecomposable finite-type matrix, got {g}")

    n = g.n
    simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    roots = set(simple)
    layer = list(simple)
    top = simple[0]
    while layer:
        next_layer = set()
        for beta in layer:
            for i in range(n):
                pairing = sum(g.a[i][j] * beta[j] for j in range(n))
                p = 0
                probe = list(beta)
                while True:
                    probe[i] -= 1
                    if tuple(probe) in roots:
                        p += 1
                    else:
                        break
                if p - pairing > 0:
                    raised = tuple(beta[j] + (1 if j == i else 0) for j in range(n))
                    next_layer.add(raised)
        roots.update(next_layer)
        if next_layer:
            top = max(next_layer)
        layer = sorted(next_layer)
    return top


def _affinize(g: GCM) -> GCM:
    theta = highest_root(g)
    n = g.n
    b = g.b
    form_theta = [sum(b[j][k] * theta[k] for k in range(n)) for j in range(n)]
    theta_norm = sum(theta[j] * form_theta[j] for j in range(n))

    rows = [[2] + [0] * n]
    for j in range(n):
        ratio = Fraction(-2 * form_theta[j], theta_norm)
        if ratio.denominator != 1:
            raise WrongType(f"Non-integral affine entry for {g}")
        rows[0][j + 1] = int(ratio)
    for j in range(n):
        row = [-sum(g.a[j][k] * theta[k] for k in range(n))] + list(g.a[j])
        rows.append(row)
    return validate_gcm(rows)


def _attach_node(g: GCM, attach: int) -> GCM:
    if not 0 <= attach < g.n:
        raise WrongType(f"Vertex {attach} out of range for rank {g.n}")
    n = g.n
    rows = [[2] + [(-1 if j == attach else 0) for j in range(n)]]
    for i in range(n):
        rows.append([(-1 if i == attach else 0)] + list(g.a[i]))
    return validate_gcm(rows)


def extend(g: GCM, attach: Optional[int] = None) -> GCM:
    """
    Add one vertex to a Dynkin diagram; the new vertex becomes index 0.

    With attach=None the matrix must be finite and indecomposable and the
    result is its untwisted affinization (the new vertex pairs with -theta).
    With an attach index the new vertex is joined to that vertex by a single
    edge, as in E10 -> E11.

    Raises:
        WrongType: If g is not finite indecomposable (affinization) or the
                   attach index is out of range
    """
    if attach is not None:
        result = _attach_node(g, attach)
        logger.info(f"Extended {g} at vertex {attach}")
        return result

    if not is_indecomposable(g) or classify(g).kind != AlgebraKind.FINITE:
        raise WrongType(f"Affinization needs an indecomposable finite-type matrix, got {g}")
    result = _affinize(g)
    logger.info(f"Affinized {g} -> {result}")
    return result


def is_untwisted_affine(g: GCM, zero_node: int = 0) -> bool:
    """True if g is the untwisted affinization of g minus zero_node."""
    if not is_indecomposable(g) or not 0 <= zero_node < g.n:
        return False
    if classify(g).kind != AlgebraKind.AFFINE:
        return False
    rest = [i for i in range(g.n) if i != zero_node]
    finite_part = g.submatrix(rest)
    if not is_indecomposable(finite_part):
        return False
    expected = _affinize(finite_part)
    order = [zero_node] + rest
    return expected.a == g.permuted(order).a


def overextend(g: GCM, zero_node: int = 0) -> GCM:
    """
    Over-extend an untwisted affine diagram: attach a new vertex to the
    affine vertex by a single edge. The new vertex becomes index 0.

    Raises:
        WrongType: If g is not untwisted affine with the given 0-node
    """
    if not is_untwisted_affine(g, zero_node):
        raise WrongType(f"Over-extension needs an untwisted affine matrix with 0-node {zero_node}, got {g}")
    result = _attach_node(g, zero_node)
    logger.info(f"Over-extended {g} -> {result}")
    return result


def permutation_equivalent(g: GCM, h: GCM) -> bool:
    """True if h equals g after some simultaneous row/column permutation."""
    if g.n != h.n:
        return False
    if sorted(sorted(row) for row in g.a) != sorted(sorted(row) for row in h.a):
        return False
    return any(g.permuted(order).a == h.a for order in permutations(range(g.n)))
