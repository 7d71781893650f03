"""
Root multiplicity engines

Two independent ways to compute dim g_alpha for a symmetrizable
indecomposable Kac-Moody algebra:

- Peterson's recursion, filling a MultTable height shell by height shell:
      c_beta = sum_{k>=1} mult(beta/k)/k
      ((beta|beta) - 2(rho|beta)) c_beta = sum_{beta'+beta''=beta} (beta'|beta'') c_beta' c_beta''
- The Berman-Moody closed form over solutions of sum n_i s_i = lambda, where
  s_i runs over the Weyl sums s(w).

Both are checked against each other and against a truncated expansion of the
denominator identity.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import comb, factorial, gcd
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from cache import TableCache
from cartan import GCM, is_indecomposable
from config import get_logger
from exceptions import DecomposableMatrix, DegenerateDivisor, IntegrityError, NotSymmetrizable
from roots import (
    IMAGINARY,
    NOT_A_ROOT,
    REAL,
    RootVector,
    enumerate_weyl_sums,
    form_vector,
    format_root,
    height,
    norm,
    require_positive,
    rho_pairing,
    root_kind,
    simple_root,
)

logger = get_logger(__name__)


def _check_engine_input(g: GCM) -> None:
    if g.d is None:
        raise NotSymmetrizable(f"{g} is not symmetrizable; multiplicity engines need the invariant form")
    if not is_indecomposable(g):
        raise DecomposableMatrix(f"{g} is decomposable; multiplicity engines need an indecomposable matrix")


def _require_rank(g: GCM, alpha: Sequence[int]) -> RootVector:
    alpha = require_positive(alpha)
    if len(alpha) != g.n:
        raise ValueError(f"Root {format_root(alpha)} does not match rank {g.n}")
    return alpha


def _divisors_of(alpha: Sequence[int]) -> List[int]:
    """Positive integers r with alpha/r still integral."""
    common = reduce(gcd, alpha)
    return [r for r in range(1, common + 1) if common % r == 0]


def _mobius(r: int) -> int:
    exponents = sympy.factorint(r).values()
    if any(e > 1 for e in exponents):
        return 0
    return -1 if len(exponents) % 2 else 1


class MultTable:
    """
    Memoized root multiplicities for one Cartan matrix, complete up to `frontier`.

    `entries` holds every positive root of height <= frontier with its
    multiplicity, plus explicit zeros for queried vectors that are not roots.
    When a TableCache is attached, the table is reloaded on construction and
    flushed after each completed height shell.
    """

    def __init__(self, g: GCM, store: Optional[TableCache] = None, threads: int = 1):
        _check_engine_input(g)
        self.g = g
        self.gcm_id = g.gcm_id
        self.store = store
        self.threads = max(1, int(threads))
        self.entries: Dict[RootVector, int] = {}
        self.frontier = 0

        # Support of c (positive roots and their multiples) by height, with
        # c_beta and B*beta for each member.
        self._support: Dict[int, List[RootVector]] = {}
        self._c: Dict[RootVector, Fraction] = {}
        self._form: Dict[RootVector, RootVector] = {}

        if store is not None:
            loaded = store.load(self.gcm_id, g.a)
            if loaded is not None:
                frontier, entries = loaded
                self._restore(frontier, entries)

    def _restore(self, frontier: int, entries: Dict[RootVector, int]) -> None:
        self.entries = dict(entries)
        self.frontier = frontier
        for h in range(1, frontier + 1):
            shell_roots = [beta for beta, m in entries.items() if m > 0 and height(beta) == h]
            self._install_shell(h, shell_roots)

    def __contains__(self, alpha) -> bool:
        return tuple(alpha) in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, alpha: Sequence[int]) -> Optional[int]:
        """Stored multiplicity, 0 for non-roots below the frontier, None above it."""
        alpha = tuple(alpha)
        if alpha in self.entries:
            return self.entries[alpha]
        if height(alpha) <= self.frontier:
            return 0
        return None

    def roots(self, max_height: Optional[int] = None) -> List[RootVector]:
        """Stored positive roots (mult > 0), sorted by (height, coords)."""
        limit = self.frontier if max_height is None else min(max_height, self.frontier)
        found = [beta for beta, m in self.entries.items() if m > 0 and height(beta) <= limit]
        return sorted(found, key=lambda beta: (height(beta), beta))

    def c_value(self, beta: Sequence[int]) -> Fraction:
        return self._c.get(tuple(beta), Fraction(0))

    def _lower_multiple_sum(self, beta: RootVector) -> Fraction:
        """sum_{k>=2, beta/k integral} mult(beta/k)/k."""
        total = Fraction(0)
        for k in _divisors_of(beta)[1:]:
            part = tuple(c // k for c in beta)
            m = self.entries.get(part, 0)
            if m:
                total += Fraction(m, k)
        return total

    def _install_shell(self, h: int, shell_roots: List[RootVector]) -> None:
        members = set(shell_roots)
        # Multiples k*gamma of lower roots carry c even when they are not roots
        for k in range(2, h + 1):
            if h % k:
                continue
            for gamma in self._support.get(h // k, []):
                if self.entries.get(gamma, 0) > 0:
                    members.add(tuple(k * c for c in gamma))
        ordered = sorted(members)
        for beta in ordered:
            c = Fraction(self.entries.get(beta, 0)) + self._lower_multiple_sum(beta)
            # Integral c values are stored as int
            self._c[beta] = int(c) if c.denominator == 1 else c
            self._form[beta] = form_vector(self.g, beta)
        self._support[h] = [beta for beta in ordered if self._c[beta] != 0]

    def _splitting_sum(self, beta: RootVector) -> Fraction:
        """sum over ordered beta'+beta''=beta of (beta'|beta'') c_beta' c_beta''."""
        h = height(beta)
        total = 0
        n = len(beta)
        for k in range(1, h // 2 + 1):
            weight = 1 if 2 * k == h else 2
            if not self._support.get(h - k):
                continue
            for part in self._support.get(k, []):
                if any(part[i] > beta[i] for i in range(n)):
                    continue
                rest = tuple(beta[i] - part[i] for i in range(n))
                c_rest = self._c.get(rest)
                if not c_rest:
                    continue
                form_rest = self._form[rest]
                pair = sum(part[i] * form_rest[i] for i in range(n))
                if pair:
                    total += weight * pair * self._c[part] * c_rest
        return total

    def _peterson_mult(self, beta: RootVector, kind: str) -> int:
        divisor = norm(self.g, beta) - 2 * rho_pairing(self.g, beta)
        rhs = self._splitting_sum(beta)
        lower = self._lower_multiple_sum(beta)

        if divisor == 0:
            if rhs != 0:
                raise DegenerateDivisor(beta, rhs)
            if kind == REAL:
                return 1
            raise DegenerateDivisor(beta)

        value = Fraction(rhs) / divisor - lower
        if value.denominator != 1:
            raise IntegrityError(f"Non-integral multiplicity {value} at {format_root(beta)}")
        mult = int(value)
        if kind == REAL and mult != 1:
            raise IntegrityError(f"Real root {format_root(beta)} got multiplicity {mult}")
        if kind == IMAGINARY and mult <= 0:
            raise IntegrityError(f"Imaginary root {format_root(beta)} got multiplicity {mult}")
        return mult

    def _next_shell_roots(self, h: int) -> List[Tuple[RootVector, str]]:
        n = self.g.n
        if h == 1:
            return [(simple_root(n, i), REAL) for i in range(n)]
        previous = [beta for beta in self._support.get(h - 1, []) if self.entries.get(beta, 0) > 0]
        candidates = set()
        for beta in previous:
            for i in range(n):
                candidates.add(tuple(beta[j] + (1 if j == i else 0) for j in range(n)))
        found = []
        for beta in sorted(candidates):
            kind = root_kind(self.g, beta)
            if kind != NOT_A_ROOT:
                found.append((beta, kind))
        return found

    def extend_to(self, max_height: int) -> None:
        """Complete every height shell up to max_height."""
        while self.frontier < max_height:
            h = self.frontier + 1
            targets = self._next_shell_roots(h)

            if h == 1:
                results = [1 for _ in targets]
            elif self.threads > 1 and len(targets) > 1:
                with ThreadPoolExecutor(max_workers=self.threads) as pool:
                    results = list(pool.map(lambda item: self._peterson_mult(*item), targets))
            else:
                results = [self._peterson_mult(beta, kind) for beta, kind in targets]

            shell_roots = []
            for (beta, _), mult in zip(targets, results):
                self.entries[beta] = mult
                shell_roots.append(beta)
            self._install_shell(h, shell_roots)
            self.frontier = h

            logger.info(f"Completed shell {h} for {self.g}: {len(shell_roots)} roots")
            if self.store is not None:
                self.store.save(self.gcm_id, self.g.a, self.frontier, self.entries)

    def record_query(self, alpha: RootVector) -> int:
        """Multiplicity of alpha after extending the table; non-roots are stored as 0."""
        self.extend_to(height(alpha))
        if alpha not in self.entries:
            self.entries[alpha] = 0
            if self.store is not None:
                self.store.save(self.gcm_id, self.g.a, self.frontier, self.entries)
        return self.entries[alpha]


def mult_peterson(g: GCM, alpha: Sequence[int], table: Optional[MultTable] = None) -> int:
    """
    Root multiplicity via Peterson's recursion.

    Args:
        g (GCM): Symmetrizable indecomposable matrix
        alpha: Vector in Q+
        table (MultTable, optional): Table to fill and reuse; a fresh in-memory
                                     table is used when omitted

    Returns:
        int: mult(alpha), 0 if alpha is not a root

    Raises:
        NotSymmetrizable, DecomposableMatrix, NotInPositiveCone
        DegenerateDivisor: (beta|beta-2rho) = 0 with a nonzero right side
        IntegrityError: A multiplicity came out non-integral
    """
    _check_engine_input(g)
    alpha = _require_rank(g, alpha)
    if table is None:
        table = MultTable(g)
    elif table.gcm_id != g.gcm_id:
        raise ValueError("MultTable belongs to a different Cartan matrix")
    return table.record_query(alpha)


def _signed_partition_sum(target: RootVector, simple: Dict[int, int], others: List[Tuple[RootVector, int]]) -> Fraction:
    """
    sum over n with sum n_i s_i = target of prod eps_i^n_i * (N-1)!/prod n_i!.

    `others` are the non-simple Weyl sums (s, eps) in increasing height; the
    simple reflections (s = alpha_i, eps = +1) absorb whatever remains, so the
    search only branches on the non-simple ones.
    """
    n = len(target)
    total = Fraction(0)
    count = len(others)
    heights = [sum(s) for s, _ in others]

    def finish(residual, used, denominator, sign):
        nonlocal total
        simple_counts = []
        for i in range(n):
            if residual[i] and i not in simple:
                return
            simple_counts.append(residual[i])
        parts = used + sum(simple_counts)
        if parts == 0:
            return
        denom = denominator
        for c in simple_counts:
            denom *= factorial(c)
        total += Fraction(sign * factorial(parts - 1), denom)

    def search(index, residual, used, denominator, sign):
        remaining = sum(residual)
        if index == count or heights[index] > remaining:
            finish(residual, used, denominator, sign)
            return
        s, eps = others[index]
        # n_index = 0
        search(index + 1, residual, used, denominator, sign)
        k = 0
        current = list(residual)
        while True:
            if any(current[i] < s[i] for i in range(n)):
                break
            current = [current[i] - s[i] for i in range(n)]
            k += 1
            search(
                index + 1,
                tuple(current),
                used + k,
                denominator * factorial(k),
                sign * (eps ** k),
            )

    search(0, tuple(target), 0, 1, 1)
    return total


def mult_berman_moody(g: GCM, alpha: Sequence[int], weyl_sums=None) -> int:
    """
    Root multiplicity via the Berman-Moody closed form.

    mult(alpha) = sum_{r | alpha} mu(r)/r * sum_{n in S(alpha/r)} prod eps(s_i)^n_i (sum n_i - 1)!/prod n_i!

    Args:
        g (GCM): Symmetrizable indecomposable matrix
        alpha: Vector in Q+
        weyl_sums (optional): Precomputed enumerate_weyl_sums(g, H) with H >= height(alpha)

    Returns:
        int: mult(alpha), 0 if alpha is not a root

    Raises:
        IntegrityError: The rational sum is not an integer
    """
    _check_engine_input(g)
    alpha = _require_rank(g, alpha)
    if weyl_sums is None:
        weyl_sums = enumerate_weyl_sums(g, height(alpha))

    simple = {}
    others = []
    for w in weyl_sums:
        if w.length == 1:
            simple[w.word[0]] = 1
        else:
            others.append((w.sw, w.epsilon))
    others.sort(key=lambda item: (sum(item[0]), item[0]))

    total = Fraction(0)
    for r in _divisors_of(alpha):
        mu = _mobius(r)
        if mu == 0:
            continue
        lam = tuple(c // r for c in alpha)
        relevant = [(s, eps) for s, eps in others if sum(s) <= sum(lam)]
        total += Fraction(mu, r) * _signed_partition_sum(lam, simple, relevant)

    if total.denominator != 1:
        raise IntegrityError(f"Berman-Moody sum {total} is not integral at {format_root(alpha)}")
    logger.debug(f"Berman-Moody mult{format_root(alpha)} = {total}")
    return int(total)


def coarse_bound(g: GCM, alpha: Sequence[int]) -> int:
    """n^|height(alpha)|, the bound from writing root vectors as bracket monomials."""
    return g.n ** abs(height(alpha))


@dataclass
class LatticeSeries:
    """
    Finitely supported series sum terms[beta] e(-beta) over Q+, truncated at
    height `bound`. The zero vector key is the constant term.
    """

    rank: int
    bound: int
    terms: Dict[RootVector, int] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {
            beta: c for beta, c in self.terms.items()
            if c != 0 and sum(beta) <= self.bound
        }

    @classmethod
    def one(cls, rank: int, bound: int) -> "LatticeSeries":
        return cls(rank, bound, {tuple([0] * rank): 1})

    def coefficient(self, beta: Sequence[int]) -> int:
        return self.terms.get(tuple(beta), 0)

    def __add__(self, other: "LatticeSeries") -> "LatticeSeries":
        terms = dict(self.terms)
        for beta, c in other.terms.items():
            terms[beta] = terms.get(beta, 0) + c
        return LatticeSeries(self.rank, min(self.bound, other.bound), terms)

    def __mul__(self, other: "LatticeSeries") -> "LatticeSeries":
        bound = min(self.bound, other.bound)
        terms: Dict[RootVector, int] = {}
        for beta, c in self.terms.items():
            hb = sum(beta)
            for gamma, e in other.terms.items():
                if hb + sum(gamma) > bound:
                    continue
                key = tuple(x + y for x, y in zip(beta, gamma))
                terms[key] = terms.get(key, 0) + c * e
        return LatticeSeries(self.rank, bound, terms)

    def mismatches(self, other: "LatticeSeries") -> List[Tuple[RootVector, int, int]]:
        keys = sorted(set(self.terms) | set(other.terms), key=lambda beta: (sum(beta), beta))
        return [
            (beta, self.coefficient(beta), other.coefficient(beta))
            for beta in keys
            if self.coefficient(beta) != other.coefficient(beta)
        ]


def _power_of_binomial(root: RootVector, mult: int, bound: int) -> LatticeSeries:
    """(1 - e(-root))^mult truncated at height bound."""
    h = sum(root)
    terms = {}
    k = 0
    while k <= mult and k * h <= bound:
        terms[tuple(k * c for c in root)] = (-1) ** k * comb(mult, k)
        k += 1
    return LatticeSeries(len(root), bound, terms)


@dataclass
class DenominatorReport:
    gcm_id: str
    height_bound: int
    product_terms: int
    sum_terms: int
    mismatches: List[Tuple[RootVector, int, int]]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {
            "gcm_id": self.gcm_id,
            "height_bound": self.height_bound,
            "product_terms": self.product_terms,
            "sum_terms": self.sum_terms,
            "ok": self.ok,
            "mismatches": [
                {"beta": list(beta), "product": p, "sum": s}
                for beta, p, s in self.mismatches
            ],
        }


def product_side(g: GCM, max_height: int, table: Optional[MultTable] = None) -> LatticeSeries:
    """prod over positive roots of height <= H of (1 - e(-alpha))^mult(alpha)."""
    if table is None:
        table = MultTable(g)
    table.extend_to(max_height)
    series = LatticeSeries.one(g.n, max_height)
    for root in table.roots(max_height):
        series = series * _power_of_binomial(root, table.entries[root], max_height)
    return series


def sum_side(g: GCM, max_height: int) -> LatticeSeries:
    """sum_w (-1)^l(w) e(-s(w)) with the identity term, truncated at height H."""
    terms = {tuple([0] * g.n): 1}
    for w in enumerate_weyl_sums(g, max_height):
        terms[w.sw] = terms.get(w.sw, 0) + (-1) ** w.length
    return LatticeSeries(g.n, max_height, terms)


def verify_denominator_identity(g: GCM, max_height: int, table: Optional[MultTable] = None) -> DenominatorReport:
    """
    Compare both sides of the denominator identity coefficient by coefficient
    up to height max_height, using Peterson multiplicities on the product side.
    """
    _check_engine_input(g)
    if max_height < 1:
        raise ValueError("max_height must be at least 1")
    product = product_side(g, max_height, table)
    total = sum_side(g, max_height)
    report = DenominatorReport(
        gcm_id=g.gcm_id,
        height_bound=max_height,
        product_terms=len(product.terms),
        sum_terms=len(total.terms),
        mismatches=product.mismatches(total),
    )
    if report.ok:
        logger.info(f"Denominator identity holds for {g} up to height {max_height}")
    else:
        logger.warning(f"Denominator identity: {len(report.mismatches)} mismatches for {g} up to height {max_height}")
    return report
