"""
Multiplicity bounds for symmetric hyperbolic algebras.

    Frenkel:   mult(alpha) <= p^(d-2)(1 - (alpha|alpha)/2)
    Borcherds: mult(alpha) <= p^(d-1)(1 - (alpha|alpha)/2) - p^(d-1)(-(alpha|alpha)/2)
    Niemann:   mult(alpha) <= p_sigma(1 - (alpha|alpha)/2)   (rank 3 algebra F only)

Reports compare these against Peterson multiplicities.
"""

from typing import List, Optional, Sequence

from pydantic import BaseModel

from cartan import GCM, permutation_equivalent, validate_gcm
from config import config, get_logger
from exceptions import BoundPreconditionError, WrongAlgebra
from multiplicity import MultTable
from presets import F_MATRIX
from qseries import (
    coefficient,
    colored_partitions,
    e10_level_mult,
    ff_level2_series,
    p_sigma_series,
    partition_index,
)
from roots import IMAGINARY, format_root, height, norm, require_positive, root_kind

logger = get_logger(__name__)

_F = validate_gcm(F_MATRIX, name="F")

# Norms where the 23L* branch of Niemann's bound could apply
NIEMANN_BRANCH_MODULUS = 46


class BoundRow(BaseModel):
    alpha: Optional[List[int]] = None
    level: Optional[int] = None
    height: Optional[int] = None
    norm: int
    mult: int
    frenkel: Optional[int] = None
    borcherds: Optional[int] = None
    niemann: Optional[int] = None
    niemann_branch: bool = False
    saturated: bool = False
    violated: bool = False
    violated_bounds: List[str] = []

    def csv_row(self) -> list:
        alpha = format_root(self.alpha) if self.alpha is not None else f"level {self.level}"
        return [alpha, self.norm, self.mult, self.frenkel, self.borcherds, self.niemann, self.saturated, self.violated]


class BoundReport(BaseModel):
    gcm_id: str
    d: int
    height_bound: Optional[int] = None
    rows: List[BoundRow]
    roots: int = 0
    violations: int = 0
    saturations: int = 0

    @classmethod
    def from_rows(cls, gcm_id: str, d: int, rows: List[BoundRow], height_bound: Optional[int] = None) -> "BoundReport":
        return cls(
            gcm_id=gcm_id,
            d=d,
            height_bound=height_bound,
            rows=rows,
            roots=len(rows),
            violations=sum(1 for row in rows if row.violated),
            saturations=sum(1 for row in rows if row.saturated),
        )


CSV_COLUMNS = ["alpha", "norm", "mult", "frenkel", "borcherds", "niemann", "saturated", "violated"]


class LevelSeriesRow(BaseModel):
    alpha: List[int]
    norm: int
    mult: int
    series: int
    match: bool


class LevelSeriesReport(BaseModel):
    """Level 2 roots of F against ff_level2_series; matching is by norm only, hence heuristic."""

    gcm_id: str
    level: int = 2
    height_bound: int
    heuristic: bool = True
    rows: List[LevelSeriesRow]
    roots: int = 0
    mismatches: int = 0

    @property
    def ok(self) -> bool:
        return self.mismatches == 0


def _require_symmetric(g: GCM) -> None:
    if not g.is_symmetric:
        raise BoundPreconditionError(f"Bounds are defined for symmetric matrices only, got {g}")


def _dimension(g: GCM, d: Optional[int]) -> int:
    d = g.n if d is None else int(d)
    if d < 3:
        raise BoundPreconditionError(f"Lattice dimension d = {d}; the bounds need d >= 3")
    return d


def _series_value(series_builder, index: int, *args, order: Optional[int] = None) -> int:
    return coefficient(series_builder, index, *args, order=config.truncation_order if order is None else order)


def frenkel_bound(alpha: Sequence[int], d: Optional[int], g: GCM, order: Optional[int] = None) -> int:
    """
    p^(d-2)(1 - (alpha|alpha)/2).

    Args:
        alpha: Vector in Q+
        d (int, optional): Hyperbolic lattice dimension, defaults to the rank
        g (GCM): Symmetric matrix
        order (int, optional): Series truncation, defaults to config.truncation_order

    Raises:
        BoundPreconditionError: Non-symmetric g or d < 3
        OddNorm: 1 - (alpha|alpha)/2 is not a nonnegative integer
    """
    _require_symmetric(g)
    d = _dimension(g, d)
    alpha = require_positive(alpha)
    index = partition_index(norm(g, alpha))
    return _series_value(colored_partitions, index, d - 2, order=order)


def borcherds_bound(alpha: Sequence[int], d: Optional[int], g: GCM, order: Optional[int] = None) -> int:
    """p^(d-1)(1 - (alpha|alpha)/2) - p^(d-1)(-(alpha|alpha)/2), for (alpha|alpha) <= 0."""
    _require_symmetric(g)
    d = _dimension(g, d)
    alpha = require_positive(alpha)
    value = norm(g, alpha)
    if value > 0:
        raise BoundPreconditionError(f"Borcherds' bound needs (alpha|alpha) <= 0, got {value}")
    upper = partition_index(value)
    return _series_value(colored_partitions, upper, d - 1, order=order) - _series_value(colored_partitions, upper - 1, d - 1, order=order)


def niemann_bound_from_norm(value: int, order: Optional[int] = None) -> int:
    """p_sigma(1 - value/2)."""
    return _series_value(p_sigma_series, partition_index(value), order=order)


def niemann_branch_sensitive(value: int) -> bool:
    """Whether the unevaluated 23L* branch could apply at this norm."""
    return value != 0 and value % NIEMANN_BRANCH_MODULUS == 0


def is_f_algebra(g: GCM) -> bool:
    return permutation_equivalent(g, _F)


def niemann_bound(alpha: Sequence[int], g: GCM, order: Optional[int] = None) -> int:
    """
    Generic branch of Niemann's bound for F: p_sigma(1 - (alpha|alpha)/2).

    Raises:
        WrongAlgebra: g is not the rank 3 hyperbolic matrix F (up to relabelling)
    """
    if not is_f_algebra(g):
        raise WrongAlgebra(f"Niemann's bound is only known for F, got {g}")
    alpha = require_positive(alpha)
    value = norm(g, alpha)
    if niemann_branch_sensitive(value):
        logger.warning(f"Norm {value} of {format_root(alpha)} is divisible by {NIEMANN_BRANCH_MODULUS}; only the generic branch is evaluated")
    return niemann_bound_from_norm(value, order)


def fake_monster_mult(value: int, order: Optional[int] = None) -> int:
    """p^(24)(1 - value/2): Frenkel's bound at d = 26, attained by the fake Monster algebra."""
    return _series_value(colored_partitions, partition_index(value), 24, order=order)


def bound_row(g: GCM, alpha: Sequence[int], mult: int, d: Optional[int] = None, order: Optional[int] = None) -> BoundRow:
    """
    Row with every bound that applies to alpha; inapplicable bounds are None.

    Frenkel needs a symmetric g with d >= 3; Borcherds additionally needs
    (alpha|alpha) <= 0; Niemann needs g = F.
    """
    alpha = tuple(alpha)
    value = norm(g, alpha)
    row = BoundRow(alpha=list(alpha), height=height(alpha), norm=value, mult=mult)
    if not g.is_symmetric or (g.n if d is None else d) < 3:
        return row

    row.frenkel = frenkel_bound(alpha, d, g, order)
    if value <= 0:
        row.borcherds = borcherds_bound(alpha, d, g, order)
    if is_f_algebra(g):
        row.niemann = niemann_bound_from_norm(value, order)
        row.niemann_branch = niemann_branch_sensitive(value)

    violated = [
        name for name, bound in (("frenkel", row.frenkel), ("borcherds", row.borcherds), ("niemann", row.niemann))
        if bound is not None and mult > bound
    ]
    row.violated_bounds = violated
    row.violated = bool(violated)
    row.saturated = mult == row.frenkel
    return row


def check_frenkel(
    g: GCM, d: Optional[int], max_height: int, table: Optional[MultTable] = None, order: Optional[int] = None
) -> BoundReport:
    """
    Compare Peterson multiplicities of every positive imaginary root of height
    <= max_height against the bounds.

    Raises:
        BoundPreconditionError: Non-symmetric g or d < 3
    """
    _require_symmetric(g)
    d = _dimension(g, d)
    if table is None:
        table = MultTable(g)
    table.extend_to(max_height)

    rows = []
    for alpha in table.roots(max_height):
        if root_kind(g, alpha) != IMAGINARY:
            continue
        rows.append(bound_row(g, alpha, table.entries[alpha], d, order))

    report = BoundReport.from_rows(g.gcm_id, d, rows, height_bound=max_height)
    logger.info(f"Frenkel check for {g} to height {max_height}: {report.roots} roots, {report.violations} violations, {report.saturations} saturated")
    return report


def check_e10_series(max_index: int, levels: Sequence[int] = (1, 2), order: Optional[int] = None) -> BoundReport:
    """
    Frenkel's bound at d = 10 against the closed level 1 and 2 E10
    multiplicities, without computing any table.

    Rows run over norms 2, 0, -2, ... for which the level-2 index
    3 - norm/2 stays within max_index.
    """
    rows = []
    for level in levels:
        value = 2
        while 3 - value // 2 <= max_index:
            mult = e10_level_mult(value, level)
            frenkel = _series_value(colored_partitions, partition_index(value), 8, order=order)
            row = BoundRow(level=level, norm=value, mult=mult, frenkel=frenkel)
            if value <= 0:
                upper = partition_index(value)
                row.borcherds = (
                    _series_value(colored_partitions, upper, 9, order=order)
                    - _series_value(colored_partitions, upper - 1, 9, order=order)
                )
            row.violated_bounds = [
                name for name, bound in (("frenkel", row.frenkel), ("borcherds", row.borcherds))
                if bound is not None and mult > bound
            ]
            row.violated = bool(row.violated_bounds)
            row.saturated = mult == frenkel
            rows.append(row)
            value -= 2

    report = BoundReport.from_rows("E10-series", 10, rows)
    logger.info(f"E10 series check to index {max_index}: {report.violations} violations")
    return report


def _f_level_vertex(g: GCM) -> int:
    # The level vertex is the one outside the affine A1 pair joined by -2
    for i, row in enumerate(g.a):
        if -2 not in row:
            return i
    raise WrongAlgebra(f"No level vertex in {g}")


def check_ff_level2(table: MultTable, max_height: int, order: Optional[int] = None) -> LevelSeriesReport:
    """
    Compare the level 2 roots of F up to max_height with ff_level2_series at
    index 1 - (alpha|alpha)/2.

    Raises:
        WrongAlgebra: The table is not for F (up to relabelling)
    """
    g = table.g
    if not is_f_algebra(g):
        raise WrongAlgebra(f"The level 2 series is only known for F, got {g}")
    node = _f_level_vertex(g)
    table.extend_to(max_height)

    rows = []
    for alpha in table.roots(max_height):
        if alpha[node] != 2:
            continue
        value = norm(g, alpha)
        mult = table.entries[alpha]
        series = _series_value(ff_level2_series, partition_index(value), order=order)
        rows.append(LevelSeriesRow(alpha=list(alpha), norm=value, mult=mult, series=series, match=mult == series))

    mismatches = sum(1 for row in rows if not row.match)
    report = LevelSeriesReport(gcm_id=g.gcm_id, height_bound=max_height, rows=rows, roots=len(rows), mismatches=mismatches)
    if mismatches:
        logger.warning(f"{mismatches} level 2 roots of {g} differ from the level 2 series (norm matching is heuristic)")
    else:
        logger.info(f"Level 2 series check for {g} to height {max_height}: {report.roots} roots match")
    return report
