"""Exact Weingarten functions for five matrix ensembles.

Each family satisfies an orthogonality recurrence tying level ``k`` to the
levels below it, with the empty object worth 1:

* unitary:      ``d W(sigma) = -sum_i W((i,k)sigma) + [sigma(k)=k] W(drop)``
* orthogonal:   ``d W(m) = -sum_{i<=2k-2} W((i,2k-1).m) + [top block] W(drop)``
* COE:          the orthogonal shape with coefficient ``d+1`` on the left
* symplectic:   ``|W_sp(m, d)| = |W_o(m, -2d)|`` (the sign is not tracked)
* A III:        ``d W(sigma) = -sum_i W((i,k)sigma) + [sigma(k)=k] dminus W(drop)
                + [top 2-cycle] W(flat)``, at dimensions ``d = a+b``,
                ``dminus = a-b``

Values are constant on cycle-type (permutation families) or coset-type
(pair-partition families) classes, so each level is solved as a small exact
linear system over class representatives; results are cached per dimension
argument and extended level by level on demand.  Singular systems are
detected exactly and reported, never patched.

The series half of the module turns path counts from :mod:`wgcalc.graphs`
into truncated large-``d`` expansions, and :func:`reconstruct_rational`
recovers closed forms in ``d`` from exact evaluations.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

from . import ratfunc
from .graphs import GraphKind, count_paths, count_paths_refined
from .symcore import (
    PairPartition,
    Permutation,
    act,
    all_pair_partitions,
    class_representative,
    coset_representative,
    partitions,
)

FAMILIES = ("u", "o", "coe", "sp", "aiii")


class SingularSystemError(ArithmeticError):
    """The class-level linear system has no unique solution at this dimension."""

    def __init__(self, family: str, level: int, d, dminus=None):
        self.family = family
        self.level = level
        self.d = d
        self.dminus = dminus
        dims = f"d={d}" if dminus is None else f"d={d}, dminus={dminus}"
        super().__init__(f"singular {family} system at level {level}, {dims}")


@dataclass(frozen=True)
class WgTable:
    """Snapshot of solved values: one entry per class of each level up to ``level``.

    Class keys are partitions; a partition of weight ``j`` labels a level-``j``
    class (cycle type or coset type depending on the family).
    """

    family: str
    level: int
    d: int
    dminus: int | None
    values: dict[tuple[int, ...], Fraction]

    def lookup(self, elem) -> Fraction:
        key = elem.coset_type() if isinstance(elem, PairPartition) else elem.cycle_type()
        return self.values[key]


class _TableState:
    __slots__ = ("values", "level")

    def __init__(self):
        self.values: dict[tuple[int, ...], Fraction] = {(): Fraction(1)}
        self.level = 0


_STATES: dict[tuple, _TableState] = {}
_COE_FULL: dict[int, dict] = {}


def _state(key: tuple) -> _TableState:
    st = _STATES.get(key)
    if st is None:
        st = _STATES[key] = _TableState()
    return st


def _solve_class_level(family, j, d, dminus, rows_builder) -> dict[tuple[int, ...], Fraction]:
    classes = list(partitions(j))
    index = {mu: i for i, mu in enumerate(classes)}
    rows, rhs = rows_builder(classes, index)
    sol = ratfunc.solve_linear_exact(rows, rhs)
    if sol is None:
        raise SingularSystemError(family, j, d, dminus)
    return {mu: sol[i] for mu, i in index.items()}


def _extend_unitary(st: _TableState, k: int, d: int) -> None:
    for j in range(st.level + 1, k + 1):

        def build(classes, index):
            rows, rhs = [], []
            for mu in classes:
                rep = class_representative(mu)
                row = [Fraction(0)] * len(classes)
                row[index[mu]] += d
                for i in range(1, j):
                    row[index[rep.swap_values(i, j).cycle_type()]] += 1
                rows.append(row)
                if rep.fixes_top():
                    rhs.append(st.values[rep.restrict_down().cycle_type()])
                else:
                    rhs.append(Fraction(0))
            return rows, rhs

        st.values.update(_solve_class_level("u", j, d, None, build))
        st.level = j


def _extend_orthogonal(st: _TableState, k: int, d: int, family="o") -> None:
    # also used for the COE recurrence, whose left coefficient is d+1: the
    # caller passes the shifted d and relabels
    for j in range(st.level + 1, k + 1):

        def build(classes, index):
            rows, rhs = [], []
            for mu in classes:
                rep = coset_representative(mu)
                row = [Fraction(0)] * len(classes)
                row[index[mu]] += d
                for i in range(1, 2 * j - 1):
                    row[index[rep.swap_points(i, 2 * j - 1).coset_type()]] += 1
                rows.append(row)
                if rep.has_top_block():
                    rhs.append(st.values[rep.pairing_down().coset_type()])
                else:
                    rhs.append(Fraction(0))
            return rows, rhs

        st.values.update(_solve_class_level(family, j, d, None, build))
        st.level = j


def _extend_aiii(st: _TableState, k: int, d: int, dminus: int) -> None:
    for j in range(st.level + 1, k + 1):

        def build(classes, index):
            rows, rhs = [], []
            for mu in classes:
                rep = class_representative(mu)
                row = [Fraction(0)] * len(classes)
                row[index[mu]] += d
                for i in range(1, j):
                    row[index[rep.swap_values(i, j).cycle_type()]] += 1
                rows.append(row)
                if rep.fixes_top():
                    rhs.append(dminus * st.values[rep.restrict_down().cycle_type()])
                elif rep.top_in_two_cycle():
                    rhs.append(st.values[rep.flat().cycle_type()])
                else:
                    rhs.append(Fraction(0))
            return rows, rhs

        st.values.update(_solve_class_level("aiii", j, d, dminus, build))
        st.level = j


def _check_dim(d) -> int:
    if not isinstance(d, int) or isinstance(d, bool):
        raise ValueError(f"dimension must be an integer, got {d!r}")
    return d


def solve_unitary_table(k: int, d: int, force: bool = False) -> WgTable:
    """Unitary Weingarten values for every class of level at most ``k``.

    ``d < k`` sits outside the proven-invertible range and is rejected
    unless ``force`` is set; with ``force`` the solve still detects a
    genuinely singular system exactly.
    """
    _check_dim(d)
    if k < 0:
        raise ValueError("level must be nonnegative")
    if d < k and not force:
        raise ValueError(f"dimension {d} below level {k}; pass force=True to try anyway")
    st = _state(("u", d))
    _extend_unitary(st, k, d)
    vals = {mu: st.values[mu] for n in range(k + 1) for mu in partitions(n)}
    return WgTable("u", k, d, None, vals)


def wg_unitary_class(mu: tuple[int, ...], d: int, force: bool = False) -> Fraction:
    return solve_unitary_table(sum(mu), d, force).values[tuple(mu)]


def wg_unitary(sigma: Permutation, d: int, force: bool = False) -> Fraction:
    return wg_unitary_class(sigma.cycle_type(), d, force)


def solve_orthogonal_table(k: int, d: int) -> WgTable:
    """Orthogonal Weingarten values; ``d`` may be any nonzero integer.

    Negative arguments are how the symplectic route is evaluated, so no
    positivity constraint is imposed; singular dimensions raise.
    """
    _check_dim(d)
    if k < 0:
        raise ValueError("level must be nonnegative")
    st = _state(("o", d))
    _extend_orthogonal(st, k, d)
    vals = {mu: st.values[mu] for n in range(k + 1) for mu in partitions(n)}
    return WgTable("o", k, d, None, vals)


def wg_orthogonal_class(mu: tuple[int, ...], d: int) -> Fraction:
    return solve_orthogonal_table(sum(mu), d).values[tuple(mu)]


def wg_orthogonal(m: PairPartition, d: int) -> Fraction:
    return wg_orthogonal_class(m.coset_type(), d)


def wg_orthogonal_pair(m: PairPartition, n: PairPartition, d: int) -> Fraction:
    """Two-pairing value: reduce by the permutation carrying the trivial
    pairing to ``m``, then look up the one-argument function."""
    if m.level != n.level:
        raise ValueError("pairings must have equal level")
    reduced = act(m.as_permutation().inverse(), n)
    return wg_orthogonal(reduced, d)


def wg_coe_class(mu: tuple[int, ...], d: int) -> Fraction:
    """COE value through the dimension-shift identity: orthogonal at ``d+1``."""
    return wg_orthogonal_class(mu, d + 1)


def wg_coe(m: PairPartition, d: int) -> Fraction:
    return wg_coe_class(m.coset_type(), d)


def wg_coe_direct(m: PairPartition, d: int) -> Fraction:
    """COE value solved element by element from its own recurrence.

    No class reduction: one unknown per pair partition of each level, so
    this route is structurally independent of :func:`wg_coe` and doubles as
    a check of the class constancy it assumes.
    """
    _check_dim(d)
    k = m.level
    store = _COE_FULL.setdefault(d, {"values": {PairPartition(()): Fraction(1)}, "level": 0})
    for j in range(store["level"] + 1, k + 1):
        elems = list(all_pair_partitions(j))
        index = {e: i for i, e in enumerate(elems)}
        rows, rhs = [], []
        for e in elems:
            row = [Fraction(0)] * len(elems)
            row[index[e]] += d + 1
            for i in range(1, 2 * j - 1):
                row[index[e.swap_points(i, 2 * j - 1)]] += 1
            rows.append(row)
            rhs.append(store["values"][e.pairing_down()] if e.has_top_block() else Fraction(0))
        sol = ratfunc.solve_linear_exact(rows, rhs)
        if sol is None:
            raise SingularSystemError("coe", j, d)
        store["values"].update({e: sol[i] for e, i in index.items()})
        store["level"] = j
    return store["values"][m]


def wg_symplectic_abs_class(mu: tuple[int, ...], d: int) -> Fraction:
    if d < 1:
        raise ValueError(f"symplectic dimension must be positive, got {d}")
    return abs(wg_orthogonal_class(mu, -2 * d))


def wg_symplectic_abs(m: PairPartition, d: int) -> Fraction:
    """Absolute symplectic value ``|W_sp(m, d)|`` via the orthogonal solver
    at ``-2d``.  The sign is deliberately out of scope."""
    return wg_symplectic_abs_class(m.coset_type(), d)


def solve_aiii_table(k: int, d: int, dminus: int) -> WgTable:
    """A III Weingarten values at ``d = a+b``, ``dminus = a-b``.

    ``|dminus| > d`` has no matching ensemble; it is still computable and is
    flagged with a warning rather than rejected.
    """
    _check_dim(d)
    _check_dim(dminus)
    if k < 0:
        raise ValueError("level must be nonnegative")
    if d < 1:
        raise ValueError(f"dimension must be positive, got {d}")
    if abs(dminus) > d:
        warnings.warn(
            f"|dminus|={abs(dminus)} exceeds d={d}: no signature (a,b) realizes this",
            stacklevel=2,
        )
    st = _state(("aiii", d, dminus))
    _extend_aiii(st, k, d, dminus)
    vals = {mu: st.values[mu] for n in range(k + 1) for mu in partitions(n)}
    return WgTable("aiii", k, d, dminus, vals)


def wg_aiii_class(mu: tuple[int, ...], d: int, dminus: int) -> Fraction:
    return solve_aiii_table(sum(mu), d, dminus).values[tuple(mu)]


def wg_aiii(sigma: Permutation, d: int, dminus: int) -> Fraction:
    return wg_aiii_class(sigma.cycle_type(), d, dminus)


@dataclass(frozen=True)
class SeriesTruncation:
    """Truncated large-``d`` expansion, coefficients straight from path counts.

    With ``n`` the element's absolute length and ``k`` its level:

    * ``u``:    ``W = sign * sum_g c[g] d**-(k+n+2g)``, sign ``(-1)**n``
    * ``o``:    ``W = sign * sum_g c[g] (-1)**g d**-(k+n+g)``
    * ``sp``:   ``|W| = sum_g c[g] (2d)**-(k+n+g)``
    * ``aiii``: ``W = sum_g P_g(dminus) d**-(n0+g)`` where each coefficient
      is a polynomial in ``dminus`` stored as an exponent-to-int dict and
      ``-n0`` is ``leading_exponent``.

    ``leading_exponent`` is the exponent of ``d`` (of ``2d`` for ``sp``)
    carried by ``coefficients[0]``.
    """

    family: str
    element: Permutation | PairPartition
    leading_exponent: int
    coefficients: tuple
    order: int

    def evaluate(self, d: int, dminus: int | None = None) -> Fraction:
        """Partial sum of the truncation at an integer dimension."""
        total = Fraction(0)
        if self.family == "aiii":
            if dminus is None:
                raise ValueError("aiii evaluation needs dminus")
            for g, poly in enumerate(self.coefficients):
                n = -self.leading_exponent + g
                val = sum(c * dminus**e for e, c in poly.items())
                total += Fraction(val, d**n)
            return total
        n0 = -self.leading_exponent
        sign = (-1) ** self.element.absolute_length()
        for g, c in enumerate(self.coefficients):
            if self.family == "u":
                total += Fraction(c, d ** (n0 + 2 * g))
            elif self.family == "o":
                total += Fraction(c * (-1) ** g, d ** (n0 + g))
            else:
                total += Fraction(c, (2 * d) ** (n0 + g))
        if self.family == "sp":
            return total
        return sign * total


def series(family: str, element, order: int) -> SeriesTruncation:
    """Expansion coefficients for one element through ``order`` terms past the lead."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    k = element.level
    if family == "u":
        if not isinstance(element, Permutation):
            raise TypeError("unitary series expects a permutation")
        n = element.absolute_length()
        coeffs = tuple(count_paths(GraphKind.UNITARY, element, n + 2 * g) for g in range(order + 1))
        return SeriesTruncation("u", element, -(k + n), coeffs, order)
    if family in ("o", "sp"):
        if not isinstance(element, PairPartition):
            raise TypeError("orthogonal and symplectic series expect a pair partition")
        n = element.absolute_length()
        coeffs = tuple(count_paths(GraphKind.ORTHOGONAL, element, n + g) for g in range(order + 1))
        return SeriesTruncation(family, element, -(k + n), coeffs, order)
    if family == "aiii":
        if not isinstance(element, Permutation):
            raise TypeError("aiii series expects a permutation")
        by_exponent: dict[int, dict[int, int]] = {}
        # exponent budget: l0 solid steps, l1 dashed, (k-l1)/2 squiggled
        max_n = 2 * k + 2 * order + 2
        for l1 in range(k % 2, k + 1, 2):
            base = (k + l1) // 2
            for l0 in range(0, max_n - base + 1):
                cnt = count_paths_refined(element, l0, l1)
                if cnt:
                    n = l0 + base
                    by_exponent.setdefault(n, {}).setdefault(l1, 0)
                    by_exponent[n][l1] += (-1) ** l0 * cnt
        nonzero = sorted(n for n, poly in by_exponent.items() if any(poly.values()))
        if not nonzero:
            raise AssertionError("every permutation admits at least one path")
        n0 = nonzero[0]
        coeffs = tuple(
            dict(sorted(by_exponent.get(n0 + g, {}).items())) for g in range(order + 1)
        )
        return SeriesTruncation("aiii", element, -n0, coeffs, order)
    raise ValueError(f"no series for family {family!r}")


def reconstruct_rational(
    family: str,
    element,
    dminus: int | None = None,
    degree_cap: int = 40,
) -> ratfunc.RationalFunctionRep:
    """Closed form in ``d`` for one element's Weingarten value.

    Evaluations start at ``2k+1`` and climb; singular dimensions are
    skipped.  For ``sp`` the recovered function is the absolute value, for
    ``aiii`` it is the slice at a fixed ``dminus``.
    """
    k = element.level
    start = 2 * k + 1
    if family == "u":
        f = lambda d: wg_unitary(element, d)
    elif family == "o":
        f = lambda d: wg_orthogonal(element, d)
    elif family == "coe":
        f = lambda d: wg_coe(element, d)
    elif family == "sp":
        f = lambda d: wg_symplectic_abs(element, d)
    elif family == "aiii":
        if dminus is None:
            raise ValueError("aiii reconstruction needs dminus")
        f = lambda d: wg_aiii(element, d, dminus)
    else:
        raise ValueError(f"unknown family {family!r}")
    return ratfunc.reconstruct(
        f, start=start, degree_cap=degree_cap, skip_exceptions=(SingularSystemError,)
    )


def clear_caches() -> None:
    _STATES.clear()
    _COE_FULL.clear()
