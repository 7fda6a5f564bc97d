"""Weingarten graphs: levels, edges, path counts and monotone factorizations.

Three graph kinds share one shape.  Vertices at level ``k`` are permutations
of ``{1..k}`` (unitary, A III) or pair partitions of ``{1..2k}``
(orthogonal).  Edges leaving a level-``k`` vertex:

* solid, staying on the level: ``(i,k).sigma`` for ``i < k``, respectively
  ``(i,2k-1).m`` for ``i <= 2k-2``.  The orthogonal family is a multigraph;
  a transposition fixing ``m`` is a genuine self-loop and is traversed like
  any other solid step.
* dashed, dropping one level: forget the fixed top point (``sigma(k)=k``),
  respectively the top block ``{2k-1,2k}``.
* squiggled (A III only), dropping two levels: remove the 2-cycle through
  the top point.

A path runs from its start vertex down to the empty object.  ``count_paths``
counts paths with exactly ``l`` solid steps; the memo table is a plain dict
keyed by immutable values, so concurrent readers are safe and insertion is
idempotent.  Paths with their solid-step annotations biject with monotone
transposition factorizations; both directions are implemented below.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Union

from .symcore import (
    PairPartition,
    Permutation,
    format_pair_partition,
    format_permutation,
)

Element = Union[Permutation, PairPartition]


class GraphKind(enum.Enum):
    UNITARY = "u"
    ORTHOGONAL = "o"
    AIII = "aiii"


SOLID = "solid"
DASHED = "dashed"
SQUIGGLED = "squiggled"


class PathLimitExceeded(Exception):
    """Raised when enumeration would return more paths than the caller's cap."""


def _check_element(kind: GraphKind, elem: Element) -> None:
    if kind is GraphKind.ORTHOGONAL:
        if not isinstance(elem, PairPartition):
            raise TypeError(f"{kind.value} graph vertices are pair partitions, got {elem!r}")
    elif not isinstance(elem, Permutation):
        raise TypeError(f"{kind.value} graph vertices are permutations, got {elem!r}")


@dataclass(frozen=True)
class EdgeStep:
    """One traversed edge: its kind, the solid index ``i`` (if any), the vertex reached."""

    kind: str
    index: int | None
    target: Element


def solid_neighbors(kind: GraphKind, elem: Element) -> tuple[EdgeStep, ...]:
    """All solid steps leaving ``elem``, in index order.  Empty at low levels."""
    _check_element(kind, elem)
    k = elem.level
    if kind is GraphKind.ORTHOGONAL:
        top = 2 * k - 1
        return tuple(
            EdgeStep(SOLID, i, elem.swap_points(i, top)) for i in range(1, 2 * k - 1)
        )
    return tuple(EdgeStep(SOLID, i, elem.swap_values(i, k)) for i in range(1, k))


def dashed_target(kind: GraphKind, elem: Element) -> Element | None:
    _check_element(kind, elem)
    if elem.level == 0:
        return None
    if kind is GraphKind.ORTHOGONAL:
        return elem.pairing_down() if elem.has_top_block() else None
    return elem.restrict_down() if elem.fixes_top() else None


def squiggled_target(kind: GraphKind, elem: Element) -> Permutation | None:
    if kind is not GraphKind.AIII:
        raise ValueError(f"squiggled edges exist only in the A III graph, not {kind.value}")
    _check_element(kind, elem)
    return elem.flat() if elem.top_in_two_cycle() else None


_COUNTS: dict[tuple, int] = {}
_AIII_COUNTS: dict[tuple, int] = {}


def count_paths(kind: GraphKind, elem: Element, solid: int) -> int:
    """Number of paths from ``elem`` to the empty object with ``solid`` solid steps.

    For the A III graph this aggregates over every split of the level into
    dashed and squiggled descents.
    """
    _check_element(kind, elem)
    if solid < 0:
        return 0
    if kind is GraphKind.AIII:
        k = elem.level
        return sum(
            count_paths_refined(elem, solid, k - 2 * l2) for l2 in range(k // 2 + 1)
        )
    key = (kind, elem, solid)
    cached = _COUNTS.get(key)
    if cached is not None:
        return cached
    if elem.level == 0:
        total = 1 if solid == 0 else 0
    else:
        total = 0
        if solid > 0:
            for step in solid_neighbors(kind, elem):
                total += count_paths(kind, step.target, solid - 1)
        down = dashed_target(kind, elem)
        if down is not None:
            total += count_paths(kind, down, solid)
    _COUNTS[key] = total
    return total


def count_paths_refined(sigma: Permutation, solid: int, dashed: int) -> int:
    """A III paths from ``sigma`` with exactly ``solid`` solid and ``dashed`` dashed steps.

    The squiggled count is forced: ``dashed + 2*squiggled`` equals the level.
    """
    if solid < 0 or dashed < 0:
        return 0
    key = (sigma, solid, dashed)
    cached = _AIII_COUNTS.get(key)
    if cached is not None:
        return cached
    k = sigma.level
    if k == 0:
        total = 1 if solid == 0 and dashed == 0 else 0
    else:
        total = 0
        if solid > 0:
            for i in range(1, k):
                total += count_paths_refined(sigma.swap_values(i, k), solid - 1, dashed)
        if sigma.fixes_top():
            total += count_paths_refined(sigma.restrict_down(), solid, dashed - 1)
        elif sigma.top_in_two_cycle():
            total += count_paths_refined(sigma.flat(), solid, dashed)
    _AIII_COUNTS[key] = total
    return total


@dataclass(frozen=True)
class Path:
    """A traversal from ``start`` down to the empty object."""

    kind: GraphKind
    start: Element
    steps: tuple[EdgeStep, ...]

    def nodes(self) -> tuple[Element, ...]:
        return (self.start,) + tuple(s.target for s in self.steps)

    def count(self, edge_kind: str) -> int:
        return sum(1 for s in self.steps if s.kind == edge_kind)

    def solid_transpositions(self) -> tuple[tuple[int, int], ...]:
        """The transposition carried by each solid step, in traversal order."""
        out = []
        level = self.start.level
        for step in self.steps:
            if step.kind == SOLID:
                top = 2 * level - 1 if self.kind is GraphKind.ORTHOGONAL else level
                out.append((step.index, top))
            elif step.kind == DASHED:
                level -= 1
            else:
                level -= 2
        return tuple(out)


def enumerate_paths(
    kind: GraphKind, elem: Element, solid: int, limit: int | None = None
) -> list[Path]:
    """All paths with ``solid`` solid steps, ordered by the choices made at each
    vertex: solid edges by index, then dashed, then squiggled.

    Raises :class:`PathLimitExceeded` when more than ``limit`` paths exist.
    """
    _check_element(kind, elem)
    out: list[Path] = []
    acc: list[EdgeStep] = []

    def rec(node: Element, remaining: int) -> None:
        if node.level == 0:
            if remaining == 0:
                if limit is not None and len(out) >= limit:
                    raise PathLimitExceeded(limit)
                out.append(Path(kind, elem, tuple(acc)))
            return
        if remaining > 0:
            for step in solid_neighbors(kind, node):
                acc.append(step)
                rec(step.target, remaining - 1)
                acc.pop()
        down = dashed_target(kind, node)
        if down is not None:
            acc.append(EdgeStep(DASHED, None, down))
            rec(down, remaining)
            acc.pop()
        if kind is GraphKind.AIII:
            flat = squiggled_target(kind, node)
            if flat is not None:
                acc.append(EdgeStep(SQUIGGLED, None, flat))
                rec(flat, remaining)
                acc.pop()

    rec(elem, solid)
    return out


def _format_element(elem: Element) -> str:
    if isinstance(elem, PairPartition):
        return format_pair_partition(elem)
    return format_permutation(elem)


def format_path(path: Path) -> str:
    """Serialize: solid ``-(s,t)->``, dashed ``=>``, squiggled ``~>``."""
    parts = [_format_element(path.start)]
    level = path.start.level
    for step in path.steps:
        if step.kind == SOLID:
            top = 2 * level - 1 if path.kind is GraphKind.ORTHOGONAL else level
            parts.append(f"-({step.index},{top})->")
        elif step.kind == DASHED:
            parts.append("=>")
            level -= 1
        else:
            parts.append("~>")
            level -= 2
        parts.append(_format_element(step.target))
    return " ".join(parts)


@dataclass(frozen=True)
class MonotoneFactorization:
    """Transpositions ``(s_1,t_1)...(s_l,t_l)`` with ``s_i < t_i`` and weakly
    decreasing ``t_i``, multiplying (leftmost applied last) to a permutation,
    or acting on the trivial pairing in the orthogonal variant where every
    ``t_i`` is an odd position ``2r-1``.
    """

    kind: GraphKind
    level: int
    transpositions: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.kind is GraphKind.AIII:
            raise ValueError("monotone factorizations are defined for the unitary and orthogonal graphs")
        ts = [t for _, t in self.transpositions]
        if any(ts[i] < ts[i + 1] for i in range(len(ts) - 1)):
            raise ValueError(f"second components must weakly decrease: {self.transpositions}")
        n_points = 2 * self.level if self.kind is GraphKind.ORTHOGONAL else self.level
        for s, t in self.transpositions:
            if not (1 <= s < t <= n_points):
                raise ValueError(f"bad transposition ({s},{t}) on {n_points} points")
            if self.kind is GraphKind.ORTHOGONAL and t % 2 == 0:
                raise ValueError(f"orthogonal factors need odd second components: ({s},{t})")

    def product(self) -> Permutation:
        n_points = 2 * self.level if self.kind is GraphKind.ORTHOGONAL else self.level
        acc = Permutation.identity(n_points)
        for s, t in self.transpositions:
            acc = acc * Permutation.transposition(n_points, s, t)
        return acc

    def target(self) -> Element:
        """The permutation (or pairing, via action on the trivial one) produced."""
        prod = self.product()
        if self.kind is GraphKind.ORTHOGONAL:
            return PairPartition.trivial(self.level).apply(prod)
        return prod


def path_to_factorization(path: Path) -> MonotoneFactorization:
    if path.kind is GraphKind.AIII:
        raise ValueError("monotone factorizations are defined for the unitary and orthogonal graphs")
    return MonotoneFactorization(path.kind, path.start.level, path.solid_transpositions())


def factorization_to_path(f: MonotoneFactorization) -> Path:
    """Rebuild the unique path whose solid steps carry ``f``'s transpositions.

    Walks from ``f.target()``: each factor ``(s,t)`` forces dashed descents
    until its level is reached, then a solid step with index ``s``; the
    remainder descends dashed to the empty object.  Raises ``ValueError``
    when the walk gets stuck, which happens exactly when the sequence is not
    realizable (e.g. a factor below a level whose top cannot be dropped).
    """
    kind = f.kind
    start = f.target()
    cur = start
    steps: list[EdgeStep] = []

    def descend_once() -> None:
        nonlocal cur
        down = dashed_target(kind, cur)
        if down is None:
            raise ValueError("factorization does not correspond to a path: stuck descent")
        steps.append(EdgeStep(DASHED, None, down))
        cur = down

    for s, t in f.transpositions:
        want_level = (t + 1) // 2 if kind is GraphKind.ORTHOGONAL else t
        while cur.level > want_level:
            descend_once()
        if cur.level != want_level:
            raise ValueError(f"factor ({s},{t}) sits above the current level {cur.level}")
        if kind is GraphKind.ORTHOGONAL:
            nxt = cur.swap_points(s, t)
        else:
            nxt = cur.swap_values(s, t)
        steps.append(EdgeStep(SOLID, s, nxt))
        cur = nxt
    while cur.level > 0:
        descend_once()
    return Path(kind, start, tuple(steps))


def enumerate_monotone_factorizations(
    kind: GraphKind, level: int, length: int
) -> Iterator[MonotoneFactorization]:
    """Brute-force generator of every monotone sequence of given length.

    Deliberately independent of the path machinery so the two can be played
    against each other; intended for small levels only.
    """
    if kind is GraphKind.ORTHOGONAL:
        choices = [
            (s, 2 * r - 1) for r in range(1, level + 1) for s in range(1, 2 * r - 1)
        ]
    else:
        choices = [(s, t) for t in range(1, level + 1) for s in range(1, t)]

    def rec(prefix: tuple, remaining: int, max_t: int):
        if remaining == 0:
            yield MonotoneFactorization(kind, level, prefix)
            return
        for s, t in choices:
            if t <= max_t:
                yield from rec(prefix + ((s, t),), remaining - 1, t)

    yield from rec((), length, 10 ** 9)


def clear_caches() -> None:
    _COUNTS.clear()
    _AIII_COUNTS.clear()
