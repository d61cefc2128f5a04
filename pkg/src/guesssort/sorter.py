"""Scatter / cleanup / gather pipelines built on the guessing functions.

``sort_one_pass`` drops each key into the box chosen by the global map, sorts
every box with insertion sort and concatenates the boxes.  ``sort_two_pass``
goes one step further: it uses the occupancy table from the first scatter
to predict each key's final slot (the refined map), lays the keys out by slot
and finishes with a single adaptive insertion pass.

Neither pipeline is stable.  Both return a new list and leave the input alone.
"""

from __future__ import annotations

import math
from array import array
from collections.abc import Iterable, MutableSequence, Sequence
from dataclasses import dataclass
from time import perf_counter
from typing import Literal

from .errors import OutOfRange, RangeOverflow
from .mapping import (
    DistributionArray,
    Mapper,
    TwoTerminalMapper,
    as_keys,
    build_distribution_array,
    statistical_mapper_for,
)

MapperKind = Literal["two-terminals", "statistical"]
MAPPER_KINDS: tuple[str, ...] = ("two-terminals", "statistical")

INSERTION_CUTOFF = 16
GUARD_FLOOR = 64


def insertion_sort(seq: MutableSequence) -> MutableSequence:
    """Sort ``seq`` in place and return it."""
    _insertion_pass(seq, 0, len(seq))
    return seq


def _insertion_pass(a: MutableSequence, lo: int, hi: int) -> int:
    """Insertion-sort ``a[lo:hi]`` in place; return the number of element shifts."""
    moves = 0
    for i in range(lo + 1, hi):
        v = a[i]
        if a[i - 1] <= v:
            continue
        j = i - 1
        while j >= lo and a[j] > v:
            a[j + 1] = a[j]
            j -= 1
        moves += i - 1 - j
        a[j + 1] = v
    return moves


def quicksort_baseline(seq: Iterable) -> list:
    """Median-of-three quicksort with an insertion-sort cutoff.

    Returns a sorted copy.  Iterative (explicit stack, smaller side first)
    so recursion depth is never an issue.
    """
    a = list(seq)
    stack = [(0, len(a) - 1)]
    while stack:
        lo, hi = stack.pop()
        while hi - lo >= INSERTION_CUTOFF:
            mid = (lo + hi) >> 1
            if a[mid] < a[lo]:
                a[lo], a[mid] = a[mid], a[lo]
            if a[hi] < a[lo]:
                a[lo], a[hi] = a[hi], a[lo]
            if a[hi] < a[mid]:
                a[mid], a[hi] = a[hi], a[mid]
            pivot = a[mid]
            i, j = lo, hi
            while i <= j:
                while a[i] < pivot:
                    i += 1
                while pivot < a[j]:
                    j -= 1
                if i <= j:
                    a[i], a[j] = a[j], a[i]
                    i += 1
                    j -= 1
            if j - lo < hi - i:
                stack.append((i, hi))
                hi = j
            else:
                stack.append((lo, j))
                lo = i
        _insertion_pass(a, lo, hi + 1)
    return a


def _bit_patterns(values: Sequence) -> list[int]:
    return sorted(array("q", array("d", values).tobytes()))


def verify_sorted_permutation(input: Sequence, output: Sequence) -> bool:
    """True iff ``output`` is non-decreasing and bit-for-bit a rearrangement of ``input``."""
    if len(input) != len(output):
        return False
    if any(output[i] > output[i + 1] for i in range(len(output) - 1)):
        return False
    return _bit_patterns(input) == _bit_patterns(output)


@dataclass
class BoxTable:
    """N boxes, box ``n`` at ``boxes[n - 1]``, keys kept in arrival order."""

    boxes: list[list[float]]
    mapper: Mapper

    @property
    def n_boxes(self) -> int:
        return len(self.boxes)

    def occupancies(self) -> list[int]:
        return list(map(len, self.boxes))


@dataclass
class SortStats:
    n_records: int = 0
    n_boxes: int = 0
    empty_boxes: int = 0
    max_occupancy: int = 0
    cleanup_moves: int = 0
    clamp_count: int = 0
    fallback_boxes: int = 0
    elapsed_map: float = 0.0
    elapsed_cleanup: float = 0.0

    @property
    def empty_box_fraction(self) -> float:
        return self.empty_boxes / self.n_boxes if self.n_boxes else 0.0


def build_mapper(keys: Sequence[float], kind: MapperKind = "two-terminals") -> Mapper:
    """Build a mapper of ``kind`` from already validated keys."""
    if kind == "two-terminals":
        return TwoTerminalMapper.from_bounds(min(keys), max(keys), len(keys))
    if kind == "statistical":
        return statistical_mapper_for(keys)
    raise ValueError(f"unknown mapper kind {kind!r}; expected one of {MAPPER_KINDS}")


def box_indices(keys: Sequence[float], mapper: Mapper) -> list[int]:
    """0-based box index of every key (the bulk form of map_g1 / map_stat)."""
    if mapper.degenerate:
        return [0] * len(keys)
    o, k = mapper.origin, mapper.k_global
    last = mapper.n_boxes - 1
    if isinstance(mapper, TwoTerminalMapper):
        if keys and (min(keys) < mapper.x_min or max(keys) > mapper.x_max):
            bad = next(x for x in keys if not mapper.x_min <= x <= mapper.x_max)
            raise OutOfRange(bad, mapper.x_min, mapper.x_max)
        hi = mapper.x_max
        # below x_max the product stays under N; x_max itself is pinned to box N
        return [int((x - o) * k) if x < hi else last for x in keys]
    top = float(mapper.n_boxes)
    # int() truncates toward zero; every negative t is clamped to box 1 anyway
    return [
        0 if t < 0.0 else (last if t >= top else int(t))
        for t in [(x - o) * k for x in keys]
    ]


def scatter(records: Iterable[float], mapper: Mapper) -> BoxTable:
    keys = as_keys(records)
    boxes: list[list[float]] = [[] for _ in range(mapper.n_boxes)]
    for x, b in zip(keys, box_indices(keys, mapper)):
        boxes[b].append(x)
    return BoxTable(boxes, mapper)


def _guard_limit(n: int) -> int:
    return max(GUARD_FLOOR, math.isqrt(n - 1) + 1 if n > 0 else 0)


def _trivial(keys: list[float], n_boxes: int) -> tuple[list[float], SortStats]:
    n = len(keys)
    stats = SortStats(n_records=n, n_boxes=n_boxes)
    if n:
        stats.empty_boxes = n_boxes - 1
        stats.max_occupancy = n
    return keys, stats


def _fallback(keys: list[float]) -> tuple[list[float], SortStats]:
    n = len(keys)
    return quicksort_baseline(keys), SortStats(
        n_records=n, n_boxes=1, max_occupancy=n, fallback_boxes=1
    )


def _pack(keys: Sequence[float], slots: Sequence[int], size: int) -> list:
    """Drop ``keys[i]`` into ``table[slots[i]]``.

    A slot holds ``None``, a lone float, or a list once a second key arrives,
    which keeps list allocations down to the slots that actually collide.
    """
    table: list = [None] * size
    for x, s in zip(keys, slots):
        e = table[s]
        if e is None:
            table[s] = x
        elif type(e) is list:
            e.append(x)
        else:
            table[s] = [e, x]
    return table


def sort_one_pass(
    records: Iterable[float], mapper_kind: MapperKind = "two-terminals"
) -> tuple[list[float], SortStats]:
    """One-pass pipeline: build mapper, scatter, insertion-sort boxes, gather."""
    keys = as_keys(records)
    n = len(keys)
    if n < 2:
        return _trivial(keys, n)
    t0 = perf_counter()
    try:
        mapper = build_mapper(keys, mapper_kind)
    except RangeOverflow:
        return _fallback(keys)
    if mapper.degenerate:
        # all keys equal: already sorted
        return _trivial(keys, mapper.n_boxes)
    table = _pack(keys, box_indices(keys, mapper), mapper.n_boxes)
    t1 = perf_counter()

    limit = _guard_limit(n)
    out: list[float] = []
    put = out.append
    moves = empties = fallbacks = 0
    widest = 1
    for box in table:
        if box is None:
            empties += 1
            continue
        if type(box) is float:
            put(box)
            continue
        c = len(box)
        if c > widest:
            widest = c
        if c > limit:
            box = quicksort_baseline(box)
            fallbacks += 1
        elif c == 2:
            if box[0] > box[1]:
                box.reverse()
                moves += 1
        else:
            moves += _insertion_pass(box, 0, c)
        out += box
    t2 = perf_counter()

    stats = SortStats(
        n_records=n,
        n_boxes=mapper.n_boxes,
        empty_boxes=empties,
        max_occupancy=widest,
        cleanup_moves=moves,
        fallback_boxes=fallbacks,
        elapsed_map=t1 - t0,
        elapsed_cleanup=t2 - t1,
    )
    return out, stats


@dataclass
class Placement:
    """Two-pass layout before cleanup.

    ``boxes[i]`` is key ``i``'s 0-based first-pass box and ``positions[i]``
    its 0-based predicted slot.  ``counts[b]`` is the occupancy of 0-based
    box ``b``.  ``clamp_count`` counts predictions pulled back into their
    box's slot range.
    """

    mapper: Mapper
    boxes: list[int]
    counts: list[int]
    dist: DistributionArray
    positions: list[int]
    clamp_count: int


def place_two_pass(keys: Sequence[float], mapper: Mapper) -> Placement:
    """Evaluate the refined map for every key, reusing the cached first-pass boxes."""
    idx = box_indices(keys, mapper)
    counts = [0] * mapper.n_boxes
    for b in idx:
        counts[b] += 1
    dist = build_distribution_array(counts)
    ends = dist.a
    k, o = mapper.k_global, mapper.origin
    positions: list[int] = []
    put = positions.append
    clamps = 0
    for x, b in zip(keys, idx):
        c = counts[b]
        first = ends[b] - c
        if c == 1:
            put(first)
            continue
        t = (x - (b / k + o)) * (k * (c - 1))
        if t < 0.0:
            clamps += 1
            put(first)
        elif t >= c:
            clamps += 1
            put(first + c - 1)
        else:
            put(first + int(t))
    return Placement(mapper, idx, counts, dist, positions, clamps)


def sort_two_pass(
    records: Iterable[float], mapper_kind: MapperKind = "two-terminals"
) -> tuple[list[float], SortStats]:
    """Two-pass pipeline: place every key at its predicted slot, then one insertion pass."""
    keys = as_keys(records)
    n = len(keys)
    if n < 2:
        return _trivial(keys, n)
    t0 = perf_counter()
    try:
        mapper = build_mapper(keys, mapper_kind)
    except RangeOverflow:
        return _fallback(keys)
    if mapper.degenerate:
        return _trivial(keys, mapper.n_boxes)
    placed = place_two_pass(keys, mapper)

    # colliding keys share a slot list; the insertion pass untangles them
    table = _pack(keys, placed.positions, n)
    t1 = perf_counter()

    limit = _guard_limit(n)
    out: list[float] = []
    put = out.append
    fallbacks = 0
    for e in table:
        if e is None:
            continue
        if type(e) is float:
            put(e)
        elif len(e) > limit:
            out += quicksort_baseline(e)
            fallbacks += 1
        else:
            out += e
    moves = _insertion_pass(out, 0, n)
    t2 = perf_counter()

    counts = placed.counts
    stats = SortStats(
        n_records=n,
        n_boxes=mapper.n_boxes,
        empty_boxes=counts.count(0),
        max_occupancy=max(counts),
        cleanup_moves=moves,
        clamp_count=placed.clamp_count,
        fallback_boxes=fallbacks,
        elapsed_map=t1 - t0,
        elapsed_cleanup=t2 - t1,
    )
    return out, stats
