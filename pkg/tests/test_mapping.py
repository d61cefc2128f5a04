import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from guesssort import (
    DegenerateMapper,
    EmptyBox,
    EmptyInput,
    NonFiniteKey,
    OutOfRange,
    RangeOverflow,
    RefinedMapper,
    StatisticalMapper,
    TwoTerminalMapper,
    build_distribution_array,
    build_statistical_mapper,
    build_two_terminal_mapper,
    local_tangent,
    map_g1,
    map_g2,
    map_stat,
    refine,
)
from guesssort.datagen import DistributionSpec, generate

finite = st.floats(min_value=-1e12, max_value=1e12, allow_nan=False, allow_infinity=False)


def mappable(build, records):
    """Build a mapper, skipping spans whose slope overflows (e.g. subnormal widths)."""
    try:
        return build(records)
    except RangeOverflow:
        assume(False)


# --- two-terminals mapper -------------------------------------------------


def test_build_two_terminal_mapper_example():
    m = build_two_terminal_mapper([4.0, -2.0, 7.0])
    assert (m.x_min, m.x_max, m.n_boxes) == (-2.0, 7.0, 3)
    assert m.k_global == 2 / 9
    assert not m.degenerate


@pytest.mark.parametrize("records", [[5.0], [3.0, 3.0, 3.0]])
def test_build_two_terminal_mapper_degenerate(records):
    m = build_two_terminal_mapper(records)
    assert m.degenerate
    assert m.n_boxes == len(records)


def test_build_two_terminal_mapper_errors():
    with pytest.raises(EmptyInput):
        build_two_terminal_mapper([])
    with pytest.raises(NonFiniteKey) as err:
        build_two_terminal_mapper([1.0, 2.0, math.inf, math.nan])
    assert err.value.index == 2
    with pytest.raises(NonFiniteKey) as err:
        build_two_terminal_mapper([math.nan])
    assert err.value.index == 0


def test_two_terminal_span_overflow():
    with pytest.raises(RangeOverflow):
        build_two_terminal_mapper([-1.7e308, 1.7e308])
    with pytest.raises(RangeOverflow):
        build_two_terminal_mapper([0.0, 5e-324, 1.0e-323])


RANGE_0_8_MAPPER = TwoTerminalMapper(x_min=0.0, x_max=8.0, n_boxes=5, k_global=0.5, degenerate=False)


@pytest.mark.parametrize("x, box", [(0.0, 1), (8.0, 5), (3.0, 2)])
def test_map_g1_examples(x, box):
    assert map_g1(RANGE_0_8_MAPPER, x) == box


def test_map_g1_from_bounds_matches_literal():
    assert TwoTerminalMapper.from_bounds(0.0, 8.0, 5) == RANGE_0_8_MAPPER


def test_map_g1_errors():
    with pytest.raises(OutOfRange):
        map_g1(RANGE_0_8_MAPPER, 8.5)
    with pytest.raises(OutOfRange):
        map_g1(RANGE_0_8_MAPPER, -1e-9)
    with pytest.raises(DegenerateMapper):
        map_g1(build_two_terminal_mapper([1.0, 1.0]), 1.0)


@given(st.lists(finite, min_size=2, max_size=50))
def test_two_terminal_invariants(records):
    m = mappable(build_two_terminal_mapper, records)
    assert m.x_min <= m.x_max
    assert m.degenerate == (m.x_min == m.x_max)
    if not m.degenerate:
        assert m.k_global > 0
        assert math.isclose(m.k_global * (m.x_max - m.x_min), m.n_boxes - 1, rel_tol=4e-16)


@given(st.lists(finite, min_size=2, max_size=50), st.data())
def test_map_g1_endpoints_range_monotone(records, data):
    m = mappable(build_two_terminal_mapper, records)
    assume(not m.degenerate)
    assert map_g1(m, m.x_min) == 1
    assert map_g1(m, m.x_max) == m.n_boxes
    xs = sorted(data.draw(st.lists(st.floats(m.x_min, m.x_max), min_size=2, max_size=20)))
    boxes = [map_g1(m, x) for x in xs]
    assert boxes == sorted(boxes)
    assert all(1 <= b <= m.n_boxes for b in boxes)


@given(
    st.lists(st.integers(-(10**6), 10**6), min_size=2, max_size=40),
    st.integers(-8, 8),
    st.integers(-(10**6), 10**6),
)
def test_g1_shift_scale_covariance(ints, log2_scale, shift):
    records = [float(v) for v in ints]
    a = 2.0**log2_scale
    moved = [a * x + shift for x in records]
    m, m2 = build_two_terminal_mapper(records), build_two_terminal_mapper(moved)
    assume(not m.degenerate)
    assert [map_g1(m, x) for x in records] == [map_g1(m2, y) for y in moved]


# --- statistical mapper ---------------------------------------------------


def test_build_statistical_mapper_examples():
    assert build_statistical_mapper([0.0, 0.0, 0.0]).degenerate
    m = build_statistical_mapper([-1.0, 1.0])
    assert (m.mean, m.sigma, m.n_boxes) == (0.0, 1.0, 2)
    assert m.k_global == 2 / 6
    assert not m.degenerate


def test_build_statistical_mapper_gaussian_sample():
    keys = generate(DistributionSpec("gaussian", 10**5, seed=7))
    m = build_statistical_mapper(keys)
    assert abs(m.mean) <= 0.02
    assert abs(m.sigma - 1.0) <= 0.02


def test_build_statistical_mapper_errors():
    with pytest.raises(EmptyInput):
        build_statistical_mapper([])
    with pytest.raises(NonFiniteKey):
        build_statistical_mapper([0.0, -math.inf])


def test_statistical_sigma_is_population_two_pass():
    # large offset: a one-pass raw-moment formula loses all digits here
    keys = [1e9 + v for v in (1.0, 2.0, 3.0, 4.0)]
    m = build_statistical_mapper(keys)
    assert m.mean == 1e9 + 2.5
    assert m.sigma == math.sqrt(1.25)


STAT_MAPPER = StatisticalMapper.from_moments(0.0, 1.0, 600)


@pytest.mark.parametrize("x, box", [(0.0, 301), (5.0, 600), (-4.0, 1)])
def test_map_stat_examples(x, box):
    assert STAT_MAPPER.k_global == 100.0
    assert map_stat(STAT_MAPPER, x) == box


def test_map_stat_far_outside_window():
    assert map_stat(STAT_MAPPER, 1.7e308) == 600
    assert map_stat(STAT_MAPPER, -1.7e308) == 1


def test_map_stat_degenerate():
    with pytest.raises(DegenerateMapper):
        map_stat(build_statistical_mapper([2.0, 2.0]), 2.0)


@given(st.lists(finite, min_size=2, max_size=50), st.lists(finite, min_size=2, max_size=20))
def test_map_stat_range_and_monotone(records, probes):
    m = mappable(build_statistical_mapper, records)
    assume(not m.degenerate)
    boxes = [map_stat(m, x) for x in sorted(probes)]
    assert boxes == sorted(boxes)
    assert all(1 <= b <= m.n_boxes for b in boxes)


# --- distribution array and the refined map -----------------------------------


@pytest.mark.parametrize(
    "occ, a", [([2, 0, 3], (2, 2, 5)), ([0, 0, 0], (0, 0, 0)), ([1], (1,))]
)
def test_build_distribution_array_examples(occ, a):
    dist = build_distribution_array(occ)
    assert dist.a == a
    assert dist[0] == 0
    assert dist.total == sum(occ)


@given(st.lists(st.integers(0, 20), min_size=1, max_size=60))
def test_distribution_array_invariants(occ):
    dist = build_distribution_array(occ)
    assert len(dist) == len(occ)
    assert dist[len(occ)] == sum(occ)
    for n in range(1, len(occ) + 1):
        assert dist[n - 1] <= dist[n]
        assert dist.occupancy(n) == occ[n - 1]


def _refined(k, occupancy):
    base = TwoTerminalMapper(0.0, 1.0, len(occupancy), k, False)
    return RefinedMapper(base, build_distribution_array(occupancy))


def test_local_tangent_examples():
    # A[n-1] = 2, A[n] = 5
    assert local_tangent(_refined(0.5, [2, 3]), 2) == 1.0
    assert local_tangent(_refined(0.5, [2, 1]), 2) == 0.0
    assert local_tangent(_refined(2.0, [4]), 1) == 6.0
    with pytest.raises(EmptyBox):
        local_tangent(_refined(2.0, [4, 0]), 2)


@given(st.lists(st.integers(0, 30), min_size=1, max_size=30), st.floats(1e-6, 1e6))
def test_local_tangent_sign(occ, k):
    m = _refined(k, occ)
    for n, c in enumerate(occ, start=1):
        if c:
            t = local_tangent(m, n)
            assert t >= 0
            assert (t == 0) == (c == 1)


TRACE_RECORDS = [0.0, 0.5, 1.5, 5.0, 7.9]


def test_map_g2_hand_trace():
    # boxes by the global map: 1, 1, 1, 3, 4 -> A = [3, 3, 4, 5, 5]
    m = refine(RANGE_0_8_MAPPER, TRACE_RECORDS)
    assert [map_g1(RANGE_0_8_MAPPER, x) for x in TRACE_RECORDS] == [1, 1, 1, 3, 4]
    assert m.dist.a == (3, 3, 4, 5, 5)
    assert local_tangent(m, 1) == 1.0
    assert [map_g2(m, x) for x in (0.0, 1.5, 5.0, 7.9)] == [1, 2, 4, 5]
    # collides with 0.0; left for the cleanup pass
    assert map_g2(m, 0.5) == 1
    flattened = sorted(TRACE_RECORDS, key=lambda x: map_g2(m, x))
    assert flattened == sorted(TRACE_RECORDS)


def test_map_g2_single_occupant_box():
    m = refine(RANGE_0_8_MAPPER, TRACE_RECORDS)
    # box 3 holds only 5.0; anything landing there goes to A[2] + 1
    for x in (4.0, 5.0, 5.9):
        assert map_g2(m, x) == m.dist[2] + 1


def test_map_g2_degenerate():
    with pytest.raises(DegenerateMapper):
        refine(build_two_terminal_mapper([1.0, 1.0]), [1.0, 1.0])


@given(st.lists(finite, min_size=2, max_size=60))
def test_map_g2_stays_in_slot_range_and_box_order(records):
    base = mappable(build_two_terminal_mapper, records)
    assume(not base.degenerate)
    m = refine(base, records)
    by_box = {}
    for x in sorted(records):
        n = map_g1(base, x)
        p = map_g2(m, x)
        assert m.dist[n - 1] + 1 <= p <= m.dist[n]
        by_box.setdefault(n, []).append(p)
    for positions in by_box.values():
        assert positions == sorted(positions)


@settings(max_examples=50)
@given(st.lists(finite, min_size=2, max_size=60))
def test_map_g2_statistical_base(records):
    base = mappable(build_statistical_mapper, records)
    assume(not base.degenerate)
    m = refine(base, records)
    for x in records:
        n = map_stat(base, x)
        assert m.dist[n - 1] + 1 <= map_g2(m, x) <= m.dist[n]
