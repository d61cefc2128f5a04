import math
import random
import statistics

import pytest

from guesssort import InvalidSpec
from guesssort.datagen import KINDS, DistributionSpec, generate, provenance

# First four random() outputs of MT19937 seeded with 1.
REFERENCE_STREAM_SEED_1 = [
    0.13436424411240122,
    0.8474337369372327,
    0.763774618976614,
    0.2550690257394217,
]


def test_reference_stream_is_pinned():
    rng = random.Random(1)
    assert [rng.random() for _ in range(4)] == REFERENCE_STREAM_SEED_1


def test_uniform_is_affine_image_of_reference_stream():
    keys = generate(DistributionSpec("uniform", 4, seed=1))
    assert keys == [-2e7 + 4e7 * u for u in REFERENCE_STREAM_SEED_1]


def test_constant_example():
    assert generate(DistributionSpec("constant", 3, params={"value": 7.0})) == [7.0, 7.0, 7.0]


def test_uniform_default_range_large():
    keys = generate(DistributionSpec("uniform", 2**20, seed=1))
    assert len(keys) == 2**20
    assert all(-2e7 <= x < 2e7 for x in keys)
    assert abs(statistics.fmean(keys)) <= 0.005 * 4e7


def test_uniform_integer_mode():
    keys = generate(DistributionSpec("uniform", 1000, seed=2, params={"integer": True}))
    assert all(x == math.floor(x) and -2e7 <= x < 2e7 for x in keys)


def test_sorted_and_reverse():
    asc = generate(DistributionSpec("sorted-ascending", 5, seed=3))
    assert asc == sorted(asc)
    desc = generate(DistributionSpec("reverse-sorted", 50, seed=3))
    assert desc == sorted(desc, reverse=True)


def test_gaussian_moments():
    keys = generate(DistributionSpec("gaussian", 10**5, seed=5, params={"mean": 10.0, "sigma": 3.0}))
    assert abs(statistics.fmean(keys) - 10.0) < 0.05
    assert abs(statistics.pstdev(keys) / 3.0 - 1) <= 0.02


def test_clustered_respects_weights():
    spec = DistributionSpec(
        "clustered", 20_000, seed=6, params={"centers": [-100.0, 100.0], "spread": 1.0, "weights": [0.25, 0.75]}
    )
    keys = generate(spec)
    share_right = sum(1 for x in keys if x > 0) / len(keys)
    assert abs(share_right - 0.75) < 0.02


def test_heavy_duplicates_pool():
    keys = generate(DistributionSpec("heavy-duplicates", 5000, seed=7, params={"distinct": 5}))
    assert len(set(keys)) <= 5


@pytest.mark.parametrize("kind", KINDS)
def test_determinism_and_count(kind):
    spec = DistributionSpec(kind, 777, seed=42)
    a, b = generate(spec), generate(spec)
    assert a == b
    assert len(a) == 777
    assert all(math.isfinite(x) for x in a)


def test_different_seeds_differ():
    assert generate(DistributionSpec("uniform", 10, seed=1)) != generate(DistributionSpec("uniform", 10, seed=2))


@pytest.mark.parametrize(
    "spec, field",
    [
        (DistributionSpec("uniform", 5, params={"lo": 1.0, "hi": 1.0}), "hi"),
        (DistributionSpec("gaussian", 5, params={"sigma": 0.0}), "sigma"),
        (DistributionSpec("clustered", 5, params={"centers": []}), "centers"),
        (DistributionSpec("clustered", 5, params={"weights": [0.5, 0.2, 0.2]}), "weights"),
        (DistributionSpec("clustered", 5, params={"weights": [0.5, 0.5]}), "weights"),
        (DistributionSpec("zipf", 5), "kind"),
        (DistributionSpec("uniform", -1), "n"),
        (DistributionSpec("uniform", 5, seed=2**64), "seed"),
        (DistributionSpec("uniform", 5, params={"sigma": 1.0}), "sigma"),
        (DistributionSpec("constant", 5, params={"value": math.nan}), "value"),
    ],
)
def test_invalid_specs_name_the_field(spec, field):
    with pytest.raises(InvalidSpec) as err:
        generate(spec)
    assert err.value.field == field


def test_provenance_records_generator_and_seed():
    lines = provenance(DistributionSpec("gaussian", 9, seed=123))
    assert all(line.startswith("# ") for line in lines)
    text = "\n".join(lines)
    assert "mt19937" in text
    assert "# seed: 123" in text
    assert "# kind: gaussian" in text
