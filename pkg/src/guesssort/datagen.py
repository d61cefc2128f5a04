"""Seeded record generation.

Every kind draws from one pinned stream: CPython's ``random.Random``
(MT19937) seeded with the DistributionSpec seed, consumed only through
``random()`` (53-bit doubles), whose output sequence for a given seed is
guaranteed stable across Python versions.  Gaussian variates use the
Marsaglia polar method on top of that stream, so nothing depends on the
library's own ``gauss``/``normalvariate`` implementations.
"""

from __future__ import annotations

import bisect
import json
import math
import random
from collections.abc import Mapping
from dataclasses import dataclass, field
from itertools import accumulate
from typing import Any

from .errors import InvalidSpec

GENERATOR = "mt19937 (python random.Random, 53-bit random())"

KINDS = (
    "uniform",
    "gaussian",
    "clustered",
    "constant",
    "sorted-ascending",
    "reverse-sorted",
    "heavy-duplicates",
)

UNIFORM_LO = -2.0e7
UNIFORM_HI = 2.0e7

DEFAULTS: dict[str, dict[str, Any]] = {
    "uniform": {"lo": UNIFORM_LO, "hi": UNIFORM_HI, "integer": False},
    "gaussian": {"mean": 0.0, "sigma": 1.0},
    "clustered": {"centers": [-1.0e7, 0.0, 1.5e7], "spread": 1.0e4, "weights": None},
    "constant": {"value": 0.0},
    "sorted-ascending": {"lo": UNIFORM_LO, "hi": UNIFORM_HI},
    "reverse-sorted": {"lo": UNIFORM_LO, "hi": UNIFORM_HI},
    "heavy-duplicates": {"lo": UNIFORM_LO, "hi": UNIFORM_HI, "distinct": 16},
}

SEED_LIMIT = 1 << 64


@dataclass(frozen=True)
class DistributionSpec:
    kind: str
    n: int
    seed: int = 0
    params: Mapping[str, Any] = field(default_factory=dict)

    def resolved(self) -> dict[str, Any]:
        """Kind defaults overlaid with the explicit params."""
        if self.kind not in DEFAULTS:
            raise InvalidSpec("kind", f"unknown kind {self.kind!r}; expected one of {KINDS}")
        merged = dict(DEFAULTS[self.kind])
        unknown = set(self.params) - set(merged)
        if unknown:
            raise InvalidSpec(sorted(unknown)[0], f"not a parameter of {self.kind!r}")
        merged.update(self.params)
        return merged

    def with_seed(self, seed: int) -> DistributionSpec:
        return DistributionSpec(self.kind, self.n, seed, dict(self.params))

    def with_n(self, n: int) -> DistributionSpec:
        return DistributionSpec(self.kind, n, self.seed, dict(self.params))


def _finite(name: str, value: Any) -> float:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise InvalidSpec(name, f"expected a number, got {value!r}") from None
    if not math.isfinite(v):
        raise InvalidSpec(name, f"must be finite, got {v!r}")
    return v


def validate(spec: DistributionSpec) -> dict[str, Any]:
    """Check ``spec`` and return its resolved parameters."""
    p = spec.resolved()
    if not isinstance(spec.n, int) or spec.n < 0:
        raise InvalidSpec("n", f"must be a non-negative integer, got {spec.n!r}")
    if not isinstance(spec.seed, int) or not 0 <= spec.seed < SEED_LIMIT:
        raise InvalidSpec("seed", "must be an integer in [0, 2**64)")

    if "lo" in p:
        p["lo"], p["hi"] = _finite("lo", p["lo"]), _finite("hi", p["hi"])
        if not p["lo"] < p["hi"]:
            raise InvalidSpec("hi", "uniform bounds require lo < hi")
        if not math.isfinite(p["hi"] - p["lo"]):
            raise InvalidSpec("hi", "hi - lo overflows")
    kind = spec.kind
    if kind == "gaussian":
        p["mean"], p["sigma"] = _finite("mean", p["mean"]), _finite("sigma", p["sigma"])
        if not p["sigma"] > 0:
            raise InvalidSpec("sigma", "must be > 0")
    elif kind == "clustered":
        centers = [_finite("centers", c) for c in p["centers"]]
        if not centers:
            raise InvalidSpec("centers", "need at least one cluster center")
        p["centers"] = centers
        p["spread"] = _finite("spread", p["spread"])
        if not p["spread"] > 0:
            raise InvalidSpec("spread", "must be > 0")
        weights = p["weights"]
        if weights is None:
            weights = [1.0 / len(centers)] * len(centers)
        weights = [_finite("weights", w) for w in weights]
        if len(weights) != len(centers):
            raise InvalidSpec("weights", "need one weight per center")
        if any(w < 0 for w in weights) or not math.isclose(math.fsum(weights), 1.0, abs_tol=1e-9):
            raise InvalidSpec("weights", "must be non-negative and sum to 1")
        p["weights"] = weights
    elif kind == "constant":
        p["value"] = _finite("value", p["value"])
    elif kind == "heavy-duplicates":
        if not isinstance(p["distinct"], int) or p["distinct"] < 1:
            raise InvalidSpec("distinct", "must be a positive integer")
    return p


def _uniform(rand, n: int, lo: float, hi: float) -> list[float]:
    span = hi - lo
    out = [lo + span * rand() for _ in range(n)]
    if out and max(out) >= hi:
        # lo + span * u can round up onto hi
        top = math.nextafter(hi, lo)
        out = [x if x < hi else top for x in out]
    return out


def _polar(rand, n: int) -> list[float]:
    """``n`` standard normal variates by the Marsaglia polar method."""
    out: list[float] = []
    while len(out) < n:
        u = 2.0 * rand() - 1.0
        v = 2.0 * rand() - 1.0
        s = u * u + v * v
        if s >= 1.0 or s == 0.0:
            continue
        f = math.sqrt(-2.0 * math.log(s) / s)
        out.append(u * f)
        out.append(v * f)
    del out[n:]
    return out


def generate(spec: DistributionSpec) -> list[float]:
    """Produce ``spec.n`` finite keys; identical specs give identical lists."""
    p = validate(spec)
    n = spec.n
    rand = random.Random(spec.seed).random
    kind = spec.kind

    if kind == "constant":
        return [p["value"]] * n
    if kind == "uniform":
        keys = _uniform(rand, n, p["lo"], p["hi"])
        if p["integer"]:
            keys = [float(math.floor(x)) for x in keys]
        return keys
    if kind == "sorted-ascending":
        return sorted(_uniform(rand, n, p["lo"], p["hi"]))
    if kind == "reverse-sorted":
        return sorted(_uniform(rand, n, p["lo"], p["hi"]), reverse=True)
    if kind == "gaussian":
        mean, sigma = p["mean"], p["sigma"]
        return [mean + sigma * z for z in _polar(rand, n)]
    if kind == "heavy-duplicates":
        pool = _uniform(rand, p["distinct"], p["lo"], p["hi"])
        m = len(pool)
        return [pool[int(rand() * m)] for _ in range(n)]
    # clustered
    centers, spread = p["centers"], p["spread"]
    cum = list(accumulate(p["weights"]))
    last = len(centers) - 1
    picks = [min(bisect.bisect_right(cum, rand() * cum[-1]), last) for _ in range(n)]
    return [centers[c] + spread * z for c, z in zip(picks, _polar(rand, n))]


def provenance(spec: DistributionSpec) -> list[str]:
    """Comment lines recording how a record file was generated."""
    params = validate(spec)
    return [
        f"# generator: {GENERATOR}",
        f"# kind: {spec.kind}",
        f"# n: {spec.n}",
        f"# seed: {spec.seed}",
        f"# params: {json.dumps(params, sort_keys=True)}",
    ]
