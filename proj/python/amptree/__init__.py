"""Python access to the amptree library.

Structured results come back as plain dicts and lists.
"""

import json

from . import _core
from ._core import AmptreeError, CapacityError, ConfigError, Distribution, RangeError

__all__ = [
    "AmptreeError",
    "CapacityError",
    "ConfigError",
    "Distribution",
    "RangeError",
    "build",
    "enumerate_polynomials",
    "evaluate",
    "fixed_points",
    "learn",
    "polynomial",
    "profile",
    "simulate_leveled",
    "simulate_stream",
    "verify_conditions",
]


def build(spec, **params):
    """Build a catalog construction, e.g. build("quad4", t=0.5) or build({"name": "valiant"})."""
    if isinstance(spec, str):
        spec = {"name": spec}
    return _core.build(json.dumps({**spec, **params}))


def polynomial(sexpr):
    return _core.polynomial(sexpr)


def enumerate_polynomials(max_degree):
    return [{"degree": d, "coefficients": c, "witness": w} for d, c, w in _core.enumerate(max_degree)]


def fixed_points(dist):
    return json.loads(dist.fixed_points())


def profile(dist, p, levels=60):
    return json.loads(_core.profile(dist, p, levels))


def verify_conditions(dist, t, u, v):
    return json.loads(_core.verify_conditions(dist, t, u, v))


def simulate_leveled(dist, config, counts=False):
    """Per-trial level fractions; config follows the CLI JSON layout."""
    return _core.simulate_leveled(dist, json.dumps(config), counts)


def simulate_stream(dist, config):
    """Returns (points, final_bits) where points[trial] is a list of (step, x)."""
    return _core.simulate_stream(dist, json.dumps(config))


def learn(example, levels, width, seed=0):
    return json.loads(_core.learn(list(example), levels, width, seed))


def evaluate(learned, bits, sample=0):
    if not isinstance(learned, str):
        learned = json.dumps(learned)
    return _core.evaluate(learned, list(bits), sample)
