"""Exact Bernoulli-factory sampling of polytope vertices.

Thin wrappers over the C++ core. Rationals are "p/q" strings throughout;
matrices are lists of rows of such strings. Factory and report objects are
plain dicts mirroring the tool's JSON file formats.
"""

import json as _json
from fractions import Fraction

from bfactory._bfactory import (
    InputError,
    RationalParseError,
    boundary_probe,
    is_generic,
    row_reduce,
    sample_matching,
    sample_ksubset,
    vertices,
)
from bfactory import _bfactory as _core

__all__ = [
    "InputError",
    "RationalParseError",
    "boundary_probe",
    "build_factory",
    "fraction",
    "is_generic",
    "row_reduce",
    "sample",
    "sample_ksubset",
    "sample_matching",
    "stats",
    "verify",
    "vertices",
]


def fraction(s):
    """Parse a "p/q" string into a Fraction."""
    return Fraction(s)


def build_factory(w, b, seed, radius="1/1024"):
    """Build a vertex-weight factory; returns it as a dict (the file format)."""
    return _json.loads(_core.build_factory(w, b, seed, radius))


def sample(factory, x, n_samples, seed, round_budget=None):
    """Draw vertices from a factory dict at hidden point x.

    Returns a list of (vertex, rounds, flips); vertex is () when the round
    budget was exhausted.
    """
    return _core.sample(_json.dumps(factory), x, n_samples, seed, round_budget)


def verify(factory, points=100, seed=0):
    """Exact identity certificate for a factory dict; returns a report dict."""
    return _json.loads(_core.verify(_json.dumps(factory), points, seed))


def stats(factory, x, n_samples, seed, round_budget=None):
    """Statistical acceptance report for a factory dict; returns a dict."""
    return _json.loads(_core.stats(_json.dumps(factory), x, n_samples, seed, round_budget))
