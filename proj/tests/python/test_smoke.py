"""Smoke tests for the python bindings."""

from fractions import Fraction

import pytest

import bfactory


W_SLICE = [["1", "1", "1"]]


def test_vertices_and_genericity():
    verts = bfactory.vertices(W_SLICE, ["3/2"])
    assert len(verts) == 6
    assert bfactory.is_generic(W_SLICE, ["3/2"])
    assert not bfactory.is_generic(W_SLICE, ["2"])
    assert ["0", "1", "1"] in bfactory.vertices(W_SLICE, ["2"])


def test_build_verify_sample_roundtrip():
    factory = bfactory.build_factory(W_SLICE, ["3/2"], seed=3)
    assert factory["provenance"]["kind"] == "generic"
    assert len(factory["weights"]) == 6

    report = bfactory.verify(factory, points=25, seed=1)
    assert report["pass"]

    samples = bfactory.sample(factory, ["1/2", "1/2", "1/2"], 400, seed=5)
    assert len(samples) == 400
    mean = [Fraction(0)] * 3
    for vertex, rounds, flips in samples:
        assert rounds >= 1
        assert flips >= 1
        assert sum(Fraction(c) for c in vertex) == Fraction(3, 2)
        for i, c in enumerate(vertex):
            mean[i] += Fraction(c)
    for m in mean:
        assert abs(m / 400 - Fraction(1, 2)) < Fraction(1, 8)


def test_perturbed_build_for_nongeneric_slice():
    factory = bfactory.build_factory(W_SLICE, ["2"], seed=7)
    assert factory["provenance"]["kind"] == "perturbed"
    assert bfactory.verify(factory, points=20, seed=2)["pass"]


def test_stats_report():
    factory = bfactory.build_factory(W_SLICE, ["1"], seed=11)
    report = bfactory.stats(factory, ["1/2", "1/4", "1/4"], 5000, seed=13)
    assert report["completed"] == 5000
    assert all(abs(z) < 4.0 for z in report["z_scores"])
    assert report["p_value"] > 1e-4


def test_matching_sampler():
    x = [["1/3"] * 3 for _ in range(3)]
    samples = bfactory.sample_matching(3, x, 50, seed=17)
    for vertex, rounds, flips in samples:
        ones = [i for i, c in enumerate(vertex) if c == "1"]
        assert len(ones) == 3
        assert sorted(i // 3 for i in ones) == [0, 1, 2]
        assert sorted(i % 3 for i in ones) == [0, 1, 2]


def test_ksubset_and_boundary_probe():
    samples = bfactory.sample_ksubset(4, "2", "minus", ["1/2"] * 4, 50, seed=19)
    for vertex, rounds, flips in samples:
        assert sum(1 for c in vertex if c == "1") == 2

    assert bfactory.boundary_probe(4, 2, ["1", "1", "0", "0"]) == "0"
    assert bfactory.boundary_probe(3, 1, ["1", "0", "0"]) == "1"

    budget_run = bfactory.sample_ksubset(
        4, "2", "minus", ["1", "1", "0", "0"], 3, seed=23, round_budget=200
    )
    assert all(vertex == () or vertex == [] for vertex, _, _ in budget_run)


def test_row_reduce():
    w = [
        ["1", "1", "0", "0"],
        ["0", "0", "1", "1"],
        ["1", "0", "1", "0"],
        ["0", "1", "0", "1"],
    ]
    w2, b2 = bfactory.row_reduce(w, ["1", "1", "1", "1"])
    assert len(w2) == 3
    assert len(b2) == 3

    with pytest.raises(ValueError):
        bfactory.row_reduce([["1", "1"], ["1", "1"]], ["1", "2"])


def test_input_errors():
    with pytest.raises(ValueError):
        bfactory.vertices([["1", "1"], ["2", "2"]], ["1", "2"])  # rank-deficient
    with pytest.raises(ValueError):
        bfactory.vertices([["1/0"]], ["1"])
