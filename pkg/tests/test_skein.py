import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyverlinde import make
from cyverlinde.category import transparent_objects
from cyverlinde.skein import encircle, hom_dim, killing_ring, omega_vector
from conftest import ALL

PHI = (1 + math.sqrt(5)) / 2


def test_encircle_examples(fib, ising):
    assert encircle(fib, "tau", "tau") == pytest.approx(-1 / PHI)
    assert encircle(ising, "psi", "sigma") == pytest.approx(-1)
    for j in range(fib.rank):
        assert encircle(fib, 0, j) == pytest.approx(1)
        assert encircle(fib, 0, j, "under") == pytest.approx(1)


@pytest.mark.parametrize("name", ALL)
def test_encircle_unit_strand(name, cats):
    cat = cats[name]
    for i in range(cat.rank):
        assert encircle(cat, i, 0) == pytest.approx(cat.d[i])


def test_encircle_under_is_conjugate_loop():
    cat = make("cyclic(3,1)")
    for i, j in product(range(3), repeat=2):
        assert encircle(cat, i, j, "under") == pytest.approx(encircle(cat, int(cat.dual[i]), j))


def test_encircle_bad_orientation(fib):
    with pytest.raises(ValueError):
        encircle(fib, 0, 0, "sideways")


def test_omega_vector(cats):
    assert np.allclose(omega_vector(cats["trivial"]).coeffs, [1])
    assert np.allclose(omega_vector(cats["fibonacci"]).coeffs, [1, PHI])
    assert np.allclose(omega_vector(cats["ising"]).coeffs, [1, math.sqrt(2), 1])


def test_killing_ring_examples(fib, cats):
    assert killing_ring(fib, "tau") == pytest.approx(0, abs=1e-12)
    assert killing_ring(fib, "1") == pytest.approx(1)
    assert killing_ring(cats["rep_z2"], "psi") == pytest.approx(1)


@pytest.mark.parametrize("name", ALL)
def test_killing_ring_is_transparent_indicator(name, cats):
    cat = cats[name]
    J = set(transparent_objects(cat))
    for j in range(cat.rank):
        assert abs(killing_ring(cat, j) - (1 if j in J else 0)) < 1e-9


def test_hom_dim_examples(fib, ising):
    assert hom_dim(fib, "1", ["tau", "tau"]) == 1
    assert hom_dim(ising, "sigma", ["sigma"] * 3) == 2
    for k in range(ising.rank):
        assert hom_dim(ising, k, [k]) == 1
    with pytest.raises(ValueError):
        hom_dim(fib, 0, [])


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["fibonacci", "ising", "su2(3)", "cyclic(5,2)", "fibonacci*semion"]), st.data())
def test_hom_dims_satisfy_dimension_equation(name, data):
    cat = make(name)
    objs = data.draw(st.lists(st.integers(0, cat.rank - 1), min_size=1, max_size=5))
    lhs = sum(hom_dim(cat, k, objs) * cat.d[k] for k in range(cat.rank))
    assert abs(lhs - np.prod([cat.d[j] for j in objs])) < 1e-9 * (1 + abs(lhs))
