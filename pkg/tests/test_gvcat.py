from fractions import Fraction as Fr
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load
from gvlat.errors import ParentMismatch
from gvlat.gvcat import GVCategory, GradedObject, axiom_sweep, sampled_axiom_sweep
from gvlat.lattice import discriminant_enumerate, random_coset
from gvlat.scalar import Phase

FULL_RANK = ["a1", "a1_ff", "a2", "a2_ff", "order8"]


def frac(x: Fr) -> Fr:
    return x - math.floor(x)


@pytest.fixture(scope="module")
def cats():
    return {name: GVCategory(load(name)) for name in FULL_RANK + ["halfrank"]}


def test_fusion_examples(cats):
    c = cats["a1"]
    h = c.data.coset((Fr(1, 2),))
    assert c.fuse(h, h) == c.unit()
    assert c.fuse(c.unit(), h) == h
    a2 = cats["a2"]
    w = a2.data.coset((Fr(2, 3), Fr(1, 3)))
    assert a2.fuse(w, w) == a2.data.coset((Fr(4, 3), Fr(2, 3)))
    with pytest.raises(ParentMismatch):
        c.fuse(h, cats["a1_ff"].data.coset((Fr(1, 2),)))


def test_a1_scalars(cats):
    c = cats["a1"]
    h = c.data.coset((Fr(1, 2),))
    assert c.braiding(h, h) == Phase(Fr(1, 2))
    assert c.braiding(c.unit(), h) == Phase(0)
    assert c.associator(h, h, h) == Phase(1)
    assert c.associator(c.unit(), h, h) == Phase(0)
    assert c.quadratic_form(h) == Phase(Fr(1, 2))
    assert c.quadratic_form(c.unit()) == Phase(0)
    assert c.twist(h) == Phase(Fr(1, 2)) and c.twist(c.unit()) == Phase(0)
    assert c.hopf_ribbon(h) == Phase(Fr(-1, 2))
    assert c.hopf_R(c.unit(), h) == Phase(0)


def test_duality(cats):
    c = cats["a2"]
    for a in discriminant_enumerate(c.data):
        assert c.dual_object(a) == -a
    hr = cats["halfrank"]
    assert hr.dual_object(hr.unit()) == hr.data.coset((Fr(2), Fr(0)))
    assert hr.dualizing_object() == hr.data.coset((Fr(2), Fr(0)))
    a1ff = cats["a1_ff"]
    assert a1ff.dualizing_object() == a1ff.unit()
    for name in FULL_RANK:
        cat = cats[name]
        assert cat.dualizing_object() == cat.dual_object(cat.unit())
        for a in discriminant_enumerate(cat.data):
            assert cat.dual_object(cat.dual_object(a)) == a


@pytest.mark.parametrize("name", FULL_RANK)
def test_exhaustive_axioms(name, cats):
    rep = axiom_sweep(cats[name], discriminant_enumerate(cats[name].data))
    assert rep["pass"], rep


def test_sampled_axioms_halfrank(cats):
    cat = cats["halfrank"]
    rng = random.Random(0)
    pool = [random_coset(cat.data, rng) for _ in range(40)]
    assert sampled_axiom_sweep(cat, pool, rng, 200)["pass"]


def test_broken_associator_is_caught(cats):
    cat = cats["a2"]
    labels = discriminant_enumerate(cat.data)

    class Broken(GVCategory):
        def associator(self, a, b, c):
            base = super().associator(a, b, c)
            return base * Phase(1) if a == b == c == labels[1] else base

    rep = axiom_sweep(Broken(cat.data), labels)
    assert not rep["axioms"]["pentagon"]["pass"]


def _halfrank_label(x1: int, x2: Fr):
    return (Fr(x1), x2)


halfrank_labels = st.tuples(st.integers(-6, 6), st.fractions(min_value=-5, max_value=5, max_denominator=24))


@settings(max_examples=200, deadline=None)
@given(x=halfrank_labels, y=halfrank_labels, z=halfrank_labels)
def test_halfrank_closed_forms(x, y, z):
    cat = GVCategory(load("halfrank"))
    X, Y, Z = (cat.data.coset(_halfrank_label(*v)) for v in (x, y, z))
    x1, x2 = x
    y1, y2 = y
    assert cat.braiding(X, Y) == Phase(x1 * frac(y2) + frac(x2) * y1)
    assert cat.associator(X, Y, Z) == Phase(x1 * (frac(y[1]) + frac(z[1]) - frac(y[1] + z[1])))
    assert cat.quadratic_form(X) == Phase(2 * x1 * frac(x2))
    assert cat.twist(X) == Phase(2 * (x1 - 1) * frac(x2))
    assert cat.hopf_ribbon(X) == cat.twist(X).inverse()
    assert cat.hopf_R(X, Y) == cat.braiding(X, Y)
    assert cat.hopf_Phi(X, Y, Z) == cat.associator(X, Y, Z)


def test_halfrank_twist_on_lattice_multiples(cats):
    cat = cats["halfrank"]
    for n in range(-4, 5):
        assert cat.twist(cat.data.coset((Fr(0), Fr(n)))) == Phase(0)


@pytest.mark.parametrize("name", FULL_RANK)
def test_hopf_matches_structure(name, cats):
    cat = cats[name]
    labels = discriminant_enumerate(cat.data)
    for a in labels:
        for b in labels:
            for c in labels:
                assert cat.check_hopf(a, b, c)["pass"]


def test_section_independence():
    for name in FULL_RANK:
        lo, hi = GVCategory(load(name)), GVCategory(load(name, section_style="balanced"))
        for a in discriminant_enumerate(lo.data):
            b = hi.data.coset(a.representative)
            assert lo.quadratic_form(a) == hi.quadratic_form(b)
            assert lo.twist(a) == hi.twist(b)
            assert lo.braiding(a, a) == hi.braiding(b, b)
        assert axiom_sweep(hi, discriminant_enumerate(hi.data))["pass"]


def test_twist_independent_of_ff_representative():
    from conftest import A2_GRAM, make

    basis = [["1", "0"], ["0", "1"]]
    d1 = make(A2_GRAM, basis, ["2/3", "1/3"])
    d2 = make(A2_GRAM, basis, ["-1/3", "4/3"])
    c1, c2 = GVCategory(d1), GVCategory(d2)
    for a in discriminant_enumerate(d1):
        assert c1.twist(a) == c2.twist(d2.coset(a.representative))


def test_fuse_objects(cats):
    c = cats["a1"]
    h = c.data.coset((Fr(1, 2),))
    X = GradedObject({c.unit(): 1, h: 1})
    assert dict(c.fuse_objects(X, X)) == {c.unit(): 2, h: 2}
    assert dict(c.fuse_objects(X, GradedObject({c.unit(): 1}))) == dict(X)
    assert dict(c.fuse_objects(GradedObject({h: 1}), GradedObject({h: 1}))) == {c.unit(): 1}


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_fuse_objects_assoc_comm(seed):
    cat = GVCategory(load("order8"))
    labels = discriminant_enumerate(cat.data)
    rng = random.Random(seed)

    def rand_obj():
        return GradedObject({labels[rng.randrange(8)]: rng.randint(1, 3) for _ in range(3)})

    X, Y, Z = rand_obj(), rand_obj(), rand_obj()
    assert dict(cat.fuse_objects(X, Y)) == dict(cat.fuse_objects(Y, X))
    assert dict(cat.fuse_objects(cat.fuse_objects(X, Y), Z)) == dict(cat.fuse_objects(X, cat.fuse_objects(Y, Z)))
