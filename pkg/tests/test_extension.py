
import pytest

from conftest import A2_GRAM, load, make
from gvlat.extension import build_algebra, check_tau, extend, local_modules, verify_equivalence
from gvlat.lattice import discriminant_enumerate
from gvlat.linalg import det
from gvlat.scalar import Phase


@pytest.fixture(scope="module")
def a1_pair():
    return load("two_a1"), load("a1")


@pytest.fixture(scope="module")
def a2_pair():
    return load("three_a2"), load("a2")


def test_a1_algebra(a1_pair):
    d1, d2 = a1_pair
    alg = build_algebra(d1, d2)
    assert len(alg.support) == 2 and alg.sigma_report["pass"]
    assert all(alg.base.twist(a) == Phase(0) for a in alg.support)


def test_a1_local_modules(a1_pair):
    d1, d2 = a1_pair
    assert len(discriminant_enumerate(d1)) == 8
    classes = local_modules(build_algebra(d1, d2))
    assert len(classes) == 2 == len(discriminant_enumerate(d2))
    assert all(len(members) == 2 for _, members in classes)


@pytest.mark.parametrize("pair", ["a1_pair", "a2_pair"])
def test_equivalence(pair, request):
    d1, d2 = request.getfixturevalue(pair)
    alg = build_algebra(d1, d2)
    rep = verify_equivalence(alg, d2)
    assert rep["pass"], rep
    assert rep["local_classes"] == abs(det([list(r) for r in d2.lattice.gram()]))


def test_a2_with_ff():
    basis3 = [["3", "0"], ["0", "3"]]
    basis1 = [["1", "0"], ["0", "1"]]
    d1 = make(A2_GRAM, basis3, ["2/3", "1/3"])
    d2 = make(A2_GRAM, basis1, ["2/3", "1/3"])
    rep = extend(d1, d2)
    assert rep["pass"]
    assert len(rep["local_modules"]) == 3


def test_trivial_extension(a2):
    rep = extend(a2, a2)
    assert rep["pass"]
    assert len(rep["algebra"]["support"]) == 1
    assert len(rep["local_modules"]) == 3


def test_ff_label_is_local():
    basis3 = [["3", "0"], ["0", "3"]]
    d1 = make(A2_GRAM, basis3, ["2/3", "1/3"])
    d2 = make(A2_GRAM, [["1", "0"], ["0", "1"]], ["2/3", "1/3"])
    classes = local_modules(build_algebra(d1, d2))
    members = [m for _, ms in classes for m in ms]
    assert d1.ff in members


def test_brute_force_sigma(a1_pair):
    d1, d2 = a1_pair
    assert extend(d1, d2, method="brute")["pass"]


def test_tau_is_a_cocycle(a2_pair):
    d1, d2 = a2_pair
    rep = check_tau(build_algebra(d1, d2), samples=40)
    assert rep["pass"]
    assert all(c["pass"] for c in rep["conditions"].values())
    assert rep["agreement"][1] > 0


def test_twist_trivial_on_support_with_ff():
    # for even Λ₂ and ξ₁ ⊂ ξ₂ the support twist is always trivial
    d1 = make([["2"]], [["2"]], ["1/2"])
    d2 = make([["2"]], [["1"]], ["1/2"])
    alg = build_algebra(d1, d2)
    assert all(alg.base.twist(a) == Phase(0) for a in alg.support)
    assert verify_equivalence(alg)["pass"]


def test_ff_mismatch_rejected():
    from gvlat.errors import FFMismatch

    with pytest.raises(FFMismatch):
        build_algebra(make([["2"]], [["2"]], ["1/4"]), make([["2"]], [["1"]], ["1/2"]))
