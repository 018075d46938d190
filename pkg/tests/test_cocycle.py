from fractions import Fraction as Fr

import pytest

from conftest import A2_GRAM, load, make
from gvlat.cocycle import TwoCocycle, check_sigma, epsilon_from_basis, quotient_group, solve_sigma, verify_two_cocycle
from gvlat.errors import FFMismatch, InfiniteQuotient, NotABasis, NotASublattice
from gvlat.gvcat import GVCategory
from gvlat.scalar import Phase


def test_epsilon_examples(a1, halfrank):
    e = epsilon_from_basis(a1.lattice)
    assert all(e((m,), (n,)) == Phase(0) for m in range(-3, 4) for n in range(-3, 4))
    h = epsilon_from_basis(halfrank.lattice)
    assert all(h((0, m), (0, n)) == Phase(0) for m in range(-3, 4) for n in range(-3, 4))
    hyp = make([["0", "1"], ["1", "0"]], [["1", "0"], ["0", "1"]], ["0", "0"])
    eps = epsilon_from_basis(hyp.lattice)
    assert eps((1, 0), (0, 1)) == Phase(1) and eps((0, 1), (1, 0)) == Phase(0)


@pytest.mark.parametrize("name", ["a1", "a2", "order8", "halfrank"])
def test_epsilon_verifies(name):
    rep = verify_two_cocycle(epsilon_from_basis(load(name).lattice), samples=200, seed=3)
    assert rep["pass"], rep


def test_bad_cocycle_reports_commutator_witness():
    hyp = make([["0", "1"], ["1", "0"]], [["1", "0"], ["0", "1"]], ["0", "0"])
    bad = TwoCocycle(hyp.lattice, hyp.lattice.basis, [[0, 0], [0, 0]])
    rep = verify_two_cocycle(bad)
    assert not rep["pass"]
    assert not rep["conditions"]["commutator"]["pass"]
    assert rep["conditions"]["commutator"]["witness"] is not None


def test_empty_lattice_cocycle_vacuous(empty1):
    assert verify_two_cocycle(epsilon_from_basis(empty1.lattice))["pass"]


def test_not_a_basis(a1):
    with pytest.raises(NotABasis):
        epsilon_from_basis(a1.lattice, [(Fr(2),)])


def _pair(base, target):
    return load(base), load(target)


def test_quotient_group_and_errors(a1):
    d1, d2 = _pair("two_a1", "a1")
    H = quotient_group(d1, d2)
    assert len(H) == 2
    with pytest.raises(NotASublattice):
        quotient_group(d2, d1)
    with pytest.raises(FFMismatch):
        quotient_group(d1, load("a1_ff"))
    with pytest.raises(InfiniteQuotient):
        quotient_group(make([["2"]], [], ["0"]), d2)
    with pytest.raises(NotASublattice):
        quotient_group(d1, load("a2"))


@pytest.mark.parametrize("method", ["linear", "brute"])
def test_sigma_a1(method):
    d1, d2 = _pair("two_a1", "a1")
    sigma = solve_sigma(d1, d2, method)
    assert check_sigma(sigma, GVCategory(d1))["pass"]
    z = d1.zero()
    assert all(sigma(z, m) == Phase(0) for m in sigma.group)


def test_sigma_a2_index_nine():
    d1, d2 = _pair("three_a2", "a2")
    sigma = solve_sigma(d1, d2)
    rep = check_sigma(sigma, GVCategory(d1))
    assert rep["pass"] and rep["group_order"] == 9
    # the bare ε₂ seed does not satisfy the coboundary condition here
    eps2 = epsilon_from_basis(d2.lattice)
    from gvlat.cocycle import SigmaCochain

    seed = SigmaCochain(sigma.group, {(a, b): eps2(a.representative, b.representative) for a in sigma.group for b in sigma.group})
    assert not check_sigma(seed, GVCategory(d1))["pass"]


def test_sigma_json(a1):
    d1, d2 = _pair("two_a1", "a1")
    import json

    json.dumps(solve_sigma(d1, d2).to_json())


def test_trivial_quotient():
    d = make(A2_GRAM, [["1", "0"], ["0", "1"]], ["0", "0"])
    sigma = solve_sigma(d, d)
    assert len(sigma.group) == 1
