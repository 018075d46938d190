"""Sign 2-cocycles on an even lattice and the σ cochain of a simple-current extension."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    FFMismatch,
    InfiniteQuotient,
    NotABasis,
    NotASublattice,
    Unsolvable,
)
from .lattice import BosonicLatticeData, Coset, Lattice
from .linalg import (
    fmt_fraction,
    int_inverse,
    is_integral,
    matmul,
    smith_normal_form,
    solve_left,
    sub,
    vecmat,
)
from .scalar import Phase


class TwoCocycle:
    """Bimultiplicative ±1 cocycle given by its values on pairs of basis vectors.

    ``exps[i][j]`` is 0 or 1 with ε(b_i, b_j) = (−1)^{exps[i][j]}.
    """

    def __init__(self, lattice: Lattice, basis, exps):
        self.lattice = lattice
        self.basis = tuple(tuple(b) for b in basis)
        self.exps = tuple(tuple(int(e) % 2 for e in row) for row in exps)
        self._coords: dict = {}

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coords(self, x) -> tuple:
        x = tuple(x)
        c = self._coords.get(x)
        if c is None:
            raw = solve_left([list(b) for b in self.basis], x)
            if raw is None or not is_integral(raw):
                raise ValueError("vector is not in the lattice")
            c = tuple(int(a) for a in raw)
            self._coords[x] = c
        return c

    def sign_exponent(self, a, c) -> int:
        """Σ a_i c_j e_ij mod 2 for integer coordinate vectors a, c."""
        total = 0
        for i, ai in enumerate(a):
            if ai & 1:
                row = self.exps[i]
                for j, cj in enumerate(c):
                    if cj & 1 and row[j]:
                        total += 1
        return total & 1

    def __call__(self, x, y) -> Phase:
        return Phase(self.sign_exponent(self.coords(x), self.coords(y)))

    def to_json(self) -> dict:
        return {
            "basis": [[fmt_fraction(a) for a in b] for b in self.basis],
            "table": [[1 - 2 * e for e in row] for row in self.exps],
        }


def epsilon_from_basis(lattice: Lattice, ordered_basis=None) -> TwoCocycle:
    """ε(b_i, b_j) = (−1)^{⟨b_i, b_j⟩} for i < j and 1 otherwise."""
    if ordered_basis is None:
        ordered_basis = lattice.basis
    basis = [tuple(Fraction(a) for a in b) for b in ordered_basis]
    if len(basis) != lattice.rank:
        raise NotABasis("wrong number of basis vectors")
    for b in basis:
        if not lattice.contains(b):
            raise NotABasis("basis vector outside the lattice")
    for b in lattice.basis:
        c = solve_left([list(v) for v in basis], b)
        if c is None or not is_integral(c):
            raise NotABasis("vectors do not generate the lattice")
    space = lattice.ambient
    exps = [
        [int(space.pair(basis[i], basis[j])) % 2 if i < j else 0 for j in range(len(basis))]
        for i in range(len(basis))
    ]
    return TwoCocycle(lattice, basis, exps)


def verify_two_cocycle(eps: TwoCocycle, samples: int = 100, seed: int = 0) -> dict:
    """Check normalization, the cocycle identity and the commutator (−1)^{⟨α,β⟩}."""
    r = eps.rank
    space = eps.lattice.ambient
    units = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    rng = random.Random(seed)
    triples = list(itertools.product(units, repeat=3)) if r else []
    for _ in range(samples if r else 0):
        triples.append(tuple(tuple(rng.randint(-3, 3) for _ in range(r)) for _ in range(3)))

    def vec_of(c):
        return vecmat([Fraction(x) for x in c], [list(b) for b in eps.basis])

    def add_c(a, b):
        return tuple(x + y for x, y in zip(a, b))

    zero = (0,) * r
    results = {}
    fail = None
    for a, _, _ in triples:
        if eps.sign_exponent(a, zero) or eps.sign_exponent(zero, a):
            fail = a
            break
    results["normalization"] = _cond(fail, lambda w: [_enc(vec_of(w))])
    fail = None
    for a, b, c in triples:
        s = (
            eps.sign_exponent(b, c)
            + eps.sign_exponent(add_c(a, b), c)
            + eps.sign_exponent(a, add_c(b, c))
            + eps.sign_exponent(a, b)
        )
        if s % 2:
            fail = (a, b, c)
            break
    results["cocycle"] = _cond(fail, lambda w: [_enc(vec_of(x)) for x in w])
    fail = None
    for a, b, _ in triples:
        lhs = eps.sign_exponent(a, b) + eps.sign_exponent(b, a)
        rhs = space.pair(vec_of(a), vec_of(b))
        if (lhs - rhs) % 2:
            fail = (a, b)
            break
    results["commutator"] = _cond(fail, lambda w: [_enc(vec_of(x)) for x in w])
    return {
        "check": "two_cocycle",
        "pass": all(v["pass"] for v in results.values()),
        "conditions": results,
        "samples": samples,
        "seed": seed,
    }


def _cond(fail, enc) -> dict:
    return {"pass": fail is None, "witness": None if fail is None else enc(fail)}


def _enc(v) -> list:
    return [fmt_fraction(a) for a in v]


@dataclass
class SigmaCochain:
    """Phase-valued function on pairs of Λ₂/Λ₁ labels (held as data1 cosets)."""

    group: list
    values: dict
    method: str = "linear"

    def __call__(self, a: Coset, b: Coset) -> Phase:
        return self.values[(a, b)]

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "group": [g.to_json() for g in self.group],
            "values": [
                {"a": a.to_json(), "b": b.to_json(), "phase": p.to_json()}
                for (a, b), p in sorted(self.values.items(), key=lambda kv: (kv[0][0], kv[0][1]))
            ],
        }


def quotient_group(data1: BosonicLatticeData, data2: BosonicLatticeData) -> list[Coset]:
    """Enumerate Λ₂/Λ₁ as data1 cosets, checking the preconditions on the pair."""
    if data1.space.gram != data2.space.gram:
        raise NotASublattice("the two data live on different bilinear spaces")
    L1, L2 = data1.lattice, data2.lattice
    if L1.rank != L2.rank:
        raise InfiniteQuotient("Λ₂/Λ₁ is infinite (ranks differ)")
    B2 = [list(b) for b in L2.basis]
    C = []
    for b in L1.basis:
        c = solve_left(B2, b)
        if c is None or not is_integral(c):
            raise NotASublattice("Λ₁ is not contained in Λ₂")
        C.append([int(x) for x in c])
    diff = sub(data1.ff_rep, data2.ff_rep)
    if not L2.contains(diff):
        raise FFMismatch("ξ₁ is not contained in ξ₂")
    if not C:
        return [data1.zero()]
    U, D, V = smith_normal_form(C)
    # Λ₁ = ⊕ e_i w_i with w = V⁻¹·B₂
    W = matmul([[Fraction(x) for x in row] for row in int_inverse(V)], B2)
    elems = [data1.zero()]
    for i in range(len(C)):
        e = D[i][i]
        if e == 1:
            continue
        elems = [
            data1.coset(tuple(a + k * w for a, w in zip(g.representative, W[i])))
            for g in elems
            for k in range(e)
        ]
    return sorted(set(elems))


def check_sigma(sigma: SigmaCochain, cat1) -> dict:
    """Exhaustive check of unit, commutator and coboundary conditions for σ."""
    H = sigma.group
    zero = cat1.data.zero()
    fails = {"unit": None, "commutator": None, "coboundary": None}
    for a in H:
        if sigma(a, zero) != Phase(0) or sigma(zero, a) != Phase(0):
            fails["unit"] = fails["unit"] or [a.to_json()]
    for a, b in itertools.product(H, repeat=2):
        if sigma(a, b) / sigma(b, a) != cat1.braiding(a, b) and fails["commutator"] is None:
            fails["commutator"] = [a.to_json(), b.to_json()]
    for a, b, c in itertools.product(H, repeat=3):
        lhs = sigma(b, c) / sigma(a + b, c) * sigma(a, b + c) / sigma(a, b)
        if lhs != cat1.associator(a, b, c):
            fails["coboundary"] = [a.to_json(), b.to_json(), c.to_json()]
            break
    return {
        "check": "sigma",
        "pass": all(v is None for v in fails.values()),
        "conditions": {k: {"pass": v is None, "witness": v} for k, v in fails.items()},
        "group_order": len(H),
    }


def solve_sigma(data1: BosonicLatticeData, data2: BosonicLatticeData, method: str = "linear") -> SigmaCochain:
    """σ on Λ₂/Λ₁ with unit, commutator = Ω and coboundary = F (data1's 3-cocycle)."""
    from .gvcat import GVCategory

    H = quotient_group(data1, data2)
    cat1 = GVCategory(data1)
    if method == "brute":
        return _brute_sigma(H, cat1)
    eps2 = epsilon_from_basis(data2.lattice)
    zero = data1.zero()
    seed = {(a, b): eps2(a.representative, b.representative) for a in H for b in H}
    nonzero = [a for a in H if a != zero]
    # one unknown per unordered pair keeps the correction symmetric
    index = {}
    nunk = 0
    for i, a in enumerate(nonzero):
        for b in nonzero[i:]:
            index[(a, b)] = index[(b, a)] = nunk
            nunk += 1

    def seed_exp(a, b):
        return seed[(a, b)].exponent

    rows, rhs = [], []
    for a, b, c in itertools.product(nonzero, repeat=3):
        target = cat1.associator(a, b, c).exponent
        have = seed_exp(b, c) - seed_exp(a + b, c) + seed_exp(a, b + c) - seed_exp(a, b)
        row = [0] * nunk
        for sgn, p in ((1, (b, c)), (-1, (a + b, c)), (1, (a, b + c)), (-1, (a, b))):
            if p in index:
                row[index[p]] += sgn
        rows.append(row)
        rhs.append(target - have)
    x = _solve_mod2(rows, rhs, nunk) if rows and nunk else [Fraction(0)] * nunk
    values = {}
    for a in H:
        for b in H:
            corr = x[index[(a, b)]] if (a, b) in index else Fraction(0)
            values[(a, b)] = seed[(a, b)] * Phase(corr)
    sigma = SigmaCochain(list(H), values, "linear")
    report = check_sigma(sigma, cat1)
    if not report["pass"]:
        raise Unsolvable("σ correction failed verification", report)
    return sigma


def _solve_mod2(rows, rhs, nunk) -> list:
    """A rational x with A x ≡ b (mod 2), via integer Smith normal form."""
    U, D, V = smith_normal_form(rows)
    Ub = [sum((u * b for u, b in zip(urow, rhs)), Fraction(0)) for urow in U]
    y = []
    for i in range(len(rows)):
        d = D[i][i] if i < nunk else 0
        if d:
            y.append(Ub[i] / d)
        elif Ub[i] % 2:
            raise Unsolvable("coboundary system has no solution", {"row": i, "residue": fmt_fraction(Ub[i] % 2)})
    y += [Fraction(0)] * (nunk - len(y))
    return [sum((V[j][k] * y[k] for k in range(nunk)), Fraction(0)) for j in range(nunk)]


_QUARTER_TURNS = [Phase(Fraction(k, 2)) for k in range(4)]


def _brute_sigma(H, cat1) -> SigmaCochain:
    if len(H) > 4:
        raise ValueError("brute-force σ search is limited to |Λ₂/Λ₁| ≤ 4")
    zero = cat1.data.zero()
    nonzero = [a for a in H if a != zero]
    pairs = list(itertools.product(nonzero, repeat=2))
    values = {(a, b): Phase(0) for a in H for b in H if a == zero or b == zero}

    def consistent() -> bool:
        for a, b in pairs:
            if (a, b) in values and (b, a) in values:
                if values[(a, b)] / values[(b, a)] != cat1.braiding(a, b):
                    return False
        for a, b, c in itertools.product(nonzero, repeat=3):
            keys = [(b, c), (a + b, c), (a, b + c), (a, b)]
            if all(k in values for k in keys):
                s = values[keys[0]] / values[keys[1]] * values[keys[2]] / values[keys[3]]
                if s != cat1.associator(a, b, c):
                    return False
        return True

    def search(i: int) -> bool:
        if i == len(pairs):
            return True
        for p in _QUARTER_TURNS:
            values[pairs[i]] = p
            if consistent() and search(i + 1):
                return True
        del values[pairs[i]]
        return False

    if not search(0):
        raise Unsolvable("no σ with values in {±1, ±i}")
    return SigmaCochain(list(H), dict(values), "brute")
