"""The pointed ribbon Grothendieck-Verdier category attached to lattice data.

Simple objects are cosets; every structure morphism between simples is a
Phase, so the category is carried by its label arithmetic and the scalars
Ω (braiding), F (associator), q, θ and the duality a ↦ 2ξ − a.
"""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction

from .cocycle import TwoCocycle, epsilon_from_basis
from .errors import ParentMismatch
from .lattice import BosonicLatticeData, Coset, k_cocycle
from .linalg import add, inverse, matmul, scale, sub, transpose, vecmat
from .scalar import Phase


class GVCategory:
    def __init__(self, data: BosonicLatticeData, epsilon: TwoCocycle | None = None):
        self.data = data
        self.epsilon = epsilon if epsilon is not None else epsilon_from_basis(data.lattice)
        self._F: dict = {}
        self._k: dict = {}
        self._hopf_dual = None

    # -- labels -----------------------------------------------------------
    def _own(self, *labels: Coset) -> None:
        for a in labels:
            if not isinstance(a, Coset) or a.parent is not self.data:
                raise ParentMismatch("label does not belong to this category")

    def unit(self) -> Coset:
        return self.data.zero()

    def fuse(self, a: Coset, b: Coset) -> Coset:
        self._own(a, b)
        return a + b

    def k(self, a: Coset, b: Coset) -> tuple:
        key = (a, b)
        hit = self._k.get(key)
        if hit is None:
            hit = k_cocycle(self.data, a, b)
            self._k[key] = self._k[(b, a)] = hit
        return hit

    # -- scalars ----------------------------------------------------------
    def braiding(self, a: Coset, b: Coset) -> Phase:
        self._own(a, b)
        return Phase(self.data.pair(a.representative, b.representative))

    def associator(self, a: Coset, b: Coset, c: Coset) -> Phase:
        key = (a, b, c)
        hit = self._F.get(key)
        if hit is not None:
            return hit
        self._own(a, b, c)
        eps = self.epsilon
        kbc = self.k(b, c)
        sign = Phase(self.data.pair(a.representative, kbc))
        num = eps(self.k(a, b), self.k(a + b, c))
        den = eps(kbc, self.k(a, b + c))
        val = sign * num / den
        self._F[key] = val
        return val

    def quadratic_form(self, a: Coset) -> Phase:
        self._own(a)
        return Phase(self.data.pair(a.representative, a.representative))

    def twist(self, a: Coset) -> Phase:
        self._own(a)
        s = a.representative
        return Phase(self.data.pair(s, sub(s, scale(2, self.data.ff_rep))))

    def dual_object(self, a: Coset) -> Coset:
        self._own(a)
        return self.data.coset(sub(scale(2, self.data.ff.representative), a.representative))

    def dualizing_object(self) -> Coset:
        return self.data.coset(scale(2, self.data.ff.representative))

    # -- axiom checks ------------------------------------------------------
    def check_pentagon(self, a, b, c, d) -> dict:
        F = self.associator
        ok = F(a + b, c, d) * F(a, b, c + d) == F(a, b, c) * F(a, b + c, d) * F(b, c, d)
        return _report("pentagon", ok, (a, b, c, d))

    def check_hexagons(self, g, h, k) -> dict:
        F, W = self.associator, self.braiding
        first = F(h, k, g).inverse() * W(g, h + k) * F(g, h, k).inverse() == W(g, k) * F(h, g, k).inverse() * W(g, h)
        second = F(k, g, h) * W(g + h, k) * F(g, h, k) == W(g, k) * F(g, k, h) * W(h, k)
        rep = _report("hexagons", first and second, (g, h, k))
        rep["first"] = first
        rep["second"] = second
        return rep

    def check_balancing(self, a, b) -> dict:
        t, W = self.twist, self.braiding
        ok = t(a + b) == W(a, b) * W(b, a) * t(a) * t(b)
        return _report("balancing", ok, (a, b))

    def check_ribbon_gv(self, a) -> dict:
        return _report("ribbon_gv", self.twist(self.dual_object(a)) == self.twist(a), (a,))

    # -- lattice Hopf algebra view ------------------------------------------
    def _dual_basis(self):
        if self._hopf_dual is None:
            dec = self.data.decomposition
            E = [list(v) for v in (*dec.perp_basis, *dec.gamma_basis)]
            G = [list(r) for r in self.data.space.gram]
            Ed = inverse(matmul(G, transpose(E))) if E else []
            self._hopf_dual = (E, Ed, len(dec.perp_basis))
        return self._hopf_dual

    def hopf_action(self, a: Coset) -> dict:
        """Eigenvalues of the primitive generators μ_i and group-likes K_ν on ℂ_a."""
        self._own(a)
        E, _, p = self._dual_basis()
        s = a.representative
        return {
            "primitive": [self.data.pair(mu, s) for mu in E[:p]],
            "grouplike": [Phase(2 * self.data.pair(nu, s)) for nu in E[p:]],
        }

    def _hopf_weight(self, a: Coset, parts: str = "all") -> tuple:
        """X + log_s K evaluated on ℂ_a: Σ μ^i⟨μ_i, s a⟩ + Σ ν^j⟨ν_j, s a⟩."""
        E, Ed, p = self._dual_basis()
        s = a.representative
        coeffs = [self.data.pair(e, s) for e in E]
        if parts == "logK":
            coeffs = [Fraction(0)] * p + coeffs[p:]
        return vecmat(coeffs, Ed) if Ed else self.data.space.zero()

    def hopf_R(self, a: Coset, b: Coset) -> Phase:
        self._own(a, b)
        return Phase(self.data.pair(self._hopf_weight(a), self._hopf_weight(b)))

    def hopf_Phi(self, a: Coset, b: Coset, c: Coset) -> Phase:
        self._own(a, b, c)
        h1 = self._hopf_weight(a)
        lk = lambda x: self._hopf_weight(x, "logK")  # noqa: E731
        phase = Phase(self.data.pair(h1, sub(add(lk(b), lk(c)), lk(b + c))))
        eps = self.epsilon
        return phase * eps(self.k(a, b), self.k(a + b, c)) / eps(self.k(b, c), self.k(a, b + c))

    def hopf_ribbon(self, a: Coset) -> Phase:
        self._own(a)
        h = self._hopf_weight(a)
        return Phase(-self.data.pair(h, sub(h, scale(2, self.data.ff.representative))))

    def check_hopf(self, a, b, c) -> dict:
        ok = (
            self.hopf_R(a, b) == self.braiding(a, b)
            and self.hopf_Phi(a, b, c) == self.associator(a, b, c)
            and self.hopf_ribbon(a) == self.twist(a).inverse()
        )
        return _report("hopf", ok, (a, b, c))

    # -- semisimple closure -------------------------------------------------
    def fuse_objects(self, X: GradedObject, Y: GradedObject) -> GradedObject:
        out: Counter = Counter()
        for a, m in X.items():
            for b, n in Y.items():
                out[self.fuse(a, b)] += m * n
        return GradedObject(out)


class GradedObject(dict):
    """Finitely supported multiplicity map Coset → positive integer."""

    def __init__(self, mults=None):
        super().__init__({a: int(m) for a, m in dict(mults or {}).items() if m})
        if any(m < 0 for m in self.values()):
            raise ValueError("multiplicities must be non-negative")

    def to_json(self) -> list:
        return [{"label": a.to_json(), "mult": m} for a, m in sorted(self.items())]


def _report(axiom: str, ok: bool, labels) -> dict:
    return {"axiom": axiom, "pass": bool(ok), "witness": None if ok else [x.to_json() for x in labels]}


def fuse(cat: GVCategory, a: Coset, b: Coset) -> Coset:
    return cat.fuse(a, b)


def braiding(cat: GVCategory, a: Coset, b: Coset) -> Phase:
    return cat.braiding(a, b)


def associator(cat: GVCategory, a: Coset, b: Coset, c: Coset) -> Phase:
    return cat.associator(a, b, c)


def quadratic_form(cat: GVCategory, a: Coset) -> Phase:
    return cat.quadratic_form(a)


def twist(cat: GVCategory, a: Coset) -> Phase:
    return cat.twist(a)


def dual_object(cat: GVCategory, a: Coset) -> Coset:
    return cat.dual_object(a)


def dualizing_object(cat: GVCategory) -> Coset:
    return cat.dualizing_object()


def fuse_objects(cat: GVCategory, X: GradedObject, Y: GradedObject) -> GradedObject:
    return cat.fuse_objects(X, Y)


def axiom_sweep(cat: GVCategory, labels, max_failures: int = 5) -> dict:
    """Pentagon on all quadruples, hexagons on triples, balancing on pairs, ribbon-GV on labels."""
    labels = list(labels)
    summary = {}
    plans = (
        ("pentagon", 4, cat.check_pentagon),
        ("hexagons", 3, cat.check_hexagons),
        ("balancing", 2, cat.check_balancing),
        ("ribbon_gv", 1, cat.check_ribbon_gv),
    )
    for name, arity, check in plans:
        count = 0
        failures = []
        for tup in itertools.product(labels, repeat=arity):
            count += 1
            rep = check(*tup)
            if not rep["pass"] and len(failures) < max_failures:
                failures.append(rep["witness"])
        summary[name] = {"axiom": name, "pass": not failures, "checked": count, "witness": failures[0] if failures else None}
    return {"pass": all(v["pass"] for v in summary.values()), "axioms": summary, "labels": len(labels)}


def sampled_axiom_sweep(cat: GVCategory, sample_labels, rng, samples: int) -> dict:
    """Random tuples drawn from ``sample_labels`` (for infinite discriminant groups)."""
    pool = list(sample_labels)
    summary = {}
    plans = (
        ("pentagon", 4, cat.check_pentagon),
        ("hexagons", 3, cat.check_hexagons),
        ("balancing", 2, cat.check_balancing),
        ("ribbon_gv", 1, cat.check_ribbon_gv),
    )
    for name, arity, check in plans:
        witness = None
        for _ in range(samples):
            tup = [pool[rng.randrange(len(pool))] for _ in range(arity)]
            rep = check(*tup)
            if not rep["pass"]:
                witness = rep["witness"]
                break
        summary[name] = {"axiom": name, "pass": witness is None, "checked": samples, "witness": witness}
    return {"pass": all(v["pass"] for v in summary.values()), "axioms": summary}
