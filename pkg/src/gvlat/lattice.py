"""Bosonic lattice data: validation, the dual decomposition, sections and cosets.

Conventions: vectors are tuples of Fractions in the ambient coordinates,
``M = B·G`` is the matrix whose row i is the functional ⟨b_i, -⟩, so the dual
lattice is {x : M x ∈ ℤ^r}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import floor, prod

from .errors import (
    DegenerateForm,
    DependentBasis,
    FFNotInDual,
    InfiniteDiscriminant,
    MalformedInput,
    NonSymmetricGram,
    NotInDual,
    OddLattice,
    ParentMismatch,
)
from .linalg import (
    add,
    det,
    fmt_fraction,
    int_inverse,
    inverse,
    is_integral,
    is_zero_vec,
    matmul,
    matvec,
    nullspace,
    rank,
    scale,
    smith_normal_form,
    solve_left,
    sub,
    to_fraction,
    transpose,
    vec,
    vecmat,
)

SECTION_STYLES = ("minimal", "balanced")


@dataclass(frozen=True)
class BilinearSpace:
    dim: int
    gram: tuple  # tuple of row tuples

    def pair(self, u, v) -> Fraction:
        total = Fraction(0)
        for i, ui in enumerate(u):
            if ui:
                row = self.gram[i]
                total += ui * sum((row[j] * v[j] for j in range(self.dim) if v[j]), Fraction(0))
        return total

    def norm(self, u) -> Fraction:
        return self.pair(u, u)

    def zero(self) -> tuple:
        return (Fraction(0),) * self.dim


def pair(space: BilinearSpace, u, v) -> Fraction:
    """⟨u, v⟩ = uᵀ G v."""
    return space.pair(u, v)


@dataclass(frozen=True)
class Lattice:
    ambient: BilinearSpace
    basis: tuple  # r row tuples

    @property
    def rank(self) -> int:
        return len(self.basis)

    def gram(self) -> list:
        return [[self.ambient.pair(a, b) for b in self.basis] for a in self.basis]

    def is_even(self) -> bool:
        g = self.gram()
        return all(
            g[i][j].denominator == 1 and (i != j or g[i][i].numerator % 2 == 0)
            for i in range(self.rank)
            for j in range(self.rank)
        )

    def coordinates(self, x) -> tuple | None:
        """Rational coefficients of x in the basis, or None if x ∉ span."""
        return solve_left([list(b) for b in self.basis], x)

    def contains(self, x) -> bool:
        c = self.coordinates(x)
        return c is not None and is_integral(c)

    def combine(self, coeffs) -> tuple:
        return vecmat(coeffs, [list(b) for b in self.basis]) if self.basis else self.ambient.zero()


@dataclass(frozen=True)
class DualDecomposition:
    """Λ* = span(perp) ⊕ ℤ·gamma and Λ* = V ⊕ span N ⊕ F ⊕ D."""

    perp_basis: tuple
    gamma_basis: tuple
    null_basis: tuple
    complement_basis: tuple
    V_basis: tuple
    F_basis: tuple
    D_basis: tuple

    def to_json(self) -> dict:
        def enc(vs):
            return [[fmt_fraction(x) for x in v] for v in vs]

        return {
            "perp_basis": enc(self.perp_basis),
            "gamma_basis": enc(self.gamma_basis),
            "null_basis": enc(self.null_basis),
            "complement_basis": enc(self.complement_basis),
            "V_basis": enc(self.V_basis),
            "F_basis": enc(self.F_basis),
            "D_basis": enc(self.D_basis),
        }


@dataclass(frozen=True)
class SNFData:
    """Smith data of the lattice Gram matrix: U·Gram·V = diag(divisors, 0…)."""

    U: tuple
    V: tuple
    divisors: tuple  # nonzero invariant factors, one per D basis vector

    @property
    def order(self) -> int:
        return prod(self.divisors)

    def to_json(self) -> dict:
        return {
            "U": [list(r) for r in self.U],
            "V": [list(r) for r in self.V],
            "divisors": list(self.divisors),
        }


class BosonicLatticeData:
    """Validated (space, lattice, Feigin-Fuchs coset) with derived structure."""

    def __init__(self, space, lattice, ff_rep, decomposition, snf, section_style="minimal"):
        self.space: BilinearSpace = space
        self.lattice: Lattice = lattice
        self.ff_rep: tuple = ff_rep
        self.decomposition: DualDecomposition = decomposition
        self.snf: SNFData = snf
        self.section_style = section_style
        d = decomposition
        self._blocks = (len(d.V_basis), len(d.null_basis), len(d.F_basis), len(d.D_basis))
        full = [list(v) for v in (*d.V_basis, *d.null_basis, *d.F_basis, *d.D_basis)]
        self._full = full
        self._full_inv = inverse(full) if full else []
        self._M = matmul([list(b) for b in lattice.basis], [list(r) for r in space.gram]) if lattice.basis else []
        self._section_cache: dict = {}
        self.ff: Coset = self.coset(ff_rep)

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def is_finite(self) -> bool:
        """True when Λ*/Λ is finite (V and N trivial)."""
        return self._blocks[0] == 0 and self._blocks[1] == 0

    def pair(self, u, v) -> Fraction:
        return self.space.pair(u, v)

    def in_dual(self, x) -> bool:
        return all(sum((m * xi for m, xi in zip(row, x)), Fraction(0)).denominator == 1 for row in self._M)

    def coordinates(self, x) -> tuple:
        """Coordinates of x in the basis [V; N; F; D]."""
        if not self._full:
            return ()
        return vecmat(x, self._full_inv)

    def from_coordinates(self, c) -> tuple:
        if not self._full:
            return self.space.zero()
        return vecmat(c, self._full)

    def section(self, x) -> tuple:
        x = tuple(x)
        hit = self._section_cache.get(x)
        if hit is not None:
            return hit
        if len(x) != self.dim:
            raise MalformedInput(f"expected a {self.dim}-vector")
        if not self.in_dual(x):
            raise NotInDual(f"{[fmt_fraction(a) for a in x]} does not pair integrally with the lattice")
        c = list(self.coordinates(x))
        nv, nn, nf, nd = self._blocks
        for i in range(nv, nv + nn):
            c[i] = _reduce(c[i], 1, self.section_style)
        base = nv + nn + nf
        for j, dj in enumerate(self.snf.divisors):
            c[base + j] = _reduce(c[base + j], dj, self.section_style)
        out = self.from_coordinates(c)
        if len(self._section_cache) < 200_000:
            self._section_cache[x] = out
        return out

    def coset(self, x) -> Coset:
        x = vec(x)
        return Coset(self.section(x), self)

    def zero(self) -> Coset:
        return Coset(self.space.zero(), self)

    def lattice_coordinates(self, x) -> tuple:
        """Integer coordinates of a lattice vector in the lattice basis."""
        c = self.lattice.coordinates(x)
        if c is None or not is_integral(c):
            raise ValueError("vector is not in the lattice")
        return tuple(int(a) for a in c)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "gram": [[fmt_fraction(a) for a in r] for r in self.space.gram],
            "lattice_basis": [[fmt_fraction(a) for a in r] for r in self.lattice.basis],
            "ff": [fmt_fraction(a) for a in self.ff_rep],
            "ff_class": [fmt_fraction(a) for a in self.ff.representative],
            "decomposition": self.decomposition.to_json(),
            "snf": self.snf.to_json(),
            "discriminant_finite": self.is_finite,
            "discriminant_order": self.snf.order if self.is_finite else None,
        }


def _reduce(x: Fraction, modulus: int, style: str) -> Fraction:
    r = x - modulus * floor(x / modulus)
    if style == "balanced" and 2 * r > modulus:
        r -= modulus
    return r


class Coset:
    """An element of Λ*/Λ held by its canonical representative."""

    __slots__ = ("representative", "parent", "_hash")

    def __init__(self, representative: tuple, parent: BosonicLatticeData):
        self.representative = tuple(representative)
        self.parent = parent
        self._hash = hash(self.representative)

    def _check(self, other: Coset) -> None:
        if not isinstance(other, Coset) or other.parent is not self.parent:
            raise ParentMismatch("cosets belong to different lattice data")

    def __add__(self, other: Coset) -> Coset:
        self._check(other)
        return self.parent.coset(add(self.representative, other.representative))

    def __sub__(self, other: Coset) -> Coset:
        self._check(other)
        return self.parent.coset(sub(self.representative, other.representative))

    def __neg__(self) -> Coset:
        return self.parent.coset(scale(-1, self.representative))

    def __rmul__(self, k: int) -> Coset:
        return self.parent.coset(scale(Fraction(k), self.representative))

    def is_zero(self) -> bool:
        return is_zero_vec(self.representative)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Coset):
            return NotImplemented
        return self.parent is other.parent and self.representative == other.representative

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: Coset) -> bool:
        return self.representative < other.representative

    def __repr__(self) -> str:
        return "Coset(" + ", ".join(fmt_fraction(a) for a in self.representative) + ")"

    def to_json(self) -> list:
        return [fmt_fraction(a) for a in self.representative]


def _as_space(space) -> BilinearSpace:
    if isinstance(space, BilinearSpace):
        return space
    try:
        rows = [vec(r) for r in space]
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(f"bad Gram matrix: {exc}") from exc
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise MalformedInput("Gram matrix must be square and non-empty")
    return BilinearSpace(n, tuple(rows))


def validate(space, lattice_basis, ff_rep, section_style: str = "minimal") -> BosonicLatticeData:
    """Check the axioms of bosonic lattice data and build the derived structure."""
    space = _as_space(space)
    n = space.dim
    G = [list(r) for r in space.gram]
    if any(G[i][j] != G[j][i] for i in range(n) for j in range(n)):
        raise NonSymmetricGram("Gram matrix is not symmetric")
    if det(G) == 0:
        raise DegenerateForm("bilinear form is degenerate")
    try:
        basis = tuple(vec(b) for b in lattice_basis)
        ff = vec(ff_rep)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(f"bad vector entry: {exc}") from exc
    if any(len(b) != n for b in basis) or len(ff) != n:
        raise MalformedInput(f"vectors must have length {n}")
    if len(basis) > n or (basis and rank([list(b) for b in basis]) < len(basis)):
        raise DependentBasis("lattice generators are linearly dependent")
    if section_style not in SECTION_STYLES:
        raise MalformedInput(f"unknown section style {section_style!r}")
    lattice = Lattice(space, basis)
    if not lattice.is_even():
        raise OddLattice("lattice is not even")
    for b in basis:
        if space.pair(ff, b).denominator != 1:
            raise FFNotInDual("Feigin-Fuchs vector does not pair integrally with the lattice")
    decomposition, snf = _decompose(space, lattice)
    return BosonicLatticeData(space, lattice, ff, decomposition, snf, section_style)


def decompose(data: BosonicLatticeData) -> DualDecomposition:
    return data.decomposition


def _decompose(space: BilinearSpace, lattice: Lattice) -> tuple[DualDecomposition, SNFData]:
    n = space.dim
    r = lattice.rank
    G = [list(row) for row in space.gram]
    if r == 0:
        unit = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
        return DualDecomposition(unit, (), (), (), unit, (), ()), SNFData((), (), ())
    B = [list(b) for b in lattice.basis]
    M = matmul(B, G)
    gram = [[int(x) for x in row] for row in lattice.gram()]
    U, Dm, V = smith_normal_form(gram)
    diag = [Dm[i][i] for i in range(r)]
    m = sum(1 for d in diag if d)
    Uinv = int_inverse(U)
    Vt = transpose(V)
    lam = [vecmat(Vt[j], B) for j in range(r)]  # lattice vectors for columns of V
    complement = lam[:m]
    null = lam[m:]
    D_basis = [scale(Fraction(1, diag[j]), lam[j]) for j in range(m)]

    # lift of the complement of the saturated image
    Uinv_cols = transpose(Uinv)
    BBt_inv = inverse(matmul(B, transpose(B)))
    lift = matmul(inverse(G), matmul(transpose(B), BBt_inv))
    F_basis = []
    gram_D_inv = inverse([[space.pair(a, b) for b in D_basis] for a in D_basis]) if D_basis else []
    for j in range(m, r):
        x = matvec(lift, Uinv_cols[j])
        if D_basis:
            rhs = [space.pair(x, d) for d in D_basis]
            c = vecmat(rhs, gram_D_inv)
            assert is_integral(c), "projection onto D left Γ"
            for cj, dj in zip(c, D_basis):
                x = sub(x, scale(cj, dj))
        F_basis.append(x)
    if F_basis:
        Q = [[space.pair(a, b) for b in F_basis] for a in F_basis]
        P = [[space.pair(a, b) for b in null] for a in F_basis]
        A = [[-x / 2 for x in row] for row in matmul(Q, inverse(transpose(P)))]
        F_basis = [add(f, vecmat(A[i], [list(v) for v in null])) for i, f in enumerate(F_basis)]

    perp = nullspace(M, n)
    constraints = M + [list(matvec(G, f)) for f in F_basis]
    V_basis = nullspace(constraints, n)
    decomp = DualDecomposition(
        perp_basis=tuple(perp),
        gamma_basis=tuple(F_basis) + tuple(D_basis),
        null_basis=tuple(null),
        complement_basis=tuple(complement),
        V_basis=tuple(V_basis),
        F_basis=tuple(F_basis),
        D_basis=tuple(D_basis),
    )
    snf = SNFData(tuple(map(tuple, U)), tuple(map(tuple, V)), tuple(diag[:m]))
    return decomp, snf


def section_apply(data: BosonicLatticeData, x) -> tuple:
    """Canonical representative of x + Λ."""
    return data.section(vec(x))


def k_cocycle(data: BosonicLatticeData, a: Coset, b: Coset) -> tuple:
    """s(a+b) − s(a) − s(b), a lattice vector."""
    a._check(b)
    return sub(data.section(add(a.representative, b.representative)), add(a.representative, b.representative))


def discriminant_enumerate(data: BosonicLatticeData) -> list[Coset]:
    if not data.is_finite:
        raise InfiniteDiscriminant("Λ*/Λ is infinite (nontrivial V or N part)")
    out = [data.zero()]
    D = data.decomposition.D_basis
    for j, dj in enumerate(data.snf.divisors):
        if dj == 1:
            continue
        out = [data.coset(add(c.representative, scale(Fraction(k), D[j]))) for c in out for k in range(dj)]
    return sorted(set(out))


def random_coset(data: BosonicLatticeData, rng: random.Random, denom: int = 12, span: int = 3) -> Coset:
    """A random coset with rational V/N coordinates and small F/D coordinates."""
    nv, nn, nf, nd = data._blocks
    c = []
    c += [Fraction(rng.randint(-span * denom, span * denom), denom) for _ in range(nv)]
    c += [Fraction(rng.randint(0, denom - 1), denom) for _ in range(nn)]
    c += [Fraction(rng.randint(-span, span)) for _ in range(nf)]
    c += [Fraction(rng.randint(0, d - 1)) for d in data.snf.divisors]
    return data.coset(data.from_coordinates(c))


def random_lattice_vector(data: BosonicLatticeData, rng: random.Random, span: int = 3) -> tuple:
    return data.lattice.combine([Fraction(rng.randint(-span, span)) for _ in range(data.lattice.rank)])


def from_json(obj, section_style: str = "minimal") -> BosonicLatticeData:
    """Build data from {"dim", "gram", "lattice_basis", "ff"}; numbers as "p/q" strings."""
    if not isinstance(obj, dict):
        raise MalformedInput("input must be a JSON object")
    try:
        n = obj["dim"]
        gram = obj["gram"]
        basis = obj.get("lattice_basis", [])
        ff = obj.get("ff", ["0"] * n if isinstance(n, int) else None)
    except KeyError as exc:
        raise MalformedInput(f"missing key {exc}") from exc
    if not isinstance(n, int) or isinstance(n, bool) or n <= 0:
        raise MalformedInput("dim must be a positive integer")
    for name, value, depth in (("gram", gram, 2), ("lattice_basis", basis, 2), ("ff", ff, 1)):
        _check_shape(name, value, depth)
    if len(gram) != n:
        raise MalformedInput("gram must be dim x dim")
    for x in _flatten(gram) + _flatten(basis) + list(ff):
        if not isinstance(x, (str, int)) or isinstance(x, bool):
            raise MalformedInput(f"numbers must be 'p/q' strings or integers, got {x!r}")
    try:
        return validate([[to_fraction(x) for x in r] for r in gram], basis, ff, section_style)
    except (TypeError, ZeroDivisionError) as exc:
        raise MalformedInput(str(exc)) from exc
    except ValueError as exc:
        if isinstance(exc, MalformedInput) or hasattr(exc, "name"):
            raise
        raise MalformedInput(str(exc)) from exc


def _check_shape(name, value, depth):
    if not isinstance(value, list):
        raise MalformedInput(f"{name} must be a list")
    if depth == 2 and not all(isinstance(r, list) for r in value):
        raise MalformedInput(f"{name} must be a list of lists")


def _flatten(rows):
    return [x for r in rows for x in r]
