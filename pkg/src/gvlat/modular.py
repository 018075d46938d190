"""Characters of lattice Fock modules and their modular data.

Characters are specialised to ζ = 0. q-series are exact (rational exponents,
integer coefficients); the S-transformation is checked numerically at τ = it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConvergenceNotReached, InfiniteDiscriminant, NonDiscreteCharacter
from .lattice import BosonicLatticeData, Coset, discriminant_enumerate
from .linalg import det, fmt_fraction, inverse, matmul, sub, transpose, vecmat
from .scalar import Phase, QSeries, eta_inverse_series

# "bare": e^{iπ‖sγ−β̃‖²}; "derived": bare times the e^{−iπ dim/12} picked up by η^{−dim}
T_CONVENTIONS = ("bare", "derived")
_T_ALIASES = {"paper": "bare"}


# -- lattice point enumeration ----------------------------------------------

def _positive_definite(gram) -> bool:
    n = len(gram)
    return all(det([row[:k] for row in gram[:k]]) > 0 for k in range(1, n + 1))


def _points_within(gram, shift, bound) -> list:
    """All (y + c, value) with c ∈ ℤ^r and (y+c)ᵀ G (y+c) ≤ bound (G positive definite)."""
    r = len(gram)
    if r == 0:
        return [((), Fraction(0))] if bound >= 0 else []
    if bound < 0:
        return []
    ginv = inverse(gram)
    ranges = []
    for i in range(r):
        # |z_i| ≤ sqrt(bound · (G⁻¹)_ii) on the ellipsoid zᵀGz ≤ bound
        half = math.sqrt(float(bound * ginv[i][i])) + 1e-9
        lo = math.ceil(-half - shift[i])
        hi = math.floor(half - shift[i])
        ranges.append(range(lo, hi + 1))
    out = []
    for c in itertools.product(*ranges):
        z = [shift[i] + c[i] for i in range(r)]
        val = sum((z[i] * gram[i][j] * z[j] for i in range(r) for j in range(r)), Fraction(0))
        if val <= bound:
            out.append((tuple(z), val))
    return out


def _theta_eta(theta: dict, eta_power: int, order: Fraction, offset: Fraction) -> QSeries:
    """(Σ theta[e] q^e) · η^{-eta_power}, exact below ``order``."""
    shift = Fraction(-eta_power, 24)
    theta = {e: c for e, c in theta.items() if e < order - shift}
    if not theta:
        return QSeries({}, order, 1, offset + shift)
    lead = min(theta)
    th = QSeries(theta, order - shift, 1, offset)
    if eta_power == 0:
        return th.truncate(order)
    return th * eta_inverse_series(eta_power, order - lead)


@dataclass
class _Split:
    """Components of s(γ) − β̃ along V, N, F, D, in both vector and block-coordinate form."""

    x: tuple
    V: tuple
    N: tuple
    F: tuple
    D: tuple
    coords: tuple


def _split(data: BosonicLatticeData, x) -> _Split:
    c = list(data.coordinates(x))
    nv, nn, nf, nd = data._blocks
    dec = data.decomposition
    blocks = []
    start = 0
    for size, basis in ((nv, dec.V_basis), (nn, dec.null_basis), (nf, dec.F_basis), (nd, dec.D_basis)):
        part = c[start:start + size]
        blocks.append(vecmat(part, [list(b) for b in basis]) if size else data.space.zero())
        start += size
    return _Split(tuple(x), *blocks, coords=tuple(c))


def _d_lattice(data: BosonicLatticeData) -> list:
    """ℤ-basis d_j·D_j of Λ ∩ D."""
    return [[dj * a for a in b] for dj, b in zip(data.snf.divisors, data.decomposition.D_basis)]


def _gram_of(data: BosonicLatticeData, basis) -> list:
    if not basis:
        return []
    G = [list(r) for r in data.space.gram]
    return matmul(matmul(basis, G), transpose(basis))


# -- characters ----------------------------------------------------------------

def character_qseries(data: BosonicLatticeData, gamma: Coset, order=10) -> QSeries:
    """Σ_{λ∈Λ} q^{½‖s(γ)+λ−β̃‖²} · η^{-dim} truncated below ``order``."""
    order = Fraction(order)
    if data._blocks[1]:
        raise NonDiscreteCharacter(
            "null directions make the lattice sum non-discrete; use character_factorize for the symbolic form"
        )
    basis = [list(b) for b in data.lattice.basis]
    gram = data.lattice.gram()
    if basis and not _positive_definite(gram):
        raise NonDiscreteCharacter("lattice form is not positive definite; exponents are unbounded below")
    n = data.dim
    x = sub(gamma.representative, data.ff_rep)
    sp = _split(data, x)
    base = data.space.norm(sp.V)
    rest = sub(x, sp.V)
    y = data.lattice.coordinates(rest) if basis else ()
    bound = 2 * (order + Fraction(n, 24)) - base
    theta: dict = {}
    for _, val in _points_within(gram, y, bound):
        e = (base + val) / 2
        if e < order + Fraction(n, 24):
            theta[e] = theta.get(e, 0) + 1
    offset = (data.space.norm(x) / 2) % 1
    return _theta_eta(theta, n, order, offset)


@dataclass
class CharacterDescriptor:
    label: Coset
    v_part: dict
    circ_part: dict
    d_part: QSeries | None
    assembled: QSeries | None = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "label": self.label.to_json(),
            "v_part": self.v_part,
            "circ_part": self.circ_part,
            "d_part": self.d_part.to_json() if self.d_part is not None else None,
            "assembled": self.assembled.to_json() if self.assembled is not None else None,
            "notes": list(self.notes),
        }


def _enc(v) -> list:
    return [fmt_fraction(a) for a in v]


def character_factorize(data: BosonicLatticeData, gamma: Coset, order=10) -> CharacterDescriptor:
    """Split χ_γ into its V, (ℝN ⊕ F) and D factors."""
    order = Fraction(order)
    nv, nn, nf, nd = data._blocks
    s = gamma.representative
    g = _split(data, s)
    b = _split(data, data.ff_rep)
    pair = data.pair

    gv = sub(g.V, b.V)
    v_exp = data.space.norm(gv) / 2
    v_part = {
        "dim": nv,
        "weight_vector": _enc(g.V),
        "shifted_weight": _enc(gv),
        "exponent": fmt_fraction(v_exp),
        "eta_power": nv,
    }

    circ_part = {
        "rank": nn,
        "eta_power": 2 * nn,
        "q_prefactor_exponent": fmt_fraction(pair(b.N, sub(b.F, g.F))),
        "zeta_phase_vector": _enc(g.F),  # e^{2πi⟨ζ_∘, γ_F⟩}
        "f_sum_phase_vector": _enc(g.N),  # weight e^{2πi⟨γ_∘, f⟩} in Σ_{f∈F}
        "delta_shift": _enc(sub(g.F, b.F)),  # δ_F(ζ_F + τ·shift − f)
        "delta_test_basis": [_enc(v) for v in data.decomposition.null_basis],
        "f_basis": [_enc(v) for v in data.decomposition.F_basis],
        "s_prefactor_power": nn,  # (|τ|/iτ)^{rk N}
        "trivial": nn == 0,
    }

    notes = []
    d_basis = _d_lattice(data)
    d_gram = _gram_of(data, d_basis)
    d_part = None
    assembled = None
    if d_basis and not _positive_definite(d_gram):
        notes.append("D-part form is not positive definite; no q-series")
    else:
        # coordinates of γ_D − β_D in the basis d_j·D_j
        base = nv + nn + nf
        y = [(g.coords[base + j] - b.coords[base + j]) / dj for j, dj in enumerate(data.snf.divisors)]
        sd = sub(g.D, b.D)
        offset = (data.space.norm(sd) / 2) % 1
        cap = 2 * (order + Fraction(data.dim, 24)) - 2 * min(v_exp, 0)
        theta: dict = {}
        for _, val in _points_within(d_gram, y, cap):
            theta[val / 2] = theta.get(val / 2, 0) + 1
        d_part = _theta_eta(theta, nd, order, offset)
        if nn == 0:
            shifted = {e + v_exp: c for e, c in theta.items()}
            assembled = _theta_eta(shifted, data.dim, order, (offset + v_exp) % 1)
        else:
            notes.append("null part present: character is supported on a δ-distribution")
    return CharacterDescriptor(gamma, v_part, circ_part, d_part, assembled, notes)


# -- T ---------------------------------------------------------------------------

def t_phase(data: BosonicLatticeData, gamma: Coset, convention: str = "derived") -> Phase:
    convention = _T_ALIASES.get(convention, convention)
    if convention not in T_CONVENTIONS:
        raise ValueError(f"convention must be one of {T_CONVENTIONS}")
    x = sub(gamma.representative, data.ff_rep)
    p = Phase(data.space.norm(x))
    if convention == "derived":
        p = p * Phase(Fraction(-data.dim, 12))
    return p


def check_t_termwise(data: BosonicLatticeData, gamma: Coset, order=10) -> dict:
    """Compare q^e ↦ e^{2πi e} q^e on the series with both T conventions."""
    chi = character_qseries(data, gamma, order)
    phases = {e: Phase(2 * e) for e in chi.terms()}
    out = {}
    for conv in T_CONVENTIONS:
        t = t_phase(data, gamma, conv)
        bad = [fmt_fraction(e) for e, p in phases.items() if p != t]
        out[conv] = {"phase": t.to_json(), "matches": not bad, "mismatched_exponents": bad[:5]}
    return {"label": gamma.to_json(), "terms": len(phases), "conventions": out, "pass": out["derived"]["matches"]}


def t_matrix(data: BosonicLatticeData, convention: str = "derived") -> dict:
    labels = _finite_labels(data)
    return {"labels": labels, "phases": [t_phase(data, a, convention) for a in labels], "convention": convention}


# -- S ----------------------------------------------------------------------------

def _finite_labels(data: BosonicLatticeData) -> list:
    if not data.is_finite:
        raise InfiniteDiscriminant("S-matrix needs a full-rank lattice (finite discriminant group)")
    return discriminant_enumerate(data)


@dataclass
class SMatrix:
    """S_{γμ} = phases[γ][μ] / √order."""

    labels: list
    phases: list
    order: int

    def index(self, a: Coset) -> int:
        return self.labels.index(a)

    def entry(self, i: int, j: int) -> complex:
        return self.phases[i][j].to_complex() / math.sqrt(self.order)

    def numeric(self) -> list:
        n = len(self.labels)
        return [[self.entry(i, j) for j in range(n)] for i in range(n)]

    def is_symmetric(self) -> bool:
        n = len(self.labels)
        return all(self.phases[i][j] == self.phases[j][i] for i in range(n) for j in range(n))

    def unitarity_defect(self) -> float:
        S = self.numeric()
        n = len(S)
        worst = 0.0
        for i in range(n):
            for j in range(n):
                v = sum(S[i][k] * S[j][k].conjugate() for k in range(n))
                worst = max(worst, abs(v - (1 if i == j else 0)))
        return worst

    def square_permutation(self, tol: float = 1e-9) -> dict:
        """Measured label map of S²: γ ↦ the unique μ with |(S²)_{γμ}| ≈ 1."""
        S = self.numeric()
        n = len(S)
        perm = {}
        for i in range(n):
            row = [sum(S[i][k] * S[k][j] for k in range(n)) for j in range(n)]
            hits = [j for j in range(n) if abs(row[j] - 1) < tol]
            rest_zero = all(abs(row[j]) < tol for j in range(n) if j not in hits)
            perm[i] = hits[0] if len(hits) == 1 and rest_zero else None
        return perm

    def to_json(self) -> dict:
        return {
            "labels": [a.to_json() for a in self.labels],
            "phases": [[p.to_json() for p in row] for row in self.phases],
            "prefactor": f"1/sqrt({self.order})",
        }


def s_matrix(data: BosonicLatticeData) -> SMatrix:
    labels = _finite_labels(data)
    shifted = [sub(a.representative, data.ff_rep) for a in labels]
    phases = [[Phase(-2 * data.pair(u, v)) for v in shifted] for u in shifted]
    return SMatrix(labels, phases, len(labels))


def charge_conjugation_report(data: BosonicLatticeData, smat: SMatrix | None = None) -> dict:
    """Record the S² permutation and compare it with γ ↦ 2ξ − γ."""
    smat = smat or s_matrix(data)
    perm = smat.square_permutation()
    two_xi = data.coset([2 * a for a in data.ff.representative])
    expected = {i: smat.index(two_xi - a) for i, a in enumerate(smat.labels)}
    return {
        "permutation": [[smat.labels[i].to_json(), smat.labels[j].to_json() if j is not None else None] for i, j in perm.items()],
        "is_permutation": all(j is not None for j in perm.values()),
        "equals_dual_map": perm == expected,
    }


def verlinde(data: BosonicLatticeData, lam: Coset, mu: Coset, rho: Coset, smat: SMatrix | None = None) -> complex:
    smat = smat or s_matrix(data)
    S = smat.numeric()
    i, j, r = smat.index(lam), smat.index(mu), smat.index(rho)
    z = smat.index(data.zero())
    return sum(S[i][k] * S[j][k] * S[r][k].conjugate() / S[z][k] for k in range(len(S)))


def verlinde_table(data: BosonicLatticeData, tol: float = 1e-9) -> dict:
    smat = s_matrix(data)
    worst = 0.0
    witness = None
    count = 0
    for a, b, c in itertools.product(smat.labels, repeat=3):
        n = verlinde(data, a, b, c, smat)
        want = 1.0 if a + b == c else 0.0
        dev = abs(n - want)
        count += 1
        if dev > worst:
            worst = dev
            if dev >= tol:
                witness = [a.to_json(), b.to_json(), c.to_json()]
    return {"pass": worst < tol, "checked": count, "max_deviation": worst, "witness": witness}


# -- numeric S check at τ = it -------------------------------------------------

def _eta_it(t: float) -> float:
    x = math.exp(-2 * math.pi * t)
    prod = math.exp(-math.pi * t / 12)
    k = 1
    while True:
        xk = x ** k
        if xk < 1e-18:
            break
        prod *= 1 - xk
        k += 1
    return prod


def _character_it(data: BosonicLatticeData, gamma: Coset, t: float, bound: Fraction) -> float:
    x = sub(gamma.representative, data.ff_rep)
    y = data.lattice.coordinates(x)
    pts = _points_within(data.lattice.gram(), y, bound)
    terms = sorted(float(v) for _, v in pts)
    return math.fsum(math.exp(-math.pi * t * v) for v in terms) / _eta_it(t) ** data.dim


def verify_s_numeric(data: BosonicLatticeData, t: float = 1.0, radius: float | None = None, tol: float = 1e-6) -> dict:
    """Check χ_γ(i/t) = Σ_μ S_{γμ} χ_μ(it) numerically for every label γ."""
    if t <= 0:
        raise ValueError("t must be positive")
    if not data.is_finite:
        raise InfiniteDiscriminant("numeric S check needs a full-rank lattice")
    if not _positive_definite(data.lattice.gram()):
        raise NonDiscreteCharacter("numeric S check needs a positive-definite lattice")
    tmin = min(t, 1 / t)
    if radius is None:
        radius = math.sqrt(40 / (2 * math.pi * tmin))
    # lattice points with ½‖v‖² ≤ radius², i.e. ‖v‖² ≤ 2·radius²
    bound = Fraction(2 * radius * radius).limit_denominator(10**6)
    tail = math.exp(-2 * math.pi * tmin * radius * radius) * (1 + radius) ** data.dim
    report = {"t": t, "radius": radius, "tail_estimate": tail, "tol": tol}
    if tail > tol / 100:
        raise ConvergenceNotReached(f"radius {radius} too small for t = {t}", report)
    smat = s_matrix(data)
    S = smat.numeric()
    direct = [_character_it(data, a, t, bound) for a in smat.labels]
    dual = [_character_it(data, a, 1 / t, bound) for a in smat.labels]
    rows = []
    worst = 0.0
    for i, a in enumerate(smat.labels):
        rhs = sum(S[i][j] * direct[j] for j in range(len(S)))
        dev = abs(dual[i] - rhs)
        worst = max(worst, dev)
        rows.append({"label": a.to_json(), "lhs": dual[i], "rhs": [rhs.real, rhs.imag], "deviation": dev})
    report.update({"rows": rows, "max_deviation": worst, "pass": worst < tol})
    return report


__all__ = [
    "CharacterDescriptor",
    "SMatrix",
    "character_factorize",
    "character_qseries",
    "charge_conjugation_report",
    "check_t_termwise",
    "s_matrix",
    "t_matrix",
    "t_phase",
    "verify_s_numeric",
    "verlinde",
    "verlinde_table",
]
