"""Constructors for the three resolution families: Koszul complexes, pure
resolutions of compressed Gorenstein algebras, and the inductive bundles of
prescribed homological dimension."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, prod

import numpy as np

from .cohomology import cm_regularity, euler_characteristic
from .complexes import (FormMatrix, LineComplex, Presentation, combine, dualize,
                        hom_lift_space, splice_cokernel)
from .errors import (BettiMismatch, FiberInjectivityFailed, PurityViolation,
                     RetriesExhausted, ScheduleTooTight)
from .field import Field, kernel_basis, product, rank
from .ring import (Form, RingDesc, dim_forms, monomial_basis, mult_matrix,
                   quotient_hilbert_function, random_regular_sequence)


def syzygy_presentations(full: LineComplex, count: int) -> dict:
    """F_i presented by the leftmost i + 1 terms of ``full``, for i = 1..count."""
    out = {}
    for i in range(1, count + 1):
        out[i] = Presentation(full.ring, full.terms[:i + 1], full.diffs[:i], f"F_{i}")
    return out


# Koszul ------------------------------------------------------------------

@dataclass
class KoszulSpec:
    ring: RingDesc
    d: int
    forms: list

    @property
    def n(self):
        return self.ring.n


def random_koszul_spec(ring: RingDesc, d: int, rng: np.random.Generator, retries: int = 5):
    return KoszulSpec(ring, d, random_regular_sequence(ring, d, ring.n + 1, rng, retries))


@dataclass
class Resolution:
    """A full resolution (ending in O at position 0) with its syzygy bundles."""
    full: LineComplex
    syzygies: dict
    info: dict = field(default_factory=dict)


def koszul_complex(spec: KoszulSpec) -> LineComplex:
    """0 -> O(-(n+1)d) -> ... -> O(-d)^{n+1} -> O -> 0 with Koszul signs.

    The basis of the k-th exterior power is the list of k-subsets in
    lexicographic order, and d(e_S) = sum_m (-1)^m f_{S[m]} e_{S - S[m]}.
    """
    ring, d, f = spec.ring, spec.d, spec.forms
    m = ring.n + 1
    subsets = {k: list(combinations(range(m), k)) for k in range(m + 1)}
    terms = [[-k * d] * comb(m, k) for k in range(m, -1, -1)]
    diffs = []
    for k in range(m, 0, -1):
        index = {s: i for i, s in enumerate(subsets[k - 1])}
        ent = {}
        for j, s in enumerate(subsets[k]):
            for pos, v in enumerate(s):
                rest = s[:pos] + s[pos + 1:]
                ent[(index[rest], j)] = f[v] if pos % 2 == 0 else -f[v]
        diffs.append(FormMatrix(ring, [-k * d] * comb(m, k), [-(k - 1) * d] * comb(m, k - 1), ent))
    return LineComplex(ring, terms, diffs, label=f"Koszul(n={ring.n}, d={d})")


def koszul_presentation(spec: KoszulSpec) -> Resolution:
    full = koszul_complex(spec)
    return Resolution(full, syzygy_presentations(full, spec.n - 1),
                      {"family": "koszul", "n": spec.n, "d": spec.d})


# Gorenstein ---------------------------------------------------------------

def betti_alpha(n: int, t: int, i: int) -> int:
    """Rank of the i-th term of the pure resolution of a compressed Gorenstein
    algebra with n + 1 variables and socle degree 2t."""
    if not 1 <= i <= n:
        raise ValueError("need 1 <= i <= n")
    return (comb(t + i - 1, i - 1) * comb(t + n + 1, n + 1 - i)
            - comb(t + n - i, n + 1 - i) * comb(t + n, i - 1))


def compressed_hilbert_function(n: int, t: int) -> list[int]:
    """min(dim R_k, dim R_{2t-k}) for k = 0..2t+1 (the last entry is 0)."""
    return [min(dim_forms(n, k), dim_forms(n, 2 * t - k)) for k in range(2 * t + 2)]


@dataclass
class GorensteinSpec:
    ring: RingDesc
    t: int
    generators: list

    @property
    def n(self):
        return self.ring.n


def _catalecticant(dual: dict, n: int, t: int, field) -> np.ndarray:
    """Contraction matrix R_{t+1} -> (R_{t-1})^* of the dual socle form.

    Row m (degree t-1 monomial), column u (degree t+1 monomial) holds the
    coefficient of x^{u+m} in the dual form.
    """
    lo, hi = monomial_basis(n, t - 1), monomial_basis(n, t + 1)
    out = field.zeros((len(lo), len(hi)))
    for r, m in enumerate(lo):
        for c, u in enumerate(hi):
            out[r, c] = dual[tuple(a + b for a, b in zip(m, u))]
    return out


def random_gorenstein_spec(ring: RingDesc, t: int, rng: np.random.Generator,
                           retries: int = 5) -> GorensteinSpec:
    """Generators of the ideal of a random compressed Gorenstein algebra.

    A random form F of degree 2t in the dual variables defines the algebra
    R / Ann(F); its degree t+1 part is the kernel of the catalecticant, which
    generates the ideal when the Hilbert function is compressed.
    """
    n, fld = ring.n, ring.field
    target = compressed_hilbert_function(n, t)
    for _ in range(retries + 1):
        coeffs = fld.random(rng, dim_forms(n, 2 * t))
        dual = dict(zip(monomial_basis(n, 2 * t), coeffs))
        ker = kernel_basis(_catalecticant(dual, n, t, fld), fld)
        gens = [Form.from_vector(ring, t + 1, ker[:, k]) for k in range(ker.shape[1])]
        if len(gens) == betti_alpha(n, t, 1) and \
                quotient_hilbert_function(gens, 2 * t + 1, ring) == target:
            return GorensteinSpec(ring, t, gens)
    raise RetriesExhausted(f"no compressed Gorenstein sample for n={n}, t={t} "
                           f"after {retries + 1} attempts")


def pure_resolution(ring: RingDesc, generators, degrees, expected=None, label: str = ""
                    ) -> LineComplex:
    """Pure resolution of R/I, I generated by forms of degree degrees[0].

    ``degrees`` are the shifts d_1 < d_2 < ... of the terms O(-d_i).  Each new
    term is a kernel basis of the previous differential in the single degree
    d_{i+1}; purity is checked rather than assumed: the kernel must vanish in
    every degree strictly between consecutive shifts, and one degree above a
    shift it must already be generated by the new term.
    """
    field = ring.field
    deg = list(degrees)
    if any(b <= a for a, b in zip(deg, deg[1:])) or deg[0] <= 0:
        raise ValueError("degrees must be positive and strictly increasing")
    if any(g.degree != deg[0] for g in generators):
        raise ValueError("generators must all have degree degrees[0]")
    gens = list(generators)
    if expected is not None and len(gens) != expected[0]:
        raise BettiMismatch(f"{len(gens)} generators, expected {expected[0]}")
    d = FormMatrix(ring, [-deg[0]] * len(gens), [0],
                   {(0, j): g for j, g in enumerate(gens)})
    maps = [d]
    for i in range(1, len(deg)):
        cur, nxt = deg[i - 1], deg[i]
        for s in range(cur + 1, nxt):
            k = d.graded(s).shape[1] - rank(d.graded(s), field)
            if k:
                raise PurityViolation(f"syzygy of degree {s} between shifts {cur} and {nxt}")
        ker = kernel_basis(d.graded(nxt), field)
        beta = ker.shape[1]
        if expected is not None and beta != expected[i]:
            raise BettiMismatch(f"term {i + 1}: kernel dimension {beta}, expected {expected[i]}")
        if beta == 0:
            raise PurityViolation(f"no syzygies in degree {nxt}")
        block = dim_forms(ring.n, nxt - cur)
        ent = {}
        for k in range(beta):
            for j in range(len(d.source)):
                f = Form.from_vector(ring, nxt - cur, ker[j * block:(j + 1) * block, k])
                if f:
                    ent[(j, k)] = f
        new = FormMatrix(ring, [-nxt] * beta, d.source, ent)
        # the kernel one degree up must come from the new generators
        g = d.graded(nxt + 1)
        kdim = g.shape[1] - rank(g, field)
        if kdim != rank(new.graded(nxt + 1), field):
            raise PurityViolation(f"extra syzygies in degree {nxt + 1}")
        maps.append(new)
        d = new
    # the last map must be injective just above its shift
    g = d.graded(deg[-1] + 1)
    if g.shape[1] - rank(g, field):
        raise PurityViolation("resolution does not end at the last shift")
    maps.reverse()
    terms = [m.source for m in maps] + [(0,)]
    return LineComplex(ring, terms, maps, label=label)


def gorenstein_presentation(spec: GorensteinSpec) -> Resolution:
    n, t = spec.n, spec.t
    degrees = [t + i for i in range(1, n + 1)] + [2 * t + n + 1]
    expected = [betti_alpha(n, t, i) for i in range(1, n + 1)] + [1]
    full = pure_resolution(spec.ring, spec.generators, degrees, expected,
                           label=f"Gorenstein(n={n}, t={t})")
    return Resolution(full, syzygy_presentations(full, n - 1),
                      {"family": "gorenstein", "n": n, "t": t, "alpha": expected[:-1]})


# pure degree sequences --------------------------------------------------

def herzog_kuhl_betti(degrees) -> list:
    """Betti numbers of a pure Cohen-Macaulay resolution with shifts
    d_1 < ... < d_c (beta_0 = 1 is implied): beta_i = prod_{j != i} d_j / |d_j - d_i|."""
    out = []
    for i, di in enumerate(degrees):
        b = prod(Fraction(dj, abs(dj - di)) for j, dj in enumerate(degrees) if j != i)
        out.append(b)
    return out


# arbitrary homological dimension -------------------------------------------

@dataclass
class HdSchedule:
    n: int
    l: int
    d0: int = 1
    degrees: list | None = None    # d_2 < ... < d_l, or None for the minimal choice

    def __post_init__(self):
        if self.n < 4:
            raise ValueError("the construction needs n >= 4")
        if not 1 <= self.l <= self.n - 1:
            raise ValueError("need 1 <= l <= n-1")
        if self.d0 <= 0:
            raise ValueError("d0 must be positive")
        if self.degrees is not None:
            if len(self.degrees) != self.l - 1:
                raise ValueError(f"need {self.l - 1} degrees d_2..d_l")
            if any(b <= a for a, b in zip(self.degrees, self.degrees[1:])) or \
                    (self.degrees and self.degrees[0] <= 0):
                raise ValueError("need 0 < d_2 < ... < d_l")


def euler_type_presentation(ring: RingDesc, forms, label: str = "E_1") -> Presentation:
    """coker(O(-e) -> O^{k}) given by k forms of degree e."""
    e = forms[0].degree
    d = FormMatrix(ring, [-e], [0] * len(forms), {(i, 0): f for i, f in enumerate(forms)})
    return Presentation(ring, [[-e], [0] * len(forms)], [d], label)


def admissible_degree(E: Presentation, prev: int, need: int):
    """Smallest d > max(prev, D) with h^0(E^*(d)) >= need, where D = reg(E^*).

    Returns (d, D, h0).  For d >= D - 1 all higher cohomology of E^*(d)
    vanishes, so h^0 is the Euler characteristic.
    """
    dual = dualize(E)
    reg = cm_regularity(dual)
    d = max(prev, reg) + 1
    while True:
        h0 = euler_characteristic(dual, d)
        if h0 >= need:
            return d, reg, h0
        d += 1


def generic_maps(E: Presentation, reg: int, d: int, count: int, rng: np.random.Generator):
    """Lift C^0 -> O(d)^count of a random map E -> O(d)^count.

    Each row is sum_j h_j g_j with g_j a basis of Hom(E, O(reg)) and h_j random
    forms of degree d - reg.  E^*(reg) is 0-regular, so the products g_j h
    span Hom(E, O(d)) and the rows are uniformly distributed in it.
    """
    ring = E.ring
    n, fld = ring.n, ring.field
    basis = hom_lift_space(E, [reg])
    if not basis:
        raise ScheduleTooTight(f"Hom({E.label}, O({reg})) = 0", d)
    e = d - reg
    mons = monomial_basis(n, e)
    coeffs = fld.random(rng, (len(mons), len(basis), count))
    entries = {}
    for j, c in enumerate(E.term(0)):
        if reg - c < 0:
            continue
        g = np.column_stack([b[0, j].to_vector() for b in basis])   # R_{reg-c} x w
        acc = fld.zeros((dim_forms(n, d - c), count))
        for k, mu in enumerate(mons):
            x = product(g, coeffs[k], fld)
            acc = fld.reduce(acc + product(mult_matrix(Form.monomial(ring, mu), reg - c), x, fld))
        for r in range(count):
            f = Form.from_vector(ring, d - c, acc[:, r])
            if f:
                entries[(r, j)] = f
    return FormMatrix(ring, E.term(0), [d] * count, entries, check=False), len(basis)


def build_anyhd(schedule: HdSchedule, rng: np.random.Generator, field: Field = Field(),
                points: int = 50, retries: int = 5):
    """Rank-n bundle on P^n with a pure resolution of length l.

    Returns (presentation of E_l, list of per-step records).  Each step
    E_t = coker(E_{t-1} -> O(d_t)^{2n}) uses a random element of Hom(E_{t-1}, O(d_t))^{2n}.
    """
    n = schedule.n
    ring = RingDesc(n, field)
    forms = random_regular_sequence(ring, schedule.d0, n + 1, rng, retries)
    E = euler_type_presentation(ring, forms)
    steps = [{"t": 1, "d": schedule.d0, "regular_sequence": True}]
    prev = 0
    for t in range(2, schedule.l + 1):
        minimal, reg, _ = admissible_degree(E, prev, 2 * n)
        dt = minimal if schedule.degrees is None else schedule.degrees[t - 2]
        if dt < minimal:
            raise ScheduleTooTight(f"d_{t} = {dt} is below the minimal admissible degree "
                                   f"{minimal} (reg(E_{t - 1}^*) = {reg})", minimal)
        h0 = euler_characteristic(dualize(E), dt)
        for attempt in range(retries + 1):
            lift, _ = generic_maps(E, reg, dt, 2 * n, rng)
            try:
                nxt = splice_cokernel(E, lift, rng, points, label=f"E_{t}")
                break
            except FiberInjectivityFailed:
                if attempt == retries:
                    raise
        steps.append({"t": t, "d": dt, "D": reg, "h0": h0, "minimal": minimal,
                      "resamples": attempt})
        E, prev = nxt, dt
    return E, steps


def anyhd_stage(E: Presentation, t: int) -> Presentation:
    """E_t recovered from the presentation of E_l: its first t + 1 terms."""
    if not 1 <= t <= E.length:
        raise ValueError(f"stage {t} out of range")
    return Presentation(E.ring, E.terms[:t + 1], E.diffs[:t], f"E_{t}")
