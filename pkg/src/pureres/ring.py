"""The graded polynomial ring k[x_0, ..., x_n]: monomial bases, forms and
multiplication maps between graded pieces."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb

import numpy as np

from .errors import RetriesExhausted
from .field import Field, rank


@dataclass(frozen=True)
class RingDesc:
    """Coordinate ring of P^n over ``field`` (so ``n + 1`` variables)."""

    n: int
    field: Field = Field()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("projective dimension n must be at least 1")

    @property
    def nvars(self) -> int:
        return self.n + 1

    def to_json(self) -> dict:
        return {"n": self.n, "char": self.field.characteristic}

    @classmethod
    def from_json(cls, obj) -> "RingDesc":
        return cls(int(obj["n"]), Field(int(obj["char"])))


def dim_forms(n: int, d: int) -> int:
    """dim R_d for R = k[x_0..x_n]; zero in negative degree."""
    if d < 0:
        return 0
    return comb(n + d, n)


@lru_cache(maxsize=None)
def monomial_basis(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of degree ``d`` in decreasing grevlex order."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    exps = []
    for combo in combinations_with_replacement(range(n + 1), d):
        e = [0] * (n + 1)
        for v in combo:
            e[v] += 1
        exps.append(tuple(e))
    # grevlex: smaller exponent of the last variable is larger, then recurse
    exps.sort(key=lambda e: e[::-1])
    return tuple(exps)


@lru_cache(maxsize=None)
def _basis_array(n: int, d: int) -> np.ndarray:
    arr = np.array(monomial_basis(n, d), dtype=np.int64)
    return arr.reshape(len(monomial_basis(n, d)), n + 1)


def _encode(exps: np.ndarray, base: int) -> np.ndarray:
    weights = base ** np.arange(exps.shape[-1], dtype=np.int64)
    return exps @ weights


@lru_cache(maxsize=None)
def _basis_lookup(n: int, d: int):
    keys = _encode(_basis_array(n, d), d + 1)
    order = np.argsort(keys, kind="stable")
    return keys[order], order


def monomial_index(n: int, d: int, exps: np.ndarray) -> np.ndarray:
    """Positions of the exponent vectors ``exps`` (all of degree ``d``) in the basis."""
    keys, order = _basis_lookup(n, d)
    pos = np.searchsorted(keys, _encode(exps, d + 1))
    return order[pos]


@lru_cache(maxsize=None)
def _index_map(n: int, d: int) -> dict:
    return {e: i for i, e in enumerate(monomial_basis(n, d))}


class Form:
    """A homogeneous polynomial stored as ``{exponent tuple: coefficient}``.

    Only nonzero coefficients are kept, so the zero form has no terms.
    """

    __slots__ = ("ring", "degree", "terms")

    def __init__(self, ring: RingDesc, degree: int, terms=None):
        self.ring = ring
        self.degree = degree
        field = ring.field
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != ring.nvars or sum(e) != degree or min(e) < 0:
                raise ValueError(f"exponent {e} is not a monomial of degree {degree}")
            c = field.scalar(c)
            if c:
                clean[e] = c
        self.terms = clean

    @classmethod
    def zero(cls, ring, degree):
        return cls(ring, degree)

    @classmethod
    def one(cls, ring):
        return cls(ring, 0, {(0,) * ring.nvars: 1})

    @classmethod
    def variable(cls, ring, i):
        e = [0] * ring.nvars
        e[i] = 1
        return cls(ring, 1, {tuple(e): 1})

    @classmethod
    def monomial(cls, ring, exp, coeff=1):
        return cls(ring, sum(exp), {tuple(exp): coeff})

    @classmethod
    def from_vector(cls, ring, degree, vec):
        basis = monomial_basis(ring.n, degree)
        return cls(ring, degree, {basis[i]: vec[i] for i in range(len(basis)) if vec[i]})

    def to_vector(self) -> np.ndarray:
        field = self.ring.field
        out = field.zeros(dim_forms(self.ring.n, self.degree))
        idx = _index_map(self.ring.n, self.degree)
        for e, c in self.terms.items():
            out[idx[e]] = c
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda t: t[0][::-1]):
            mono = "*".join(f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts)

    def __add__(self, other: "Form") -> "Form":
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degrees")
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Form(self.ring, self.degree, terms)

    def __neg__(self) -> "Form":
        return Form(self.ring, self.degree, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scale(self, c) -> "Form":
        return Form(self.ring, self.degree, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Form):
            return self.scale(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Form(self.ring, self.degree + other.degree, terms)

    __rmul__ = scale

    def evaluate(self, point):
        field = self.ring.field
        total = field.scalar(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * (x ** k if field.is_rational else pow(int(x), k, field.p))
            total = field.scalar(total + v)
        return total

    def to_json(self) -> list:
        return [{"exp": list(e), "c": _coeff_json(c)} for e, c in
                sorted(self.terms.items(), key=lambda t: t[0][::-1])]

    @classmethod
    def from_json(cls, ring, degree, items) -> "Form":
        terms = {}
        for item in items:
            terms[tuple(item["exp"])] = _coeff_from_json(item["c"])
        return cls(ring, degree, terms)


def _coeff_json(c):
    from fractions import Fraction
    if isinstance(c, Fraction):
        return int(c) if c.denominator == 1 else str(c)
    return int(c)


def _coeff_from_json(c):
    from fractions import Fraction
    if isinstance(c, str):
        return Fraction(c)
    return c


def mult_matrix(f: Form, d: int) -> np.ndarray:
    """Matrix of g -> f*g from R_d to R_{d+deg f}, columns/rows in basis order."""
    n = f.ring.n
    field = f.ring.field
    e = f.degree
    rows, cols = dim_forms(n, d + e), dim_forms(n, d)
    out = field.zeros((rows, cols))
    if d < 0 or rows == 0 or not f.terms:
        return out
    src = _basis_array(n, d)
    col_idx = np.arange(cols)
    for exp, c in f.terms.items():
        tgt = monomial_index(n, d + e, src + np.array(exp, dtype=np.int64))
        out[tgt, col_idx] = c
    return out


def random_form(ring: RingDesc, d: int, rng: np.random.Generator) -> Form:
    coeffs = ring.field.random(rng, dim_forms(ring.n, d))
    return Form.from_vector(ring, d, coeffs)


def ideal_piece_rank(forms, k: int) -> int:
    """dim of the degree-k part of the ideal generated by ``forms``."""
    if not forms:
        return 0
    ring = forms[0].ring
    blocks = [mult_matrix(f, k - f.degree) for f in forms if k - f.degree >= 0]
    if not blocks:
        return 0
    return rank(np.hstack(blocks), ring.field)


def quotient_hilbert_function(forms, upto: int, ring: RingDesc | None = None) -> list[int]:
    """dim (R/I)_k for k = 0..upto."""
    ring = ring or forms[0].ring
    return [dim_forms(ring.n, k) - ideal_piece_rank(forms, k) for k in range(upto + 1)]


def complete_intersection_series(n: int, d: int, count: int, upto: int) -> list[int]:
    """Coefficients of (1 - z^d)^count / (1 - z)^(n+1) up to z^upto."""
    num = [0] * (upto + 1)
    for j in range(count + 1):
        if j * d <= upto:
            num[j * d] += (-1) ** j * comb(count, j)
    return [sum(num[i] * dim_forms(n, k - i) for i in range(k + 1)) for k in range(upto + 1)]


def is_regular_sequence(forms, n: int) -> bool:
    """Hilbert-function certificate for a sequence of forms of one degree."""
    d = forms[0].degree
    count = len(forms)
    upto = count * d
    return quotient_hilbert_function(forms, upto) == complete_intersection_series(n, d, count, upto)


def random_regular_sequence(ring: RingDesc, d: int, count: int, rng: np.random.Generator,
                            retries: int = 5) -> list[Form]:
    if count > ring.n + 1:
        raise ValueError("a regular sequence has at most n+1 elements")
    if d < 1:
        raise ValueError("degree must be positive")
    for _ in range(retries + 1):
        forms = [random_form(ring, d, rng) for _ in range(count)]
        if is_regular_sequence(forms, ring.n):
            return forms
    raise RetriesExhausted(f"no regular sequence of {count} forms of degree {d} found "
                           f"after {retries + 1} attempts over {ring.field}")


def random_point(ring: RingDesc, rng: np.random.Generator):
    """A random point of P^n with coordinates in the base field."""
    field = ring.field
    while True:
        pt = field.random(rng, ring.nvars)
        if np.any(pt != 0):
            return list(pt)
