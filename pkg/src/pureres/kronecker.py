"""Representations of the Kronecker quiver K_w and their cokernel bundles.

A representation of dimension vector (a, b) is a list of w matrices of shape
b x a.  Given a basis sigma_1..sigma_w of Hom(E, F), it is realized as the
cokernel of sum_i A_i (x) sigma_i : E^a -> F^b.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .complexes import (FormMatrix, Presentation, fiber_dimension, hom_lift_space, power,
                        split_bundle, splice_cokernel)
from .errors import FiberInjectivityFailed, NotInjective, PreconditionViolated, RankTooSmall
from .field import Field, rank
from .ring import random_point
from .verdict import holds

GENERIC_SIMPLE = "GenericSimple"
ALWAYS_DECOMPOSABLE = "AlwaysDecomposable"


def tits_form(w: int, a: int, b: int) -> int:
    return a * a + b * b - w * a * b


def _need_w3(w):
    if w < 3:
        raise PreconditionViolated(f"the Schur root test is only used for w >= 3, got w = {w}")


def is_schur_root(w: int, a: int, b: int) -> bool:
    _need_w3(w)
    return tits_form(w, a, b) <= 1


def simplicity_verdict(w: int, a: int, b: int) -> str:
    _need_w3(w)
    return GENERIC_SIMPLE if tits_form(w, a, b) <= 1 else ALWAYS_DECOMPOSABLE


@dataclass
class KroneckerRep:
    w: int
    a: int
    b: int
    mats: list
    field: Field = Field()

    def __post_init__(self):
        if self.w < 1:
            raise ValueError("need at least one arrow")
        if len(self.mats) != self.w:
            raise ValueError(f"expected {self.w} matrices, got {len(self.mats)}")
        mats = []
        for m in self.mats:
            m = self.field.asarray(m).reshape(self.b, self.a)
            mats.append(m)
        self.mats = mats

    @property
    def dim(self):
        return (self.a, self.b)

    def to_json(self) -> dict:
        return {"w": self.w, "a": self.a, "b": self.b,
                "mats": [[[int(x) for x in row] for row in m] for m in self.mats]}

    @classmethod
    def from_json(cls, obj, field: Field = Field()) -> "KroneckerRep":
        for key in ("w", "a", "b", "mats"):
            if key not in obj:
                raise ValueError(f"representation JSON lacks '{key}'")
        a, b = int(obj["a"]), int(obj["b"])
        mats = [np.array(m, dtype=object).reshape(b, a) for m in obj["mats"]]
        return cls(int(obj["w"]), a, b, mats, field)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def random_rep(w: int, a: int, b: int, rng: np.random.Generator,
               field: Field = Field()) -> KroneckerRep:
    return KroneckerRep(w, a, b, [field.random(rng, (b, a)) for _ in range(w)], field)


def rep_direct_sum(r1: KroneckerRep, r2: KroneckerRep) -> KroneckerRep:
    if r1.w != r2.w:
        raise ValueError("representations of different quivers")
    f = r1.field
    mats = []
    for m1, m2 in zip(r1.mats, r2.mats):
        m = f.zeros((r1.b + r2.b, r1.a + r2.a))
        m[:r1.b, :r1.a] = m1
        m[r1.b:, r1.a:] = m2
        mats.append(m)
    return KroneckerRep(r1.w, r1.a + r2.a, r1.b + r2.b, mats, f)


def _morphism_matrix(r1: KroneckerRep, r2: KroneckerRep) -> np.ndarray:
    """Matrix of (f1, f2) -> (f2 A_i - B_i f1)_i in column-major vectorization."""
    f = r1.field
    a1, b1, a2, b2 = r1.a, r1.b, r2.a, r2.b
    blocks = []
    for A, B in zip(r1.mats, r2.mats):
        # vec(f2 A) = (A^T (x) I) vec(f2),  vec(B f1) = (I (x) B) vec(f1)
        left = -np.kron(f.identity(a1), B) if a1 * a2 else f.zeros((b2 * a1, a1 * a2))
        right = np.kron(A.T, f.identity(b2)) if b1 * b2 else f.zeros((b2 * a1, b1 * b2))
        blocks.append(np.hstack([left, right]))
    return f.reduce(np.vstack(blocks))


def rep_hom_ext(r1: KroneckerRep, r2: KroneckerRep) -> tuple[int, int]:
    """(dim Hom(r1, r2), dim Ext^1(r1, r2))."""
    if r1.w != r2.w:
        raise ValueError("representations of different quivers")
    m = _morphism_matrix(r1, r2)
    rows, cols = m.shape
    rk = rank(m, r1.field) if rows and cols else 0
    return cols - rk, rows - rk


@dataclass
class SigmaBasis:
    """A basis of Hom(E, F) as lifts C^0_E -> F, with F a sum of line bundles."""

    E: Presentation
    F: Presentation
    basis: list

    @property
    def w(self) -> int:
        return len(self.basis)


def sigma_basis(pE: Presentation, pF: Presentation) -> SigmaBasis:
    """For line bundles this is the grevlex monomial basis of the right degree."""
    if not pF.is_split():
        raise NotImplementedError("Hom bases are computed for split F only")
    return SigmaBasis(pE, pF, hom_lift_space(pE, pF.term(0)))


def _alpha(r: KroneckerRep, sigma: SigmaBasis, point) -> np.ndarray:
    f = r.field
    parts = [s.evaluate(point) for s in sigma.basis]
    rows = r.b * len(sigma.F.term(0))
    cols = r.a * len(sigma.E.term(0))
    out = f.zeros((rows, cols))
    for A, s in zip(r.mats, parts):
        out = out + np.kron(A, s)
    return f.reduce(out)


def global_injectivity(r: KroneckerRep, sigma: SigmaBasis, points: int,
                       rng: np.random.Generator):
    """Full column rank a*rk(E) of alpha(P) at every sampled point."""
    if r.w != sigma.w:
        raise ValueError(f"representation has {r.w} arrows but Hom(E, F) has dimension {sigma.w}")
    claim = f"rep {r.dim} globally injective for ({sigma.E.label}, {sigma.F.label})"
    if r.a == 0:
        return holds(claim, True, points=0)
    want = r.a * sigma.E.rank
    ring = sigma.E.ring
    for k in range(points):
        pt = random_point(ring, rng)
        got = rank(_alpha(r, sigma, pt), r.field)
        if got != want or fiber_dimension(sigma.E, pt) != sigma.E.rank:
            return holds(claim, False, computed=got, points=k + 1,
                         witness=[int(x) for x in pt])
    return holds(claim, True, points=points)


def alpha_lift(r: KroneckerRep, sigma: SigmaBasis) -> FormMatrix:
    """Lift C^0_{E^a} -> F^b of alpha = sum_i A_i (x) sigma_i."""
    ring = sigma.E.ring
    c0 = sigma.E.term(0)
    g = sigma.F.term(0)
    ent: dict = {}
    for A, s in zip(r.mats, sigma.basis):
        for (i, j), form in s.entries.items():
            for row in range(r.b):
                for col in range(r.a):
                    c = A[row, col]
                    if not c:
                        continue
                    key = (row * len(g) + i, col * len(c0) + j)
                    term = form.scale(c)
                    ent[key] = ent[key] + term if key in ent else term
    return FormMatrix(ring, list(c0) * r.a, list(g) * r.b, ent, check=False)


def realize(r: KroneckerRep, sigma: SigmaBasis, rng: np.random.Generator,
            points: int = 50, label: str = "") -> Presentation:
    """Presentation of the cokernel bundle coker(E^a -> F^b) attached to r."""
    n = sigma.E.ring.n
    rk = r.b * sigma.F.rank - r.a * sigma.E.rank
    if rk < n:
        raise RankTooSmall(f"b*rk(F) - a*rk(E) = {rk} < n = {n}")
    label = label or f"C{r.dim}"
    if r.a == 0:
        return split_bundle(sigma.E.ring, list(sigma.F.term(0)) * r.b, label)
    if not global_injectivity(r, sigma, points, rng):
        raise NotInjective(f"alpha is not injective for rep {r.dim}")
    try:
        return splice_cokernel(power(sigma.E, r.a), alpha_lift(r, sigma), rng, points, label)
    except FiberInjectivityFailed as exc:
        raise NotInjective(str(exc)) from exc
