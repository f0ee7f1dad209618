"""Hom and Ext between bundles presented by line-bundle resolutions.

Ext^k(E, F) is the k-th hypercohomology of the total complex Hom(C_E, C_F),
whose terms are again sums of line bundles: Hom(O(a), O(b)) = O(b - a).
"""

from __future__ import annotations

import numpy as np

from .cohomology import Hypercohomology, Indeterminate, is_exact
from .complexes import FormMatrix, LineComplex, Presentation, hom_lift_space, twist
from .field import rank
from .ring import dim_forms, random_point
from .verdict import FAIL, INDETERMINATE, PASS, Verdict, check, holds


def hom_complex(pE: LineComplex, pF: LineComplex) -> LineComplex:
    """Total complex of the termwise Hom double complex.

    Position k collects Hom(C_E^p, C_F^q) for q - p = k, and the differential
    is D(phi) = d_F o phi - (-1)^k phi o d_E.
    """
    if pE.ring != pF.ring:
        raise ValueError("bundles live on different rings")
    ring = pE.ring
    lo, hi = pF.lo - pE.hi, pF.hi - pE.lo
    layout = {}   # k -> list of (p, q, offset)
    terms = []
    for k in range(lo, hi + 1):
        blocks, twists = [], []
        for p in range(pE.hi, pE.lo - 1, -1):
            q = p + k
            if not pF.lo <= q <= pF.hi:
                continue
            a, b = pE.term(p), pF.term(q)
            blocks.append((p, q, len(twists)))
            twists += [bi - aj for bi in b for aj in a]
        layout[k] = blocks
        terms.append(twists)

    def offset(k, p, q):
        for pp, qq, off in layout.get(k, ()):
            if (pp, qq) == (p, q):
                return off
        return None

    diffs = []
    for k in range(lo, hi):
        ent = {}
        sign = -1 if k % 2 == 0 else 1       # -(-1)^k
        for p, q, off in layout[k]:
            a, b = pE.term(p), pF.term(q)
            na = len(a)
            dF = pF.diff(q)
            if dF is not None:
                toff = offset(k + 1, p, q + 1)
                for (i2, i), f in dF.entries.items():
                    for j in range(na):
                        ent[(toff + i2 * na + j, off + i * na + j)] = f
            dE = pE.diff(p - 1)
            if dE is not None:
                toff = offset(k + 1, p - 1, q)
                na2 = len(pE.term(p - 1))
                for (j, j2), f in dE.entries.items():
                    g = f if sign == 1 else -f
                    for i in range(len(b)):
                        key = (toff + i * na2 + j2, off + i * na + j)
                        ent[key] = ent[key] + g if key in ent else g
        diffs.append(FormMatrix(ring, terms[k - lo], terms[k - lo + 1], ent, check=False))
    return LineComplex(ring, terms, diffs, lo, f"Hom({pE.label}, {pF.label})")


def ext_dims(pE: LineComplex, pF: LineComplex, kmax: int) -> list:
    """[dim Ext^0, ..., dim Ext^kmax] (entries may be Indeterminate)."""
    eng = Hypercohomology(hom_complex(pE, pF))
    return [eng.degree(k) for k in range(kmax + 1)]


def hom_dim(pE, pF):
    return ext_dims(pE, pF, 0)[0]


def is_simple(p: LineComplex) -> Verdict:
    h = hom_dim(p, p)
    if not is_exact(h):
        return Verdict(f"{p.label} is simple", h, 1, INDETERMINATE)
    return check(f"{p.label} is simple", h, 1)


def exceptionality_check(p: LineComplex) -> Verdict:
    """Simple with Ext^k(E, E) = 0 for 1 <= k <= n."""
    n = p.ring.n
    dims = ext_dims(p, p, n)
    expected = [1] + [0] * n
    claim = f"{p.label} is exceptional"
    if all(is_exact(v) for v in dims):
        return Verdict(claim, dims, expected, PASS if dims == expected else FAIL)
    # an exact nonzero Ext or a non-simple Hom already decides the question
    decided = (is_exact(dims[0]) and dims[0] != 1) or any(
        (is_exact(v) and v) or (isinstance(v, Indeterminate) and v.lo > 0) for v in dims[1:])
    return Verdict(claim, dims, expected, FAIL if decided else INDETERMINATE)


def serre_dual_ext(pE: Presentation, pF: Presentation, k: int):
    """(dim Ext^k(E, F), dim Ext^{n-k}(F, E(-n-1)))."""
    n = pE.ring.n
    return ext_dims(pE, pF, k)[k], ext_dims(pF, twist(pE, -n - 1), n - k)[n - k]


def global_generation(pE: Presentation, pF: Presentation, points: int,
                      rng: np.random.Generator) -> Verdict:
    """Pointwise check that E^* (x) F is generated by Hom(E, F) at sampled points.

    Supported when F or E is a sum of line bundles; the sampled points are
    recorded in the verdict.
    """
    field = pE.ring.field
    rkE, rkF = pE.rank, pF.rank
    pts = [random_point(pE.ring, rng) for _ in range(points)]
    bad = None
    if pF.is_split():
        basis = hom_lift_space(pE, pF.term(0))
        for pt in pts:
            vecs = [m.evaluate(pt).ravel() for m in basis]
            got = rank(np.array(vecs, dtype=field.dtype), field) if vecs else 0
            if got != rkE * rkF:
                bad = (pt, got)
                break
    elif pE.is_split() and pF.length < pF.ring.n:
        # sections of F(-a) are images of sections of C^0_F(-a), so F(-a) is
        # generated at P iff those sections and im d^{-1}(P) span the fiber of C^0_F
        c0 = pF.term(0)
        d = pF.diff(-1)
        for pt in pts:
            rel = d.evaluate(pt) if d is not None else field.zeros((len(c0), 0))
            for a in sorted(set(pE.term(0))):
                cols = [rel]
                for row, c in enumerate(c0):
                    if c - a < 0:
                        continue
                    v = field.zeros((len(c0), 1))
                    # some monomial of degree c - a is nonzero at pt iff pt != 0
                    v[row, 0] = field.scalar(1)
                    cols.append(v)
                got = rank(np.hstack(cols), field)
                if got != len(c0):
                    bad = (pt, got)
                    break
            if bad:
                break
    else:
        raise NotImplementedError("global generation needs E or F split")
    return holds(f"({pE.label})^* (x) {pF.label} globally generated", bad is None,
                 computed=bad is None, points=len(pts),
                 witness=None if bad is None else [str(x) for x in bad[0]])


def check_cokernel_conditions(pE: Presentation, pF: Presentation, sample_points: int,
                              rng: np.random.Generator) -> list[Verdict]:
    """The five admissibility conditions for building cokernel bundles of type (E, F)."""
    hE, hF = hom_dim(pE, pE), hom_dim(pF, pF)
    out = [Verdict("(1) E and F simple", [hE, hF], [1, 1])]
    fe = ext_dims(pF, pE, 1)
    out.append(Verdict("(2) Hom(F, E) = 0", fe[0], 0))
    out.append(Verdict("(3) Ext^1(F, E) = 0", fe[1], 0))
    out.append(global_generation(pE, pF, sample_points, rng))
    w = hom_dim(pE, pF)
    ok = is_exact(w) and w >= 3
    out.append(holds("(5) w = dim Hom(E, F) >= 3", ok, computed=w))
    for v in out:
        v.claim = f"{v.claim} [E={pE.label}, F={pF.label}]"
        if any(isinstance(x, Indeterminate) for x in np.ravel([v.computed])):
            v.status = INDETERMINATE
    return out


def cokernel_end_dim(prev: Presentation, lift: FormMatrix, prev_end=None):
    """dim End(C) for C = coker(phi: E -> O(d)^b), phi given by its lift C^0_E -> O(d)^b.

    Needs E simple and H^0(E(-d)) = H^1(E(-d)) = 0.  Then Hom(O(d)^b, C) is the
    b x b constant matrices, and M induces an endomorphism of C iff
    M phi = c phi for a scalar c, by left exactness of Hom(E, -).  Returns
    Indeterminate(0, b*b) when a hypothesis fails.
    """
    field = prev.ring.field
    n = prev.ring.n
    twists = set(lift.target)
    b = len(lift.target)
    if len(twists) != 1:
        raise ValueError("target must be O(d)^b")
    d = twists.pop()
    if prev_end is None:
        prev_end = hom_dim(prev, prev)
    eng = Hypercohomology(prev)
    if prev_end != 1 or eng.degree(0, -d) != 0 or eng.degree(1, -d) != 0:
        return Indeterminate(0, b * b)
    # coefficient vectors of the b rows of phi
    c0 = prev.term(0)
    dims = [dim_forms(n, d - c) if d >= c else 0 for c in c0]
    offs = np.concatenate([[0], np.cumsum(dims)]).astype(int)
    phi = field.zeros((b, int(offs[-1])))
    for (r, j), f in lift.entries.items():
        phi[r, offs[j]:offs[j + 1]] = f.to_vector()
    N = phi.shape[1]
    # columns: M_{rs} (row r of M phi gets M_{rs} phi_s), then c
    cols = []
    for r in range(b):
        for s in range(b):
            v = field.zeros((b, N))
            v[r] = phi[s]
            cols.append(v.ravel())
    cols.append(field.reduce(-phi).ravel())
    mat = np.column_stack(cols)
    kern = b * b + 1 - rank(mat, field)
    # pairs (0, c) with c phi = 0 do not give endomorphisms
    return kern - (0 if phi.any() else 1)
