"""Rank of the one higher differential d_{n+1} of the hypercohomology spectral
sequence of a line-bundle complex, by a zig-zag through Cech cochains.

On the standard affine cover of P^n the Cech complex of O(a) splits as a sum
over Laurent monomials x^u of degree a: the summand for u lives on the faces
I containing neg(u) = {i : u_i < 0}.  When neg(u) is neither empty nor
everything, that summand is contractible, with homotopy given by inserting a
vertex v outside neg(u).  This makes every step of the zig-zag an explicit
formula, and only finitely many monomials are ever touched.

Cochains are dicts {(face, summand, u): coefficient}, faces sorted tuples.
"""

from __future__ import annotations

import numpy as np

from .complexes import LineComplex
from .field import kernel_basis, rank
from .ring import _index_map, monomial_basis


def _add(out: dict, key, val, field):
    v = field.scalar(out.get(key, 0) + val)
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def apply_diff(d, cochain: dict, field) -> dict:
    """Apply a form-matrix differential to a Cech cochain of its source."""
    by_col: dict = {}
    for (i, j), f in d.entries.items():
        by_col.setdefault(j, []).append((i, f))
    out: dict = {}
    for (face, j, u), c in cochain.items():
        for i, f in by_col.get(j, ()):
            for e, fc in f.terms.items():
                key = (face, i, tuple(a + b for a, b in zip(u, e)))
                _add(out, key, c * fc, field)
    return out


def cech_differential(cochain: dict, nvars: int, field) -> dict:
    """(delta c)_I = sum_k (-1)^k c_{I - i_k}, restricted to faces where x^u lives."""
    out: dict = {}
    for (face, j, u), c in cochain.items():
        for v in range(nvars):
            if v in face:
                continue
            pos = sum(1 for x in face if x < v)
            big = tuple(sorted(face + (v,)))
            _add(out, (big, j, u), c if pos % 2 == 0 else -c, field)
    return out


def homotopy(cochain: dict, field) -> dict:
    """Cone homotopy: (k c)_J = c_{vJ} for the least v outside neg(u).

    Satisfies delta k + k delta = id on every monomial summand with
    neg(u) != all vertices, so k z solves delta y = z for a cocycle z there.
    """
    out: dict = {}
    for (face, j, u), c in cochain.items():
        v = next((i for i, x in enumerate(u) if x >= 0), None)
        if v is None:
            raise ValueError("cochain has a component in top cohomology")
        if v not in face:
            continue
        pos = face.index(v)
        small = face[:pos] + face[pos + 1:]
        if not small:
            continue
        _add(out, (small, j, u), c if pos % 2 == 0 else -c, field)
    return out


def _top_monomials(n: int, deg: int):
    """Laurent monomials with all exponents negative and total degree ``deg``."""
    k = -deg - (n + 1)
    if k < 0:
        return []
    return [tuple(-x - 1 for x in w) for w in monomial_basis(n, k)]


def top_cohomology_map(d, s: int, n: int, field):
    """Matrix of H^n(C^p(s)) -> H^n(C^{p+1}(s)) in the negative-monomial bases."""
    src = [(j, u) for j, a in enumerate(d.source) for u in _top_monomials(n, a + s)]
    tgt = [(i, u) for i, b in enumerate(d.target) for u in _top_monomials(n, b + s)]
    tindex = {key: r for r, key in enumerate(tgt)}
    mat = field.zeros((len(tgt), len(src)))
    for (i, j), f in d.entries.items():
        for col, (jj, u) in enumerate(src):
            if jj != j:
                continue
            for e, fc in f.terms.items():
                r = tindex.get((i, tuple(a + b for a, b in zip(u, e))))
                if r is not None:
                    mat[r, col] = field.scalar(mat[r, col] + fc)
    return src, mat


def corner_images(c: LineComplex, p: int, s: int) -> np.ndarray:
    """Columns: d_{n+1} applied to a basis of the row-n cycles at position p.

    Each column is a vector of sections of c^{p+n+1}(s) in the monomial basis.
    """
    n = c.ring.n
    field = c.ring.field
    full = tuple(range(n + 1))
    q = p + n + 1
    tgt_terms = c.term(q)
    offs = np.concatenate([[0], np.cumsum([len(monomial_basis(n, b + s)) if b + s >= 0 else 0
                                           for b in tgt_terms])]).astype(int)
    d0 = c.diff(p)
    if d0 is None:
        src = [(j, u) for j, a in enumerate(c.term(p)) for u in _top_monomials(n, a + s)]
        ker = field.identity(len(src))
    else:
        src, mat = top_cohomology_map(d0, s, n, field)
        ker = kernel_basis(mat, field) if mat.shape[0] else field.identity(len(src))
    cols = []
    for k in range(ker.shape[1]):
        y = {(full, j, u): ker[r, k] for r, (j, u) in enumerate(src) if ker[r, k]}
        for step in range(n):
            z = apply_diff(c.diff(p + step), y, field)
            # drop the cohomology part, which vanishes for a cycle in row n
            y = homotopy(z, field)
        z = apply_diff(c.diff(p + n), y, field)
        vec = field.zeros(int(offs[-1]))
        for (face, i, u), val in z.items():
            if face != (0,):
                continue
            if min(u) < 0:
                raise AssertionError("zig-zag produced a non-global section")
            idx = _index_map(n, sum(u))[u]
            vec[offs[i] + idx] = val
        cols.append(vec)
    if not cols:
        return field.zeros((int(offs[-1]), 0))
    return np.column_stack(cols)


def corner_rank(c: LineComplex, p: int, s: int) -> int:
    """Rank of d_{n+1}: E^{p,n} -> E^{p+n+1,0} for the complex twisted by s."""
    n = c.ring.n
    field = c.ring.field
    q = p + n + 1
    if not (c.lo <= p and q <= c.hi):
        return 0
    imgs = corner_images(c, p, s)
    if imgs.shape[1] == 0 or imgs.shape[0] == 0:
        return 0
    prev = c.diff(q - 1)
    b = prev.graded(s) if prev is not None else field.zeros((imgs.shape[0], 0))
    if b.shape[1] == 0:
        return rank(imgs, field)
    return rank(np.hstack([imgs, b]), field) - rank(b, field)
