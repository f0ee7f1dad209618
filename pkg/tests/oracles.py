"""Slow, independent reference implementations used to check the engine.

None of these import pureres; they work on plain Python ints and lists.
"""

from fractions import Fraction
from itertools import product as iproduct
from math import comb


def rank_mod_p(rows, p):
    """Rank by textbook elimination on lists of ints (p = 0 means Q)."""
    m = [[Fraction(x) if p == 0 else x % p for x in row] for row in rows]
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c] if p == 0 else pow(m[r][c], -1, p)
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
                if p:
                    m[i] = [a % p for a in m[i]]
        r += 1
    return r


def count_monomials(nvars, d):
    """Brute-force count of exponent vectors of total degree d."""
    if d < 0:
        return 0
    return sum(1 for e in iproduct(range(d + 1), repeat=nvars) if sum(e) == d)


def bott(n, q, d):
    """dim H^q(P^n, O(d)) by counting Cech monomials.

    H^0 is spanned by monomials with all exponents >= 0, H^n by Laurent
    monomials with all exponents <= -1; nothing else survives.
    """
    if q == 0:
        return count_monomials(n + 1, d)
    if q == n:
        # x^u with u_i <= -1: substitute v_i = -u_i - 1 >= 0, sum v = -d - n - 1
        return count_monomials(n + 1, -d - n - 1)
    return 0


def chi_line(n, d):
    """Riemann-Roch polynomial of O(d): binom(d + n, n) as a polynomial in d."""
    num = 1
    for k in range(1, n + 1):
        num *= d + k
    den = 1
    for k in range(1, n + 1):
        den *= k
    return num // den


def poly_mul(f, g, p):
    """Product of dict polynomials {exponent tuple: coeff} modulo p."""
    out = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = (out.get(e, 0) + c1 * c2) % p
    return {e: c for e, c in out.items() if c}


def binom(a, b):
    return comb(a, b) if 0 <= b <= a else 0


def tits(w, a, b):
    return a * a + b * b - w * a * b
