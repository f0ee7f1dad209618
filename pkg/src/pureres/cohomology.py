"""Sheaf cohomology dimensions for complexes of line bundles on P^n.

The hypercohomology spectral sequence of a complex K of sums of line bundles
has E_1^{p,q} = H^q(K^p), which is nonzero only in rows q = 0 and q = n.  Row 0
is the complex of graded pieces; row n is (by Serre duality) the transpose of
row 0 of the dual complex in the complementary twist.  The only possible
higher differential runs from row n to row 0 and skips n + 1 columns.  By
default its rank is computed (see :mod:`pureres.corner`); with
``exact_corners=False`` the affected entries are reported as
:class:`Indeterminate` bounds instead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .complexes import LineComplex, dualize
from .corner import corner_rank
from .errors import IndeterminateEntry
from .field import rank
from .ring import dim_forms


@dataclass(frozen=True)
class Indeterminate:
    lo: int
    hi: int

    def __str__(self):
        return f"{self.lo}..{self.hi}"

    def to_json(self):
        return str(self)


def is_exact(value) -> bool:
    return not isinstance(value, Indeterminate)


def bott_line(n: int, q: int, d: int) -> int:
    """dim H^q(P^n, O(d))."""
    if not 0 <= q <= n:
        raise ValueError("cohomological degree out of range")
    if q == 0:
        return dim_forms(n, d)
    if q == n:
        return dim_forms(n, -d - n - 1)
    return 0


def euler_characteristic(c: LineComplex, t: int = 0) -> int:
    """sum_k (-1)^k dim H^k(c(t)) computed termwise from Bott's formula."""
    n = c.ring.n
    total = 0
    for p in c.positions:
        chi = sum(bott_line(n, 0, a + t) + (-1) ** n * bott_line(n, n, a + t) for a in c.term(p))
        total += (-1) ** (p % 2) * chi
    return total


class _RankOracle:
    """Memoised ranks of row-0 differentials of ``c`` twisted by ``s``."""

    def __init__(self, c: LineComplex):
        self.c = c
        self.field = c.ring.field
        self._cache: dict = {}

    def dim(self, p: int, s: int) -> int:
        n = self.c.ring.n
        return sum(dim_forms(n, a + s) for a in self.c.term(p))

    def rank(self, p: int, s: int) -> int:
        """Rank of d^p: position p -> p+1 on global sections of the twist by s."""
        key = (p, s)
        if key not in self._cache:
            d = self.c.diff(p)
            if d is None or d.is_zero() or self.dim(p, s) == 0 or self.dim(p + 1, s) == 0:
                self._cache[key] = 0
            else:
                self._cache[key] = rank(d.graded(s), self.field)
        return self._cache[key]

    def e2(self, p: int, s: int) -> int:
        dim = self.dim(p, s)
        if dim == 0:
            return 0
        return dim - self.rank(p, s) - self.rank(p - 1, s)


class Hypercohomology:
    """Lazy hypercohomology of a line-bundle complex across twists.

    One instance keeps rank caches for both rows, so filling a whole
    cohomology table reuses work.
    """

    def __init__(self, c: LineComplex, exact_corners: bool = True):
        self.c = c
        self.n = c.ring.n
        self.exact_corners = exact_corners
        self._corners: dict = {}
        self.row0 = _RankOracle(c)
        # row n of c(s) at position p is dual to row 0 of dual(c) at -p, twist -s-n-1
        self.rowd = _RankOracle(dualize(c))

    def e2_row0(self, p: int, s: int) -> int:
        if not self.c.lo <= p <= self.c.hi:
            return 0
        return self.row0.e2(p, s)

    def e2_rown(self, p: int, s: int) -> int:
        if not self.c.lo <= p <= self.c.hi:
            return 0
        return self.rowd.e2(-p, -s - self.n - 1)

    def corner(self, p: int, s: int) -> int:
        """Rank of d_{n+1}: E^{p,n} -> E^{p+n+1,0}, zero when either end is."""
        if not self.e2_rown(p, s) or not self.e2_row0(p + self.n + 1, s):
            return 0
        key = (p, s)
        if key not in self._corners:
            self._corners[key] = corner_rank(self.c, p, s)
        return self._corners[key]

    def degree(self, k: int, s: int = 0):
        """dim of H^k of the complex twisted by ``s`` (int or Indeterminate)."""
        n = self.n
        top = self.e2_row0(k, s)
        bottom = self.e2_rown(k - n, s)
        total = top + bottom
        # d_{n+1} into E^{k,0} from E^{k-n-1,n}, and out of E^{k-n,n} into E^{k+1,0}
        bound_in = min(top, self.e2_rown(k - n - 1, s))
        bound_out = min(bottom, self.e2_row0(k + 1, s))
        if not bound_in and not bound_out:
            return total
        if not self.exact_corners:
            return Indeterminate(max(total - bound_in - bound_out, 0), total)
        return total - self.corner(k - n - 1, s) - self.corner(k - n, s)

    def all_degrees(self, s: int = 0) -> dict:
        c = self.c
        return {k: self.degree(k, s) for k in range(c.lo, c.hi + self.n + 1)}


def hypercohomology(c: LineComplex, s: int = 0, degrees=None, exact_corners: bool = True
                    ) -> dict:
    """{k: dim H^k(c(s))} for the requested degrees (default: every possible one)."""
    h = Hypercohomology(c, exact_corners)
    if degrees is None:
        return h.all_degrees(s)
    return {k: h.degree(k, s) for k in degrees}


@dataclass
class CohomologyTable:
    label: str
    n: int
    tmin: int
    tmax: int
    h: dict = field(default_factory=dict)  # h[q][t]
    note: str = ""

    def __getitem__(self, qt):
        q, t = qt
        return self.h[q][t]

    def twists(self):
        return range(self.tmin, self.tmax + 1)

    def to_tsv(self) -> str:
        lines = ["q\\t\t" + "\t".join(str(t) for t in self.twists())]
        for q in range(self.n + 1):
            lines.append(f"{q}\t" + "\t".join(str(self.h[q][t]) for t in self.twists()))
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "n": self.n,
            "window": [self.tmin, self.tmax],
            "h": {str(q): {str(t): (v if is_exact(v) else str(v)) for t, v in row.items()}
                  for q, row in self.h.items()},
            "note": self.note,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def regularity_bound(c: LineComplex) -> int:
    """max over positions p of (p - min twist of c^p).

    For a presentation (a left resolution) this bounds the Castelnuovo-Mumford
    regularity of the cokernel.  For other complexes it is only a starting
    guess for :func:`cm_regularity`.
    """
    return max(p - min(c.term(p)) for p in c.positions if c.term(p))


def intermediate_window(c: LineComplex) -> tuple[int, int]:
    """Twists outside which H^q(E(t)) = 0 for all 1 <= q <= n-1.

    H^q(E(t)) vanishes for t >= reg(E) - q and, by Serre duality, for
    t <= -1 - q - reg(E^*).  Both regularities are computed, not estimated.
    """
    n = c.ring.n
    return -(n - 1) - cm_regularity(dualize(c)), cm_regularity(c) - 2


def default_window(c: LineComplex, slack: int | None = None) -> tuple[int, int]:
    tw = c.all_twists()
    if slack is None:
        slack = len(c.terms)
    return -max(tw) - c.ring.n - 1 - slack, -min(tw) + slack


def cohomology_table(c: LineComplex, window=None, qs=None, engine: Hypercohomology | None = None
                     ) -> CohomologyTable:
    """h[q][t] = dim H^q(E(t)) for the sheaf E that ``c`` represents in position 0."""
    if window is None:
        window = default_window(c)
    tmin, tmax = window
    n = c.ring.n
    eng = engine or Hypercohomology(c)
    qs = range(n + 1) if qs is None else qs
    h = {q: {t: eng.degree(q, t) for t in range(tmin, tmax + 1)} for q in qs}
    lo, hi = intermediate_window(c)
    note = (f"H^q for 1<=q<=n-1 vanishes outside twists [{lo}, {hi}] by regularity of E and E^*")
    return CohomologyTable(c.label, n, tmin, tmax, h, note)


def _top_witness(c: LineComplex, eng: "Hypercohomology"):
    """Shortcut for a resolution of length L < n - 1 ending at position 0.

    Splitting it into short exact sequences gives H^q(E(t)) = 0 for
    1 <= q < n - L, so a single nonzero H^{n-L}(E(t)) pins hd(E) = L.  Such an
    entry can only come from H^n of the leftmost term, which is nonzero for
    t <= -n-1-min(C^{-L}); a few twists below that are tried.
    """
    n = c.ring.n
    if c.hi != 0 or not c.term(c.lo):
        return None
    L = -c.lo
    q = n - L
    if not 1 <= q <= n - 1:
        return None
    top = -n - 1 - min(c.term(c.lo))
    for t in range(top, top - n - 2, -1):
        v = eng.degree(q, t)
        if is_exact(v) and v:
            return L, (q, t, v)
    return None


def homological_dimension(c: LineComplex, window=None):
    """Least d with H^q_*(E) = 0 for 1 <= q <= n-d-1; returns (d, witness).

    The witness is (q, t, dim) with q = n - d and dim H^q(E(t)) != 0, showing
    hd(E) > d - 1; it is None when d = 0.
    """
    n = c.ring.n
    eng = Hypercohomology(c)
    found = _top_witness(c, eng) if window is None else None
    if found is not None:
        return found
    if window is None:
        window = intermediate_window(c)
    tmin, tmax = window
    # smallest q in 1..n-1 with a nonzero entry determines hd = n - q
    for q in range(1, n):
        for t in range(tmin, tmax + 1):
            v = eng.degree(q, t)
            if not is_exact(v):
                raise IndeterminateEntry(f"H^{q}({c.label}({t})) = {v}")
            if v:
                return n - q, (q, t, v)
    return 0, None


def cm_regularity(c: LineComplex, max_steps: int = 200) -> int:
    """Least m with H^q(E(m-q)) = 0 for all q >= 1, E the sheaf ``c`` represents.

    Being m-regular implies (m+1)-regular, so it is enough to find one regular
    value (searching upward from :func:`regularity_bound`) and then walk down.
    """
    n = c.ring.n
    eng = Hypercohomology(c)

    def regular(m):
        for q in range(1, n + 1):
            v = eng.degree(q, m - q)
            if not is_exact(v):
                raise IndeterminateEntry(f"H^{q}({c.label}({m - q})) = {v}")
            if v:
                return False
        return True

    m = regularity_bound(c)
    steps = 0
    while not regular(m):
        m += 1
        steps += 1
        if steps > max_steps:
            raise IndeterminateEntry(f"no regular twist found for {c.label} below {m}")
    floor = m - max_steps
    while regular(m - 1):
        m -= 1
        if m < floor:
            raise IndeterminateEntry(f"{c.label} looks regular in every twist (zero sheaf?)")
    return m


def les_identity_holds(sub: LineComplex, quo: LineComplex, q: int, window) -> list:
    """Twists in ``window`` where dim H^q(quo(t)) != dim H^{q+1}(sub(t))."""
    a, b = Hypercohomology(quo), Hypercohomology(sub)
    return [t for t in range(window[0], window[1] + 1) if a.degree(q, t) != b.degree(q + 1, t)]
