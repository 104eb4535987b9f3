"""Bounded complexes of twisted free sheaves and their invariants.

A Monad is a complex C^lo -> ... -> C^hi of free sheaves with d.d = 0,
a declared support codimension c and a marked cohomology position (the
convention is position 0).  Dualization applies Hom(-, O(-n-1)) and
reindexes so that a complex resolving a codimension-c sheaf again has
its cohomology at the marked spot; on the underlying data it is an
exact involution.

Hilbert functions of the cohomology sheaf are computed degreewise: in
twist t the cohomology of the section complex at the marked position is
dim ker - rank of adjacent multiplication matrices.  That proxy is only
trusted on a window where it reproduces the Euler polynomial, which
hilbert_poly_of_cohomology enforces.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .hilbert import InterpolationError, IntPoly, euler_poly, interpolate
from .linalg import rank
from .polymat import (
    FreeSheaf,
    GradedMatrix,
    ParseError,
    dual_hom,
    parse_poly,
    parse_twists,
    sections_matrix,
)
from .scalar import GF, QQ, Field


class WindowDisagreementError(RuntimeError):
    """Degreewise Hilbert data refused to match the Euler polynomial."""


class Monad:
    """A complex of free sheaves with declared codimension and marked position."""

    __slots__ = ("field", "n", "lo", "hi", "terms", "diffs", "c", "cohomology_position")

    def __init__(self, field: Field, n: int, terms: dict[int, FreeSheaf],
                 diffs: dict[int, GradedMatrix], c: int, cohomology_position: int):
        if not terms:
            raise ValueError("a monad needs at least one term")
        lo, hi = min(terms), max(terms)
        if set(terms) != set(range(lo, hi + 1)):
            raise ValueError("term indices must be consecutive")
        if not 1 <= c <= n:
            raise ValueError(f"codimension {c} out of range 1..{n}")
        if not lo <= cohomology_position <= hi:
            raise ValueError("cohomology position outside the index range")
        for i, sheaf in terms.items():
            if sheaf.n != n:
                raise ValueError(f"term {i} lives on P^{sheaf.n}, not P^{n}")
        for i, d in diffs.items():
            if i < lo or i >= hi:
                raise ValueError(f"differential at {i} has no adjacent terms")
            if d.field != field:
                raise ValueError(f"differential at {i} over the wrong field")
            if d.source != terms[i] or d.target != terms[i + 1]:
                raise ValueError(f"differential at {i} does not match its terms")
        self.field = field
        self.n = n
        self.lo = lo
        self.hi = hi
        self.terms = dict(terms)
        self.diffs = {i: diffs.get(i, GradedMatrix.zero(field, terms[i], terms[i + 1]))
                      for i in range(lo, hi)}
        self.c = c
        self.cohomology_position = cohomology_position

    @property
    def d(self) -> int:
        """Dimension of the supported locus, n - c."""
        return self.n - self.c

    def diff(self, i: int) -> GradedMatrix | None:
        return self.diffs.get(i)

    def max_twist_magnitude(self) -> int:
        return max((abs(e) for s in self.terms.values() for e in s.twists), default=0)

    def __eq__(self, other):
        return (
            isinstance(other, Monad)
            and other.field == self.field
            and other.n == self.n
            and other.terms == self.terms
            and other.diffs == self.diffs
            and other.c == self.c
            and other.cohomology_position == self.cohomology_position
        )

    def __hash__(self):
        return hash((self.field, self.n, tuple(sorted(self.terms.items())),
                     tuple(sorted(self.diffs.items())), self.c, self.cohomology_position))

    def __repr__(self):
        chain = " -> ".join(str(self.terms[i]) for i in range(self.lo, self.hi + 1))
        return f"Monad(P^{self.n}, {chain})"


def validate(m: Monad) -> list[str]:
    """Report every failure of the complex condition; empty means ok."""
    problems = []
    for i in range(m.lo, m.hi - 1):
        comp = m.diffs[i + 1] @ m.diffs[i]
        if not comp.is_zero():
            problems.append(f"d({i + 1}).d({i}) != 0")
    return problems


def dualize(m: Monad) -> Monad:
    """Hom(-, O(-n-1)) with the codimension-c reindexing i -> -i-c.

    The dual of the term at -i-c sits at i and the differential at i is
    the transpose of the one at -i-c-1; transposition preserves d.d = 0,
    so validity survives.  Applying dualize twice restores the data.
    """
    c = m.c
    terms = {-(i + c): m.terms[i].dual() for i in m.terms}
    diffs = {}
    for i in range(min(terms), max(terms)):
        diffs[i] = dual_hom(m.diffs[-i - c - 1])
    # A complex resolving a codimension-c sheaf at position k extends at
    # least c steps to its left, and then -k lies in the dual range; for
    # data without that headroom the position is clamped into range.
    pos = min(max(-m.cohomology_position, min(terms)), max(terms))
    return Monad(m.field, m.n, terms, diffs, c, pos)


@lru_cache(maxsize=8192)
def _sections_rank(d: GradedMatrix, t: int) -> int:
    return rank(sections_matrix(d, t))


def cohomology_hilbert_function(m: Monad, position: int, t_range) -> list[int]:
    """Degreewise cohomology dimensions at one position across twists.

    For each t: dim ker of the outgoing section matrix minus the rank
    of the incoming one; missing maps at the boundary count as zero.
    """
    if not m.lo <= position <= m.hi:
        raise ValueError(f"position {position} outside [{m.lo}, {m.hi}]")
    out = []
    for t in t_range:
        dim = m.terms[position].sections_dim(t)
        d_out = m.diffs.get(position)
        kdim = dim - _sections_rank(d_out, t) if d_out is not None else dim
        d_in = m.diffs.get(position - 1)
        r_in = _sections_rank(d_in, t) if d_in is not None else 0
        out.append(kdim - r_in)
    return out


def hilbert_poly_of_cohomology(m: Monad) -> IntPoly:
    """Hilbert polynomial of the cohomology sheaf, window checked.

    Samples the degreewise Hilbert function on [T, T+n+1] with
    T = (n+1) + max |twist|, interpolates with degree bound n - c, and
    insists the result match the Euler polynomial (with the sign that
    the marked position dictates).  One retry on a window n+2 wider,
    then the disagreement is reported as an error.
    """
    target = euler_poly(m)
    if m.cohomology_position % 2:
        target = -target
    t0 = (m.n + 1) + m.max_twist_magnitude()
    width = m.n + 2
    for extra in (0, m.n + 2):
        window = range(t0, t0 + width + extra)
        values = cohomology_hilbert_function(m, m.cohomology_position, window)
        try:
            poly = interpolate(values, t0, m.n - m.c)
        except InterpolationError:
            continue
        if poly == target:
            return poly
    raise WindowDisagreementError(
        f"window disagreement: degreewise values do not match {target}")


def exactness_check(m: Monad, positions, t_range) -> dict[int, bool]:
    """Window test: a position passes when its Hilbert data vanishes.

    Vanishing on a window is evidence, not proof, of exactness there.
    """
    ts = list(t_range)
    return {pos: not any(cohomology_hilbert_function(m, pos, ts)) for pos in positions}


def minimality_check(m: Monad) -> bool:
    """True when no differential carries a nonzero constant between equal twists."""
    for i in range(m.lo, m.hi):
        d = m.diffs[i]
        for r, f in enumerate(d.target.twists):
            for s, e in enumerate(d.source.twists):
                if f == e and not d.entries[r][s].is_zero():
                    return False
    return True


def sheaf_cohomology(m: Monad, t: int = 0) -> list[int]:
    """All of h^0..h^n of the cohomology sheaf twisted by t.

    Works with the section complexes in degrees 0 and n of every term
    (line bundles have no middle cohomology); the two rows cannot
    interact as long as no top-row class sits n+1 steps left of a
    bottom-row class, which is checked.  Requires the monad to be exact
    away from its marked position.
    """
    n = m.n
    rank0 = {i: _sections_rank(d, t) for i, d in m.diffs.items()}
    rankn = {i: _sections_rank(dual_hom(d), -t) for i, d in m.diffs.items()}
    row0, rown = {}, {}
    for j in range(m.lo, m.hi + 1):
        row0[j] = (m.terms[j].sections_dim(t)
                   - rank0.get(j, 0) - rank0.get(j - 1, 0))
        rown[j] = (m.terms[j].dual().sections_dim(-t)
                   - rankn.get(j, 0) - rankn.get(j - 1, 0))
    if m.hi - m.lo >= n + 1:
        for j in range(m.lo, m.hi + 1):
            if rown.get(j) and row0.get(j + n + 1):
                raise ValueError(
                    "section rows may interact; cohomology not determined by ranks")
    pos = m.cohomology_position
    return [row0.get(q + pos, 0) + rown.get(q + pos - n, 0) for q in range(n + 1)]


@dataclass(frozen=True)
class CohTable:
    """Nonnegative table h[i][p] = h^{i+p}(F tensor Omega^p(p)) on P^n."""

    n: int
    d: int
    entries: tuple[tuple[int, int, int], ...]

    def __init__(self, n: int, d: int, entries):
        if isinstance(entries, dict):
            items = [(i, p, h) for (i, p), h in entries.items()]
        else:
            items = [(i, p, h) for (i, p, h) in entries]
        cleaned = {}
        for i, p, h in items:
            if not isinstance(h, int) or h < 0:
                raise ValueError(f"entry at ({i}, {p}) must be a nonnegative integer")
            if not 0 <= p <= n:
                raise ValueError(f"column {p} out of range for P^{n}")
            if not 0 <= i + p <= n:
                raise ValueError(f"({i}, {p}) addresses cohomology degree {i + p}")
            if h:
                cleaned[(i, p)] = h
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", d)
        object.__setattr__(
            self, "entries",
            tuple((i, p, h) for (i, p), h in sorted(cleaned.items())))

    def h(self, i: int, p: int) -> int:
        for ei, ep, eh in self.entries:
            if ei == i and ep == p:
                return eh
        return 0


def beilinson_shape(table: CohTable) -> dict[int, FreeSheaf]:
    """Terms of the canonical monad with the given table: h[i][p] copies
    of O(-p) in position i, twists descending inside each term."""
    shape = {}
    for i in range(-table.n, table.n + 1):
        twists = []
        for p in range(table.n + 1):
            twists.extend([-p] * table.h(i, p))
        shape[i] = FreeSheaf(table.n, tuple(twists))
    return shape


def dual_table_index(i: int, p: int, n: int, c: int) -> tuple[int, int]:
    """Index half of the table duality; an involution on (i, p)."""
    return (-i - c, n - p)


def dual_beilinson_table(table: CohTable) -> CohTable:
    """Table of the twisted dual sheaf F^D(1) from the table of F.

    Pure bookkeeping: the output (i, p) entry reads the input at
    (-i-c, n-p), with c = n - d; no linear algebra is involved.
    """
    n, d = table.n, table.d
    c = n - d
    entries = {}
    for p in range(n + 1):
        for i in range(-p, n - p + 1):
            h = table.h(*dual_table_index(i, p, n, c))
            if h:
                entries[(i, p)] = h
    return CohTable(n, d, entries)


# ---------------------------------------------------------------------------
# Text format.  Canonical layout:
#
#   P 3 over Q
#   term -2: [-3,-3]
#   ...
#   diff -2:
#   x0^2; x1^2
#   ...
#   codim 2
#   cohomology_at 0
#
# Differential blocks with no entries (a zero-rank side) are omitted.


def format_monad(m: Monad) -> str:
    lines = [f"P {m.n} over {m.field!r}"]
    for i in range(m.lo, m.hi + 1):
        lines.append(f"term {i}: {m.terms[i]}")
    for i in range(m.lo, m.hi):
        d = m.diffs[i]
        if d.rows == 0 or d.cols == 0:
            continue
        lines.append(f"diff {i}:")
        for r in range(d.rows):
            lines.append("; ".join(str(d.entries[r][s]) for s in range(d.cols)))
    lines.append(f"codim {m.c}")
    lines.append(f"cohomology_at {m.cohomology_position}")
    return "\n".join(lines) + "\n"


def _parse_header(line: str) -> tuple[int, Field]:
    parts = line.split()
    if len(parts) != 4 or parts[0] != "P" or parts[2] != "over":
        raise ParseError(f"bad header {line!r}")
    try:
        n = int(parts[1])
    except ValueError as exc:
        raise ParseError(f"bad dimension in header {line!r}") from exc
    return n, parse_field(parts[3])


def parse_field(token: str) -> Field:
    """Field tokens: 'Q', 'F<p>', or the flag form 'Fp:<p>'."""
    tok = token.strip()
    if tok == "Q":
        return QQ
    if tok.startswith("Fp:"):
        tok = "F" + tok[3:]
    if tok.startswith("F") and tok[1:].isdigit():
        try:
            return GF(int(tok[1:]))
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
    raise ParseError(f"unknown field {token!r}")


def parse_monad(text: str) -> Monad:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty monad file")
    n, field = _parse_header(lines[0])
    terms: dict[int, FreeSheaf] = {}
    raw_diffs: dict[int, list[str]] = {}
    c = pos = None
    current: list[str] | None = None
    for line in lines[1:]:
        if line.startswith("term "):
            head, _, rest = line.partition(":")
            try:
                idx = int(head[5:])
            except ValueError as exc:
                raise ParseError(f"bad term line {line!r}") from exc
            terms[idx] = parse_twists(rest, n)
            current = None
        elif line.startswith("diff "):
            head = line.rstrip(":")
            try:
                idx = int(head[5:])
            except ValueError as exc:
                raise ParseError(f"bad diff line {line!r}") from exc
            current = raw_diffs.setdefault(idx, [])
        elif line.startswith("codim "):
            c = int(line.split()[1])
            current = None
        elif line.startswith("cohomology_at "):
            pos = int(line.split()[1])
            current = None
        elif current is not None:
            current.append(line)
        else:
            raise ParseError(f"unexpected line {line!r}")
    if c is None or pos is None:
        raise ParseError("missing codim or cohomology_at")
    diffs = {}
    for idx, rows in raw_diffs.items():
        if idx not in terms or idx + 1 not in terms:
            raise ParseError(f"diff {idx} without surrounding terms")
        src, tgt = terms[idx], terms[idx + 1]
        if len(rows) != tgt.rank:
            raise ParseError(
                f"diff {idx}: expected {tgt.rank} rows, got {len(rows)}")
        entries = []
        for r, row in enumerate(rows):
            cells = row.split(";")
            if len(cells) != src.rank:
                raise ParseError(
                    f"diff {idx} row {r}: expected {src.rank} entries")
            entries.append([
                parse_poly(cell, field, n, tgt.twists[r] - src.twists[s])
                for s, cell in enumerate(cells)
            ])
        try:
            diffs[idx] = GradedMatrix(field, src, tgt, entries)
        except ValueError as exc:
            raise ParseError(f"diff {idx}: {exc}") from exc
    try:
        return Monad(field, n, terms, diffs, c, pos)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
