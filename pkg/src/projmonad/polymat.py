"""Homogeneous polynomials and graded matrices on P^n.

A graded matrix is a morphism between finite direct sums of line
bundles, sum O(e_j) -> sum O(f_i); its (i, j) entry is a homogeneous
form of degree exactly f_i - e_j (the zero form when f_i - e_j < 0).
Taking global sections in a fixed twist turns a graded matrix into a
plain matrix over the field, which is where all rank computations
happen.

Monomials are exponent tuples of length n+1.  The canonical order on
the monomials of a fixed degree is lexicographic with x0 > x1 > ... >
xn, descending; every matrix and printed polynomial uses it, so output
is bit-stable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from random import Random

from .linalg import DenseMatrix
from .scalar import Field, FieldElement

Monomial = tuple[int, ...]


class ParseError(ValueError):
    """Raised on malformed polynomial or twist-list text."""


@lru_cache(maxsize=None)
def monomials_of_degree(n: int, d: int) -> tuple[Monomial, ...]:
    """All exponent tuples on x0..xn of total degree d, canonical order."""
    if d < 0:
        return ()
    if n == 0:
        return ((d,),)
    out = []
    for a in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - a):
            out.append((a,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomials_of_degree(n, d))}


def forms_dimension(n: int, d: int) -> int:
    """dim of the space of degree-d forms on P^n: C(d+n, n) for d >= 0."""
    return comb(d + n, n) if d >= 0 else 0


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_str(m: Monomial) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return "*".join(parts)


class HomogPoly:
    """A homogeneous form of fixed degree in x0..xn over a field.

    terms maps monomials to nonzero coefficients; the zero form has no
    terms but still records its degree (which may then be negative, for
    the forced-zero slots of a graded matrix).
    """

    __slots__ = ("field", "n", "degree", "terms")

    def __init__(self, field: Field, n: int, degree: int, terms: dict[Monomial, FieldElement]):
        clean = {}
        for m, c in terms.items():
            if not c:
                continue
            if len(m) != n + 1 or sum(m) != degree or any(e < 0 for e in m):
                raise ValueError(f"monomial {m} is not of degree {degree} on P^{n}")
            if c.field != field:
                raise ValueError("coefficient from the wrong field")
            clean[m] = c
        self.field = field
        self.n = n
        self.degree = degree
        self.terms = clean

    @classmethod
    def zero(cls, field: Field, n: int, degree: int) -> "HomogPoly":
        return cls(field, n, degree, {})

    @classmethod
    def constant(cls, field: Field, n: int, value: FieldElement) -> "HomogPoly":
        return cls(field, n, 0, {(0,) * (n + 1): value})

    @classmethod
    def variable(cls, field: Field, n: int, i: int) -> "HomogPoly":
        exps = [0] * (n + 1)
        exps[i] = 1
        return cls(field, n, 1, {tuple(exps): field.one})

    @classmethod
    def monomial(cls, field: Field, n: int, m: Monomial, coeff: FieldElement | None = None) -> "HomogPoly":
        return cls(field, n, sum(m), {m: coeff if coeff is not None else field.one})

    def is_zero(self) -> bool:
        return not self.terms

    def _compatible(self, other: "HomogPoly"):
        if self.field != other.field or self.n != other.n:
            raise ValueError("polynomials live on different spaces")

    def __add__(self, other: "HomogPoly") -> "HomogPoly":
        self._compatible(other)
        if self.is_zero():
            return HomogPoly(self.field, self.n, other.degree, dict(other.terms))
        if other.is_zero():
            return HomogPoly(self.field, self.n, self.degree, dict(self.terms))
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degrees")
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m)
            terms[m] = c if s is None else s + c
        return HomogPoly(self.field, self.n, self.degree, terms)

    def __neg__(self) -> "HomogPoly":
        return HomogPoly(self.field, self.n, self.degree, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "HomogPoly") -> "HomogPoly":
        return self + (-other)

    def __mul__(self, other: "HomogPoly") -> "HomogPoly":
        self._compatible(other)
        terms: dict[Monomial, FieldElement] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = monomial_mul(ma, mb)
                c = ca * cb
                s = terms.get(m)
                terms[m] = c if s is None else s + c
        return HomogPoly(self.field, self.n, self.degree + other.degree, terms)

    def scale(self, c: FieldElement) -> "HomogPoly":
        if not c:
            return HomogPoly.zero(self.field, self.n, self.degree)
        return HomogPoly(self.field, self.n, self.degree, {m: c * v for m, v in self.terms.items()})

    def __eq__(self, other):
        # Zero forms are equal whatever their recorded degree.
        if not isinstance(other, HomogPoly) or other.field != self.field or other.n != self.n:
            return False
        if not self.terms and not other.terms:
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        key = self.degree if self.terms else None
        return hash((self.field, self.n, key, tuple(sorted(self.terms.items()))))

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            mono = monomial_str(m)
            cs = str(c)
            neg = cs.startswith("-")
            mag = cs[1:] if neg else cs
            if mono and mag == "1":
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = mag
            if not out:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(out)

    __repr__ = __str__


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x\d+)|(?P<op>[-+*^()]))")


def _tokenize(src: str) -> list[str]:
    toks, pos = [], 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            if src[pos:].strip():
                raise ParseError(f"unexpected character {src[pos:].lstrip()[0]!r} in {src!r}")
            break
        toks.append(m.group(m.lastgroup))
        pos = m.end()
    return toks


class _PolyParser:
    """Recursive descent over +, -, *, ^ and parentheses.

    Works on plain {monomial: raw coefficient} dicts so mixed-degree
    intermediates are allowed; homogeneity is checked at the end.
    """

    def __init__(self, toks: list[str], field: Field, n: int):
        self.toks = toks
        self.i = 0
        self.field = field
        self.n = n

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expr(self) -> dict:
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = {m: -c for m, c in acc.items()}
        while self.peek() in ("+", "-"):
            op = self.take()
            t = self.term()
            for m, c in t.items():
                v = acc.get(m, self.field.zero) + (c if op == "+" else -c)
                if v:
                    acc[m] = v
                elif m in acc:
                    del acc[m]
        return acc

    def term(self) -> dict:
        acc = self.power()
        while self.peek() == "*":
            self.take()
            acc = self._mul(acc, self.power())
        return acc

    def power(self) -> dict:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            e = self.take()
            if e is None or not e.isdigit():
                raise ParseError("exponent must be a nonnegative integer")
            out = {(0,) * (self.n + 1): self.field.one}
            for _ in range(int(e)):
                out = self._mul(out, base)
            return out
        return base

    def atom(self) -> dict:
        t = self.take()
        if t is None:
            raise ParseError("unexpected end of expression")
        if t == "(":
            inner = self.expr()
            if self.take() != ")":
                raise ParseError("unbalanced parentheses")
            return inner
        if t.startswith("x"):
            i = int(t[1:])
            if i > self.n:
                raise ParseError(f"variable {t} out of range for P^{self.n}")
            exps = [0] * (self.n + 1)
            exps[i] = 1
            return {tuple(exps): self.field.one}
        if t[0].isdigit():
            try:
                return {(0,) * (self.n + 1): self.field.parse(t)}
            except Exception as exc:
                raise ParseError(str(exc)) from exc
        raise ParseError(f"unexpected token {t!r}")

    def _mul(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = monomial_mul(ma, mb)
                v = out.get(m, self.field.zero) + ca * cb
                if v:
                    out[m] = v
                elif m in out:
                    del out[m]
        return out


def parse_poly(src: str, field: Field, n: int, degree: int | None = None) -> HomogPoly:
    """Parse a homogeneous form; degree, when given, pins the zero form too."""
    parser = _PolyParser(_tokenize(src), field, n)
    terms = {m: c for m, c in parser.expr().items() if c}
    if parser.peek() is not None:
        raise ParseError(f"trailing input near token {parser.peek()!r}")
    if not terms:
        return HomogPoly.zero(field, n, 0 if degree is None else degree)
    degrees = {sum(m) for m in terms}
    if len(degrees) > 1:
        raise ParseError(f"expression {src!r} is not homogeneous (degrees {sorted(degrees)})")
    d = degrees.pop()
    if degree is not None and d != degree:
        raise ParseError(f"expected degree {degree}, got {d} in {src!r}")
    return HomogPoly(field, n, d, terms)


@dataclass(frozen=True)
class FreeSheaf:
    """A finite direct sum of line bundles sum_j O(e_j) on P^n."""

    n: int
    twists: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "twists", tuple(self.twists))

    @property
    def rank(self) -> int:
        return len(self.twists)

    def dual(self) -> "FreeSheaf":
        """Twisted dual O(e) -> O(-n-1-e), slot order preserved."""
        return FreeSheaf(self.n, tuple(-self.n - 1 - e for e in self.twists))

    def sections_dim(self, t: int) -> int:
        return sum(forms_dimension(self.n, t + e) for e in self.twists)

    def __str__(self):
        return "[" + ",".join(str(e) for e in self.twists) + "]"


def parse_twists(src: str, n: int) -> FreeSheaf:
    s = src.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ParseError(f"twist list must be bracketed: {src!r}")
    body = s[1:-1].strip()
    if not body:
        return FreeSheaf(n, ())
    try:
        return FreeSheaf(n, tuple(int(x) for x in body.split(",")))
    except ValueError as exc:
        raise ParseError(f"bad twist list {src!r}") from exc


class GradedMatrix:
    """A morphism source -> target between free sheaves on the same P^n.

    entries[i][j] maps the j-th summand O(e_j) to the i-th summand
    O(f_i) and must be homogeneous of degree exactly f_i - e_j; slots
    with f_i - e_j < 0 hold the zero form.
    """

    __slots__ = ("field", "source", "target", "entries")

    def __init__(self, field: Field, source: FreeSheaf, target: FreeSheaf,
                 entries: list[list[HomogPoly]] | tuple):
        if source.n != target.n:
            raise ValueError("source and target on different projective spaces")
        rows, cols = target.rank, source.rank
        entries = tuple(tuple(r) for r in entries)
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ValueError(f"entry grid is not {rows}x{cols}")
        for i in range(rows):
            for j in range(cols):
                p = entries[i][j]
                want = target.twists[i] - source.twists[j]
                if p.field != field or p.n != source.n:
                    raise ValueError("entry on the wrong space or field")
                if p.degree != want:
                    raise ValueError(
                        f"entry ({i},{j}) has degree {p.degree}, twists demand {want}")
                if want < 0 and not p.is_zero():
                    raise ValueError(f"entry ({i},{j}) must vanish: negative twist gap")
        self.field = field
        self.source = source
        self.target = target
        self.entries = entries

    @property
    def n(self) -> int:
        return self.source.n

    @property
    def rows(self) -> int:
        return self.target.rank

    @property
    def cols(self) -> int:
        return self.source.rank

    @classmethod
    def zero(cls, field: Field, source: FreeSheaf, target: FreeSheaf) -> "GradedMatrix":
        ent = [[HomogPoly.zero(field, source.n, target.twists[i] - source.twists[j])
                for j in range(source.rank)] for i in range(target.rank)]
        return cls(field, source, target, ent)

    @classmethod
    def identity(cls, field: Field, sheaf: FreeSheaf) -> "GradedMatrix":
        ent = [[HomogPoly.constant(field, sheaf.n, field.one) if i == j
                else HomogPoly.zero(field, sheaf.n, sheaf.twists[i] - sheaf.twists[j])
                for j in range(sheaf.rank)] for i in range(sheaf.rank)]
        return cls(field, sheaf, sheaf, ent)

    def entry(self, i: int, j: int) -> HomogPoly:
        return self.entries[i][j]

    def is_zero(self) -> bool:
        return all(p.is_zero() for row in self.entries for p in row)

    def __eq__(self, other):
        return (
            isinstance(other, GradedMatrix)
            and other.field == self.field
            and other.source == self.source
            and other.target == self.target
            and other.entries == self.entries
        )

    def __hash__(self):
        return hash((self.field, self.source, self.target, self.entries))

    def __add__(self, other: "GradedMatrix") -> "GradedMatrix":
        if other.source != self.source or other.target != self.target:
            raise ValueError("shape mismatch in graded sum")
        ent = [[self.entries[i][j] + other.entries[i][j] for j in range(self.cols)]
               for i in range(self.rows)]
        return GradedMatrix(self.field, self.source, self.target, ent)

    def __neg__(self) -> "GradedMatrix":
        ent = [[-p for p in row] for row in self.entries]
        return GradedMatrix(self.field, self.source, self.target, ent)

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other: "GradedMatrix") -> "GradedMatrix":
        return compose(self, other)

    def __repr__(self):
        return f"GradedMatrix({self.source} -> {self.target})"


def compose(a: GradedMatrix, b: GradedMatrix) -> GradedMatrix:
    """The composite a . b of b: F -> G and a: G -> H."""
    if a.field != b.field:
        raise ValueError("composition across fields")
    if a.source != b.target:
        raise ValueError(f"composition mismatch: {a.source} vs {b.target}")
    ent = []
    for i in range(a.rows):
        row = []
        for j in range(b.cols):
            acc = HomogPoly.zero(a.field, a.n, a.target.twists[i] - b.source.twists[j])
            for k in range(a.cols):
                p, q = a.entries[i][k], b.entries[k][j]
                if p.terms and q.terms:
                    acc = acc + p * q
            row.append(acc)
        ent.append(row)
    return GradedMatrix(a.field, b.source, a.target, ent)


def dual_hom(m: GradedMatrix) -> GradedMatrix:
    """Apply Hom(-, O(-n-1)): transpose the entries, dualize the twists.

    Degrees re-verify automatically: (-n-1-e_j) - (-n-1-f_i) = f_i - e_j.
    """
    ent = [[m.entries[i][j] for i in range(m.rows)] for j in range(m.cols)]
    return GradedMatrix(m.field, m.target.dual(), m.source.dual(), ent)


def sections_matrix(m: GradedMatrix, t: int) -> DenseMatrix:
    """The matrix of H^0(m(t)): degree-(t+e_j) forms -> degree-(t+f_i) forms.

    Blocks follow the twist-list order, monomials the canonical order;
    a summand with t + twist < 0 contributes an empty block.
    """
    n = m.n
    src_dims = [forms_dimension(n, t + e) for e in m.source.twists]
    tgt_dims = [forms_dimension(n, t + f) for f in m.target.twists]
    src_off = [0]
    for d in src_dims:
        src_off.append(src_off[-1] + d)
    tgt_off = [0]
    for d in tgt_dims:
        tgt_off.append(tgt_off[-1] + d)
    rows, cols = tgt_off[-1], src_off[-1]
    zero = m.field.zero
    data = [zero] * (rows * cols)
    for j in range(m.cols):
        d_src = t + m.source.twists[j]
        if d_src < 0:
            continue
        src_monos = monomials_of_degree(n, d_src)
        for i in range(m.rows):
            p = m.entries[i][j]
            if not p.terms:
                continue
            index = monomial_index(n, t + m.target.twists[i])
            for cu, u in enumerate(src_monos):
                col = src_off[j] + cu
                for v, coef in p.terms.items():
                    row = tgt_off[i] + index[monomial_mul(u, v)]
                    data[row * cols + col] = coef
    return DenseMatrix(m.field, rows, cols, data)


def random_poly(field: Field, n: int, degree: int, rng: Random,
                density: float = 1.0) -> HomogPoly:
    """A random form; each monomial appears with the given density."""
    if degree < 0:
        return HomogPoly.zero(field, n, degree)
    terms = {}
    for m in monomials_of_degree(n, degree):
        if density < 1.0 and rng.random() >= density:
            continue
        c = random_scalar(field, rng)
        if c:
            terms[m] = c
    return HomogPoly(field, n, degree, terms)


def random_scalar(field: Field, rng: Random) -> FieldElement:
    from .scalar import PrimeField

    if isinstance(field, PrimeField):
        return field.element(rng.randrange(field.p))
    return field.element(rng.randint(-9, 9))


def random_graded_matrix(field: Field, source: FreeSheaf, target: FreeSheaf,
                         rng: Random, density: float = 1.0) -> GradedMatrix:
    ent = [[random_poly(field, source.n, target.twists[i] - source.twists[j], rng, density)
            for j in range(source.rank)] for i in range(target.rank)]
    return GradedMatrix(field, source, target, ent)
