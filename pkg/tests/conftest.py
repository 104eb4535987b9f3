"""Shared helpers: independent oracles and random complex generators.

The oracles here deliberately avoid the elimination code in
projmonad.linalg: determinants come from a subset DP over column
choices, ranks from a largest-nonzero-minor search, and the catalog
cohomology of line bundles on a line is written down in closed form.
"""

from math import comb
from random import Random

import pytest

from projmonad.autgroup import act, random_element
from projmonad.complexes import direct_sum, koszul_monad
from projmonad.monad import CohTable, Monad
from projmonad.polymat import FreeSheaf, random_graded_matrix
from projmonad.scalar import GF, QQ, PrimeField


def det_oracle(field, rows):
    """Determinant by the column-subset DP (no elimination involved).

    Works on raw values (Fraction or residue) for speed; the prime
    field reduction happens at the end.
    """
    n = len(rows)
    raw = [[x.value for x in row] for row in rows]
    if n == 0:
        return 1
    acc = {0: 1}
    for r in range(n):
        nxt = {}
        for mask, val in acc.items():
            if not val:
                continue
            for c in range(n):
                bit = 1 << c
                if mask & bit:
                    continue
                entry = raw[r][c]
                if not entry:
                    continue
                inversions = bin(mask >> (c + 1)).count("1")
                term = -val * entry if inversions % 2 else val * entry
                key = mask | bit
                nxt[key] = nxt.get(key, 0) + term
        acc = nxt
    det = acc.get((1 << n) - 1, 0)
    if isinstance(field, PrimeField):
        det = det % field.p
    return det


def confirm_rank_by_minors(field, rows, cols_count, r) -> bool:
    """Rank certificate: some r-minor is nonzero, all (r+1)-minors vanish."""
    from itertools import combinations

    m = len(rows)

    def some_nonzero(k):
        for ri in combinations(range(m), k):
            for ci in combinations(range(cols_count), k):
                if det_oracle(field, [[rows[i][j] for j in ci] for i in ri]):
                    return True
        return False

    if r > min(m, cols_count) or r < 0:
        return False
    if r > 0 and not some_nonzero(r):
        return False
    if r < min(m, cols_count) and some_nonzero(r + 1):
        return False
    return True


def rank_oracle(field, rows, cols_count):
    """Largest k with a nonzero k x k minor (full search; small inputs)."""
    from itertools import combinations

    m = len(rows)
    for k in range(min(m, cols_count), 0, -1):
        for ri in combinations(range(m), k):
            for ci in combinations(range(cols_count), k):
                if det_oracle(field, [[rows[i][j] for j in ci] for i in ri]):
                    return k
    return 0


def h_p1(q: int, d: int) -> int:
    """Cohomology of O(d) on a line: the complete closed form."""
    if q == 0:
        return d + 1 if d >= 0 else 0
    if q == 1:
        return -d - 1 if d <= -2 else 0
    return 0


def _comb0(a: int, b: int) -> int:
    return comb(a, b) if 0 <= b <= a else 0


def line_cohomology_table(n: int, a: int) -> CohTable:
    """Catalog table of O_L(a), L a line in P^n, from closed forms only.

    The restriction of the twisted p-forms to the line splits as
    C(n-1, p-1) O_L(-1) + C(n-1, p) O_L, so every entry is a pair of
    line cohomology numbers.
    """
    entries = {}
    for p in range(n + 1):
        for q in (0, 1):
            h = _comb0(n - 1, p - 1) * h_p1(q, a - 1) + _comb0(n - 1, p) * h_p1(q, a)
            if h:
                entries[(q - p, p)] = h
    return CohTable(n, 1, entries)


def random_terms(rng: Random, n: int, length: int, lo_twist=-5, hi_twist=2):
    return [FreeSheaf(n, tuple(rng.randint(lo_twist, hi_twist)
                               for _ in range(rng.randint(0, 3))))
            for _ in range(length)]


def random_monad(rng: Random, field=QQ) -> Monad:
    """Arbitrary complex data: random twists, dense-ish random entries,
    random declared codimension; d.d = 0 is NOT imposed."""
    n = rng.randint(1, 4)
    c = rng.randint(1, n)
    lo = rng.randint(-3, 0)
    hi = lo + rng.randint(0, 3)
    terms = {}
    prev = None
    for i in range(lo, hi + 1):
        terms[i] = FreeSheaf(n, tuple(rng.randint(-5, 2) for _ in range(rng.randint(0, 3))))
        prev = terms[i]
    diffs = {}
    for i in range(lo, hi):
        if rng.random() < 0.3:
            continue  # leave a zero differential
        diffs[i] = random_graded_matrix(field, terms[i], terms[i + 1], rng, density=0.6)
    pos = rng.randint(lo, hi)
    return Monad(field, n, terms, diffs, c, pos)


def random_valid_monad(rng: Random, field=QQ) -> Monad:
    """A complex with d.d = 0: scrambled direct sums of Koszul pieces."""
    n = rng.randint(2, 3)
    pieces = []
    for _ in range(rng.randint(1, 2)):
        size = rng.randint(1, n)
        variables = sorted(rng.sample(range(n + 1), size + 1 if size < n else size))
        pieces.append(koszul_monad(field, n, variables, twist=rng.randint(-2, 1)))
    m = pieces[0]
    for extra in pieces[1:]:
        m = direct_sum(m, extra)
    g = random_element(field, m, seed=rng.randrange(1 << 30), density=0.5)
    return act(g, m)


@pytest.fixture
def rng():
    return Random(20240811)


@pytest.fixture
def f101():
    return GF(101)
