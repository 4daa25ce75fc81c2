"""Pruned enumeration of bounded-quotient rationals and their continuants.

The object enumerated is the orbit of e2 = (0,1)^t under the semigroup
generated by (0 1; 1 a), a in the alphabet: equivalently all rationals
b/d admitting a continued-fraction spelling over the alphabet.  Depth
first extension of words prunes exactly when the continuant d reaches
the bound N, which is sound because d strictly increases along every
extension.

Spelling conventions.  Every rational except 1 has two CF spellings,
the canonical one (last quotient >= 2) and its trailing-1 twin.  Which
spellings are admitted changes the enumerated set, and the literature
is not uniform about it:

  * "any"        -- b/d is in when either spelling lies over the
                    alphabet.  This matches the semigroup orbit;
                    e.g. for alphabet {1} it yields all consecutive
                    Fibonacci ratios [1,1,...,1].
  * "canonical"  -- only the canonical spelling counts.  This is the
                    convention behind the classical exceptional set
                    {6, 54, 150} for the alphabet {1,2,3,4}: the word
                    [1,4,1] spells 5/6, so 6 is reachable as an orbit
                    point, yet 5/6 = [1,5] canonically and 6 counts as
                    an exception.
  * "even"       -- only the even-length spelling counts (the index-2
                    sub-semigroup of determinant +1 words).  Agrees
                    with "canonical" on which continuants appear for
                    full alphabets {1..A}.

Defaults: enumeration and multiplicity tables use "any" (the orbit);
`exceptions` uses "canonical" (the classical convention).  Each rational
is visited exactly once regardless of convention; the `representative`
switch on multiplicity tables additionally counts a rational with
weight 2 when both of its spellings lie over the alphabet ("orbit"
counting of words, versus the default "canonical" counting of values).
"""

from __future__ import annotations

import bisect
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, NamedTuple, Sequence

import numpy as np

from .cfcore import Alphabet, Word
from .errors import InputError

SPELLINGS = ("any", "canonical", "even")


class OrbitPoint(NamedTuple):
    b: int
    d: int
    word: Word  # the visited spelling, a word over the alphabet

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.b, self.d)


def _check_spellings(spellings: str) -> str:
    if spellings not in SPELLINGS:
        raise InputError(f"spellings must be one of {SPELLINGS}, got {spellings!r}")
    return spellings


def _emit_test(spellings: str, letters: frozenset[int]) -> Callable:
    """Predicate deciding whether the visited word is the representative
    spelling of its value under the given convention."""
    if spellings == "canonical":
        return lambda w, a: a >= 2
    if spellings == "even":
        return lambda w, a: len(w) % 2 == 0
    # "any": canonical words, plus trailing-1 words whose twin leaves
    # the alphabet (so each member rational is emitted exactly once)
    return lambda w, a: a >= 2 or (len(w) >= 2 and (w[-2] + 1) not in letters)


def _walk(alphabet, N: int, visit: Callable[[int, int, Word], None],
          spellings: str = "any", prefix: Word = ()) -> None:
    """DFS over words over the alphabet with continuant < N.

    Calls visit(b, d, word) once per member rational (per `spellings`).
    `prefix` restricts the walk to words starting with that prefix
    (used for parallel partitioning); the prefix itself is visited.
    """
    letters = Alphabet.of(alphabet).letters
    lset = frozenset(letters)
    emit = _emit_test(_check_spellings(spellings), lset)
    if N < 2:
        return

    # state: previous and current convergent columns of the word matrix
    def rec(pp: int, qp: int, p: int, q: int, w: Word) -> None:
        for a in letters:
            nq = qp + a * q
            if nq >= N:
                break  # letters ascend and q grows with a: no more fits
            np_ = pp + a * p
            nw = w + (a,)
            if nw != (1,) and emit(nw, a):
                visit(np_, nq, nw)
            rec(p, q, np_, nq, nw)

    pp, qp, p, q = 1, 0, 0, 1
    w: Word = ()
    for a in prefix:
        pp, qp, p, q, w = p, q, pp + a * p, qp + a * q, w + (a,)
    if q >= N:
        return
    if prefix and w != (1,) and emit(w, w[-1]):
        visit(p, q, w)
    rec(pp, qp, p, q, w)


def enumerate_orbit(alphabet, N: int, spellings: str = "any") -> Iterator[OrbitPoint]:
    """Stream every member b/d with d < N, exactly once, as OrbitPoints."""
    out: list[OrbitPoint] = []
    buf = out.append

    # generator facade over the callback walker, in DFS batches per
    # top-level letter so memory stays proportional to one subtree
    letters = Alphabet.of(alphabet).letters
    for a in letters:
        out.clear()
        _walk(alphabet, N, lambda b, d, w: buf(OrbitPoint(b, d, w)),
              spellings=spellings, prefix=(a,))
        yield from out


@dataclass
class MultiplicityTable:
    """Fiber counts d -> #{b : b/d enumerated}, with the bound N."""

    N: int
    counts: dict[int, int]
    spellings: str = "any"
    representative: str = "canonical"

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def denominators(self) -> list[int]:
        return sorted(self.counts)

    def count(self, d: int) -> int:
        return self.counts.get(d, 0)

    def exceptions(self) -> list[int]:
        return [d for d in range(2, self.N) if d not in self.counts]


def _count_subtree(args) -> Counter:
    letters, N, spellings, representative, prefix = args
    lset = frozenset(letters)
    cnt: Counter = Counter()
    if representative == "orbit" and spellings == "any":
        # weight 2 when both spellings of the value lie over the alphabet
        def visit(b, d, w):
            both = w[-1] >= 2 and (w[-1] - 1) in lset and 1 in lset
            cnt[d] += 2 if both else 1
    else:
        def visit(b, d, w):
            cnt[d] += 1
    _walk(Alphabet.of(letters), N, visit, spellings=spellings, prefix=prefix)
    return cnt


def multiplicity_table(alphabet, N: int, spellings: str = "any",
                       representative: str = "canonical",
                       threads: int = 1) -> MultiplicityTable:
    """Aggregate the enumeration into fiber counts.

    representative="canonical" counts each rational once;
    representative="orbit" counts each word over the alphabet (so a
    value with both spellings over the alphabet weighs 2).  The flag
    only matters for spellings="any".

    threads > 1 partitions the walk by leading letter across processes;
    tables merge by addition, so the result is identical for any count.
    """
    if representative not in ("canonical", "orbit"):
        raise InputError(f"representative must be canonical|orbit, got {representative!r}")
    alphabet = Alphabet.of(alphabet)
    _check_spellings(spellings)
    letters = alphabet.letters
    jobs = [(letters, N, spellings, representative, (a,)) for a in letters]
    total: Counter = Counter()
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(threads, len(jobs))) as ex:
            for cnt in ex.map(_count_subtree, jobs):
                total.update(cnt)
    else:
        for job in jobs:
            total.update(_count_subtree(job))
    return MultiplicityTable(N, dict(total), spellings, representative)


def exceptions(alphabet, N: int, spellings: str = "canonical") -> list[int]:
    """All d in [2, N) with empty fiber.

    Default convention is "canonical", under which the alphabet
    {1,2,3,4} misses exactly {6, 54, 150} up to 1000; under "any" the
    word [1,4,1] = 5/6 rescues 6.  See the module docstring.
    """
    return multiplicity_table(alphabet, N, spellings=spellings).exceptions()


def counts_at_thresholds(alphabet, N_list: Sequence[int],
                         spellings: str = "any") -> list[int]:
    """#R(N_i) for each threshold, from a single walk to max(N_list)."""
    thresholds = sorted(set(int(n) for n in N_list))
    if any(n < 2 for n in thresholds):
        raise InputError("thresholds must be >= 2")
    hist = [0] * (len(thresholds) + 1)

    def visit(b, d, w):
        hist[bisect.bisect_right(thresholds, d)] += 1

    _walk(Alphabet.of(alphabet), thresholds[-1], visit, spellings=spellings)
    # suffix-free prefix sums: count(N_i) = all entries with d < N_i
    out, acc = [], 0
    for i in range(len(thresholds)):
        acc += hist[i]
        out.append(acc)
    return out


def hensley_exponent(alphabet, N_list: Sequence[int],
                     spellings: str = "any") -> float:
    """Least-squares slope of log #R(N) against log N."""
    Ns = sorted(set(int(n) for n in N_list))
    if len(Ns) < 3:
        raise InputError("need at least 3 increasing N values")
    counts = counts_at_thresholds(alphabet, Ns, spellings=spellings)
    if any(c == 0 for c in counts):
        raise InputError(f"empty orbit at some threshold: {list(zip(Ns, counts))}")
    return float(np.polyfit(np.log(Ns), np.log(counts), 1)[0])


@dataclass
class SumsetReport:
    N: int
    larger_N: int
    n_points: int
    n_checks: int
    counterexamples: list[tuple[int, int, int, int]]  # (b, d, a, value missing)

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def sumset_check(alphabet, N: int, spellings: str = "any") -> SumsetReport:
    """Verify d and b + a*d are continuants at scale (a_max + 1) * N.

    The transpose of a word matrix is again a generator product, and
    appending the letter a to it lands on the continuant b + a*d; so
    every enumerated b/d forces b + a*d into the denominator set of the
    (a_max+1)N enumeration.  Returns any counterexamples (none expected).
    """
    alphabet = Alphabet.of(alphabet)
    bigN = (alphabet.a_max + 1) * N
    big = multiplicity_table(alphabet, bigN, spellings=spellings)
    dset = set(big.counts)
    bad: list[tuple[int, int, int, int]] = []
    n_pts = 0
    n_checks = 0
    for pt in enumerate_orbit(alphabet, N, spellings=spellings):
        n_pts += 1
        if pt.d not in dset:
            bad.append((pt.b, pt.d, 0, pt.d))
        n_checks += 1
        for a in alphabet:
            n_checks += 1
            v = pt.b + a * pt.d
            if v not in dset:
                bad.append((pt.b, pt.d, a, v))
    return SumsetReport(N, bigN, n_pts, n_checks, bad)


@dataclass
class DensityReport:
    delta: float
    grid: list[tuple[int, int, float]]  # (N_i, #D(N_i), #D(N_i)/N_i^{2 delta})
    max_multiplicity: int
    max_multiplicity_at: int


def density_ratio(alphabet, N: int, delta: float, points: int = 40,
                  spellings: str = "any") -> DensityReport:
    """Normalized counting function #D(N_i) / N_i^{2 delta} on a log grid."""
    if not (0 <= delta < 1):
        raise InputError(f"delta must be in [0, 1), got {delta}")
    if N < 4:
        raise InputError("N too small")
    table = multiplicity_table(alphabet, N, spellings=spellings)
    denoms = np.array(table.denominators)
    grid_N = sorted(set(int(round(x)) for x in
                        np.exp(np.linspace(math.log(4), math.log(N), points))))
    grid = []
    for Ni in grid_N:
        nd = int(np.searchsorted(denoms, Ni, side="left"))
        grid.append((Ni, nd, nd / Ni ** (2 * delta)))
    if table.counts:
        dmax = max(table.counts, key=lambda d: (table.counts[d], -d))
        mmax = table.counts[dmax]
    else:
        dmax, mmax = 0, 0
    return DensityReport(delta, grid, mmax, dmax)


# --- CSV emitters (base-10 integers, header row, LF newlines) ---------------

def _write_csv(path, header_lines: Sequence[str], columns: Sequence[str],
               rows) -> None:
    with open(path, "w", newline="\n") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(str(x) for x in row) + "\n")


def write_orbit_csv(path, points, header_lines: Sequence[str] = ()) -> None:
    rows = ((p.b, p.d, " ".join(str(a) for a in p.word)) for p in points)
    _write_csv(path, header_lines, ("b", "d", "word"), rows)


def write_mult_csv(path, table: MultiplicityTable,
                   header_lines: Sequence[str] = ()) -> None:
    rows = ((d, table.counts[d]) for d in table.denominators)
    _write_csv(path, header_lines, ("d", "count"), rows)


def write_exceptions_csv(path, exc: Sequence[int],
                         header_lines: Sequence[str] = ()) -> None:
    _write_csv(path, header_lines, ("d",), ((d,) for d in exc))
