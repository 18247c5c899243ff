"""Permutations, the subdivision lattice, bracketings and Young sequences.

Permutations are tuples in one-line notation with values 1..n.  Composition
is ``(g*h)(i) = g(h(i))`` and the action on words is
``(g.j)_p = j_{g^{-1}(p)}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import comb

Perm = tuple
Interval = tuple  # (a, b) with a <= b
Subdivision = tuple  # tuple of consecutive intervals
Bracketing = frozenset  # frozenset of intervals (a, b) with a < b


# permutations ---------------------------------------------------------------

def identity(n: int) -> Perm:
    return tuple(range(1, n + 1))


def all_perms(n: int) -> list[Perm]:
    return [tuple(p) for p in permutations(range(1, n + 1))]


def parse_perm(text: str) -> Perm:
    text = text.strip()
    if "," in text or " " in text:
        g = tuple(int(t) for t in text.replace(",", " ").split())
    else:
        g = tuple(int(c) for c in text)
    if sorted(g) != list(range(1, len(g) + 1)):
        raise ValueError(f"not a permutation in one-line notation: {text!r}")
    return g


def perm_str(g: Perm) -> str:
    sep = "" if len(g) < 10 else ","
    return sep.join(str(x) for x in g)


def compose(g: Perm, h: Perm) -> Perm:
    return tuple(g[h[i] - 1] for i in range(len(g)))


def inverse(g: Perm) -> Perm:
    out = [0] * len(g)
    for i, gi in enumerate(g, 1):
        out[gi - 1] = i
    return tuple(out)


def inversion_set(g: Perm) -> frozenset:
    n = len(g)
    return frozenset((a + 1, b + 1) for a in range(n) for b in range(a + 1, n) if g[a] > g[b])


def length(g: Perm) -> int:
    n = len(g)
    return sum(1 for a in range(n) for b in range(a + 1, n) if g[a] > g[b])


def descent_set(g: Perm) -> frozenset:
    return frozenset(i for i in range(1, len(g)) if g[i - 1] > g[i])


def _check_interval(n: int, a: int, b: int) -> None:
    if not 1 <= a <= b <= n:
        raise ValueError(f"interval [{a}..{b}] out of range for n={n}")


def t_ab(n: int, a: int, b: int) -> Perm:
    """The cycle sending b -> b-1 -> ... -> a -> b, fixing the rest."""
    _check_interval(n, a, b)
    g = list(range(1, n + 1))
    for k in range(a + 1, b + 1):
        g[k - 1] = k - 1
    g[a - 1] = b
    return tuple(g)


def w_interval(n: int, a: int, b: int) -> Perm:
    """Reversal of the positions a..b."""
    _check_interval(n, a, b)
    g = list(range(1, n + 1))
    g[a - 1:b] = reversed(g[a - 1:b])
    return tuple(g)


def longest(n: int) -> Perm:
    return tuple(range(n, 0, -1))


def act_on_word(g: Perm, word: tuple) -> tuple:
    return tuple(word[g.index(p)] for p in range(1, len(g) + 1))


def word_perm(target: tuple, source: tuple) -> Perm:
    """The unique g with ``g . source == target`` (letters distinct)."""
    pos = {letter: i + 1 for i, letter in enumerate(source)}
    # target_p = source_{g^{-1}(p)}  =>  g^{-1}(p) = pos[target_p]
    return inverse(tuple(pos[x] for x in target))


def is_young_element(g: Perm, blocks: Subdivision) -> bool:
    return all(set(g[a - 1:b]) == set(range(a, b + 1)) for a, b in blocks)


def shuffle_reps(n: int, cuts: frozenset) -> list[Perm]:
    """Minimal left coset representatives of the Young subgroup: Des(g) within cuts."""
    return [g for g in all_perms(n) if descent_set(g) <= cuts]


def young_subgroup(n: int, cuts: frozenset) -> list[Perm]:
    blocks = from_cuts(n, cuts)
    return [g for g in all_perms(n) if is_young_element(g, blocks)]


# subdivisions ---------------------------------------------------------------

def from_cuts(n: int, cuts, lo: int = 1) -> Subdivision:
    out, start = [], lo
    for c in sorted(cuts):
        out.append((start, c))
        start = c + 1
    out.append((start, n))
    return tuple(out)


def cuts_of(sub: Subdivision) -> frozenset:
    return frozenset(b for a, b in sub[:-1])


def subdivisions(n: int) -> list[Subdivision]:
    if n < 1:
        raise ValueError("n must be positive")
    subs = [from_cuts(n, c) for k in range(n) for c in combinations(range(1, n), k)]
    return sorted(subs, key=lambda s: (len(s), subdivision_str(s)))


def precedes(s: Subdivision, t: Subdivision) -> bool:
    """Reverse refinement order: s precedes t when t refines s."""
    return cuts_of(s) <= cuts_of(t)


def meet(s: Subdivision, t: Subdivision) -> Subdivision:
    return from_cuts(s[-1][1], cuts_of(s) & cuts_of(t), s[0][0])


def join(s: Subdivision, t: Subdivision) -> Subdivision:
    return from_cuts(s[-1][1], cuts_of(s) | cuts_of(t), s[0][0])


def interval_str(iv: Interval) -> str:
    a, b = iv
    return f"[{a}]" if a == b else f"[{a}..{b}]"


def subdivision_str(sub: Subdivision) -> str:
    return "".join(interval_str(iv) for iv in sub)


def parse_subdivision(text: str) -> Subdivision:
    """Accepts ``[1..4][5][6..8]`` and the compact ``[123][4]`` forms."""
    out = []
    for chunk in text.replace(" ", "").strip("[]").split("]["):
        if ".." in chunk:
            a, b = chunk.split("..")
            out.append((int(a), int(b)))
        elif "," in chunk:
            vals = [int(x) for x in chunk.split(",")]
            out.append((vals[0], vals[-1]))
        else:
            out.append((int(chunk[0]), int(chunk[-1])))
    for (a, b), (c, _) in zip(out, out[1:]):
        if c != b + 1:
            raise ValueError(f"intervals not consecutive in {text!r}")
    return tuple(out)


# bracketings ----------------------------------------------------------------

@lru_cache(maxsize=None)
def _compositions(a: int, b: int) -> tuple:
    """All ways to cut [a..b] into consecutive parts (including one part)."""
    out = []
    for k in range(b - a + 1):
        for cuts in combinations(range(a, b), k):
            out.append(from_cuts(b, cuts, a))
    return tuple(out)


@lru_cache(maxsize=None)
def _with_outer(a: int, b: int) -> tuple:
    outer = (a, b)
    return tuple(frozenset((outer,)) | inner for inner in _without_outer(a, b))


@lru_cache(maxsize=None)
def _without_outer(a: int, b: int) -> tuple:
    if a == b:
        return (frozenset(),)
    out = []
    for parts in _compositions(a, b):
        if len(parts) < 2:
            continue
        acc = [frozenset()]
        for c, d in parts:
            choices = (frozenset(),) if c == d else _with_outer(c, d)
            acc = [x | y for x in acc for y in choices]
        out.extend(acc)
    return tuple(out)


def bracketings(n: int, outer: bool = True) -> list[Bracketing]:
    """Generalized bracketings of the word 1..n.

    With ``outer=True`` every bracketing contains [1..n]; these index the
    terms of the chain inversion formula.  For n = 1 both families consist of
    the empty bracketing.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return [frozenset()]
    family = _with_outer(1, n) if outer else _without_outer(1, n)
    return sorted(family, key=lambda br: (len(br), bracketing_str(br, n)))


def bracketing_str(br: Bracketing, n: int, lo: int = 1) -> str:
    def render(a: int, b: int) -> str:
        pieces, i = [], a
        while i <= b:
            top = max((iv for iv in br if iv[0] == i and iv[1] <= b and iv != (a, b)),
                      key=lambda iv: iv[1], default=None)
            if top is None:
                pieces.append(str(i) if n < 10 else f"{i} ")
                i += 1
            else:
                pieces.append(render(*top))
                i = top[1] + 1
        body = "".join(pieces).strip()
        return f"[{body}]" if (a, b) in br else body

    return render(lo, n)


def parse_bracketing(text: str) -> Bracketing:
    stack, out, pos = [], set(), 0
    for ch in text.replace(" ", ""):
        if ch == "[":
            stack.append(pos + 1)
        elif ch == "]":
            a = stack.pop()
            if pos > a:
                out.add((a, pos))
        else:
            pos += 1
    if stack:
        raise ValueError(f"unbalanced brackets in {text!r}")
    return frozenset(out)


def chain_of_bracketing(br: Bracketing, n: int) -> list[Subdivision]:
    """The chain from [1..n] to [1]...[n] refining every nondegenerate block at each step."""
    def children(a: int, b: int) -> list:
        parts, i = [], a
        while i <= b:
            top = max((iv for iv in br if iv[0] == i and iv[1] <= b and iv != (a, b)),
                      key=lambda iv: iv[1], default=(i, i))
            parts.append(top)
            i = top[1] + 1
        return parts

    chain = [((1, n),)]
    while any(a < b for a, b in chain[-1]):
        nxt = []
        for a, b in chain[-1]:
            nxt.extend(children(a, b) if a < b else [(a, b)])
        chain.append(tuple(nxt))
    return chain


def bracketing_of_chain(chain: list[Subdivision]) -> Bracketing:
    return frozenset(iv for sub in chain for iv in sub if iv[0] < iv[1])


# Schroeder counts -----------------------------------------------------------

def schroder_recurrence(n: int) -> list[int]:
    """c_1..c_n from (m+1)c_{m+1} = 3(2m-1)c_m - (m-2)c_{m-1}."""
    c = [0, 1, 1]
    for m in range(2, n):
        num = 3 * (2 * m - 1) * c[m] - (m - 2) * c[m - 1]
        c.append(num // (m + 1))
    return c[1:n + 1]


def schroder_series(n: int) -> list[int]:
    """c_1..c_n as coefficients of (1 + t - sqrt(1 - 6t + t^2)) / 4."""
    f = [Fraction(1), Fraction(-6), Fraction(1)] + [Fraction(0)] * n
    s = [Fraction(1)] + [Fraction(0)] * n  # power series square root of f
    for k in range(1, n + 1):
        acc = f[k] - sum(s[i] * s[k - i] for i in range(1, k))
        s[k] = acc / 2
    coeffs = [(Fraction(int(k == 0) + int(k == 1)) - s[k]) / 4 for k in range(n + 1)]
    return [int(x) for x in coeffs[1:]]


@lru_cache(maxsize=None)
def _count_with_outer(m: int) -> tuple:
    """Counts by number of brackets of bracketings (with outer) of a word of length m."""
    inner = _count_without_outer(m)
    return (0,) + inner


@lru_cache(maxsize=None)
def _count_without_outer(m: int) -> tuple:
    if m == 1:
        return (1,)
    total = [0] * (m + 1)
    for k in range(1, m):
        for cuts in combinations(range(1, m), k):
            sizes = [b - a + 1 for a, b in from_cuts(m, cuts)]
            acc = [1]
            for s in sizes:
                part = (1,) if s == 1 else _count_with_outer(s)
                new = [0] * (len(acc) + len(part) - 1)
                for i, x in enumerate(acc):
                    for j, y in enumerate(part):
                        new[i + j] += x * y
                acc = new
            for i, x in enumerate(acc):
                total[i] += x
    while len(total) > 1 and total[-1] == 0:
        total.pop()
    return tuple(total)


def bracket_counts(n: int) -> dict[int, int]:
    """c_{n,k} by a counting recursion over compositions (no materialization)."""
    if n == 1:
        return {0: 1}
    return {k: c for k, c in enumerate(_count_with_outer(n)) if c}


def schroder_table(n: int) -> dict[int, int]:
    """c_{n,k} by explicit enumeration of bracketings."""
    table: dict[int, int] = {}
    for br in bracketings(n):
        table[len(br)] = table.get(len(br), 0) + 1
    return dict(sorted(table.items()))


def schroder_closed_form(n: int, k: int) -> int:
    """binom(n+k-1, k) binom(n-2, k-1) / n, the form matching the listed values."""
    num = comb(n + k - 1, k) * comb(n - 2, k - 1)
    if num % n:
        raise ArithmeticError("closed form is not integral")
    return num // n


# Young data -----------------------------------------------------------------

@dataclass(frozen=True)
class YoungData:
    J: frozenset
    sigma: Subdivision
    factors: tuple
    gprime: Perm
    interval: Interval

    @property
    def n_of_g(self) -> int:
        return len(self.sigma)


@dataclass(frozen=True)
class YoungSequence:
    seq: tuple
    tree_like: bool
    depth: int | None


def _span(g: Perm, interval: Interval | None) -> Interval:
    return (1, len(g)) if interval is None else interval


def young_data(g: Perm, interval: Interval | None = None) -> YoungData:
    """Minimal Young factorization of g restricted to an interval it preserves."""
    a, b = _span(g, interval)
    n = len(g)
    J, hi = set(), 0
    for j in range(a, b):
        hi = max(hi, g[j - 1])
        if hi == j:
            J.add(j)
    sigma = from_cuts(b, J, a)
    factors = []
    for c, d in sigma:
        f = list(range(1, n + 1))
        f[c - 1:d] = g[c - 1:d]
        factors.append(tuple(f))
    # with no cuts sigma is the single block [a..b], so this also covers g w_[a..b]
    gprime = compose(g, w_of_cuts(n, sigma))
    return YoungData(frozenset(J), sigma, tuple(factors), gprime, (a, b))


def w_of_cuts(n: int, sigma: Subdivision) -> Perm:
    w = list(range(1, n + 1))
    for c, d in sigma:
        w[c - 1:d] = range(d, c - 1, -1)
    return tuple(w)


def young_sequence(g: Perm, interval: Interval | None = None) -> YoungSequence:
    a, b = _span(g, interval)
    ident = identity(len(g))
    seq, seen = [g], {g}
    while seq[-1] != ident:
        nxt = young_data(seq[-1], (a, b)).gprime
        if nxt in seen:
            return YoungSequence(tuple(seq) + (nxt,), False, None)
        seq.append(nxt)
        seen.add(nxt)
    return YoungSequence(tuple(seq), True, len(seq) - 1)


def splittable(g: Perm, interval: Interval | None = None) -> bool:
    return bool(young_data(g, interval).J)


def nonzero_by_splitting(g: Perm, interval: Interval | None = None) -> bool:
    """Recursive zero test read off the recurrences for the inverse diagonals.

    On an interval: a non-splittable g with g(first) < g(last) gives zero; a
    non-splittable g with g(first) > g(last) reduces to g reversed; otherwise
    every minimal Young factor must be nonzero on its own block.
    """
    a, b = _span(g, interval)
    if a == b:
        return True
    data = young_data(g, (a, b))
    if not data.J:
        if g[a - 1] < g[b - 1]:
            return False
        return nonzero_by_splitting(data.gprime, (a, b))
    return all(nonzero_by_splitting(f, iv) for f, iv in zip(data.factors, data.sigma))
