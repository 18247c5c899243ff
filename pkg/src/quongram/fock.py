"""Weight spaces, deformed derivatives, Gram matrices and the twisted regular representation.

Group-algebra matrices are stored as ``{g: diagonal}`` with the meaning
``sum_g diag(f_g) R(g)`` where ``R(g) e_j = e_{g.j}``.  A diagonal is held by
a *ring backend*:

* ``PatternRing`` keeps one rational function in position variables
  ``x[a,b]`` (printed ``q[a,b]``) that is the same for every basis word; the
  value at the word ``i`` is obtained by renaming ``x[a,b] -> q[i_a,i_b]``.
* ``ModRing`` keeps an explicit residue vector over the basis words for a
  fixed random point modulo a word-size prime.

Both implement the same handful of primitives, so every algorithm built on
``GroupAlgebraMatrix`` runs symbolically and modularly without change.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Mapping

import numpy as np

from .combin import (
    Perm,
    act_on_word,
    all_perms,
    compose,
    identity,
    inverse,
    inversion_set,
    length,
    perm_str,
    t_ab,
    w_interval,
)
from .symring import (
    EMPTY_BOXES,
    ONE,
    ZERO,
    BoxFactor,
    BoxProduct,
    ParamMode,
    Poly,
    RatEntry,
    Var,
)

Word = tuple


# weights and words ----------------------------------------------------------

@dataclass(frozen=True)
class Weight:
    """A multiset of labels, stored as sorted ``(label, multiplicity)`` pairs."""

    mult: tuple

    @classmethod
    def of(cls, counts: Mapping[int, int]) -> "Weight":
        items = tuple(sorted((int(k), int(v)) for k, v in counts.items() if v))
        if any(v < 0 for _, v in items):
            raise ValueError("multiplicities must be nonnegative")
        return cls(items)

    @classmethod
    def generic(cls, n: int) -> "Weight":
        if n < 1:
            raise ValueError("n must be positive")
        return cls(tuple((i, 1) for i in range(1, n + 1)))

    @classmethod
    def from_letters(cls, letters: Iterable[int]) -> "Weight":
        counts: dict[int, int] = {}
        for x in letters:
            counts[x] = counts.get(x, 0) + 1
        return cls.of(counts)

    @classmethod
    def parse(cls, text: str) -> "Weight":
        """Accepts ``1+2+3``, ``2*1+3``, ``1,1,3`` or a digit word such as ``113``."""
        text = text.strip().strip("{}").replace(" ", "")
        if "+" in text or "*" in text:
            counts: dict[int, int] = {}
            for term in text.split("+"):
                k, _, label = term.rpartition("*")
                counts[int(label)] = counts.get(int(label), 0) + (int(k) if k else 1)
            return cls.of(counts)
        if "," in text:
            return cls.from_letters(int(x) for x in text.split(","))
        return cls.from_letters(int(c) for c in text)

    @property
    def n(self) -> int:
        return sum(v for _, v in self.mult)

    @property
    def labels(self) -> tuple:
        return tuple(k for k, _ in self.mult)

    @property
    def letters(self) -> tuple:
        return tuple(k for k, v in self.mult for _ in range(v))

    @property
    def is_generic(self) -> bool:
        return all(v == 1 for _, v in self.mult)

    @property
    def dim(self) -> int:
        return len(self.basis())

    def basis(self) -> list[Word]:
        return _basis(self.letters)

    def to_text(self) -> str:
        return "+".join(str(k) if v == 1 else f"{v}*{k}" for k, v in self.mult)

    def require_generic(self) -> None:
        if not self.is_generic:
            raise ValueError(f"weight {self.to_text()} is degenerate; a generic weight is required")


_BASIS_CACHE: dict = {}


def _basis(letters: tuple) -> list[Word]:
    if letters not in _BASIS_CACHE:
        _BASIS_CACHE[letters] = sorted(set(permutations(letters)))
    return _BASIS_CACHE[letters]


def word_str(word: Word) -> str:
    sep = "" if all(x < 10 for x in word) else ","
    return sep.join(str(x) for x in word)


def q_word(word: Word, g: Perm) -> Poly:
    """``q_{i,g} = prod over inversions (a,b) of g of q[i_a, i_b]``."""
    return Poly.monomial([(word[a - 1], word[b - 1]) for a, b in inversion_set(g)])


class WordPoly:
    """Finite linear combination of words with polynomial coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, Poly] | None = None):
        self.terms = {w: c for w, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def word(cls, word: Iterable[int], coeff: Poly = ONE) -> "WordPoly":
        return cls({tuple(word): coeff})

    def __add__(self, other: "WordPoly") -> "WordPoly":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, ZERO) + c
        return WordPoly(out)

    def __sub__(self, other: "WordPoly") -> "WordPoly":
        return self + other.scale(Poly.const(-1))

    def scale(self, c: Poly) -> "WordPoly":
        return WordPoly({w: v * c for w, v in self.terms.items()})

    def __mul__(self, other: "WordPoly") -> "WordPoly":
        out: dict = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                out[u + v] = out.get(u + v, ZERO) + a * b
        return WordPoly(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, WordPoly) and self.terms == other.terms

    def constant(self) -> Poly:
        return self.terms.get((), ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        return " + ".join(f"({c.to_text()})*t[{word_str(w)}]" for w, c in sorted(self.terms.items())) or "0"


# derivatives, coproduct, pairing ---------------------------------------------

def deformed_partial(side: str, i: int, x: WordPoly) -> WordPoly:
    """Left (``_i d``) or right (``d_i``) deformed derivative.

    Left: removing the letter at position p picks up ``q[i, j_s]`` for every
    earlier letter; right: ``q[j_s, i]`` for every later letter.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    out: dict = {}
    for word, c in x.terms.items():
        for p, letter in enumerate(word):
            if letter != i:
                continue
            if side == "left":
                factor = Poly.monomial([(i, s) for s in word[:p]])
            else:
                factor = Poly.monomial([(s, i) for s in word[p + 1:]])
            rest = word[:p] + word[p + 1:]
            out[rest] = out.get(rest, ZERO) + c * factor
    return WordPoly(out)


def coproduct(word: Word) -> list[tuple[Word, Word, Poly]]:
    """All splittings of a word into a left and right subword with their q-coefficients.

    A letter at position p that ends up in the right factor while a later
    letter at position p' goes to the left contributes ``q[i_p, i_p']``; this
    is what the algebra map determined by ``r(t_i) = t_i (x) 1 + 1 (x) t_i``
    produces under the twisted tensor multiplication.
    """
    n = len(word)
    out = []
    for mask in range(1 << n):
        left = [p for p in range(n) if mask >> p & 1]
        right = [p for p in range(n) if not mask >> p & 1]
        coeff = Poly.monomial([(word[p], word[s]) for p in right for s in left if p < s])
        out.append((tuple(word[p] for p in left), tuple(word[p] for p in right), coeff))
    return out


def gram_entry(row: Word, col: Word) -> Poly:
    """Closed-form Gram entry ``A_{row,col}``: the sum of ``q_{row,s}`` over all s with ``s.row = col``.

    For a degenerate weight there are several such s.  The sum runs over
    ``q_{row,s}`` itself; the variant with ``s^{-1}`` does not reproduce the
    3x3 degenerate example (entry (1,2) would read q13 + q13^2 instead of
    q13 + q11 q13) and disagrees with the derivative route.
    """
    if sorted(row) != sorted(col):
        return ZERO
    n = len(row)
    total: dict = {}
    image = [0] * n  # image[s-1] = sigma(s)
    used = [False] * n

    def rec(p: int) -> None:
        if p > n:
            mono = Poly.monomial([(row[a], row[b]) for a in range(n) for b in range(a + 1, n)
                                  if image[a] > image[b]])
            for m, c in mono.terms.items():
                total[m] = total.get(m, 0) + c
            return
        # sigma^{-1}(p) must be a position of row carrying the letter col_p
        for s in range(n):
            if not used[s] and row[s] == col[p - 1]:
                used[s] = True
                image[s] = p
                rec(p + 1)
                used[s] = False

    rec(1)
    return Poly(total)


def derivative_entry(row: Word, col: Word) -> Poly:
    """``A_{row,col}`` as ``_{row_n}d ... _{row_1}d (t_col)``."""
    x = WordPoly.word(col)
    for letter in row:
        x = deformed_partial("left", letter, x)
        if x.is_zero():
            return ZERO
    return x.constant()


def pairing(x: WordPoly, y: WordPoly) -> Poly:
    """Bilinear pairing with ``pairing(t_a, t_b) = A_{a,b}``.

    In this orientation the left derivative is adjoint to left
    multiplication in the first slot and the coproduct splits the first
    argument.
    """
    total = ZERO
    for u, a in x.terms.items():
        for v, b in y.terms.items():
            e = gram_entry(u, v)
            if not e.is_zero():
                total = total + a * b * e
    return total


# dense matrices -------------------------------------------------------------

class DenseMatrix:
    """Square matrix with explicit word labels on rows and columns."""

    def __init__(self, basis: list[Word], rows: list[list], weight: Weight | None = None):
        self.basis = list(basis)
        self.rows = rows
        self.weight = weight
        self._index = {w: k for k, w in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def entry(self, row: Word, col: Word):
        return self.rows[self._index[tuple(row)]][self._index[tuple(col)]]

    def reorder(self, basis: list[Word]) -> "DenseMatrix":
        idx = [self._index[tuple(w)] for w in basis]
        return DenseMatrix(basis, [[self.rows[i][j] for j in idx] for i in idx], self.weight)

    def map(self, fn) -> "DenseMatrix":
        return DenseMatrix(self.basis, [[fn(x) for x in row] for row in self.rows], self.weight)

    def transpose(self) -> "DenseMatrix":
        return DenseMatrix(self.basis, [list(col) for col in zip(*self.rows)], self.weight)

    def conjugate_transpose(self) -> "DenseMatrix":
        return self.transpose().map(lambda x: x.conjugate())

    def __matmul__(self, other: "DenseMatrix") -> "DenseMatrix":
        if self.basis != other.basis:
            raise ValueError("basis mismatch")
        n = self.dim
        cols = list(zip(*other.rows))
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = None
                for a, b in zip(self.rows[i], cols[j]):
                    if _is_zero(a) or _is_zero(b):
                        continue
                    t = a * b
                    acc = t if acc is None else acc + t
                row.append(RatEntry() if acc is None else acc)
            out.append(row)
        return DenseMatrix(self.basis, out, self.weight)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DenseMatrix) or self.basis != other.basis:
            return False
        return all(_ent_eq(a, b) for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))

    def is_identity(self) -> bool:
        return all(_ent_eq(x, 1 if i == j else 0)
                   for i, row in enumerate(self.rows) for j, x in enumerate(row))

    def is_hermitian(self) -> bool:
        return self == self.conjugate_transpose()

    def to_json(self) -> dict:
        return {
            "weight": self.weight.to_text() if self.weight else None,
            "basis": [word_str(w) for w in self.basis],
            "entries": [[RatEntry.coerce(x).to_json() for x in row] for row in self.rows],
        }

    def to_text(self) -> str:
        lines = []
        for w, row in zip(self.basis, self.rows):
            lines.append(f"{word_str(w)}: " + " | ".join(RatEntry.coerce(x).to_text() for x in row))
        return "\n".join(lines)


def _is_zero(x) -> bool:
    return x == 0 if isinstance(x, int) else x.is_zero()


def _ent_eq(a, b) -> bool:
    return RatEntry.coerce(a) == RatEntry.coerce(b)


def gram(weight: Weight, route: str = "direct") -> DenseMatrix:
    """Gram matrix on the lex-ordered word basis by one of three routes."""
    basis = weight.basis()
    if route == "direct":
        rows = [[gram_entry(i, j) for j in basis] for i in basis]
    elif route == "derivative":
        rows = [[derivative_entry(i, j) for j in basis] for i in basis]
    elif route == "rsum":
        weight.require_generic()
        ring = PatternRing(weight.n)
        total = GroupAlgebraMatrix.full_sum(ring)
        return total.materialize(weight).map(lambda e: e.num)
    else:
        raise ValueError(f"unknown route {route!r}")
    return DenseMatrix(basis, rows, weight)


# ring backends --------------------------------------------------------------

class PatternRing:
    """Diagonals as rational functions in position variables."""

    symbolic = True

    def __init__(self, n: int, mode: ParamMode | str = ParamMode.MULTI):
        self.n = n
        self.mode = ParamMode.parse(mode)

    def _fix(self, x: RatEntry) -> RatEntry:
        return x if self.mode is ParamMode.MULTI else x.specialize(self.mode)

    def zero(self) -> RatEntry:
        return RatEntry()

    def one(self) -> RatEntry:
        return RatEntry(ONE)

    def const(self, c: int) -> RatEntry:
        return RatEntry(Poly.const(c))

    def qprod(self, pairs: Iterable[tuple]) -> RatEntry:
        return self._fix(RatEntry(Poly.monomial(list(pairs))))

    def qset(self, positions: Iterable[int]) -> RatEntry:
        pos = list(positions)
        return self.qprod((a, b) for a in pos for b in pos if a != b)

    def box_inv(self, positions: Iterable[int]) -> RatEntry:
        pos = sorted(positions)
        if len(pos) < 2:
            return self.one()
        return RatEntry(ONE, BoxProduct([BoxFactor(pos, self.mode)]))

    def twist(self, d: RatEntry, g: Perm) -> RatEntry:
        if self.mode is ParamMode.ONE or d.is_zero():
            return d
        return self._fix(d.relabel(lambda a: g[a - 1]))

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def is_zero(a) -> bool:
        return a.is_zero()

    @staticmethod
    def eq(a, b) -> bool:
        return a == b

    def at_word(self, d: RatEntry, word: Word) -> RatEntry:
        if self.mode is ParamMode.ONE:
            return d
        return self._fix(d.relabel(lambda a: word[a - 1]))


class ModRing:
    """Diagonals as residue vectors over the basis words at one random point."""

    symbolic = False

    def __init__(self, weight: Weight, assignment: Mapping[Var, int], prime: int):
        weight.require_generic()
        self.weight = weight
        self.n = weight.n
        self.p = prime
        self.words = weight.basis()
        self.index = {w: k for k, w in enumerate(self.words)}
        self.assignment = dict(assignment)
        n = self.n
        letters = np.array(self.words, dtype=np.int64)  # (dim, n)
        labels = weight.labels
        table = np.zeros((max(labels) + 1, max(labels) + 1), dtype=np.int64)
        for a in labels:
            for b in labels:
                if a != b:
                    table[a, b] = assignment[(a, b)] % prime
        # vals[a][b][k] = q[w_a, w_b] for the k-th word (positions 0-based)
        self._vals = [[table[letters[:, a], letters[:, b]] for b in range(n)] for a in range(n)]
        self._twist_cache: dict = {}
        self._act_cache: dict = {}

    @property
    def dim(self) -> int:
        return len(self.words)

    def zero(self):
        return np.zeros(self.dim, dtype=np.int64)

    def one(self):
        return np.ones(self.dim, dtype=np.int64)

    def const(self, c: int):
        return np.full(self.dim, c % self.p, dtype=np.int64)

    def qprod(self, pairs: Iterable[tuple]):
        out = self.one()
        for a, b in pairs:
            out = out * self._vals[a - 1][b - 1] % self.p
        return out

    def qset(self, positions: Iterable[int]):
        pos = list(positions)
        return self.qprod((a, b) for a in pos for b in pos if a != b)

    def box_inv(self, positions: Iterable[int]):
        pos = list(positions)
        if len(pos) < 2:
            return self.one()
        box = (1 - self.qset(pos)) % self.p
        if not box.all():
            raise ZeroDivisionError("box factor vanishes at this point")
        return self.inv(box)

    def inv(self, x):
        result, base, e = self.one(), x % self.p, self.p - 2
        while e:
            if e & 1:
                result = result * base % self.p
            base = base * base % self.p
            e >>= 1
        return result

    def act_index(self, g: Perm):
        """``idx[k]`` = index of ``g . w_k``."""
        if g not in self._act_cache:
            self._act_cache[g] = np.array([self.index[act_on_word(g, w)] for w in self.words])
        return self._act_cache[g]

    def twist(self, d, g: Perm):
        # twisted value at word k is d at g^{-1}.w_k
        if g not in self._twist_cache:
            self._twist_cache[g] = self.act_index(inverse(g))
        return d[self._twist_cache[g]]

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return (-a) % self.p

    @staticmethod
    def is_zero(a) -> bool:
        return not np.any(a)

    @staticmethod
    def eq(a, b) -> bool:
        return bool(np.array_equal(a, b))

    def poly_vector(self, poly: Poly):
        """Evaluate a position-pattern polynomial at every basis word."""
        out = self.zero()
        for mono, c in poly.terms.items():
            term = self.const(c)
            for (a, b), e in mono:
                for _ in range(e):
                    term = term * self._vals[a - 1][b - 1] % self.p
            out = (out + term) % self.p
        return out

    def from_pattern(self, entry: RatEntry):
        num = self.poly_vector(entry.num)
        if entry.den.is_empty():
            return num
        den = self.poly_vector(entry.den.expand())
        return num * self.inv(den) % self.p

    def eval_poly_at(self, poly: Poly) -> int:
        return poly.eval_mod(self.assignment, self.p)


# group algebra matrices -----------------------------------------------------

class GroupAlgebraMatrix:
    """``sum_g diag(f_g) R(g)`` over one ring backend."""

    __slots__ = ("ring", "diags")

    def __init__(self, ring, diags: Mapping[Perm, object] | None = None):
        self.ring = ring
        self.diags = {g: d for g, d in (diags or {}).items() if not ring.is_zero(d)}

    @property
    def n(self) -> int:
        return self.ring.n

    @classmethod
    def identity(cls, ring) -> "GroupAlgebraMatrix":
        return cls(ring, {identity(ring.n): ring.one()})

    @classmethod
    def scalar(cls, ring, d) -> "GroupAlgebraMatrix":
        return cls(ring, {identity(ring.n): d})

    @classmethod
    def rhat(cls, ring, g: Perm) -> "GroupAlgebraMatrix":
        return cls(ring, {tuple(g): q_factor(ring, g)})

    @classmethod
    def rhat_sum(cls, ring, perms: Iterable[Perm]) -> "GroupAlgebraMatrix":
        return cls(ring, {tuple(g): q_factor(ring, g) for g in perms})

    @classmethod
    def full_sum(cls, ring) -> "GroupAlgebraMatrix":
        return cls.rhat_sum(ring, all_perms(ring.n))

    def diagonal(self, g: Perm):
        return self.diags.get(tuple(g), self.ring.zero())

    def support(self) -> list[Perm]:
        return sorted(self.diags)

    def __add__(self, other: "GroupAlgebraMatrix") -> "GroupAlgebraMatrix":
        out = dict(self.diags)
        for g, d in other.diags.items():
            out[g] = self.ring.add(out[g], d) if g in out else d
        return GroupAlgebraMatrix(self.ring, out)

    def __neg__(self) -> "GroupAlgebraMatrix":
        return GroupAlgebraMatrix(self.ring, {g: self.ring.neg(d) for g, d in self.diags.items()})

    def __sub__(self, other: "GroupAlgebraMatrix") -> "GroupAlgebraMatrix":
        return self + (-other)

    def lmul(self, d) -> "GroupAlgebraMatrix":
        """Left multiplication by a diagonal."""
        return GroupAlgebraMatrix(self.ring, {g: self.ring.mul(d, f) for g, f in self.diags.items()})

    def scale(self, c: int) -> "GroupAlgebraMatrix":
        return self.lmul(self.ring.const(c))

    def __mul__(self, other: "GroupAlgebraMatrix") -> "GroupAlgebraMatrix":
        ring = self.ring
        out: dict = {}
        for g1, f in self.diags.items():
            for g2, h in other.diags.items():
                term = ring.mul(f, ring.twist(h, g1))
                g = compose(g1, g2)
                out[g] = ring.add(out[g], term) if g in out else term
        return GroupAlgebraMatrix(ring, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupAlgebraMatrix):
            return NotImplemented
        ring = self.ring
        keys = set(self.diags) | set(other.diags)
        return all(ring.eq(self.diagonal(g), other.diagonal(g)) for g in keys)

    __hash__ = None

    def map(self, fn) -> "GroupAlgebraMatrix":
        return GroupAlgebraMatrix(self.ring, {g: fn(d) for g, d in self.diags.items()})

    def materialize(self, weight: Weight | None = None):
        """Dense form: a ``DenseMatrix`` for pattern rings, a numpy array for modular rings."""
        ring = self.ring
        if not ring.symbolic:
            dim = ring.dim
            out = np.zeros((dim, dim), dtype=np.int64)
            cols = np.arange(dim)
            for g, d in self.diags.items():
                rows = ring.act_index(g)
                out[rows, cols] = (out[rows, cols] + d[rows]) % ring.p
            return out
        weight = weight or Weight.generic(ring.n)
        basis = weight.basis()
        index = {w: k for k, w in enumerate(basis)}
        rows = [[RatEntry() for _ in basis] for _ in basis]
        for g, d in self.diags.items():
            for j, w in enumerate(basis):
                i_word = act_on_word(g, w)
                i = index[i_word]
                rows[i][j] = rows[i][j] + ring.at_word(d, i_word)
        return DenseMatrix(basis, rows, weight)

    def to_json(self, weight: Weight | None = None) -> dict:
        ring = self.ring
        weight = weight or Weight.generic(ring.n)
        basis = weight.basis()
        diags = {}
        for g in sorted(self.diags):
            d = self.diags[g]
            if ring.symbolic:
                diags[perm_str(g)] = [ring.at_word(d, w).to_json() for w in basis]
            else:
                diags[perm_str(g)] = [int(x) for x in d]
        return {"weight": weight.to_text(), "basis": [word_str(w) for w in basis], "diagonals": diags}

    def pattern_text(self) -> dict:
        """Per-permutation pattern text (pattern rings only)."""
        return {perm_str(g): self.diags[g].to_text() for g in sorted(self.diags)}


# the twisted representation --------------------------------------------------

def q_factor(ring, g: Perm):
    """Diagonal of ``Q(g)``: product of ``Q_{a,b}`` over inversions (a,b) of g^{-1}."""
    return ring.qprod(sorted(inversion_set(inverse(tuple(g)))))


def q_pair(ring, a: int, b: int):
    """``Q_{{a,b}} = Q_{a,b} Q_{b,a}``."""
    return ring.qprod([(a, b), (b, a)])


def abs_q_squared(ring, g: Perm):
    """``|Q(g)|^2``: the product of ``Q_{{a,b}}`` over inversions of g^{-1}."""
    pairs = []
    for a, b in sorted(inversion_set(inverse(tuple(g)))):
        pairs += [(a, b), (b, a)]
    return ring.qprod(pairs)


def rhat(ring_or_weight, g: Perm) -> GroupAlgebraMatrix:
    ring = _ring_of(ring_or_weight)
    return GroupAlgebraMatrix.rhat(ring, tuple(g))


def _ring_of(x):
    if isinstance(x, Weight):
        x.require_generic()
        return PatternRing(x.n)
    return x


def cocycle(ring_or_weight, g1: Perm, g2: Perm):
    """Diagonal ``M(g1,g2)`` with ``R^(g1) R^(g2) = M R^(g1 g2)``."""
    ring = _ring_of(ring_or_weight)
    pairs = []
    for a, b in sorted(inversion_set(g1) & inversion_set(inverse(g2))):
        x, y = g1[a - 1], g1[b - 1]
        pairs += [(x, y), (y, x)]
    return ring.qprod(pairs)


def check_quasimultiplicative(ring, g1: Perm, g2: Perm) -> bool:
    lhs = rhat(ring, g1) * rhat(ring, g2)
    rhs = rhat(ring, compose(g1, g2)).lmul(cocycle(ring, g1, g2))
    return lhs == rhs


def check_braid(ring) -> bool:
    n = ring.n
    R = lambda g: rhat(ring, g)  # noqa: E731
    for a in range(1, n - 1):
        s, t = t_ab(n, a, a + 1), t_ab(n, a + 1, a + 2)
        if R(s) * R(t) * R(s) != R(t) * R(s) * R(t):
            return False
    for a in range(1, n):
        for b in range(a + 2, n):
            s, t = t_ab(n, a, a + 1), t_ab(n, b, b + 1)
            if R(s) * R(t) != R(t) * R(s):
                return False
    return True


def check_property2(ring) -> bool:
    n = ring.n
    for m in range(1, n + 1):
        for g in all_perms(n):
            if set(g[:m - 1]) != set(range(1, m)):
                continue
            for k in range(1, m + 1):
                t = t_ab(n, k, m)
                if rhat(ring, g) * rhat(ring, t) != rhat(ring, compose(g, t)):
                    return False
    return True


def property3_check(ring_or_weight, g: Perm) -> bool:
    """Commutation rules: the t_{a,m} exchange rule and the w_n conjugation rule at g."""
    ring = _ring_of(ring_or_weight)
    n = ring.n
    g = tuple(g)
    w = w_interval(n, 1, n)
    ginv = inverse(g)
    pairs = []
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            if ginv[a - 1] < ginv[b - 1]:
                pairs += [(a, b), (b, a)]
    expected = rhat(ring, g).lmul(ring.qprod(pairs))
    ok = rhat(ring, compose(g, w)) * rhat(ring, w) == expected
    ok = ok and rhat(ring, w) * rhat(ring, compose(w, g)) == expected
    for m in range(2, n + 1):
        for a in range(1, m):
            for a2 in range(a, m):
                lhs = rhat(ring, t_ab(n, a2, m)) * rhat(ring, t_ab(n, a, m))
                rhs = (rhat(ring, t_ab(n, a, m - 1)) * rhat(ring, t_ab(n, a2 + 1, m))).lmul(
                    q_pair(ring, m - 1, m))
                ok = ok and lhs == rhs
    return ok


def cyclic_factor(ring, m: int) -> GroupAlgebraMatrix:
    return GroupAlgebraMatrix.rhat_sum(ring, [t_ab(ring.n, k, m) for k in range(1, m + 1)])


def cyclic_factors(ring_or_weight) -> list[GroupAlgebraMatrix]:
    """``[A^(1), ..., A^(n)]`` with ``A^(m) = sum_k R^(t_{k,m})``; their product is the Gram matrix."""
    ring = _ring_of(ring_or_weight)
    return [cyclic_factor(ring, m) for m in range(1, ring.n + 1)]


def c_factor(ring, m: int) -> GroupAlgebraMatrix:
    n = ring.n
    if not 2 <= m <= n:
        raise ValueError(f"C^m needs 2 <= m <= n, got m={m}")
    ident = GroupAlgebraMatrix.identity(ring)
    out = ident
    for k in range(1, m):
        out = out * (ident - rhat(ring, t_ab(n, k, m)))
    return out


def d_factor(ring, m: int) -> GroupAlgebraMatrix:
    n = ring.n
    if not 1 <= m < n:
        raise ValueError(f"D^m needs 1 <= m < n, got m={m}")
    ident = GroupAlgebraMatrix.identity(ring)
    qq = q_pair(ring, m, m + 1)
    out = ident
    for k in range(1, m + 1):
        out = out * (ident - rhat(ring, t_ab(n, k, m)).lmul(qq))
    return out


def cd_factors(ring_or_weight, m: int) -> dict:
    """``{"C": C^m, "D": D^(m-1)}`` for ``2 <= m <= n``, so that ``A^(m) C^m = D^(m-1)``."""
    ring = _ring_of(ring_or_weight)
    return {"C": c_factor(ring, m), "D": d_factor(ring, m - 1)}


def check_cd_identity(ring, m: int) -> bool:
    f = cd_factors(ring, m)
    return cyclic_factor(ring, m) * f["C"] == f["D"]


def product(mats: list[GroupAlgebraMatrix]) -> GroupAlgebraMatrix:
    out = mats[0]
    for m in mats[1:]:
        out = out * m
    return out


_GRAM_EXPONENTS: dict = {}


def _gram_exponents(weight: Weight):
    """Direct-route Gram entries of a generic weight as a 0/1 exponent table."""
    if weight not in _GRAM_EXPONENTS:
        basis = weight.basis()
        labels = weight.labels
        variables = [(a, b) for a in labels for b in labels if a != b]
        col = {v: k for k, v in enumerate(variables)}
        table = np.zeros((len(basis), len(basis), len(variables)), dtype=np.int8)
        for r, i in enumerate(basis):
            for c, j in enumerate(basis):
                (mono, _), = gram_entry(i, j).terms.items()
                for v, e in mono:
                    table[r, c, col[v]] = e
        _GRAM_EXPONENTS[weight] = (variables, table)
    return _GRAM_EXPONENTS[weight]


def gram_mod(weight: Weight, assignment: Mapping[Var, int], prime: int):
    """Direct-route Gram matrix evaluated modulo a prime (numpy int64)."""
    basis = weight.basis()
    if weight.is_generic:
        variables, table = _gram_exponents(weight)
        out = np.ones((len(basis), len(basis)), dtype=np.int64)
        for k, v in enumerate(variables):
            out = np.where(table[:, :, k] == 1, out * (assignment[v] % prime) % prime, out)
        return out
    out = np.zeros((len(basis), len(basis)), dtype=np.int64)
    for a, i in enumerate(basis):
        for b, j in enumerate(basis):
            out[a, b] = gram_entry(i, j).eval_mod(assignment, prime)
    return out


def gram_numeric(weight: Weight, values: Mapping[Var, complex]):
    """Gram matrix at a complex point, as a numpy array."""
    basis = weight.basis()
    if not weight.is_generic:
        return np.array([[complex(gram_entry(i, j).evaluate(values)) for j in basis] for i in basis])
    variables, table = _gram_exponents(weight)
    out = np.ones((len(basis), len(basis)), dtype=complex)
    for k, v in enumerate(variables):
        out = np.where(table[:, :, k] == 1, out * complex(values[v]), out)
    return out


def weight_variables(weight: Weight) -> list[Var]:
    labels = weight.labels
    return [(a, b) for a in labels for b in labels if a != b or dict(weight.mult)[a] > 1]


__all__ = [
    "Weight", "WordPoly", "DenseMatrix", "PatternRing", "ModRing", "GroupAlgebraMatrix",
    "deformed_partial", "coproduct", "gram_entry", "derivative_entry", "pairing", "gram",
    "rhat", "cocycle", "q_factor", "q_pair", "abs_q_squared", "cyclic_factors", "cd_factors",
    "property3_check", "check_quasimultiplicative", "check_braid", "check_property2",
    "check_cd_identity", "product", "gram_mod", "gram_numeric", "weight_variables", "word_str", "q_word",
    "length", "EMPTY_BOXES",
]
