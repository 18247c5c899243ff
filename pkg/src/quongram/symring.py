"""Exact polynomial arithmetic over the parameter family q[i,j].

A variable is an ordered pair ``(i, j)`` of positive integer labels and stands
for ``q[i,j]``.  The empty tuple ``()`` is reserved for the single parameter
``q`` of the one-parameter specialization.  Polynomials have arbitrary
precision integer coefficients and are immutable.

Denominators never get expanded during inverse computations.  They are kept
as multisets of box factors ``1 - prod_{i != j in T} q[i,j]`` (``BoxProduct``)
and a rational entry is a numerator over such a multiset (``RatEntry``).
"""

from __future__ import annotations

import enum
import functools
import heapq
import json
import random
from collections import Counter
from fractions import Fraction
from itertools import permutations
from typing import Callable, Iterable, Mapping

Var = tuple
Monomial = tuple  # sorted tuple of (Var, exponent) pairs, exponents > 0

ONE_PARAM: Var = ()

#: Word-size primes used for randomized identity testing (all in (2^30, 2^31)).
DEFAULT_PRIMES = (2147483647, 2147483629, 2147483587)
DEFAULT_TRIALS = 20
DEFAULT_SEED = 20240601

_MIN_PRIME = 1 << 30


class MissingVariableError(KeyError):
    """Raised when an evaluation point does not assign every variable."""


class ParamMode(str, enum.Enum):
    MULTI = "multi"
    REAL = "real"
    ONE = "one"

    @classmethod
    def parse(cls, value: "ParamMode | str") -> "ParamMode":
        return value if isinstance(value, cls) else cls(str(value).lower())


def _var_name(v: Var) -> str:
    return "q" if v == ONE_PARAM else f"q[{v[0]},{v[1]}]"


@functools.lru_cache(maxsize=1 << 18)
def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    exps = dict(a)
    for v, e in b:
        left = exps.get(v, 0) - e
        if left < 0:
            return None
        if left:
            exps[v] = left
        else:
            del exps[v]
    return tuple(sorted(exps.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


_SENTINEL = (float("inf"),)


@functools.lru_cache(maxsize=1 << 18)
def _leading_key(m: Monomial):
    # Graded lex: higher degree first, then lex with earlier variables heavier.
    return (-_mono_degree(m), tuple((v, -e) for v, e in m) + ((_SENTINEL, 0),))


def _print_key(m: Monomial):
    return (_mono_degree(m), tuple((v, -e) for v, e in m) + ((_SENTINEL, 0),))


class Poly:
    """Sparse polynomial in the variables q[i,j] with integer coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        self._terms = {m: c for m, c in (terms or {}).items() if c}
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, c: int) -> "Poly":
        return cls({(): int(c)})

    @classmethod
    def var(cls, i: int, j: int) -> "Poly":
        return cls({(((i, j), 1),): 1})

    @classmethod
    def q(cls, power: int = 1) -> "Poly":
        return cls({((ONE_PARAM, power),): 1} if power else {(): 1})

    @classmethod
    def monomial(cls, exps: Mapping[Var, int] | Iterable[Var], coeff: int = 1) -> "Poly":
        if not isinstance(exps, Mapping):
            exps = Counter(exps)
        mono = tuple(sorted((v, e) for v, e in exps.items() if e))
        return cls({mono: coeff})

    @classmethod
    def coerce(cls, x) -> "Poly":
        if isinstance(x, Poly):
            return x
        if isinstance(x, int):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Poly")

    # basic protocol -----------------------------------------------------
    @property
    def terms(self) -> dict:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def constant_term(self) -> int:
        return self._terms.get((), 0)

    def degree(self) -> int:
        return max((_mono_degree(m) for m in self._terms), default=-1)

    def variables(self) -> set:
        return {v for m in self._terms for v, _ in m}

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "Poly":
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for m, c in small.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return Poly.coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, int):
            return Poly({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly.const(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def leading_monomial(self) -> Monomial:
        return min(self._terms, key=_leading_key)

    def exact_div(self, divisor: "Poly") -> "Poly | None":
        """Return ``self / divisor`` if the division is exact, else None.

        Uses the multivariate division algorithm in graded lex order; for a
        single divisor a nonzero remainder certifies non-divisibility.
        """
        divisor = Poly.coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead = divisor.leading_monomial()
        lead_c = divisor._terms[lead]
        rem = dict(self._terms)
        heap = [(_leading_key(m), m) for m in rem]
        heapq.heapify(heap)
        quot: dict = {}
        while rem:
            _, m = heapq.heappop(heap)
            c = rem.get(m)
            if c is None:
                continue  # stale entry for a cancelled monomial
            q_mono = _mono_div(m, lead)
            if q_mono is None or c % lead_c:
                return None
            q_c = c // lead_c
            quot[q_mono] = quot.get(q_mono, 0) + q_c
            for dm, dc in divisor._terms.items():
                pm = _mono_mul(q_mono, dm)
                old = rem.get(pm)
                s = (old or 0) - q_c * dc
                if s:
                    rem[pm] = s
                    if old is None:
                        heapq.heappush(heap, (_leading_key(pm), pm))
                else:
                    rem.pop(pm, None)
        return Poly(quot)

    def divides(self, other: "Poly") -> bool:
        return Poly.coerce(other).exact_div(self) is not None

    # structural maps ----------------------------------------------------
    def map_vars(self, fn: Callable[[Var], Var]) -> "Poly":
        out: dict = {}
        for m, c in self._terms.items():
            exps: dict = {}
            for v, e in m:
                w = fn(v)
                exps[w] = exps.get(w, 0) + e
            key = tuple(sorted(exps.items()))
            out[key] = out.get(key, 0) + c
        return Poly(out)

    def relabel(self, fn: Callable[[int], int]) -> "Poly":
        """Apply an index map to both indices of every variable."""
        return self.map_vars(lambda v: v if v == ONE_PARAM else (fn(v[0]), fn(v[1])))

    def conjugate(self) -> "Poly":
        # The hermitian involution: q[i,j] -> q[j,i], integer coefficients fixed.
        return self.map_vars(lambda v: v if v == ONE_PARAM else (v[1], v[0]))

    def specialize(self, mode: ParamMode | str) -> "Poly":
        mode = ParamMode.parse(mode)
        if mode is ParamMode.MULTI:
            return self
        if mode is ParamMode.REAL:
            return self.map_vars(lambda v: v if v == ONE_PARAM else (min(v), max(v)))
        return self.map_vars(lambda v: ONE_PARAM)

    def evaluate(self, values: Mapping[Var, object]):
        """Evaluate at exact or numeric values (ints, Fractions, complex)."""
        total = 0
        for m, c in self._terms.items():
            term = c
            for v, e in m:
                if v not in values:
                    raise MissingVariableError(_var_name(v))
                term = term * values[v] ** e
            total = total + term
        return total

    def eval_mod(self, assignment: Mapping[Var, int], prime: int) -> int:
        if prime <= _MIN_PRIME:
            raise ValueError(f"prime must exceed 2^30, got {prime}")
        total = 0
        for m, c in self._terms.items():
            term = c % prime
            for v, e in m:
                try:
                    x = assignment[v]
                except KeyError:
                    raise MissingVariableError(_var_name(v)) from None
                term = term * pow(x, e, prime) % prime
            total += term
        return total % prime

    # serialization ------------------------------------------------------
    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda mc: _print_key(mc[0]))

    @staticmethod
    def _mono_text(m: Monomial) -> str:
        parts = []
        for v, e in m:
            parts.append(_var_name(v) + (f"^{e}" if e > 1 else ""))
        return "*".join(parts)

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for idx, (m, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = self._mono_text(m)
            if not body:
                chunk = str(mag)
            elif mag == 1:
                chunk = body
            else:
                chunk = f"{mag}*{body}"
            if idx == 0:
                out.append(("-" if c < 0 else "") + chunk)
            else:
                out.append(f"{sign} {chunk}")
        return " ".join(out)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Poly({self.to_text()!r})"

    def to_json(self) -> list:
        rows = []
        for m, c in self.sorted_terms():
            exps = [[v[0], v[1], e] if v != ONE_PARAM else ["q", e] for v, e in m]
            rows.append({"coeff": c, "exps": exps})
        return rows

    @classmethod
    def from_json(cls, rows: list) -> "Poly":
        out: dict = {}
        for row in rows:
            exps: dict = {}
            for item in row["exps"]:
                if len(item) == 2:
                    exps[ONE_PARAM] = exps.get(ONE_PARAM, 0) + int(item[1])
                else:
                    v = (int(item[0]), int(item[1]))
                    exps[v] = exps.get(v, 0) + int(item[2])
            m = tuple(sorted((v, e) for v, e in exps.items() if e))
            out[m] = out.get(m, 0) + int(row["coeff"])
        return cls(out)


ZERO = Poly()
ONE = Poly.const(1)


def q_set(support: Iterable[int]) -> Poly:
    """The monomial prod_{a != b} q[T_a, T_b] over ordered pairs of distinct slots.

    ``support`` may be a multiset (degenerate weights); slots are distinct
    even when their labels coincide.
    """
    items = list(support)
    exps: Counter = Counter()
    for a, b in permutations(range(len(items)), 2):
        exps[(items[a], items[b])] += 1
    return Poly.monomial(exps)


@functools.lru_cache(maxsize=None)
def cyclotomic(d: int) -> tuple:
    """Integer coefficients (constant term first) of the d-th cyclotomic polynomial."""
    num = [-1] + [0] * (d - 1) + [1]  # x^d - 1
    for e in range(1, d):
        if d % e == 0:
            num = _int_div(num, list(cyclotomic(e)))
    return tuple(num)


def _int_div(a: list, b: list) -> list:
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for k in range(len(out) - 1, -1, -1):
        c, r = divmod(a[k + len(b) - 1], b[-1])
        if r:
            raise ArithmeticError("inexact integer polynomial division")
        out[k] = c
        for i, bc in enumerate(b):
            a[k + i] -= c * bc
    if any(a[: len(b) - 1]):
        raise ArithmeticError("inexact integer polynomial division")
    return out


def monomial_root(m: Poly) -> tuple[Poly, int]:
    """Write a monic monomial as ``N^k`` with N not a proper power."""
    (mono, c), = m.terms.items()
    if c != 1 or not mono:
        raise ValueError("expected a monic nonconstant monomial")
    k = 0
    for _, e in mono:
        k = e if k == 0 else _gcd(k, e)
    return Poly({tuple((v, e // k) for v, e in mono): 1}), k


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def cyclotomic_in(d: int, base: Poly) -> Poly:
    out, power = ZERO, ONE
    for c in cyclotomic(d):
        if c:
            out = out + power * c
        power = power * base
    return out


def binomial_atoms(m: Poly) -> list[tuple[int, Poly]]:
    """``1 - m = -prod_{d | k} Phi_d(N)`` for ``m = N^k``; returns ``[(d, Phi_d(N))]``."""
    base, k = monomial_root(m)
    return [(d, cyclotomic_in(d, base)) for d in range(1, k + 1) if k % d == 0]


# --------------------------------------------------------------------------
# box factors and rational entries


@functools.total_ordering
class BoxFactor:
    """The factor ``1 - q_T``; ``support`` is a sorted multiset of labels."""

    __slots__ = ("support", "mode", "_key")

    def __init__(self, support: Iterable[int], mode: ParamMode | str = ParamMode.MULTI):
        self.support = tuple(sorted(support))
        if len(self.support) < 2:
            raise ValueError("a box factor needs at least two indices")
        self.mode = ParamMode.parse(mode)
        if self.mode is ParamMode.ONE:
            self._key = (self.mode.value, len(self.support), ())
        else:
            self._key = (self.mode.value, len(self.support), self.support)

    def __eq__(self, other) -> bool:
        return isinstance(other, BoxFactor) and self._key == other._key

    def __lt__(self, other: "BoxFactor") -> bool:
        return self._key < other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"BoxFactor({list(self.support)}, {self.mode.value})"

    @property
    def size(self) -> int:
        return len(self.support)

    def q_part(self) -> Poly:
        return q_set(self.support).specialize(self.mode)

    def expand(self) -> Poly:
        return _expand_box(self)

    def specialize(self, mode: ParamMode | str) -> "BoxFactor":
        mode = ParamMode.parse(mode)
        if self.mode is ParamMode.ONE or mode is self.mode or mode is ParamMode.MULTI:
            return self
        return BoxFactor(self.support, mode)

    def relabel(self, fn: Callable[[int], int]) -> "BoxFactor":
        if self.mode is ParamMode.ONE:
            return self
        return BoxFactor((fn(i) for i in self.support), self.mode)

    def to_text(self) -> str:
        return "(" + self.expand().to_text().replace(" ", "") + ")"

    def to_json(self) -> dict:
        return {"support": list(self.support), "mode": self.mode.value}


@functools.lru_cache(maxsize=1 << 16)
def _expand_box(box: BoxFactor) -> Poly:
    return ONE - box.q_part()


class BoxProduct:
    """Immutable multiset of box factors."""

    __slots__ = ("_items", "_hash")

    def __init__(self, factors: Iterable[BoxFactor] | Mapping[BoxFactor, int] = ()):
        counts = Counter(factors) if not isinstance(factors, Mapping) else Counter(factors)
        self._items = tuple(sorted((f, m) for f, m in counts.items() if m > 0))
        self._hash = None

    @classmethod
    def of(cls, *supports: Iterable[int], mode: ParamMode | str = ParamMode.MULTI) -> "BoxProduct":
        return cls(BoxFactor(s, mode) for s in supports)

    @property
    def items(self) -> tuple:
        return self._items

    def counter(self) -> Counter:
        return Counter(dict(self._items))

    def __len__(self) -> int:
        return sum(m for _, m in self._items)

    def is_empty(self) -> bool:
        return not self._items

    def __eq__(self, other) -> bool:
        return isinstance(other, BoxProduct) and self._items == other._items

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._items)
        return self._hash

    def __mul__(self, other: "BoxProduct") -> "BoxProduct":
        return BoxProduct(self.counter() + other.counter())

    def lcm(self, other: "BoxProduct") -> "BoxProduct":
        return BoxProduct(self.counter() | other.counter())

    def issubset(self, other: "BoxProduct") -> bool:
        mine, theirs = self.counter(), other.counter()
        return all(theirs[f] >= m for f, m in mine.items())

    def minus(self, other: "BoxProduct") -> "BoxProduct":
        if not other.issubset(self):
            raise ValueError("not a sub-multiset")
        return BoxProduct(self.counter() - other.counter())

    def expand(self) -> Poly:
        return _expand_product(self)

    def specialize(self, mode: ParamMode | str) -> "BoxProduct":
        out: Counter = Counter()
        for f, m in self._items:
            out[f.specialize(mode)] += m
        return BoxProduct(out)

    def relabel(self, fn: Callable[[int], int]) -> "BoxProduct":
        out: Counter = Counter()
        for f, m in self._items:
            out[f.relabel(fn)] += m
        return BoxProduct(out)

    def to_text(self) -> str:
        if not self._items:
            return "1"
        return " ".join(f.to_text() + (f"^{m}" if m > 1 else "") for f, m in self._items)

    def to_json(self) -> list:
        return [dict(f.to_json(), mult=m) for f, m in self._items]

    def __repr__(self) -> str:
        return f"BoxProduct({self.to_text()})"


@functools.lru_cache(maxsize=1 << 16)
def _expand_product(bp: BoxProduct) -> Poly:
    out = ONE
    for f, m in bp.items:
        out = out * f.expand() ** m
    return out


EMPTY_BOXES = BoxProduct()


class RatEntry:
    """A numerator polynomial over a box-factor multiset."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly | int = 0, den: BoxProduct = EMPTY_BOXES):
        self.num = Poly.coerce(num)
        self.den = den if not self.num.is_zero() else EMPTY_BOXES

    @classmethod
    def coerce(cls, x) -> "RatEntry":
        return x if isinstance(x, RatEntry) else cls(Poly.coerce(x))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_empty()

    def _lift(self, den: BoxProduct) -> Poly:
        extra = den.minus(self.den)
        return self.num if extra.is_empty() else self.num * extra.expand()

    def __add__(self, other) -> "RatEntry":
        other = RatEntry.coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            return RatEntry(self.num + other.num, self.den)
        den = self.den.lcm(other.den)
        return RatEntry(self._lift(den) + other._lift(den), den)

    __radd__ = __add__

    def __neg__(self) -> "RatEntry":
        return RatEntry(-self.num, self.den)

    def __sub__(self, other) -> "RatEntry":
        return self + (-RatEntry.coerce(other))

    def __rsub__(self, other) -> "RatEntry":
        return RatEntry.coerce(other) - self

    def __mul__(self, other) -> "RatEntry":
        if isinstance(other, int):
            return RatEntry(self.num * other, self.den)
        other = RatEntry.coerce(other)
        if self.is_zero() or other.is_zero():
            return RatEntry()
        return RatEntry(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        try:
            other = RatEntry.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        den = self.den.lcm(other.den)
        return self._lift(den) == other._lift(den)

    __hash__ = None  # equality is semantic; not hashable

    def reduce(self) -> "RatEntry":
        """Cancel box factors that divide the numerator exactly."""
        num = self.num
        kept: Counter = Counter()
        for f, m in self.den.items:
            e = f.expand()
            for _ in range(m):
                q = num.exact_div(e)
                if q is None:
                    kept[f] += 1
                else:
                    num = q
        return RatEntry(num, BoxProduct(kept))

    def specialize(self, mode: ParamMode | str) -> "RatEntry":
        return RatEntry(self.num.specialize(mode), self.den.specialize(mode))

    def relabel(self, fn: Callable[[int], int]) -> "RatEntry":
        return RatEntry(self.num.relabel(fn), self.den.relabel(fn))

    def conjugate(self) -> "RatEntry":
        # box factors are self-conjugate
        return RatEntry(self.num.conjugate(), self.den)

    def eval_mod(self, assignment: Mapping[Var, int], prime: int) -> int:
        d = self.den.expand().eval_mod(assignment, prime)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at this point")
        return self.num.eval_mod(assignment, prime) * pow(d, prime - 2, prime) % prime

    def evaluate(self, values: Mapping[Var, object]):
        num, den = self.num.evaluate(values), self.den.expand().evaluate(values)
        if isinstance(num, (int, Fraction)) and isinstance(den, (int, Fraction)):
            return Fraction(num, den)
        return num / den

    def to_text(self) -> str:
        if self.den.is_empty():
            return self.num.to_text()
        num = self.num.to_text()
        if len(self.num.terms) > 1:
            num = f"({num})"
        return f"{num} / ({self.den.to_text()})"

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"RatEntry({self.to_text()!r})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "RatEntry":
        den: Counter = Counter()
        for row in data["den"]:
            den[BoxFactor(row["support"], row.get("mode", "multi"))] += int(row.get("mult", 1))
        return cls(Poly.from_json(data["num"]), BoxProduct(den))


def box_inverse(support: Iterable[int], mode: ParamMode | str = ParamMode.MULTI) -> RatEntry:
    return RatEntry(ONE, BoxProduct([BoxFactor(support, mode)]))


# --------------------------------------------------------------------------
# randomized identity testing


def random_assignment(variables: Iterable[Var], prime: int, rng: random.Random) -> dict:
    """Uniform nonzero residues for each variable."""
    return {v: rng.randrange(1, prime) for v in sorted(set(variables))}


def modular_points(variables: Iterable[Var], primes=DEFAULT_PRIMES, trials=DEFAULT_TRIALS, seed=DEFAULT_SEED):
    """Yield ``(prime, assignment)`` pairs, reproducibly from ``seed``."""
    variables = sorted(set(variables))
    for k, p in enumerate(primes):
        rng = random.Random(f"{seed}:{p}:{k}")
        for _ in range(trials):
            yield p, random_assignment(variables, p, rng)


def poly_identity_mod(lhs: Poly, rhs: Poly, primes=DEFAULT_PRIMES, trials=DEFAULT_TRIALS, seed=DEFAULT_SEED) -> bool:
    variables = lhs.variables() | rhs.variables()
    return all(lhs.eval_mod(a, p) == rhs.eval_mod(a, p) for p, a in modular_points(variables, primes, trials, seed))


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)
