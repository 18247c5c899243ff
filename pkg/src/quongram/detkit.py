"""Determinants: closed forms, block determinants, exact and modular oracles, positivity."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Callable, Mapping

import numpy as np

from .combin import t_ab
from .fock import (
    DenseMatrix,
    GroupAlgebraMatrix,
    ModRing,
    PatternRing,
    Weight,
    gram,
    gram_entry,
    gram_mod,
    gram_numeric,
    q_pair,
    rhat,
)
from .symring import (
    DEFAULT_PRIMES,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    ONE,
    BoxFactor,
    ParamMode,
    Poly,
    binomial_atoms,
    modular_points,
    q_set,
)

SYMBOLIC_DIM_CAP = 24
PD_TOL = 1e-9


@dataclass(frozen=True)
class FactoredDet:
    """``sign * prod box^exponent`` with boxes kept unexpanded."""

    factors: tuple  # sorted ((BoxFactor, exponent), ...)
    sign: int = 1

    @classmethod
    def of(cls, pairs, sign: int = 1) -> "FactoredDet":
        counts: Counter = Counter()
        for box, e in pairs:
            counts[box] += e
        return cls(tuple(sorted((b, e) for b, e in counts.items() if e)), sign)

    def expand(self) -> Poly:
        out = Poly.const(self.sign)
        for box, e in self.factors:
            out = out * box.expand() ** e
        return out

    def specialize(self, mode: ParamMode | str) -> "FactoredDet":
        return FactoredDet.of(((b.specialize(mode), e) for b, e in self.factors), self.sign)

    def eval_mod(self, assignment, prime: int) -> int:
        out = self.sign % prime
        for box, e in self.factors:
            out = out * pow(box.expand().eval_mod(assignment, prime), e, prime) % prime
        return out

    def evaluate(self, values):
        out = self.sign
        for box, e in self.factors:
            out = out * box.expand().evaluate(values) ** e
        return out

    def to_text(self) -> str:
        parts = [b.to_text() + (f"^{e}" if e > 1 else "") for b, e in self.factors]
        body = " ".join(parts) if parts else "1"
        return body if self.sign == 1 else f"-{body}"

    def to_json(self) -> dict:
        return {
            "sign": self.sign,
            "factors": [{"support": list(b.support), "mode": b.mode.value, "exponent": e}
                        for b, e in self.factors],
        }


# closed forms ---------------------------------------------------------------

def det_closed(weight: Weight, mode: ParamMode | str = ParamMode.MULTI) -> FactoredDet:
    """Product over subsets mu (|mu| >= 2) of box_mu^((|mu|-2)! (n-|mu|+1)!)."""
    weight.require_generic()
    labels, n = weight.labels, weight.n
    pairs = [(BoxFactor(mu, mode), factorial(k - 2) * factorial(n - k + 1))
             for k in range(2, n + 1) for mu in combinations(labels, k)]
    return FactoredDet.of(pairs)


def det_zagier(n: int) -> FactoredDet:
    """One-parameter determinant with exponent n!(n-k+1)/(k(k-1)) on (1-q^(k(k-1)))."""
    pairs = []
    for k in range(2, n + 1):
        num = factorial(n) * (n - k + 1)
        if num % (k * (k - 1)):
            raise ArithmeticError("non-integral exponent")
        pairs.append((BoxFactor(range(1, k + 1), ParamMode.ONE), num // (k * (k - 1))))
    return FactoredDet.of(pairs)


def det_block(weight: Weight, kind: str, a: int, b: int) -> FactoredDet:
    """Factored ``det(I - R^(t_{a,b}))`` (kind a) or ``det(I - Q_{{b,b+1}} R^(t_{a,b}))`` (kind b)."""
    weight.require_generic()
    n, labels = weight.n, weight.labels
    if kind == "a":
        if not 1 <= a < b <= n:
            raise ValueError("kind a needs 1 <= a < b <= n")
        size, e = b - a + 1, factorial(b - a) * factorial(n + a - b - 1)
    elif kind == "b":
        if not 1 <= a <= b < n:
            raise ValueError("kind b needs 1 <= a <= b < n")
        size, e = b - a + 2, (b - a + 2) * factorial(b - a) * factorial(n + a - b - 2)
    else:
        raise ValueError("kind must be 'a' or 'b'")
    return FactoredDet.of((BoxFactor(mu), e) for mu in combinations(labels, size))


def block_matrix(weight: Weight, kind: str, a: int, b: int) -> GroupAlgebraMatrix:
    ring = PatternRing(weight.n)
    ident = GroupAlgebraMatrix.identity(ring)
    r = rhat(ring, t_ab(weight.n, a, b))
    if kind == "b":
        r = r.lmul(q_pair(ring, b, b + 1))
    return ident - r


# exact and modular oracles --------------------------------------------------

def bareiss(rows: list[list], exact_div: Callable, zero, one):
    """Fraction-free determinant; ``exact_div(x, y)`` must return x/y exactly."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return one
    sign, prev = 1, one
    for k in range(n - 1):
        if m[k][k] == zero:
            for r in range(k + 1, n):
                if m[r][k] != zero:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return zero
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * pivot - m[i][k] * m[k][j]
                m[i][j] = exact_div(num, prev)
            m[i][k] = zero
        prev = pivot
    det = m[n - 1][n - 1]
    return det if sign == 1 else zero - det


def _poly_div(x: Poly, y: Poly) -> Poly:
    if y == ONE:
        return x
    q = x.exact_div(y)
    if q is None:
        raise ArithmeticError("Bareiss division was not exact")
    return q


def minor_expansion(rows: list[list[Poly]]) -> Poly:
    """Determinant by row-wise Laplace expansion with memoized column-subset minors.

    Cost is about 2^n n small-times-large products, which beats fraction-free
    elimination when entries are short and intermediate minors are large.
    """
    n = len(rows)
    neg = [[-a for a in row] for row in rows]
    prev = {0: ONE}
    for k in range(n):
        cur: dict = {}
        for mask, minor in prev.items():
            above = 0  # chosen columns to the right of j
            for j in range(n - 1, -1, -1):
                if mask >> j & 1:
                    above += 1
                    continue
                a = neg[k][j] if above % 2 else rows[k][j]
                if a.is_zero():
                    continue
                t = minor * a
                nm = mask | 1 << j
                cur[nm] = cur[nm] + t if nm in cur else t
        prev = cur
    return prev.get((1 << n) - 1, Poly())


def det_symbolic(m: DenseMatrix | list[list], method: str = "auto") -> Poly:
    rows = m.rows if isinstance(m, DenseMatrix) else m
    if len(rows) > SYMBOLIC_DIM_CAP:
        raise ValueError(f"symbolic determinant capped at dimension {SYMBOLIC_DIM_CAP}")
    rows = [[Poly.coerce(x.num if hasattr(x, "num") and x.den.is_empty() else x) for x in r] for r in rows]
    if method == "auto":
        method = "minors" if len(rows) <= 14 else "bareiss"
    if method == "minors":
        return minor_expansion(rows)
    return bareiss(rows, _poly_div, Poly(), ONE)


def det_mod(matrix, prime: int) -> int:
    """Determinant of an integer matrix modulo a prime by Gaussian elimination."""
    a = np.array(matrix, dtype=np.int64) % prime
    n = a.shape[0]
    det = 1
    for k in range(n):
        nz = np.nonzero(a[k:, k])[0]
        if nz.size == 0:
            return 0
        r = k + int(nz[0])
        if r != k:
            a[[k, r]] = a[[r, k]]
            det = -det
        piv = int(a[k, k])
        det = det * piv % prime
        inv = pow(piv, prime - 2, prime)
        if k + 1 < n:
            factors = a[k + 1:, k] * inv % prime
            a[k + 1:, k:] = (a[k + 1:, k:] - factors[:, None] * a[k, k:][None, :] % prime) % prime
    return det % prime


def inverse_mod(matrix, prime: int):
    """Matrix inverse modulo a prime (Gauss-Jordan); raises if singular."""
    a = np.array(matrix, dtype=np.int64) % prime
    n = a.shape[0]
    aug = np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1)
    for k in range(n):
        nz = np.nonzero(aug[k:, k])[0]
        if nz.size == 0:
            raise ZeroDivisionError("singular matrix modulo prime")
        r = k + int(nz[0])
        if r != k:
            aug[[k, r]] = aug[[r, k]]
        aug[k] = aug[k] * pow(int(aug[k, k]), prime - 2, prime) % prime
        col = aug[:, k].copy()
        col[k] = 0
        aug = (aug - col[:, None] * aug[k][None, :] % prime) % prime
    return aug[:, n:]


def matmul_mod(a, b, prime: int):
    """Exact modular product; splits one operand into 16-bit halves to avoid int64 overflow."""
    a = np.asarray(a, dtype=np.int64) % prime
    b = np.asarray(b, dtype=np.int64) % prime
    lo, hi = b & 0xFFFF, b >> 16
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(a.shape[1]):
        col = a[:, k:k + 1]
        part = (col * lo[k:k + 1, :] + (col * hi[k:k + 1, :] % prime) * 65536) % prime
        out = (out + part) % prime
    return out


def det_bruteforce(m: DenseMatrix, backend: str = "symbolic", candidate: FactoredDet | None = None,
                   primes=DEFAULT_PRIMES, trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED):
    """Symbolic: the exact determinant.  Modular: verdict that det(m) equals ``candidate``."""
    if backend == "symbolic":
        return det_symbolic(m)
    if backend != "modular":
        raise ValueError("backend must be 'symbolic' or 'modular'")
    if candidate is None:
        raise ValueError("modular backend needs a candidate determinant")
    variables = set()
    for row in m.rows:
        for x in row:
            variables |= Poly.coerce(x.num if hasattr(x, "num") else x).variables()
    for b, _ in candidate.factors:
        variables |= b.expand().variables()
    for p, pt in modular_points(variables, primes, trials, seed):
        mat = [[Poly.coerce(x.num if hasattr(x, "num") else x).eval_mod(pt, p) for x in row] for row in m.rows]
        if det_mod(mat, p) != candidate.eval_mod(pt, p):
            return False
    return True


def det_closed_matches_mod(weight: Weight, primes=DEFAULT_PRIMES, trials: int = DEFAULT_TRIALS,
                           seed: int = DEFAULT_SEED) -> bool:
    """Compare det_closed with Gaussian elimination on the evaluated Gram matrix."""
    closed = det_closed(weight)
    labels = weight.labels
    variables = [(a, b) for a in labels for b in labels if a != b]
    for p, pt in modular_points(variables, primes, trials, seed):
        if det_mod(gram_mod(weight, pt, p), p) != closed.eval_mod(pt, p):
            return False
    return True


def block_matches_mod(weight: Weight, kind: str, a: int, b: int, primes=DEFAULT_PRIMES,
                      trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> bool:
    closed = det_block(weight, kind, a, b)
    labels = weight.labels
    variables = [(x, y) for x in labels for y in labels if x != y]
    n = weight.n
    for p, pt in modular_points(variables, primes, trials, seed):
        ring = ModRing(weight, pt, p)
        ident = GroupAlgebraMatrix.identity(ring)
        r = rhat(ring, t_ab(n, a, b))
        if kind == "b":
            r = r.lmul(q_pair(ring, b, b + 1))
        if det_mod((ident - r).materialize(), p) != closed.eval_mod(pt, p):
            return False
    return True


# degenerate divisibility ----------------------------------------------------

def generic_lift(weight: Weight) -> tuple[Weight, Callable[[int], int]]:
    """Generic weight on 1..n with the map back onto the letters of ``weight``."""
    letters = weight.letters
    return Weight.generic(len(letters)), lambda a: letters[a - 1]


def degenerate_divides(weight: Weight) -> dict:
    """Check that det A^(nu) divides the relabeled generic determinant.

    Every relabeled box ``1 - M`` factors as ``-prod_{d|k} Phi_d(N)`` with
    ``M = N^k``.  The degenerate determinant divides the product exactly when
    repeated exact division by these atoms, within their available
    multiplicities, reduces it to a unit.
    """
    lift, phi = generic_lift(weight)
    available: Counter = Counter()
    atoms: dict = {}
    for box, e in det_closed(lift).factors:
        mono = q_set(phi(a) for a in box.support)
        for d, atom in binomial_atoms(mono):
            key = atom.to_text()
            atoms[key] = atom
            available[key] += e
    det = det_symbolic(gram(weight))
    rest, used = det, Counter()
    progress = True
    while progress and not rest.is_constant():
        progress = False
        for key, atom in atoms.items():
            if used[key] >= available[key]:
                continue
            quo = rest.exact_div(atom)
            if quo is not None:
                rest, used[key], progress = quo, used[key] + 1, True
    ok = rest.is_constant() and abs(rest.constant_term()) == 1
    return {"divides": ok, "det": det, "used": dict(used), "cofactor": rest}


# positive definiteness ------------------------------------------------------

def _hermitian_values(weight: Weight, assignment: Mapping) -> dict:
    labels = weight.labels
    values = {}
    for a in labels:
        for b in labels:
            if a == b and weight.is_generic:
                continue
            x, y = assignment[(a, b)], assignment[(b, a)]
            if complex(x) != complex(y).conjugate():
                raise ValueError(f"assignment is not hermitian at ({a},{b})")
            values[(a, b)] = x
    return values


def one_parameter_assignment(weight: Weight, q) -> dict:
    labels = weight.labels
    return {(a, b): q for a in labels for b in labels}


def _exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def positive_definite(weight: Weight, assignment: Mapping, tol: float = PD_TOL) -> dict:
    """Decide positive definiteness of the Gram matrix at a numeric point.

    Pivots of elimination without pivoting are the ratios of consecutive
    leading principal minors.  A pivot inside ``[-tol, tol]`` is settled
    exactly when the point is rational: a vanishing determinant gives a hard
    negative verdict, otherwise the answer is ``indeterminate``.
    """
    values = _hermitian_values(weight, assignment)
    a = gram_numeric(weight, {k: complex(v) for k, v in values.items()})
    n = a.shape[0]
    pivots = []
    verdict = "positive_definite"
    for k in range(n):
        piv = a[k, k].real
        pivots.append(piv)
        if piv > tol:
            a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:]) / a[k, k]
            continue
        if piv < -tol:
            verdict = "not_positive_definite"
        else:
            verdict = _boundary_verdict(weight, values)
        break
    return {"verdict": verdict, "min_pivot": float(min(pivots)), "pivots": len(pivots)}


def _boundary_verdict(weight: Weight, values: dict) -> str:
    if not all(_exact(v) for v in values.values()):
        return "indeterminate"
    if weight.is_generic:
        det = det_closed(weight).evaluate(values)
    else:
        basis = weight.basis()
        det = fraction_det([[Fraction(gram_entry(i, j).evaluate(values)) for j in basis] for i in basis])
    return "not_positive_definite" if det == 0 else "indeterminate"


def fraction_det(rows: list[list[Fraction]]) -> Fraction:
    m = [list(r) for r in rows]
    n, det = len(m), Fraction(1)
    for k in range(n):
        r = next((i for i in range(k, n) if m[i][k] != 0), None)
        if r is None:
            return Fraction(0)
        if r != k:
            m[k], m[r] = m[r], m[k]
            det = -det
        det *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            for j in range(k, n):
                m[i][j] -= f * m[k][j]
    return det
