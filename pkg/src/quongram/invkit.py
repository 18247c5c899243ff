"""Inverses of generic Gram matrices and their diagonal coefficients.

Every routine takes a ring backend (``PatternRing`` or ``ModRing``) so the same
code produces symbolic patterns and modular residue vectors.  Blocks are
closed integer intervals ``(a, b)`` of positions.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from .combin import (
    Perm,
    all_perms,
    bracketings,
    chain_of_bracketing,
    compose,
    descent_set,
    from_cuts,
    identity,
    inverse,
    parse_perm,
    perm_str,
    shuffle_reps,
    w_interval,
    w_of_cuts,
    young_data,
    young_sequence,
    young_subgroup,
)
from .detkit import generic_lift
from .fock import (
    DenseMatrix,
    GroupAlgebraMatrix,
    PatternRing,
    Weight,
    cocycle,
    gram,
    q_factor,
    rhat,
)
from .symring import (
    EMPTY_BOXES,
    ONE,
    BoxFactor,
    BoxProduct,
    ParamMode,
    Poly,
    RatEntry,
    binomial_atoms,
)


def _ring(x):
    if isinstance(x, Weight):
        x.require_generic()
        return PatternRing(x.n)
    return x


def _positions(a: int, b: int) -> range:
    return range(a, b + 1)


# building blocks ------------------------------------------------------------

def psi(ring, a: int, b: int) -> GroupAlgebraMatrix:
    """``(I + (-1)^m R^(w_[a..b]))^{-1} = (1/box_[a..b]) (I - (-1)^m R^(w_[a..b]))``, m = b-a+1."""
    ident = GroupAlgebraMatrix.identity(ring)
    if a == b:
        return ident
    w = rhat(ring, w_interval(ring.n, a, b))
    core = ident - w if (b - a + 1) % 2 == 0 else ident + w
    return core.lmul(ring.box_inv(_positions(a, b)))


def psi_subdivision(ring, sigma) -> GroupAlgebraMatrix:
    out = GroupAlgebraMatrix.identity(ring)
    for a, b in sigma:
        if a < b:
            out = out * psi(ring, a, b)
    return out


def gram_on(ring, a: int, b: int) -> GroupAlgebraMatrix:
    """Gram matrix of the block [a..b]: the sum of R^(g) over permutations of that block."""
    n = ring.n
    out = {}
    for h in all_perms(b - a + 1):
        g = list(range(1, n + 1))
        g[a - 1:b] = [a - 1 + x for x in h]
        out[tuple(g)] = q_factor(ring, tuple(g))
    return GroupAlgebraMatrix(ring, out)


def gram_matrix(ring) -> GroupAlgebraMatrix:
    return gram_on(ring, 1, ring.n)


# Young-subgroup factorization -----------------------------------------------

def gamma_set(n: int, J) -> list[Perm]:
    """Shuffle representatives: permutations with every descent inside J."""
    return shuffle_reps(n, frozenset(J))


def gamma_factor(ring_or_weight, J) -> GroupAlgebraMatrix:
    ring = _ring(ring_or_weight)
    return GroupAlgebraMatrix.rhat_sum(ring, gamma_set(ring.n, J))


def young_gram(ring, J) -> GroupAlgebraMatrix:
    """``A_J``: sum of R^ over the Young subgroup whose blocks are cut at J."""
    return GroupAlgebraMatrix.rhat_sum(ring, young_subgroup(ring.n, frozenset(J)))


def check_gamma_factorization(ring_or_weight, J) -> bool:
    ring = _ring(ring_or_weight)
    return gamma_factor(ring, J) * young_gram(ring, J) == gram_matrix(ring)


def euler_solomon_check(ring_or_weight) -> bool:
    """Alternating sum of all Gamma_J equals R^(w_n)."""
    ring = _ring(ring_or_weight)
    n = ring.n
    total = GroupAlgebraMatrix(ring)
    for k in range(n):
        for J in combinations(range(1, n), k):
            term = gamma_factor(ring, J)
            total = total + (term if (n - 1 - k) % 2 == 0 else -term)
    return total == rhat(ring, w_interval(n, 1, n))


# inverse formulas -------------------------------------------------------------

def chain_terms(n: int) -> list[tuple[int, list]]:
    """``(sign, chain)`` for every bracketing with outer bracket; chains run coarse to fine."""
    out = []
    for br in bracketings(n, outer=True):
        sign = -1 if (len(br) + n - 1) % 2 else 1
        out.append((sign, chain_of_bracketing(br, n)))
    return out


def inverse_chain(ring_or_weight) -> GroupAlgebraMatrix:
    """Signed sum over subdivision chains of Psi products, finest subdivision on the left."""
    ring = _ring(ring_or_weight)
    n = ring.n
    if n == 1:
        return GroupAlgebraMatrix.identity(ring)
    cache: dict = {}
    total = GroupAlgebraMatrix(ring)
    for sign, chain in chain_terms(n):
        term = GroupAlgebraMatrix.identity(ring)
        for sigma in reversed(chain):
            if sigma not in cache:
                cache[sigma] = psi_subdivision(ring, sigma)
            term = term * cache[sigma]
        total = total + (term if sign > 0 else -term)
    return total


def inverse_long(ring_or_weight) -> GroupAlgebraMatrix:
    ring = _ring(ring_or_weight)
    memo: dict = {}

    def inv(a: int, b: int) -> GroupAlgebraMatrix:
        if a == b:
            return GroupAlgebraMatrix.identity(ring)
        if (a, b) not in memo:
            acc = GroupAlgebraMatrix(ring)
            for k in range(1, b - a + 1):
                for cuts in combinations(range(a, b), k):
                    term = GroupAlgebraMatrix.identity(ring)
                    for c, d in from_cuts(b, cuts, a):
                        term = term * inv(c, d)
                    acc = acc + (term if k % 2 else -term)
            memo[(a, b)] = acc * psi(ring, a, b)
        return memo[(a, b)]

    return inv(1, ring.n)


def inverse_short(ring_or_weight) -> GroupAlgebraMatrix:
    ring = _ring(ring_or_weight)
    n = ring.n
    memo: dict = {}

    def inv(a: int, b: int) -> GroupAlgebraMatrix:
        if a == b:
            return GroupAlgebraMatrix.identity(ring)
        if (a, b) not in memo:
            acc = GroupAlgebraMatrix(ring)
            for k in range(a, b):
                term = inv(a, k) * inv(k + 1, b) * rhat(ring, w_interval(n, a, k))
                acc = acc + (term if (k - a) % 2 == 0 else -term)
            memo[(a, b)] = acc * psi(ring, a, b)
        return memo[(a, b)]

    return inv(1, n)


def recursion_step(ring_or_weight, kind: str) -> GroupAlgebraMatrix:
    if kind == "long":
        return inverse_long(ring_or_weight)
    if kind == "short":
        return inverse_short(ring_or_weight)
    raise ValueError("kind must be 'long' or 'short'")


# identity coefficients ------------------------------------------------------

def thickened_identity(ring, parts) -> object:
    """Identity coefficient of a block matrix whose k-th letter is the interval ``parts[k]``."""
    parts = tuple(tuple(p) for p in parts)
    for (_, b), (c, _) in zip(parts, parts[1:]):
        if c != b + 1:
            raise ValueError(f"parts must be consecutive and disjoint: {parts}")
    l = len(parts)
    total = ring.zero()
    for br in bracketings(l, outer=True):
        term = ring.one()
        for x, y in br:
            term = ring.mul(term, ring.box_inv(_positions(parts[x - 1][0], parts[y - 1][1])))
        total = ring.add(total, term) if (len(br) + l - 1) % 2 == 0 else ring.sub(total, term)
    return total


def lambda_identity(ring_or_weight, form: str = "outer"):
    """Identity coefficient from bracketings with outer bracket, or (``form="inner"``) without."""
    ring = _ring(ring_or_weight)
    n = ring.n
    if form == "outer":
        return thickened_identity(ring, [(k, k) for k in range(1, n + 1)])
    if form != "inner":
        raise ValueError("form must be 'outer' or 'inner'")
    if n == 1:
        return ring.one()
    total = ring.zero()
    for br in bracketings(n, outer=False):
        term = ring.one()
        for x, y in br:
            term = ring.mul(term, ring.mul(ring.qset(_positions(x, y)), ring.box_inv(_positions(x, y))))
        total = ring.add(total, term)
    return ring.mul(total, ring.box_inv(_positions(1, n)))


# the Lambda coefficients ----------------------------------------------------

class LambdaEngine:
    """Memoized ``Lambda(g)`` on intervals via the Young-factor recursion."""

    def __init__(self, ring):
        self.ring = ring
        self._memo: dict = {}
        self._thick: dict = {}

    def thick(self, parts):
        parts = tuple(parts)
        if parts not in self._thick:
            self._thick[parts] = thickened_identity(self.ring, parts)
        return self._thick[parts]

    def __call__(self, g: Perm, interval=None):
        g = tuple(g)
        a, b = interval or (1, len(g))
        key = (g, a, b)
        if key not in self._memo:
            self._memo[key] = self._compute(g, a, b)
        return self._memo[key]

    def _compute(self, g: Perm, a: int, b: int):
        ring = self.ring
        if a == b:
            return ring.one()
        data = young_data(g, (a, b))
        if not data.J:
            if g[a - 1] < g[b - 1]:
                return ring.zero()
            w = w_interval(ring.n, a, b)
            gw = data.gprime
            inner = self(gw, (a, b))
            if ring.is_zero(inner):
                return inner
            out = ring.mul(cocycle(ring, gw, w), inner)
            return out if (b - a) % 2 == 0 else ring.neg(out)
        out = self.thick(data.sigma)
        for factor, (c, d) in zip(data.factors, data.sigma):
            if c < d:
                out = ring.mul(out, self(factor, (c, d)))
                if ring.is_zero(out):
                    return out
        return out


def lambda_fast(ring_or_weight, g: Perm, engine: LambdaEngine | None = None):
    ring = _ring(ring_or_weight)
    engine = engine or LambdaEngine(ring)
    return engine(tuple(g))


def relative_identity(ring, finer, coarser):
    """Product over blocks of ``coarser`` of the thickened identity of ``finer`` inside it."""
    out = ring.one()
    for c, d in coarser:
        inside = [iv for iv in finer if c <= iv[0] and iv[1] <= d]
        out = ring.mul(out, thickened_identity(ring, inside))
    return out


def lambda_closed(ring_or_weight, g: Perm):
    """Product formula along the Young sequence, with its sign and Q factors at odd levels."""
    ring = _ring(ring_or_weight)
    g = tuple(g)
    n = len(g)
    seq = young_sequence(g)
    if not seq.tree_like:
        return ring.zero()
    d = seq.depth
    sigmas = [young_data(h).sigma for h in seq.seq]
    sign_exp = sum(n - len(s) for s in sigmas)
    out = thickened_identity(ring, sigmas[0])
    for k in range(1, d + 1):
        out = ring.mul(out, relative_identity(ring, sigmas[k], sigmas[k - 1]))
    top = 2 * ((d - 1) // 2) + 1 if d >= 1 else -1
    for k in range(1, top + 1, 2):
        for c, e in sigmas[k]:
            out = ring.mul(out, ring.qset(_positions(c, e)))
    return ring.neg(out) if sign_exp % 2 else out


def lambda_split_form(ring_or_weight, g: Perm):
    """Recurrence over single cuts with the Q factor switched by ``g(1) < g(k)``.

    Valid for ``g(1) < g(n)``; used only as a small-size cross-check.
    """
    ring = _ring(ring_or_weight)
    g = tuple(g)
    n = len(g)
    engine = LambdaEngine(ring)
    total = ring.zero()
    for k in range(1, n):
        if max(g[:k]) != k:
            continue
        left = g[:k] + tuple(range(k + 1, n + 1))
        right = tuple(range(1, k + 1)) + g[k:]
        term = ring.mul(engine(left, (1, k)), engine(right, (k + 1, n)))
        if g[0] < g[k - 1]:
            term = ring.mul(term, ring.qset(_positions(1, k)))
        total = ring.add(total, term)
    return ring.mul(total, ring.box_inv(_positions(1, n)))


def inverse_via_lambda(ring_or_weight) -> GroupAlgebraMatrix:
    ring = _ring(ring_or_weight)
    engine = LambdaEngine(ring)
    diags = {}
    for g in all_perms(ring.n):
        lam = engine(g)
        if not ring.is_zero(lam):
            diags[g] = ring.mul(lam, q_factor(ring, g))
    return GroupAlgebraMatrix(ring, diags)


def zero_census(ring_or_weight) -> dict:
    """Permutations with vanishing Lambda, next to the non-tree-like ones."""
    ring = _ring(ring_or_weight)
    engine = LambdaEngine(ring)
    perms = all_perms(ring.n)
    zeros = sorted(g for g in perms if ring.is_zero(engine(g)))
    non_tree = sorted(g for g in perms if not young_sequence(g).tree_like)
    return {"zeros": zeros, "non_tree_like": non_tree, "match": zeros == non_tree}


# certificates ---------------------------------------------------------------

def interval_boxes(n: int, mode: ParamMode | str = ParamMode.MULTI) -> BoxProduct:
    """Product of box factors over all intervals [a..b], a < b, of positions."""
    return BoxProduct(BoxFactor(_positions(a, b), mode) for a in range(1, n) for b in range(a + 1, n + 1))


def zagier_delta(n: int) -> BoxProduct:
    """``prod_{k=2}^n (1 - q^{k(k-1)})``."""
    return BoxProduct(BoxFactor(range(1, k + 1), ParamMode.ONE) for k in range(2, n + 1))


def _atom_counts(boxes: BoxProduct) -> tuple[Counter, dict]:
    counts: Counter = Counter()
    atoms: dict = {}
    for box, m in boxes.items:
        for _, atom in binomial_atoms(box.q_part()):
            key = atom.to_text()
            atoms[key] = atom
            counts[key] += m
    return counts, atoms


def clear_denominator(entry: RatEntry, target: BoxProduct) -> dict:
    """Decide whether ``target * entry`` is a polynomial.

    Denominator boxes are split into irreducible cyclotomic atoms; atoms the
    target does not cover must divide the numerator.
    """
    need, atoms = _atom_counts(entry.den)
    have, more = _atom_counts(target)
    atoms.update(more)
    num = entry.num
    missing = []
    for key in sorted(need):
        short = need[key] - have[key]
        while short > 0:
            quo = num.exact_div(atoms[key])
            if quo is None:
                missing.append(key)
                break
            num, short = quo, short - 1
    return {"polynomial": not missing, "offending": missing}


@dataclass
class ZagierCertificate:
    n: int
    mode: ParamMode
    denominator: BoxProduct
    witness: dict = field(default_factory=dict)
    verdict: str = "holds"
    failure: tuple | None = None
    original: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "mode": self.mode.value,
            "denominator": self.denominator.to_text(),
            "verdict": self.verdict,
            "failure": None if self.failure is None else {"g": self.failure[0], "offending": self.failure[1]},
            "original": self.original,
            "witnesses": {perm_str(g): e.to_text() for g, e in sorted(self.witness.items())},
        }


def default_witnesses(n: int) -> list[Perm]:
    """All ``w_J``: each block of a subdivision reversed."""
    out = []
    for k in range(n):
        for cuts in combinations(range(1, n), k):
            out.append(w_of_cuts(n, from_cuts(n, cuts)))
    return sorted(set(out))


def delta_extended(n: int) -> BoxProduct:
    """``prod_k (1 - q^{k(k-1)})^{n-k+1}``; the one-parameter value of the interval boxes."""
    return interval_boxes(n, ParamMode.ONE)


def zagier_certificate(n: int, mode: ParamMode | str = ParamMode.ONE, perms=None) -> ZagierCertificate:
    mode = ParamMode.parse(mode)
    if perms is None:
        perms = all_perms(n) if n <= 6 else default_witnesses(n)
    ring = PatternRing(n, mode)
    engine = LambdaEngine(ring)
    target = interval_boxes(n, mode)
    cert = ZagierCertificate(n, mode, target)
    delta = zagier_delta(n) if mode is ParamMode.ONE else None
    original = {"denominator": delta.to_text() if delta else None, "verdict": "holds", "failures": []}
    for g in perms:
        g = tuple(g)
        entry = engine(g)
        if entry.is_zero():
            continue
        entry = ring.mul(entry, q_factor(ring, g))
        cert.witness[g] = entry
        res = clear_denominator(entry, target)
        if not res["polynomial"] and cert.verdict == "holds":
            cert.verdict, cert.failure = "fails", (perm_str(g), res["offending"])
        if delta is not None:
            res = clear_denominator(entry, delta)
            if not res["polynomial"]:
                original["verdict"] = "fails"
                original["failures"].append({"g": perm_str(g), "offending": res["offending"]})
    cert.original = original
    return cert


# degenerate weights ---------------------------------------------------------

def degenerate_inverse(weight: Weight) -> DenseMatrix:
    """Inverse for a weight with repeated letters via its generic lift.

    The lifted inverse is relabeled onto the letters of ``weight`` and, for
    each degenerate column, the lifted columns over the stabilizer of a
    representative are summed.
    """
    lift, phi = generic_lift(weight)
    inv = inverse_via_lambda(PatternRing(lift.n)).materialize(lift)
    basis = weight.basis()
    lifted = lift.basis()
    index = {w: k for k, w in enumerate(lifted)}
    project = lambda w: tuple(phi(x) for x in w)  # noqa: E731
    rep = {}
    for w in lifted:
        rep.setdefault(project(w), w)
    rows = []
    for i in basis:
        r = index[rep[i]]
        row = []
        for j in basis:
            acc = RatEntry()
            for w in lifted:
                if project(w) == j:
                    acc = acc + inv.rows[r][index[w]].relabel(phi)
            row.append(acc)
        rows.append(row)
    return DenseMatrix(basis, rows, weight)


def is_inverse(matrix: DenseMatrix, inverse_matrix: DenseMatrix) -> bool:
    return (matrix @ inverse_matrix).is_identity()


__all__ = [
    "LambdaEngine", "ZagierCertificate", "psi", "psi_subdivision", "gram_on", "gram_matrix",
    "gamma_set", "gamma_factor", "young_gram", "check_gamma_factorization", "euler_solomon_check",
    "chain_terms", "inverse_chain", "inverse_long", "inverse_short", "recursion_step",
    "thickened_identity", "lambda_identity", "lambda_fast", "lambda_closed", "lambda_split_form",
    "relative_identity", "inverse_via_lambda", "zero_census", "interval_boxes", "zagier_delta",
    "delta_extended", "clear_denominator", "default_witnesses", "zagier_certificate",
    "degenerate_inverse", "is_inverse",
]
