"""Applications and the ``quongram`` command line.

The weighted region form of the braid arrangement, the contravariant-form
determinant under ``q_ij = q^(-b_ij/2)``, and an argparse front end over
every module.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Mapping

from . import combin, detkit, fock, invkit
from .combin import Perm, all_perms, inversion_set, inverse, parse_perm, perm_str
from .detkit import FactoredDet, det_mod, fraction_det
from .fock import DenseMatrix, Weight, gram, gram_mod, weight_variables
from .symring import (
    DEFAULT_PRIMES,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    ONE,
    ONE_PARAM,
    BoxFactor,
    ParamMode,
    Poly,
    RatEntry,
    modular_points,
)


# weighted form of the braid arrangement --------------------------------------

def _check_weight(value):
    if isinstance(value, bool) or isinstance(value, float) or isinstance(value, complex):
        raise TypeError(f"arrangement weights must be exact, got {value!r}")
    if isinstance(value, (int, Fraction, Poly)):
        return value
    raise TypeError(f"unsupported weight type {type(value).__name__}")


def _normalize_weights(n: int, weights: Mapping | None) -> dict:
    pairs = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]
    if weights is None:
        return {p: Poly.var(*p) for p in pairs}
    out = {}
    for (a, b), v in weights.items():
        key = (min(a, b), max(a, b))
        v = _check_weight(v)
        if key in out and out[key] != v:
            raise ValueError(f"weights are not symmetric at {key}")
        out[key] = v
    missing = [p for p in pairs if p not in out]
    if missing:
        raise ValueError(f"missing weights for {missing}")
    return out


def separating_pairs(pi: Perm, tau: Perm) -> frozenset:
    """Hyperplanes x_a = x_b separating the regions of ``pi`` and ``tau``."""
    return inversion_set(inverse(pi)) ^ inversion_set(inverse(tau))


@dataclass
class ArrangementForm:
    n: int
    weights: dict
    matrix: DenseMatrix

    @property
    def symbolic(self) -> bool:
        return any(isinstance(v, Poly) for v in self.weights.values())

    def entry(self, pi: Perm, tau: Perm):
        return bform_entry(self.weights, pi, tau)


def bform_entry(weights: Mapping, pi: Perm, tau: Perm):
    out = ONE if any(isinstance(v, Poly) for v in weights.values()) else Fraction(1)
    for pair in sorted(separating_pairs(tuple(pi), tuple(tau))):
        out = out * weights[pair]
    return out


def bform(n: int, weights: Mapping | None = None) -> ArrangementForm:
    """Region matrix indexed by one-line permutations in lex order (region of pi <-> word pi(1)..pi(n))."""
    w = _normalize_weights(n, weights)
    regions = all_perms(n)
    rows = [[bform_entry(w, pi, tau) for tau in regions] for pi in regions]
    return ArrangementForm(n, w, DenseMatrix(regions, rows, Weight.generic(n)))


def edge_multiplicity(n: int, k: int) -> int:
    return factorial(k - 2) * factorial(n - k + 1)


def bform_det(n: int, weights: Mapping | None = None):
    """``prod_L (1 - a(L)^2)^{(k-2)!(n-k+1)!}`` over edges ``x_i1 = ... = x_ik``, k >= 2.

    Symbolic weights give a ``FactoredDet`` in the symmetric variables; exact
    numeric weights give the value.
    """
    w = _normalize_weights(n, weights)
    edges = [mu for k in range(2, n + 1) for mu in combinations(range(1, n + 1), k)]
    if weights is None:
        return FactoredDet.of((BoxFactor(mu, ParamMode.REAL), edge_multiplicity(n, len(mu))) for mu in edges)
    out = Fraction(1)
    for mu in edges:
        a = Fraction(1)
        for pair in combinations(mu, 2):
            a *= w[pair]
        out *= (1 - a * a) ** edge_multiplicity(n, len(mu))
    return out


def arrangement_matches_gram(n: int) -> bool:
    """The region matrix equals the generic Gram matrix with symmetric parameters."""
    form = bform(n)
    g = gram(Weight.generic(n)).map(lambda p: p.specialize(ParamMode.REAL))
    return form.matrix.basis == g.basis and form.matrix.rows == g.rows


def bform_det_check(n: int, primes=DEFAULT_PRIMES, trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> bool:
    """Brute-force check of ``bform_det``: exact for n <= 3, modular beyond."""
    form = bform(n)
    closed = bform_det(n)
    if n <= 3:
        return detkit.det_symbolic(form.matrix) == closed.expand()
    return detkit.det_bruteforce(form.matrix, "modular", closed, primes, trials, seed)


# contravariant form -----------------------------------------------------------

@dataclass(frozen=True)
class ContravariantDet:
    """``u^prefactor * prod (1 - u^(2 B_mu))^e_mu`` with ``u^2 = q``; B_mu sums b over pairs in mu."""

    n: int
    b: tuple  # sorted ((k, l), b_kl)
    prefactor: int
    factors: tuple  # ((mu, B_mu, exponent), ...)

    def value(self, u) -> Fraction:
        u = Fraction(u)
        out = u ** self.prefactor
        for _, big_b, e in self.factors:
            out *= (1 - u ** (2 * big_b)) ** e
        return out

    def symmetric_value(self, u) -> Fraction:
        """Second displayed form: ``prod (q^{-B/2} - q^{B/2})^e``."""
        u = Fraction(u)
        out = Fraction(1)
        for _, big_b, e in self.factors:
            out *= (u ** -big_b - u ** big_b) ** e
        return out

    def merged(self) -> list[tuple[int, int]]:
        """``(B, total exponent)`` with subsets of equal B combined, in order of first appearance."""
        out: dict[int, int] = {}
        for _, big_b, e in self.factors:
            out[big_b] = out.get(big_b, 0) + e
        return list(out.items())

    def to_text(self) -> str:
        parts = [_q_power(self.prefactor)] if self.prefactor else []
        for big_b, e in self.merged():
            body = f"(1-{_q_power(2 * big_b)})" if big_b else "(1-1)"
            parts.append(body + (f"^{e}" if e > 1 else ""))
        return " ".join(parts) if parts else "1"

    def symmetric_text(self) -> str:
        parts = []
        for big_b, e in self.merged():
            parts.append(f"({_q_power(-big_b)}-{_q_power(big_b)})" + (f"^{e}" if e > 1 else ""))
        return " ".join(parts) if parts else "1"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "b": {f"{k},{l}": v for (k, l), v in self.b},
            "prefactor_u_exponent": self.prefactor,
            "factored": self.to_text(),
            "symmetric": self.symmetric_text(),
            "factors": [{"subset": list(mu), "B": big_b, "exponent": e} for mu, big_b, e in self.factors],
        }


def _q_power(u_exp: int) -> str:
    """``u^k`` printed as a power of ``q = u^2``."""
    if u_exp == 0:
        return "1"
    exp = Fraction(u_exp, 2)
    text = str(exp.numerator) if exp.denominator == 1 else f"{exp.numerator}/{exp.denominator}"
    return "q" if text == "1" else f"q^({text})" if "/" in text or exp < 0 else f"q^{text}"


def _cartan(n: int, b: Mapping) -> dict:
    out = {}
    for (k, l), v in b.items():
        if isinstance(v, bool) or not isinstance(v, int):
            raise TypeError("Cartan entries must be integers")
        key = (min(k, l), max(k, l))
        if not 1 <= key[0] < key[1] <= n:
            raise ValueError(f"Cartan index {key} outside 1..{n}")
        if key in out and out[key] != v:
            raise ValueError(f"Cartan data not symmetric at {key}")
        out[key] = v
    for k in range(1, n + 1):
        for l in range(k + 1, n + 1):
            out.setdefault((k, l), 0)
    return out


def contravariant_det(n: int, b: Mapping) -> ContravariantDet:
    cart = _cartan(n, b)
    total = sum(cart.values())
    factors = []
    for m in range(2, n + 1):
        for mu in combinations(range(1, n + 1), m):
            big_b = sum(cart[p] for p in combinations(mu, 2))
            factors.append((mu, big_b, edge_multiplicity(n, m)))
    # q^{-(n!/4) sum b} = u^{-(n!/2) sum b}
    return ContravariantDet(n, tuple(sorted(cart.items())), -(factorial(n) // 2) * total, tuple(factors))


def contravariant_check(n: int, b: Mapping, points=(Fraction(2), Fraction(3, 5), Fraction(-7, 4))) -> dict:
    """Compare the emitted form against the Gram determinant at ``q_ij = u^{-b_ij}``.

    The Gram route evaluates the generic Gram matrix exactly and takes its
    determinant; the relation is ``det S = (-1)^E u^{(n!/2) sum b} det A``
    with ``E`` the total exponent.  Both displayed forms are compared.
    """
    res = contravariant_det(n, b)
    cart = dict(res.b)
    weight = Weight.generic(n)
    basis = weight.basis()
    sign_exp = sum(e for _, _, e in res.factors)
    out = {"n": n, "points": [], "ok": True}
    for u in points:
        u = Fraction(u)
        values = {(i, j): u ** -cart[(min(i, j), max(i, j))] for i in range(1, n + 1) for j in range(1, n + 1) if i != j}
        rows = [[Fraction(fock.gram_entry(r, c).evaluate(values)) for c in basis] for r in basis]
        det_a = fraction_det(rows)
        via_gram = (-1) ** sign_exp * u ** (-res.prefactor) * det_a
        ok = via_gram == res.value(u) == res.symmetric_value(u)
        out["points"].append({"u": str(u), "ok": ok})
        out["ok"] = out["ok"] and ok
    return out


def zagier_inverse_check(n: int) -> bool:
    """All b_kl = 2 (q_ij = q^{-1}): the emitted form against the one-parameter determinant at q^{-1}."""
    res = contravariant_det(n, {(k, l): 2 for k in range(1, n + 1) for l in range(k + 1, n + 1)})
    zag = detkit.det_zagier(n)
    sign_exp = sum(e for _, _, e in res.factors)
    for u in (Fraction(2), Fraction(1, 3)):
        q_inv = 1 / (u * u)
        if res.value(u) != (-1) ** sign_exp * u ** (-res.prefactor) * zag.evaluate({ONE_PARAM: q_inv}):
            return False
    return True



# command line -----------------------------------------------------------------

class UsageError(Exception):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for d in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if p % d == 0:
            return p == d
    x, s = p - 1, 0
    while x % 2 == 0:
        x, s = x // 2, s + 1
    for a in (2, 3, 5, 7, 11, 13, 17):
        y = pow(a, x, p)
        if y in (1, p - 1):
            continue
        for _ in range(s - 1):
            y = y * y % p
            if y == p - 1:
                break
        else:
            return False
    return True


def _modcheck(text: str | None):
    if text is None:
        return None
    try:
        p, t = (int(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"--modcheck expects <prime>:<trials>, got {text!r}") from None
    if not (1 << 30) < p < (1 << 31) or not _is_prime(p):
        raise UsageError(f"--modcheck prime must be a prime between 2^30 and 2^31, got {p}")
    if t < 1:
        raise UsageError("--modcheck trials must be positive")
    return (p,), t


def _weight_of(args) -> Weight:
    try:
        if args.weight:
            return Weight.parse(args.weight)
        if args.n:
            if args.n < 1:
                raise ValueError
            return Weight.generic(args.n)
    except ValueError:
        raise UsageError(f"bad weight or size: {args.weight or args.n!r}") from None
    raise UsageError("give --n or --weight")


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _points(args, variables):
    mc = args.modcheck
    primes, trials = mc if mc else (DEFAULT_PRIMES, DEFAULT_TRIALS)
    return modular_points(variables, primes, trials, args.seed)


def cmd_gram(args) -> int:
    weight = _weight_of(args)
    mode = ParamMode.parse(args.mode)
    m = gram(weight, args.route)
    if mode is not ParamMode.MULTI:
        m = m.map(lambda p: p.specialize(mode))
    _emit(args, m.to_json(), m.to_text())
    return 0


def cmd_det(args) -> int:
    weight = _weight_of(args)
    mode = ParamMode.parse(args.mode)
    payload = {"weight": weight.to_text(), "mode": mode.value}
    if weight.is_generic:
        fd = detkit.det_closed(weight, mode)
        payload.update(det=fd.to_text(), factored=fd.to_json())
    else:
        det = detkit.det_symbolic(gram(weight)).specialize(mode)
        payload.update(det=det.to_text(), divisibility=detkit.degenerate_divides(weight)["divides"])
    text = payload["det"]
    status = 0
    if args.modcheck:
        primes, trials = args.modcheck
        if weight.is_generic:
            ok = detkit.det_closed_matches_mod(weight, primes, trials, args.seed)
        else:
            ok = payload["divisibility"]
        payload["modcheck"] = ok
        text += f"\nmodcheck: {'PASS' if ok else 'FAIL'}"
        status = 0 if ok else 1
    _emit(args, payload, text)
    return status


_INVERSE_METHODS = {
    "lambda": invkit.inverse_via_lambda,
    "chain": invkit.inverse_chain,
    "long": invkit.inverse_long,
    "short": invkit.inverse_short,
}


def cmd_inverse(args) -> int:
    weight = _weight_of(args)
    mode = ParamMode.parse(args.mode)
    if not weight.is_generic:
        m = invkit.degenerate_inverse(weight)
        if mode is not ParamMode.MULTI:
            m = m.map(lambda e: e.specialize(mode))
        m = m.map(lambda e: e.reduce())
        ok = invkit.is_inverse(gram(weight).map(lambda p: p.specialize(mode)), m)
        payload = dict(m.to_json(), check=ok)
        _emit(args, payload, m.to_text() + f"\ncheck A*inverse = I: {'PASS' if ok else 'FAIL'}")
        return 0 if ok else 1
    inv = _INVERSE_METHODS[args.method](fock.PatternRing(weight.n, mode))
    payload = inv.to_json(weight)
    text = "\n".join(f"{g}: {t}" for g, t in inv.pattern_text().items())
    status = 0
    if args.modcheck:
        ok = inverse_modcheck(weight, args.method, args.modcheck, args.seed)
        payload["modcheck"] = ok
        text += f"\nmodcheck: {'PASS' if ok else 'FAIL'}"
        status = 0 if ok else 1
    _emit(args, payload, text)
    return status


def inverse_modcheck(weight: Weight, method: str, modcheck, seed: int) -> bool:
    primes, trials = modcheck
    for p, pt in modular_points(weight_variables(weight), primes, trials, seed):
        ring = fock.ModRing(weight, pt, p)
        inv = _INVERSE_METHODS[method](ring)
        if invkit.gram_matrix(ring) * inv != fock.GroupAlgebraMatrix.identity(ring):
            return False
    return True


def cmd_lambda(args) -> int:
    try:
        g = parse_perm(args.g)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    n = args.n or len(g)
    if len(g) != n:
        raise UsageError(f"--g has length {len(g)} but --n is {n}")
    mode = ParamMode.parse(args.mode)
    ring = fock.PatternRing(n, mode)
    value = invkit.lambda_fast(ring, g)
    if args.inverse_diagonal:
        value = ring.mul(value, fock.q_factor(ring, g))
    value = value.reduce()
    seq = combin.young_sequence(g)
    payload = {
        "g": perm_str(g), "mode": mode.value, "tree_like": seq.tree_like,
        "young_sequence": [perm_str(h) for h in seq.seq], "value": value.to_json(), "text": value.to_text(),
    }
    _emit(args, payload, value.to_text())
    return 0


def cmd_zagier(args) -> int:
    perms = None
    if args.perms:
        try:
            perms = [parse_perm(t) for t in args.perms.split(",")]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if any(len(g) != args.n for g in perms):
            raise UsageError("every permutation must have length --n")
    mode = ParamMode.parse(args.mode or "one")
    if mode is ParamMode.REAL:
        raise UsageError("zagier supports --mode multi or one")
    cert = invkit.zagier_certificate(args.n, mode, perms)
    payload = cert.to_json()
    if not args.witnesses:
        payload.pop("witnesses")
    lines = [f"n = {cert.n}, mode = {cert.mode.value}, entries examined = {len(cert.witness)}",
             f"extended denominator {cert.denominator.to_text()}: {cert.verdict}"]
    if cert.failure:
        lines.append(f"  witness {cert.failure[0]}, offending factor {', '.join(cert.failure[1])}")
    orig = cert.original
    if orig["denominator"]:
        lines.append(f"original denominator {orig['denominator']}: {orig['verdict']}")
        for fail in orig["failures"][:args.show]:
            lines.append(f"  witness {fail['g']}, offending factor {', '.join(fail['offending'])}")
        if len(orig["failures"]) > args.show:
            lines.append(f"  ... {len(orig['failures'])} failing entries in total")
    _emit(args, payload, "\n".join(lines))
    return 0 if cert.verdict == "holds" else 1


def cmd_schroeder(args) -> int:
    n = args.n
    if n < 1:
        raise UsageError("--n must be positive")
    rec = combin.schroder_recurrence(n)
    c_n = rec[-1]
    by_k = combin.bracket_counts(n)
    payload = {"n": n, "c_n": c_n, "by_k": {str(k): v for k, v in sorted(by_k.items())},
               "recurrence": rec}
    lines = [f"c_{n} = {c_n}"]
    if args.by_k:
        lines += [f"c_{n},{k} = {v}" for k, v in sorted(by_k.items())]
    status = 0
    if args.check:
        ok = (sum(by_k.values()) == c_n == combin.schroder_series(n)[-1]
              and (n > 9 or len(combin.bracketings(n)) == c_n))
        payload["check"] = ok
        lines.append(f"check: {'PASS' if ok else 'FAIL'}")
        status = 0 if ok else 1
    _emit(args, payload, "\n".join(lines))
    return status


def _parse_pairs(text: str | None, convert) -> dict:
    out = {}
    if not text:
        return out
    for item in text.split(","):
        key, _, val = item.partition("=")
        key = key.strip()
        try:
            if len(key) == 2:
                k, l = int(key[0]), int(key[1])
            else:
                k, l = (int(x) for x in key.split(":"))
            out[(k, l)] = convert(val.strip())
        except ValueError:
            raise UsageError(f"bad pair assignment {item!r}") from None
    return out


def _exact(text: str):
    if any(c in text for c in ".eE"):
        raise UsageError(f"weights must be exact rationals, got {text!r}")
    return Fraction(text)


def cmd_arrangement(args) -> int:
    n = args.n
    weights = _parse_pairs(args.weights, _exact) or None
    try:
        form = bform(n, weights)
        det = bform_det(n, weights)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None
    det_text = det.to_text() if isinstance(det, FactoredDet) else str(det)
    payload = {"n": n, "regions": [perm_str(g) for g in form.matrix.basis], "det": det_text,
               "matrix": [[str(x) if isinstance(x, Fraction) else x.to_text() for x in row] for row in form.matrix.rows]}
    lines = [f"{perm_str(g)}: " + " | ".join(str(x) if isinstance(x, Fraction) else x.to_text() for x in row)
             for g, row in zip(form.matrix.basis, form.matrix.rows)]
    lines.append(f"det = {det_text}")
    status = 0
    if args.modcheck or weights is not None:
        if weights is None:
            primes, trials = args.modcheck
            ok = detkit.det_bruteforce(form.matrix, "modular", det, primes, trials, args.seed)
        else:
            ok = fraction_det(form.matrix.rows) == det
        payload["check"] = ok
        lines.append(f"check: {'PASS' if ok else 'FAIL'}")
        status = 0 if ok else 1
    _emit(args, payload, "\n".join(lines))
    return status


def cmd_contravariant(args) -> int:
    n = args.n
    if args.b_all is not None:
        b = {(k, l): args.b_all for k in range(1, n + 1) for l in range(k + 1, n + 1)}
    else:
        b = _parse_pairs(args.b, int)
    try:
        res = contravariant_det(n, b)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None
    payload = res.to_json()
    lines = [f"det S = {res.to_text()}", f"      = {res.symmetric_text()}"]
    status = 0
    if args.check:
        chk = contravariant_check(n, b)
        payload["check"] = chk
        lines.append(f"check: {'PASS' if chk['ok'] else 'FAIL'}")
        status = 0 if chk["ok"] else 1
    _emit(args, payload, "\n".join(lines))
    return status


# verification suites ----------------------------------------------------------

def _suite_gram(n: int, args):
    yield "gram routes agree, n<=3", all(
        gram(w, "direct") == gram(w, "derivative") == gram(w, "rsum")
        for w in [Weight.generic(k) for k in range(1, min(n, 3) + 1)]), None
    w = Weight.parse("113")
    yield "gram routes agree, weight 113", gram(w, "direct") == gram(w, "derivative"), None
    yield "gram hermitian", all(gram(Weight.generic(k)).is_hermitian() for k in range(1, min(n, 4) + 1)), None


def _suite_det(n: int, args):
    for k in range(2, min(n, 3) + 1):
        w = Weight.generic(k)
        yield f"det closed = exact determinant, n={k}", detkit.det_symbolic(gram(w)) == detkit.det_closed(w).expand(), None
    for k in range(4, n + 1):
        primes, trials = args.modcheck or (DEFAULT_PRIMES, DEFAULT_TRIALS)
        yield f"det closed = modular determinant, n={k}", detkit.det_closed_matches_mod(
            Weight.generic(k), primes, trials, args.seed), None


def _suite_factorization(n: int, args):
    for k in range(2, min(n, 3) + 1):
        ring = fock.PatternRing(k)
        yield f"cyclic factors multiply to the Gram matrix, n={k}", \
            fock.product(fock.cyclic_factors(ring)) == invkit.gram_matrix(ring), None
        yield f"A^(m) C^m = D^(m-1), n={k}", all(fock.check_cd_identity(ring, m) for m in range(2, k + 1)), None


def _suite_inverse(n: int, args):
    for k in range(2, min(n, 3) + 1):
        ring = fock.PatternRing(k)
        ref = invkit.inverse_chain(ring)
        yield f"inverse routes agree symbolically, n={k}", all(
            f(ring) == ref for f in _INVERSE_METHODS.values()), None
        yield f"A * inverse = I, n={k}", invkit.gram_matrix(ring) * ref == fock.GroupAlgebraMatrix.identity(ring), None
    for k in range(4, min(n, 5) + 1):
        w = Weight.generic(k)
        primes, trials = args.modcheck or (DEFAULT_PRIMES, 3)
        bad = None
        for p, pt in modular_points(weight_variables(w), primes, trials, args.seed):
            ring = fock.ModRing(w, pt, p)
            ref = invkit.inverse_chain(ring)
            if invkit.gram_matrix(ring) * ref != fock.GroupAlgebraMatrix.identity(ring) or any(
                    f(ring) != ref for f in _INVERSE_METHODS.values()):
                bad = {"prime": p, "point": {f"{a},{b}": v for (a, b), v in pt.items()}}
                break
        yield f"inverse routes agree modularly, n={k}", bad is None, bad


def _suite_lambda(n: int, args):
    for k in range(2, min(n, 4) + 1):
        ring = fock.PatternRing(k)
        bad = [perm_str(g) for g in all_perms(k) if invkit.lambda_closed(ring, g) != invkit.lambda_fast(ring, g)]
        yield f"closed product formula = recursion, n={k}", not bad, bad or None
        c = invkit.zero_census(ring)
        yield f"zeros are exactly the non-tree-like permutations, n={k}", c["match"], None if c["match"] else c


def _suite_schroeder(n: int, args):
    top = min(max(n, 7), 9)
    rec = [0] + combin.schroder_recurrence(top)
    bad = [k for k in range(1, top + 1) if len(combin.bracketings(k)) != rec[k]]
    yield "bracketing enumeration = recurrence", not bad, bad or None
    yield "Psi-term count = c_n, n<=7", all(len(invkit.chain_terms(k)) == rec[k] for k in range(1, 8)), None


def _suite_arrangement(n: int, args):
    for k in range(2, min(n, 4) + 1):
        yield f"region form = symmetric Gram matrix, n={k}", arrangement_matches_gram(k), None
        yield f"region determinant, n={k}", bform_det_check(k, seed=args.seed), None


# nine evenly spaced one-parameter points from -0.9 to 0.9
POSITIVITY_GRID = [Fraction(-9, 10) + k * Fraction(9, 40) for k in range(9)]


def _suite_positivity(n: int, args):
    for k in range(2, min(n, 5) + 1):
        w = Weight.generic(k)
        grid = POSITIVITY_GRID
        bad = [str(x) for x in grid
               if detkit.positive_definite(w, detkit.one_parameter_assignment(w, float(x)))["verdict"]
               != "positive_definite"]
        yield f"positive definite on the grid, n={k}", not bad, bad or None


def _suite_contravariant(n: int, args):
    for k in range(2, min(n, 4) + 1):
        b = {(i, j): (i * j) % 3 + 1 for i in range(1, k + 1) for j in range(i + 1, k + 1)}
        yield f"contravariant form matches the Gram determinant, n={k}", contravariant_check(k, b)["ok"], None
        yield f"all b = 2 matches the one-parameter determinant, n={k}", zagier_inverse_check(k), None


SUITES = {
    "gram": _suite_gram, "det": _suite_det, "factorization": _suite_factorization,
    "inverse": _suite_inverse, "lambda": _suite_lambda, "schroeder": _suite_schroeder,
    "arrangement": _suite_arrangement, "positivity": _suite_positivity, "contravariant": _suite_contravariant,
}


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = []
    for name in names:
        for label, ok, witness in SUITES[name](args.n, args):
            results.append({"suite": name, "check": label, "ok": bool(ok), "counterexample": witness})
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r['ok'] else 'FAIL'}  [{r['suite']}] {r['check']}")
        if not r["ok"] and r["counterexample"] is not None:
            lines.append(f"      counterexample: {json.dumps(r['counterexample'], default=str)}")
    failed = sum(not r["ok"] for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    _emit(args, {"results": results, "failed": failed}, "\n".join(lines))
    return 1 if failed else 0


# parser -------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default=argparse.SUPPRESS)
    common.add_argument("--mode", choices=[m.value for m in ParamMode], default=argparse.SUPPRESS)
    common.add_argument("--modcheck", metavar="PRIME:TRIALS", default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="quongram", parents=[common],
                                     description="Gram matrices of the multiparametric quon algebra.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    def sized(p, weight=True):
        p.add_argument("--n", type=int)
        if weight:
            p.add_argument("--weight", help="e.g. 123, 113, 2*1+3")

    p = add("gram", cmd_gram, "Gram matrix of a weight space")
    sized(p)
    p.add_argument("--route", choices=["direct", "derivative", "rsum"], default="direct")

    sized(add("det", cmd_det, "factored determinant"))

    p = add("inverse", cmd_inverse, "inverse as diagonals or, for repeated letters, a dense matrix")
    sized(p)
    p.add_argument("--method", choices=sorted(_INVERSE_METHODS), default="lambda")

    p = add("lambda", cmd_lambda, "coefficient of one inverse diagonal")
    p.add_argument("--n", type=int)
    p.add_argument("--g", required=True, help="permutation in one-line notation")
    p.add_argument("--inverse-diagonal", action="store_true", help="multiply by the Gram diagonal")

    p = add("zagier", cmd_zagier, "denominator certificate for the inverse")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--perms", help="comma-separated permutations to examine")
    p.add_argument("--witnesses", action="store_true", help="include every examined entry")
    p.add_argument("--show", type=int, default=3, help="failing entries to list in text output")

    p = add("schroeder", cmd_schroeder, "bracketing counts")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--by-k", action="store_true", help="split by number of brackets")
    p.add_argument("--check", action="store_true", help="cross-check three counting routes")

    p = add("arrangement", cmd_arrangement, "weighted region form of the braid arrangement")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--weights", help="exact weights, e.g. 12=1/2,13=1/3,23=2")

    p = add("contravariant", cmd_contravariant, "contravariant-form determinant")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--b", help="symmetric integer data, e.g. 12=1,13=-1,23=2 (missing entries are 0)")
    p.add_argument("--b-all", type=int, help="set every b_kl to this value")
    p.add_argument("--check", action="store_true", help="compare with the Gram determinant")

    p = add("verify", cmd_verify, "run a property suite")
    p.add_argument("--suite", choices=["all", *SUITES], default="all")
    p.add_argument("--n", type=int, default=4, help="largest size to check")
    return parser


_DEFAULTS = {"format": "text", "mode": None, "modcheck": None, "seed": DEFAULT_SEED}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for key, value in _DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    if args.mode is None and args.command != "zagier":
        args.mode = ParamMode.MULTI.value
    try:
        args.modcheck = _modcheck(args.modcheck)
        for key in ("n",):
            if getattr(args, key, None) is not None and args.n < 1:
                raise UsageError("--n must be positive")
        return args.func(args)
    except (UsageError, ValueError) as exc:
        parser.error(str(exc))
    return 2
