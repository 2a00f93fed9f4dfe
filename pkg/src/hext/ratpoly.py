"""Exact univariate polynomial arithmetic over the rationals.

Polynomials are tuples of Fraction coefficients in ascending order.  This is
the substrate for the certified inequality work: Sturm-sequence root counts,
bisection isolation to a target width, interval enclosures of polynomial
ranges, and rational upper bounds on square roots.  Nothing here touches
floating point.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

Poly = Tuple[Fraction, ...]


def poly(coeffs: Iterable) -> Poly:
    """Build a normalized polynomial (trailing zeros stripped)."""
    cs = [Fraction(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def degree(p: Poly) -> int:
    return len(p) - 1


def eval_at(p: Poly, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: Poly) -> Poly:
    return poly(k * c for k, c in enumerate(p) if k)


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return poly(
        (p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)
    )


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, scale(q, -1))


def scale(p: Poly, c) -> Poly:
    return poly(Fraction(c) * ci for ci in p)


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly(out)


def divmod_poly(a: Poly, b: Poly) -> Tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q: List[Fraction] = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    db = degree(b)
    lead = b[-1]
    while len(r) - 1 >= db and any(c != 0 for c in r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < db:
            break
        k = len(r) - 1 - db
        f = r[-1] / lead
        q[k] = f
        for i, c in enumerate(b):
            r[k + i] -= f * c
        r.pop()
    return poly(q), poly(r)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while b:
        _, r = divmod_poly(a, b)
        a, b = b, r
    if a:
        a = scale(a, 1 / a[-1])  # monic for determinism
    return a


def squarefree(p: Poly) -> Poly:
    g = poly_gcd(p, derivative(p))
    if degree(g) <= 0:
        return p
    q, _ = divmod_poly(p, g)
    return q


def sturm_chain(p: Poly) -> List[Poly]:
    chain = [p, derivative(p)]
    while chain[-1]:
        _, r = divmod_poly(chain[-2], chain[-1])
        if not r:
            break
        chain.append(scale(r, -1))
    return [c for c in chain if c]


def sign_variations(chain: Sequence[Poly], x) -> int:
    signs = []
    for c in chain:
        v = eval_at(c, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p: Poly, a, b) -> int:
    """Number of distinct real roots of p in the half-open interval (a, b]."""
    a, b = Fraction(a), Fraction(b)
    if a >= b:
        raise ValueError("need a < b")
    pp = squarefree(p)
    chain = sturm_chain(pp)
    return sign_variations(chain, a) - sign_variations(chain, b)


def isolate_roots(p: Poly, a, b, width) -> List[Tuple[Fraction, Fraction]]:
    """Isolating intervals, each of width <= `width`, for the distinct real
    roots of p in (a, b).  Requires p(a) != 0 and p(b) != 0; all returned
    interval endpoints are rational non-roots, so each interval brackets
    exactly one root with a strict sign change or Sturm count 1.
    """
    a, b, width = Fraction(a), Fraction(b), Fraction(width)
    if eval_at(p, a) == 0 or eval_at(p, b) == 0:
        raise ValueError("interval endpoints must not be roots")
    pp = squarefree(p)
    chain = sturm_chain(pp)

    def nroots(lo, hi):
        return sign_variations(chain, lo) - sign_variations(chain, hi)

    out: List[Tuple[Fraction, Fraction]] = []
    stack = [(a, b)]
    while stack:
        lo, hi = stack.pop()
        n = nroots(lo, hi)
        if n == 0:
            continue
        if n == 1 and hi - lo <= width:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        k = 128
        while eval_at(pp, mid) == 0:
            # deterministic nudge off an exact rational root
            k += 1
            mid = lo + (hi - lo) * Fraction(k, 257)
        stack.append((lo, mid))
        stack.append((mid, hi))
    out.sort(key=lambda iv: iv[0])
    return out


def _pow_interval(lo: Fraction, hi: Fraction, k: int) -> Tuple[Fraction, Fraction]:
    if k == 0:
        return Fraction(1), Fraction(1)
    if lo >= 0:
        return lo ** k, hi ** k
    if hi <= 0:
        vals = sorted((lo ** k, hi ** k))
        return vals[0], vals[1]
    # interval straddles zero
    if k % 2 == 0:
        return Fraction(0), max(lo ** k, hi ** k)
    return lo ** k, hi ** k


def interval_eval(p: Poly, lo, hi) -> Tuple[Fraction, Fraction]:
    """Enclosure [min, max] of p over [lo, hi] by monomial interval bounds."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        raise ValueError("need lo <= hi")
    lo_sum, hi_sum = Fraction(0), Fraction(0)
    for k, c in enumerate(p):
        if c == 0:
            continue
        plo, phi = _pow_interval(lo, hi, k)
        if c > 0:
            lo_sum += c * plo
            hi_sum += c * phi
        else:
            lo_sum += c * phi
            hi_sum += c * plo
    return lo_sum, hi_sum


def sqrt_upper(x, digits: int = 30) -> Fraction:
    """Rational r with r*r >= x and r - sqrt(x) < 10**-digits."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative radicand")
    s = 10 ** digits
    num = x.numerator * s * s
    ceil_scaled = -((-num) // x.denominator)
    r = math.isqrt(ceil_scaled)
    if r * r < ceil_scaled:
        r += 1
    return Fraction(r, s)
