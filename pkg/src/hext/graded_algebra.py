"""Finite exterior algebra and nilpotent-truncated series arithmetic.

Two substrates live here.  GrassmannElement is an element of the exterior
algebra on 2k odd generators with rational coefficients; it exists to verify
the rank-one determinant identities det(I - lam*A) * (1 - lam*a) = 1 and
(I - lam*A)^{-1} = I + lam/(1 - lam*a) * A for A_ij = alpha_i * beta_j.
TruncatedPoly is a commutative polynomial ring in (t, omega, eta) where
every monomial with omega-degree + eta-degree >= n vanishes (forms above top
degree on an (n-1)-dimensional space) and t is kept to degree <= n; it is
the series engine behind the Chern coefficient tables.

All coefficients are exact rationals.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from .errors import (
    GeneratorMismatch,
    NotIdempotentFamily,
    NotInvertible,
    TruncationMismatch,
)

Scalar = Union[int, Fraction]


def _merge_sign(a: int, b: int) -> int:
    """Sign of e_a * e_b for disjoint index bitmasks a, b: parity of the
    number of generator pairs (i in a, j in b) with i > j."""
    inv = 0
    while b:
        low = b & -b
        inv += bin(a >> low.bit_length()).count("1")
        b ^= low
    return -1 if inv & 1 else 1


class GrassmannElement:
    """Element of the exterior algebra on n_gen odd generators.

    terms maps a generator-subset bitmask to its rational coefficient; zero
    coefficients are never stored.
    """

    __slots__ = ("n_gen", "terms")

    def __init__(self, n_gen: int, terms: Optional[Dict[int, Fraction]] = None):
        if n_gen < 1:
            raise ValueError("need at least one generator")
        self.n_gen = n_gen
        clean: Dict[int, Fraction] = {}
        for mask, c in (terms or {}).items():
            if mask < 0 or mask >> n_gen:
                raise ValueError(f"bitmask {mask:#x} outside {n_gen} generators")
            c = Fraction(c)
            if c != 0:
                clean[mask] = c
        self.terms = clean

    @classmethod
    def zero(cls, n_gen: int) -> "GrassmannElement":
        return cls(n_gen, {})

    @classmethod
    def scalar(cls, n_gen: int, value: Scalar) -> "GrassmannElement":
        return cls(n_gen, {0: Fraction(value)})

    @classmethod
    def generator(cls, n_gen: int, i: int) -> "GrassmannElement":
        if not 0 <= i < n_gen:
            raise ValueError(f"generator index {i} out of range")
        return cls(n_gen, {1 << i: Fraction(1)})

    def _check(self, other: "GrassmannElement") -> None:
        if self.n_gen != other.n_gen:
            raise GeneratorMismatch(
                f"generator sets differ: {self.n_gen} vs {other.n_gen}"
            )

    def __add__(self, other: "GrassmannElement") -> "GrassmannElement":
        self._check(other)
        out = dict(self.terms)
        for mask, c in other.terms.items():
            out[mask] = out.get(mask, Fraction(0)) + c
        return GrassmannElement(self.n_gen, out)

    def __sub__(self, other: "GrassmannElement") -> "GrassmannElement":
        return self + (-other)

    def __neg__(self) -> "GrassmannElement":
        return GrassmannElement(self.n_gen, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other) -> "GrassmannElement":
        if isinstance(other, (int, Fraction)):
            return GrassmannElement(
                self.n_gen, {m: c * other for m, c in self.terms.items()}
            )
        self._check(other)
        out: Dict[int, Fraction] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                if ma & mb:
                    continue  # repeated odd generator squares to zero
                key = ma | mb
                c = ca * cb * _merge_sign(ma, mb)
                acc = out.get(key, Fraction(0)) + c
                if acc == 0:
                    out.pop(key, None)
                else:
                    out[key] = acc
        return GrassmannElement(self.n_gen, out)

    def __rmul__(self, other) -> "GrassmannElement":
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GrassmannElement)
            and self.n_gen == other.n_gen
            and self.terms == other.terms
        )

    def is_zero(self) -> bool:
        return not self.terms

    def is_even(self) -> bool:
        return all(bin(m).count("1") % 2 == 0 for m in self.terms)

    def _label(self, mask: int) -> str:
        if mask == 0:
            return "1"
        return "*".join(f"e{i + 1:02d}" for i in range(self.n_gen) if mask >> i & 1)

    def to_json(self) -> str:
        """Canonical form: sorted monomial labels, rational strings."""
        obj = {
            "generators": self.n_gen,
            "terms": {
                self._label(m): f"{c.numerator}/{c.denominator}"
                for m, c in self.terms.items()
            },
        }
        return json.dumps(obj, sort_keys=True)

    def __repr__(self) -> str:
        if not self.terms:
            return "GrassmannElement(0)"
        parts = [
            f"{c}*{self._label(m)}" for m, c in sorted(self.terms.items())
        ]
        return "GrassmannElement(" + " + ".join(parts) + ")"


def gr_mul(x: GrassmannElement, y: GrassmannElement) -> GrassmannElement:
    """Exterior product; raises GeneratorMismatch on different generator sets."""
    return x * y


class AlgebraMatrix:
    """Square matrix of GrassmannElements over one shared generator set."""

    def __init__(self, entries: List[List[GrassmannElement]]):
        k = len(entries)
        if k == 0 or any(len(row) != k for row in entries):
            raise ValueError("entries must form a nonempty square array")
        n_gen = entries[0][0].n_gen
        for row in entries:
            for e in row:
                if e.n_gen != n_gen:
                    raise GeneratorMismatch("matrix entries over different generator sets")
        self.entries = entries
        self.k = k
        self.n_gen = n_gen

    @classmethod
    def rank_one(cls, k: int) -> "AlgebraMatrix":
        """A_ij = alpha_i * beta_j with alpha_i, beta_i the 2k generators."""
        n_gen = 2 * k
        alpha = [GrassmannElement.generator(n_gen, 2 * i) for i in range(k)]
        beta = [GrassmannElement.generator(n_gen, 2 * i + 1) for i in range(k)]
        return cls([[alpha[i] * beta[j] for j in range(k)] for i in range(k)])

    def trace(self) -> GrassmannElement:
        acc = GrassmannElement.zero(self.n_gen)
        for i in range(self.k):
            acc = acc + self.entries[i][i]
        return acc

    def matmul(self, other: "AlgebraMatrix") -> "AlgebraMatrix":
        if self.k != other.k:
            raise ValueError("dimension mismatch")
        out = []
        for i in range(self.k):
            row = []
            for j in range(self.k):
                acc = GrassmannElement.zero(self.n_gen)
                for l in range(self.k):
                    acc = acc + self.entries[i][l] * other.entries[l][j]
                row.append(acc)
            out.append(row)
        return AlgebraMatrix(out)

    def scaled(self, factor: GrassmannElement) -> "AlgebraMatrix":
        return AlgebraMatrix(
            [[factor * e for e in row] for row in self.entries]
        )

    def det_leibniz(self) -> GrassmannElement:
        """Leibniz sum; valid because even entries commute pairwise.

        Fraction-free on purpose: the algebra has nilpotents, so no division
        is available.
        """
        acc = GrassmannElement.zero(self.n_gen)
        for perm in itertools.permutations(range(self.k)):
            term = GrassmannElement.scalar(self.n_gen, _perm_sign(perm))
            for i in range(self.k):
                term = term * self.entries[i][perm[i]]
            acc = acc + term
        return acc

    def det_cofactor(self) -> GrassmannElement:
        """First-row cofactor expansion (entries must commute: even elements)."""
        if self.k == 1:
            return self.entries[0][0]
        acc = GrassmannElement.zero(self.n_gen)
        for j in range(self.k):
            minor = AlgebraMatrix(
                [
                    [self.entries[i][jj] for jj in range(self.k) if jj != j]
                    for i in range(1, self.k)
                ]
            )
            term = self.entries[0][j] * minor.det_cofactor()
            acc = acc + (term if j % 2 == 0 else -term)
        return acc


def _perm_sign(perm: Tuple[int, ...]) -> int:
    inv = sum(
        1
        for i in range(len(perm))
        for j in range(i + 1, len(perm))
        if perm[i] > perm[j]
    )
    return -1 if inv & 1 else 1


# -- polynomials in lambda with Grassmann coefficients ------------------------
# Only even (hence central) coefficients arise below, so plain dict algebra
# suffices; keys are lambda powers.

LamPoly = Dict[int, GrassmannElement]


def _lp_zero() -> LamPoly:
    return {}


def _lp_const(e: GrassmannElement) -> LamPoly:
    return {0: e} if not e.is_zero() else {}


def _lp_add(x: LamPoly, y: LamPoly, n_gen: int) -> LamPoly:
    out = dict(x)
    for p, e in y.items():
        acc = out.get(p, GrassmannElement.zero(n_gen)) + e
        if acc.is_zero():
            out.pop(p, None)
        else:
            out[p] = acc
    return out

def _lp_mul(x: LamPoly, y: LamPoly, n_gen: int) -> LamPoly:
    out: LamPoly = {}
    for px, ex in x.items():
        for py, ey in y.items():
            prod = ex * ey
            if prod.is_zero():
                continue
            key = px + py
            acc = out.get(key, GrassmannElement.zero(n_gen)) + prod
            if acc.is_zero():
                out.pop(key, None)
            else:
                out[key] = acc
    return out


def _lp_diff_witness(x: LamPoly, y: LamPoly, n_gen: int) -> Optional[str]:
    """None when equal; otherwise a human-readable witness monomial."""
    diff = _lp_add(x, {p: -e for p, e in y.items()}, n_gen)
    for p in sorted(diff):
        e = diff[p]
        mask = min(e.terms)
        return f"lambda^{p} * {e._label(mask)} (coefficient {e.terms[mask]})"
    return None


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    passed: bool
    witness: Optional[str] = None


@dataclass
class RankOneReport:
    k: int
    identities: List[IdentityCheck]

    @property
    def passed(self) -> bool:
        return all(i.passed for i in self.identities)

    def first_failure(self) -> Optional[IdentityCheck]:
        for i in self.identities:
            if not i.passed:
                return i
        return None


def rank1_check(k: int) -> RankOneReport:
    """Verify the three rank-one identities on A_ij = alpha_i * beta_j.

    (i)   A@A == a*A with a = -Tr A;
    (ii)  (I - lam*A) * (I + lam * geom(a) * A) == I, where geom(a) is the
          finite geometric series sum (lam*a)^j (a is nilpotent);
    (iii) det(I - lam*A) * (1 - lam*a) == 1 by Leibniz expansion.
    """
    if not 1 <= k <= 6:
        raise ValueError("k must be in 1..6 (cost grows as 2^(2k))")
    A = AlgebraMatrix.rank_one(k)
    n_gen = A.n_gen
    one = GrassmannElement.scalar(n_gen, 1)
    a = -A.trace()

    identities: List[IdentityCheck] = []

    # (i) A^2 == a * A
    A2 = A.matmul(A)
    aA = A.scaled(a)
    witness = None
    for i in range(k):
        for j in range(k):
            if A2.entries[i][j] != aA.entries[i][j]:
                d = A2.entries[i][j] - aA.entries[i][j]
                mask = min(d.terms)
                witness = f"entry ({i},{j}) monomial {d._label(mask)}"
                break
        if witness:
            break
    identities.append(IdentityCheck("A_squared_equals_aA", witness is None, witness))

    # geometric series for 1/(1 - lam*a): finite because a^(k+1) == 0
    geom: LamPoly = {}
    power = one
    j = 0
    while not power.is_zero():
        geom[j] = power
        power = power * a
        j += 1
        if j > 2 * k + 2:
            raise RuntimeError("nilpotency bound exceeded; algebra is broken")

    # lambda-polynomial matrices
    def lp_entry(i, j, sign):
        e: LamPoly = {}
        if i == j:
            e[0] = one
        off = A.entries[i][j] * sign
        if not off.is_zero():
            e = _lp_add(e, {1: off}, n_gen)
        return e

    M = [[lp_entry(i, j, -1) for j in range(k)] for i in range(k)]

    lam_geom = {p + 1: e for p, e in geom.items()}
    Minv = []
    for i in range(k):
        row = []
        for j in range(k):
            e: LamPoly = {0: one} if i == j else {}
            e = _lp_add(e, _lp_mul(lam_geom, _lp_const(A.entries[i][j]), n_gen), n_gen)
            row.append(e)
        Minv.append(row)

    # (ii) M @ Minv == I
    witness = None
    for i in range(k):
        for j in range(k):
            acc: LamPoly = {}
            for l in range(k):
                acc = _lp_add(acc, _lp_mul(M[i][l], Minv[l][j], n_gen), n_gen)
            expected: LamPoly = {0: one} if i == j else {}
            w = _lp_diff_witness(acc, expected, n_gen)
            if w is not None:
                witness = f"entry ({i},{j}): {w}"
                break
        if witness:
            break
    identities.append(IdentityCheck("inverse_formula", witness is None, witness))

    # (iii) det(I - lam*A) * (1 - lam*a) == 1
    det: LamPoly = {}
    for perm in itertools.permutations(range(k)):
        term: LamPoly = {0: GrassmannElement.scalar(n_gen, _perm_sign(perm))}
        for i in range(k):
            term = _lp_mul(term, M[i][perm[i]], n_gen)
        det = _lp_add(det, term, n_gen)
    one_minus_lam_a = _lp_add({0: one}, {1: -a}, n_gen)
    product = _lp_mul(det, one_minus_lam_a, n_gen)
    w = _lp_diff_witness(product, {0: one}, n_gen)
    identities.append(IdentityCheck("determinant_geometric", w is None, w))

    return RankOneReport(k=k, identities=identities)


@dataclass
class ScalarProjectorReport:
    dim: int
    a: Fraction
    rank: int
    det_coeffs: Tuple[Fraction, ...]
    expected_coeffs: Tuple[Fraction, ...]

    @property
    def passed(self) -> bool:
        return self.det_coeffs == self.expected_coeffs


def scalar_projector_check(A, a) -> ScalarProjectorReport:
    """Check det(I - lam*A) == (1 - lam*a)^(Tr A / a) for a rational matrix
    with A@A == a*A and a != 0.

    Tr A / a is the rank of A/a and is always a nonnegative integer for a
    genuine idempotent family; a fractional value is rejected (that branch
    of the exponential formula is out of scope here).
    """
    rows = [[Fraction(x) for x in row] for row in A]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ValueError("A must be a nonempty square matrix")
    a = Fraction(a)
    if a == 0:
        raise ValueError("a must be nonzero")
    # A @ A == a * A, exactly
    for i in range(n):
        for j in range(n):
            s = sum(rows[i][l] * rows[l][j] for l in range(n))
            if s != a * rows[i][j]:
                raise NotIdempotentFamily(
                    f"(A@A)[{i}][{j}] = {s} differs from a*A[{i}][{j}] = {a * rows[i][j]}"
                )
    trace = sum(rows[i][i] for i in range(n))
    rank = trace / a
    if rank.denominator != 1 or rank < 0:
        raise NotImplementedError(
            f"Tr A / a = {rank} is not a nonnegative integer; fractional powers unsupported"
        )
    rank = int(rank)

    # det(I - lam*A) as a polynomial in lam, by Leibniz
    det = [Fraction(0)] * (n + 1)
    for perm in itertools.permutations(range(n)):
        sign = _perm_sign(perm)
        # each factor is (delta - lam * A[i][perm[i]])
        poly = [Fraction(sign)]
        for i in range(n):
            const = Fraction(1) if perm[i] == i else Fraction(0)
            lin = -rows[i][perm[i]]
            new = [Fraction(0)] * (len(poly) + 1)
            for d, c in enumerate(poly):
                new[d] += c * const
                new[d + 1] += c * lin
            poly = new
        for d, c in enumerate(poly):
            det[d] += c
    while len(det) > 1 and det[-1] == 0:
        det.pop()

    # (1 - lam*a)^rank
    from math import comb

    expected = [comb(rank, j) * (-a) ** j for j in range(rank + 1)]
    return ScalarProjectorReport(
        dim=n,
        a=a,
        rank=rank,
        det_coeffs=tuple(det),
        expected_coeffs=tuple(expected),
    )


# -- truncated commutative series in (t, omega, eta) --------------------------


class TruncatedPoly:
    """Polynomial in t, omega, eta modulo the truncation ideal.

    Monomials t^a omega^b eta^c with b + c >= order vanish identically
    (forms above the top degree of an (order-1)-dimensional space), and t is
    kept to degree <= order.  The order is fixed at construction; arithmetic
    between different orders raises TruncationMismatch.
    """

    __slots__ = ("order", "terms")

    def __init__(self, order: int, terms: Optional[Dict[Tuple[int, int, int], Fraction]] = None):
        if order < 1:
            raise ValueError("truncation order must be >= 1")
        self.order = order
        clean: Dict[Tuple[int, int, int], Fraction] = {}
        for (ta, ob, ec), c in (terms or {}).items():
            if ta < 0 or ob < 0 or ec < 0:
                raise ValueError("negative exponent")
            if ob + ec >= order or ta > order:
                continue
            c = Fraction(c)
            if c != 0:
                clean[(ta, ob, ec)] = c
        self.terms = clean

    @classmethod
    def zero(cls, order: int) -> "TruncatedPoly":
        return cls(order, {})

    @classmethod
    def const(cls, order: int, value: Scalar) -> "TruncatedPoly":
        return cls(order, {(0, 0, 0): Fraction(value)})

    @classmethod
    def t(cls, order: int) -> "TruncatedPoly":
        return cls(order, {(1, 0, 0): Fraction(1)})

    @classmethod
    def omega(cls, order: int) -> "TruncatedPoly":
        return cls(order, {(0, 1, 0): Fraction(1)})

    @classmethod
    def eta(cls, order: int) -> "TruncatedPoly":
        return cls(order, {(0, 0, 1): Fraction(1)})

    def _check(self, other: "TruncatedPoly") -> None:
        if self.order != other.order:
            raise TruncationMismatch(
                f"truncation orders differ: {self.order} vs {other.order}"
            )

    def __add__(self, other) -> "TruncatedPoly":
        if isinstance(other, (int, Fraction)):
            other = TruncatedPoly.const(self.order, other)
        self._check(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            acc = out.get(key, Fraction(0)) + c
            if acc == 0:
                out.pop(key, None)
            else:
                out[key] = acc
        return TruncatedPoly(self.order, out)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedPoly":
        return TruncatedPoly(self.order, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "TruncatedPoly":
        if isinstance(other, (int, Fraction)):
            other = TruncatedPoly.const(self.order, other)
        return self + (-other)

    def __rsub__(self, other) -> "TruncatedPoly":
        return (-self) + other

    def __mul__(self, other) -> "TruncatedPoly":
        if isinstance(other, (int, Fraction)):
            return TruncatedPoly(
                self.order, {k: c * other for k, c in self.terms.items()}
            )
        self._check(other)
        out: Dict[Tuple[int, int, int], Fraction] = {}
        n = self.order
        for (a1, b1, c1), x in self.terms.items():
            for (a2, b2, c2), y in other.terms.items():
                b, c = b1 + b2, c1 + c2
                if b + c >= n:
                    continue
                a = a1 + a2
                if a > n:
                    continue
                key = (a, b, c)
                acc = out.get(key, Fraction(0)) + x * y
                if acc == 0:
                    out.pop(key, None)
                else:
                    out[key] = acc
        return TruncatedPoly(self.order, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "TruncatedPoly":
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = TruncatedPoly.const(self.order, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncatedPoly)
            and self.order == other.order
            and self.terms == other.terms
        )

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Fraction:
        return self.terms.get((0, 0, 0), Fraction(0))

    def inv(self) -> "TruncatedPoly":
        """Inverse in the quotient ring; needs a nonzero constant term.

        The non-constant part is nilpotent under the truncation, so the
        geometric series terminates exactly.
        """
        c0 = self.constant_term()
        if c0 == 0:
            raise NotInvertible("zero constant term")
        u = TruncatedPoly.const(self.order, 1) - self * (1 / c0)
        acc = TruncatedPoly.const(self.order, 1)
        term = u
        guard = 0
        while not term.is_zero():
            acc = acc + term
            term = term * u
            guard += 1
            if guard > 3 * self.order + 3:
                raise RuntimeError("geometric series failed to terminate")
        return acc * (1 / c0)

    def coefficient(self, a: int, b: int, c: int) -> Fraction:
        return self.terms.get((a, b, c), Fraction(0))

    def t_coefficient(self, q: int) -> Dict[Tuple[int, int], Fraction]:
        """Coefficient of t^q as a map (omega_deg, eta_deg) -> value."""
        return {
            (b, c): v for (a, b, c), v in self.terms.items() if a == q
        }

    def to_json(self) -> str:
        obj = {
            "order": self.order,
            "terms": {
                f"t^{a}*omega^{b}*eta^{c}": f"{v.numerator}/{v.denominator}"
                for (a, b, c), v in self.terms.items()
            },
        }
        return json.dumps(obj, sort_keys=True)

    def __repr__(self) -> str:
        if not self.terms:
            return "TruncatedPoly(0)"
        parts = [
            f"{v}*t^{a}*w^{b}*h^{c}" for (a, b, c), v in sorted(self.terms.items())
        ]
        return "TruncatedPoly(" + " + ".join(parts) + ")"


def ts_mul(x: TruncatedPoly, y: TruncatedPoly) -> TruncatedPoly:
    return x * y


def ts_inv(x: TruncatedPoly) -> TruncatedPoly:
    return x.inv()


def ts_pow(x: TruncatedPoly, e: int) -> TruncatedPoly:
    return x ** e
