"""Exact coefficient algebra for the momentum-profile boundary value problem.

The first-order problem on [1, m+1] is

    (2*gamma + phi) * phi' = q(gamma),   q(gamma) = p(gamma) * gamma,
    p(gamma) = A*gamma^3/3 + B*gamma^2/2 + C,

with phi(1) = phi(m+1) = 0.  Imposing p(1) = 2 and p(m+1) = -2 (the smooth
closing of the metric at the two sections) makes A and B affine functions of
the remaining free parameter C.  Everything in this module is computed in
exact rational arithmetic; floating point enters only in the integrator.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

from .. import ratpoly

Rational = Union[int, float, Fraction]


def _frac(x: Rational) -> Fraction:
    # Fraction(float) is the exact binary value, which is what the shooting
    # loop wants when it feeds a float C back into the exact layer.
    return Fraction(x)


@dataclass(frozen=True)
class KahlerClassIndex:
    """Index m of the polarisation; fixes the fibre range gamma in [1, m+1].

    m = 0 is rejected: the class is not Kahler in this setup.
    """

    m: int

    def __post_init__(self):
        if not isinstance(self.m, int) or isinstance(self.m, bool) or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")

    @property
    def gamma_max(self) -> int:
        return self.m + 1


@dataclass(frozen=True)
class CoeffSet:
    """The shooting parameter C together with the induced linear coefficients.

    Invariants (checked exactly at construction):
        A/3 + B/2 + C == 2
        A*(m+1)^3/3 + B*(m+1)^2/2 + C == -2
    """

    m: int
    C: Fraction
    A: Fraction
    B: Fraction

    def __post_init__(self):
        KahlerClassIndex(self.m)
        s = self.m + 1
        if self.A / 3 + self.B / 2 + self.C != 2:
            raise ValueError("boundary identity p(1) == 2 violated")
        if self.A * s ** 3 / 3 + self.B * s ** 2 / 2 + self.C != -2:
            raise ValueError("boundary identity p(m+1) == -2 violated")

    def lambda_at(self, gamma):
        """The affine density lambda(gamma) = A*gamma + B.

        Accepts exact rationals or floats; the result type follows the input.
        """
        if isinstance(gamma, (int, Fraction)):
            return self.A * Fraction(gamma) + self.B
        return float(self.A) * gamma + float(self.B)

    def profile_poly(self) -> "ProfilePoly":
        return ProfilePoly.from_coeffs(self)

    def float_abc(self) -> Tuple[float, float, float]:
        return float(self.A), float(self.B), float(self.C)


@dataclass(frozen=True)
class ProfilePoly:
    """p, q = p*gamma, and the antiderivative P(gamma) = int_1^gamma q.

    Coefficient tuples are ascending.  P(1) == 0 by construction.
    """

    m: int
    p: ratpoly.Poly
    q: ratpoly.Poly
    P: ratpoly.Poly

    @classmethod
    def from_coeffs(cls, cs: CoeffSet) -> "ProfilePoly":
        p = ratpoly.poly([cs.C, 0, cs.B / 2, cs.A / 3])
        q = ratpoly.poly([0, cs.C, 0, cs.B / 2, cs.A / 3])
        # antiderivative of q, shifted so P(1) = 0
        prim = [Fraction(0)] + [c / (k + 1) for k, c in enumerate(q)]
        prim[0] = -ratpoly.eval_at(ratpoly.poly(prim), Fraction(1))
        P = ratpoly.poly(prim)
        obj = cls(m=cs.m, p=p, q=q, P=P)
        if obj.p_at(1) != 2 or obj.p_at(cs.m + 1) != -2:
            raise ValueError("profile polynomial violates boundary values")
        return obj

    def p_at(self, x) -> Fraction:
        return ratpoly.eval_at(self.p, Fraction(x))

    def q_at(self, x) -> Fraction:
        return ratpoly.eval_at(self.q, Fraction(x))

    def P_at(self, x) -> Fraction:
        return ratpoly.eval_at(self.P, Fraction(x))


@dataclass(frozen=True)
class LNConstants:
    """The split int_1^{m+1} q dt = L*C + N into C-linear and C-free parts.

    L < 0 and N > 0 hold for every m >= 1, and 2L + N > 2/5; all three are
    enforced at construction.
    """

    m: int
    L: Fraction
    N: Fraction

    def __post_init__(self):
        KahlerClassIndex(self.m)
        if not (self.L < 0 and self.N > 0):
            raise ValueError("expected L < 0 and N > 0")
        if not (2 * self.L + self.N > Fraction(2, 5)):
            raise ValueError("expected 2L + N > 2/5")

    def lc_plus_n(self, C: Rational) -> Fraction:
        return self.L * _frac(C) + self.N


def _linear_maps(m: int) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
    """A(C) = a1*C + a0 and B(C) = b1*C + b0."""
    s = Fraction((m + 1) ** 2)
    mm = Fraction(m)
    a1 = 3 / mm * (1 - 1 / s)
    a0 = -6 / mm * (1 / s + 1)
    b1 = -2 * (1 + 1 / mm - 1 / (mm * s))
    b0 = 4 + 4 / mm * (1 + 1 / s)
    return a1, a0, b1, b0


def coeffs_from_C(m: int, C: Rational) -> CoeffSet:
    """Resolve the boundary constraints p(1) = 2, p(m+1) = -2 for given C."""
    KahlerClassIndex(m)
    C = _frac(C)
    a1, a0, b1, b0 = _linear_maps(m)
    return CoeffSet(m=m, C=C, A=a1 * C + a0, B=b1 * C + b0)


def hcsck_coeffs(m: int) -> CoeffSet:
    """The unique coefficient set with A == 0 (constant lambda).

    Solving A(C) = 0 gives C = 2 + 4/((m+1)^2 - 1); B then follows from the
    boundary constraints.
    """
    s1 = Fraction((m + 1) ** 2 - 1)
    cs = coeffs_from_C(m, 2 + 4 / s1)
    assert cs.A == 0
    return cs


def compute_LN(m: int) -> LNConstants:
    """Split the exact integral int_1^{m+1} p(t)*t dt into L*C + N."""
    KahlerClassIndex(m)
    a1, a0, b1, b0 = _linear_maps(m)
    s = m + 1
    i5 = Fraction(s ** 5 - 1, 15)
    i4 = Fraction(s ** 4 - 1, 8)
    i2 = Fraction(s ** 2 - 1, 2)
    L = a1 * i5 + b1 * i4 + i2
    N = a0 * i5 + b0 * i4
    return LNConstants(m=m, L=L, N=N)


def admissible_C_max(m: int, eps: Rational) -> Fraction:
    """Largest C with L*C + N >= -2 + eps (L < 0 reverses the inequality).

    eps = 0 gives the closure of the admissible window and is accepted.
    """
    eps = _frac(eps)
    if eps < 0 or eps >= 2:
        raise ValueError("need 0 <= eps < 2")
    ln = compute_LN(m)
    return (-2 + eps - ln.N) / ln.L


def lambda_at(cs: CoeffSet, gamma):
    """Evaluate lambda(gamma) = A*gamma + B for the given coefficient set."""
    return cs.lambda_at(gamma)
