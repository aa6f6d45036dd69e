"""Exact trivariate polynomial arithmetic and reduction modulo the quadric.

Working in the "coordinates" (alpha, beta, psi) of a 2-dimensional space
form, the manifold is cut out by

    Q(alpha, beta, psi) = alpha^2 + beta^2 + eps*psi^2 - eps = 0,

and a conformal field is harmonic exactly when a certain quartic
P(alpha, beta, psi) vanishes modulo Q, i.e. P = Q*S for a quadratic S.
Divisibility is decided grade by grade: since the quadric's top part is a
nonzerodivisor, the homogeneous pieces of S are unique when they exist, and
a returned witness is always re-verified via P - Q*S = 0.

Coefficients are exact (Fraction, or QuadExt for one square-root extension);
a numeric double-precision fallback with a zero threshold is available for
irrational parameter scans and is flagged as approximate in its result.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import QuadExt

MAX_DEGREE = 4
NUMERIC_ZERO_TOL = 1e-10
_VAR_NAMES = ("alpha", "beta", "psi")

Monomial = tuple[int, int, int]


def _to_exact(v):
    if isinstance(v, (QuadExt, Fraction)):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v)  # exact binary-float value
    raise TypeError(f"cannot coerce {type(v).__name__} to an exact coefficient")


class TriPoly:
    """A polynomial in (alpha, beta, psi) of total degree <= 4."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        clean: dict[Monomial, object] = {}
        for mon, coeff in (terms or {}).items():
            i, j, k = mon
            if min(i, j, k) < 0:
                raise ValueError(f"negative exponent in monomial {mon}")
            if i + j + k > MAX_DEGREE:
                raise ValueError(f"total degree of {mon} exceeds {MAX_DEGREE}")
            if coeff:
                clean[(i, j, k)] = coeff
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "TriPoly":
        return cls()

    @classmethod
    def constant(cls, c) -> "TriPoly":
        return cls({(0, 0, 0): c})

    @classmethod
    def variable(cls, name: str) -> "TriPoly":
        if name not in _VAR_NAMES:
            raise ValueError(f"unknown variable {name!r}")
        mon = tuple(1 if v == name else 0 for v in _VAR_NAMES)
        return cls({mon: Fraction(1)})

    # -- ring operations -----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TriPoly):
            return other
        return TriPoly.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for mon, c in other.terms.items():
            out[mon] = out.get(mon, 0) + c
        return TriPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return TriPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, TriPoly):
            return TriPoly({m: c * other for m, c in self.terms.items()})
        out: dict[Monomial, object] = {}
        for (i1, j1, k1), c1 in self.terms.items():
            for (i2, j2, k2), c2 in other.terms.items():
                mon = (i1 + i2, j1 + j2, k1 + k2)
                out[mon] = out.get(mon, 0) + c1 * c2
        return TriPoly(out)

    def __rmul__(self, other):
        return TriPoly({m: other * c for m, c in self.terms.items()})

    def __pow__(self, k: int):
        out = TriPoly.constant(Fraction(1))
        for _ in range(k):
            out = out * self
        return out

    # -- structure ----------------------------------------------------------

    def homogeneous_part(self, k: int) -> "TriPoly":
        return TriPoly({m: c for m, c in self.terms.items() if sum(m) == k})

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def coeff(self, mon: Monomial):
        return self.terms.get(tuple(mon), Fraction(0))

    def is_zero(self, tol: float | None = None) -> bool:
        if tol is None:
            return not self.terms
        return all(abs(float(c)) <= tol for c in self.terms.values())

    def __eq__(self, other):
        if not isinstance(other, (TriPoly, int, Fraction, float, QuadExt)):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset((m, c) for m, c in self.terms.items()))

    def evaluate(self, alpha: float, beta: float, psi: float) -> float:
        vals = (alpha, beta, psi)
        total = 0.0
        for (i, j, k), c in self.terms.items():
            total += float(c) * vals[0] ** i * vals[1] ** j * vals[2] ** k
        return total

    def map_coefficients(self, fn) -> "TriPoly":
        return TriPoly({m: fn(c) for m, c in self.terms.items()})

    # -- canonical text form ---------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        # graded-lex, alpha > beta > psi, highest degree first
        mons = sorted(self.terms, key=lambda m: (sum(m), m), reverse=True)
        parts = []
        for pos, mon in enumerate(mons):
            c = self.terms[mon]
            cs = str(c)
            neg = cs.startswith("-")
            if neg:
                cs = cs[1:]
            names = [
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(_VAR_NAMES, mon)
                if e > 0
            ]
            if not names:
                body = cs
            elif cs == "1":
                body = "*".join(names)
            else:
                body = "*".join([cs] + names)
            if pos == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"TriPoly({self})"


ALPHA = TriPoly.variable("alpha")
BETA = TriPoly.variable("beta")
PSI = TriPoly.variable("psi")


def quadric(eps: int) -> TriPoly:
    """The defining polynomial alpha^2 + beta^2 + eps psi^2 - eps of M^2."""
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    return TriPoly(
        {(2, 0, 0): Fraction(1), (0, 2, 0): Fraction(1), (0, 0, 2): Fraction(eps), (0, 0, 0): Fraction(-eps)}
    )


# ---------------------------------------------------------------------------
# the harmonicity quartic of a conformal field on M^2
# ---------------------------------------------------------------------------


def build_harmonicity_poly(eps, omega, tau, rr, s, t, h, p, q, exact: bool = True) -> TriPoly:
    """The quartic whose vanishing mod the quadric is (p,q)-harmonicity.

    Parameters describe the conformal field K + C at a frame (a, b, w):
    K = omega*R + tau*T and pole c = rr*s*a + rr*t*b + h*w.  In exact mode
    every parameter is coerced to Fraction (floats keep their exact binary
    value) or kept as a QuadExt; pass exact=False for plain doubles.

    The squared length is expanded from the pairwise inner products of the
    component fields, so no quadric relation is consumed in the build; the
    result agrees with the reduced closed form modulo the quadric.
    """
    conv = _to_exact if exact else float
    eps = int(eps)
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    om, ta, r, s, t, h, p, q = (conv(v) for v in (omega, tau, rr, s, t, h, p, q))
    if not q:
        raise ValueError("harmonicity forces q != 0 for conformal fields on M^2")

    al, be, ps = ALPHA, BETA, PSI
    gamma = r * s * al + r * t * be + h * ps
    mu = r * r * (s * s + t * t) + eps * h * h
    # pairwise inner products of the component fields R, T, C
    R_sq = al * al + be * be
    T_sq = eps * (al * al) + ps * ps
    C_sq = mu - eps * (gamma * gamma)
    RT = be * ps
    RC = r * t * al - r * s * be
    TC = eps * h * al - r * s * ps
    two_F = (
        om * om * R_sq
        + ta * ta * T_sq
        + C_sq
        + 2 * om * ta * RT
        + 2 * om * RC
        + 2 * ta * TC
    )
    zeta = (om * ps - eps * ta * be) ** 2 + gamma * gamma
    half = Fraction(1, 2) if exact else 0.5
    return eps * (1 + two_F) * (1 + q * two_F) + (2 * q) * ((p - 2) * half * two_F - 1) * zeta


# ---------------------------------------------------------------------------
# reduction modulo the quadric
# ---------------------------------------------------------------------------


@dataclass
class ReductionResult:
    divisible: bool
    witness: TriPoly | None
    failing_grade: int | None
    detail: str
    approximate: bool = False

    def __bool__(self):
        return self.divisible


def _monomials(deg: int) -> list[Monomial]:
    return [
        (i, j, deg - i - j)
        for i, j in itertools.product(range(deg + 1), repeat=2)
        if i + j <= deg
    ]


def _solve_linear(A, b, tol: float | None):
    """Solve A x = b over the coefficient field; None when inconsistent.

    Exact Gaussian elimination when tol is None (any nonzero pivot works);
    partial pivoting with |.| < tol as the zero test otherwise.  Free
    columns (which cannot occur for our injective systems) default to zero.
    """

    def is_zero(v):
        return (not v) if tol is None else abs(float(v)) <= tol

    rows = [list(row) + [bv] for row, bv in zip(A, b)]
    ncols = len(A[0]) if A else 0
    pivot_of_col: dict[int, int] = {}
    rank = 0
    for col in range(ncols):
        piv = None
        if tol is None:
            for i in range(rank, len(rows)):
                if not is_zero(rows[i][col]):
                    piv = i
                    break
        else:
            cand = max(range(rank, len(rows)), key=lambda i: abs(float(rows[i][col])), default=None)
            if cand is not None and not is_zero(rows[cand][col]):
                piv = cand
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col]
        rows[rank] = [v / inv for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and not is_zero(rows[i][col]):
                f = rows[i][col]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[rank])]
        pivot_of_col[col] = rank
        rank += 1
    for row in rows:
        if all(is_zero(v) for v in row[:-1]) and not is_zero(row[-1]):
            return None
    zero = Fraction(0) if tol is None else 0.0
    x = [zero] * ncols
    for col, i in pivot_of_col.items():
        x[col] = rows[i][-1]
    return x


def _divide_homogeneous(H: TriPoly, Q2: TriPoly, deg: int, tol: float | None) -> TriPoly | None:
    """The unique homogeneous S of the given degree with Q2*S = H, if any."""
    unknowns = _monomials(deg)
    eq_mons = _monomials(deg + 2)
    A = []
    b = []
    for em in eq_mons:
        row = []
        for um in unknowns:
            diff = tuple(e - u for e, u in zip(em, um))
            row.append(Q2.coeff(diff) if min(diff) >= 0 else Fraction(0))
        A.append(row)
        b.append(H.coeff(em))
    x = _solve_linear(A, b, tol)
    if x is None:
        return None
    return TriPoly(dict(zip(unknowns, x)))


def vanishes_mod_quadric(P: TriPoly, eps: int, tol: float | None = None) -> ReductionResult:
    """Decide whether P = Q*S for some quadratic S, grade by grade.

    Returns the witness S on success; on failure, the lowest report is the
    first homogeneous grade (from 4 down to 0) at which no match exists.
    Pass tol for the double-precision fallback (flagged approximate).
    """
    if P.degree() > MAX_DEGREE:
        raise ValueError("P must have total degree <= 4")
    Q = quadric(eps)
    Q2 = Q.homogeneous_part(2)
    Q0 = Q.coeff((0, 0, 0))
    approx = tol is not None

    S2 = _divide_homogeneous(P.homogeneous_part(4), Q2, 2, tol)
    if S2 is None:
        return ReductionResult(False, None, 4, "quartic part is not a multiple of the quadric", approx)
    S1 = _divide_homogeneous(P.homogeneous_part(3), Q2, 1, tol)
    if S1 is None:
        return ReductionResult(False, None, 3, "cubic part is not a multiple of the quadric", approx)
    S0 = _divide_homogeneous(P.homogeneous_part(2) - Q0 * S2, Q2, 0, tol)
    if S0 is None:
        return ReductionResult(False, None, 2, "quadratic grade has no consistent match", approx)
    S = S2 + S1 + S0
    if not (P.homogeneous_part(1) - Q0 * S1).is_zero(tol):
        return ReductionResult(False, None, 1, "linear grade mismatch", approx)
    if not (P.homogeneous_part(0) - Q0 * S0).is_zero(tol):
        return ReductionResult(False, None, 0, "constant grade mismatch", approx)
    residual = P - Q * S
    if not residual.is_zero(tol):
        return ReductionResult(False, None, 2, "witness failed the exact re-check", approx)
    return ReductionResult(True, S, None, "P = Q*S verified", approx)
