"""Exact univariate polynomials over Q and Q(i), plus the real-root and
numeric-root back ends used by the rest of the package.

Coefficients are stored in ascending degree order.  Exact code paths only
ever see ``fractions.Fraction`` or :class:`GaussRational` values; the
numeric maps in :mod:`polyspaces.spaces` reuse :class:`Poly` with ``float``
or ``complex`` coefficients, which is fine for evaluation and arithmetic
but not for :func:`gcd_subresultant` or :func:`sturm_count`.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import ContractViolationError, InvalidInputError, NumericalFailure

__all__ = [
    "GaussRational",
    "Poly",
    "Z",
    "as_exact",
    "gcd_subresultant",
    "squarefree_part",
    "sturm_chain",
    "sturm_count",
    "roots_numeric",
    "resultant",
    "discriminant",
    "poly_to_json",
    "poly_from_json",
    "format_rational",
    "parse_rational",
]


class GaussRational:
    """An element re + i*im of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(x):
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussRational(x, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussRational(
            (self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __pow__(self, e: int):
        if e < 0:
            return GaussRational(1) / (self ** (-e))
        out, base = GaussRational(1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, GaussRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return GaussRational(self.re, -self.im)

    def __repr__(self):
        return f"GaussRational({self.re}, {self.im})"


def as_exact(c):
    """Normalize an exact coefficient: real Gaussian values collapse to Fraction."""
    if isinstance(c, GaussRational):
        return c.re if c.im == 0 else c
    if isinstance(c, bool):
        raise InvalidInputError("boolean is not a coefficient")
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return parse_rational(c)
    raise InvalidInputError(f"not an exact coefficient: {c!r}")


def _is_zero(c) -> bool:
    return c == 0


class Poly:
    """Immutable univariate polynomial, coefficients in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [c.re if isinstance(c, GaussRational) and c.im == 0 else c for c in coeffs]
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def exact(cls, coeffs) -> "Poly":
        return cls(as_exact(c) for c in coeffs)

    @classmethod
    def monomial(cls, k: int, c=Fraction(1)) -> "Poly":
        return cls([Fraction(0)] * k + [c])

    @classmethod
    def from_roots(cls, roots) -> "Poly":
        out = cls([Fraction(1)])
        for r in roots:
            out = out * cls([-r, Fraction(1)])
        return out

    @property
    def degree(self) -> int:
        # zero polynomial has degree -1
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self):
        if not self.coeffs:
            return 0
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_real(self) -> bool:
        for c in self.coeffs:
            if isinstance(c, GaussRational) and c.im != 0:
                return False
            if isinstance(c, complex) and c.imag != 0:
                return False
        return True

    def is_exact(self) -> bool:
        return all(isinstance(c, (Fraction, int, GaussRational)) for c in self.coeffs)

    def monic(self) -> "Poly":
        if not self.coeffs:
            raise InvalidInputError("zero polynomial has no monic normalization")
        lc = self.coeffs[-1]
        if lc == 1:
            return self
        return Poly(c / lc for c in self.coeffs)

    def derivative(self, k: int = 1) -> "Poly":
        cs = self.coeffs
        for _ in range(k):
            cs = tuple(i * cs[i] for i in range(1, len(cs)))
        return Poly(cs)

    def conj(self) -> "Poly":
        return Poly(c.conjugate() if hasattr(c, "conjugate") else c for c in self.coeffs)

    def real(self) -> "Poly":
        """Drop Gaussian/complex wrappers from a real polynomial."""
        out = []
        for c in self.coeffs:
            if isinstance(c, GaussRational):
                out.append(c.re)
            elif isinstance(c, complex):
                out.append(c.real)
            else:
                out.append(c)
        return Poly(out)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([a[i] + b[i] if i < len(b) else a[i] for i in range(len(a))])

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        return self + (-other)

    def __rsub__(self, other):
        return Poly([other]) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if _is_zero(x):
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = Poly([Fraction(1)])
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree
        lcb = other.lc
        q = [0] * max(len(r) - db, 0)
        while len(r) - 1 >= db and r:
            c = r[-1] / lcb
            shift = len(r) - 1 - db
            q[shift] = c
            for i, b in enumerate(other.coeffs):
                r[shift + i] = r[shift + i] - c * b
            r.pop()
            while r and _is_zero(r[-1]):
                r.pop()
        return Poly(q), Poly(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if _is_zero(c):
                continue
            mon = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if isinstance(c, GaussRational):
                cs = f"({c.re}{'+' if c.im >= 0 else '-'}{abs(c.im)}i)"
            else:
                cs = str(c)
            if mon and c == 1:
                terms.append(mon)
            elif mon and c == -1:
                terms.append("-" + mon)
            else:
                terms.append(cs + ("*" + mon if mon else ""))
        return " + ".join(terms).replace("+ -", "- ")


Z = Poly([Fraction(0), Fraction(1)])


# ---------------------------------------------------------------------------
# subresultant gcd


def _denominator_lcm(coeffs) -> int:
    den = 1
    for c in coeffs:
        if isinstance(c, GaussRational):
            den = math.lcm(den, c.re.denominator, c.im.denominator)
        else:
            den = math.lcm(den, Fraction(c).denominator)
    return den


def _to_domain(p: Poly, gaussian: bool) -> list:
    """Clear denominators; Z[x] as Python ints, Z[i][x] as integral GaussRationals."""
    den = _denominator_lcm(p.coeffs)
    if gaussian:
        return [GaussRational._coerce(c) * den for c in p.coeffs]
    return [int(Fraction(c) * den) for c in p.coeffs]


def _exact_div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError("inexact division in subresultant PRS")
        return q
    return a / b


def _strip(cs: list) -> list:
    while cs and _is_zero(cs[-1]):
        cs.pop()
    return cs


def _prem(a: list, b: list) -> list:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b, division free."""
    r = list(a)
    db = len(b) - 1
    lcb = b[-1]
    e = len(a) - len(b) + 1
    while r and len(r) - 1 >= db:
        top = r[-1]
        shift = len(r) - 1 - db
        r = [lcb * c for c in r]
        for i, bc in enumerate(b):
            r[shift + i] = r[shift + i] - top * bc
        r.pop()
        _strip(r)
        e -= 1
    if e > 0:
        f = lcb**e
        r = [f * c for c in r]
    return r


def _subresultant_prs_last(a: list, b: list) -> list:
    # Collins/Brown subresultant PRS; returns the last nonzero element.
    if len(a) < len(b):
        a, b = b, a
    g = h = 1
    while True:
        delta = len(a) - len(b)
        r = _prem(a, b)
        if not r:
            return b
        if len(r) == 1:
            return r
        a = b
        div = g * h**delta
        b = [_exact_div(c, div) for c in r]
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = _exact_div(g**delta, h ** (delta - 1))


def gcd_subresultant(f: Poly, g: Poly) -> Poly:
    """Monic gcd of two exact polynomials via the subresultant PRS."""
    if f.is_zero() and g.is_zero():
        raise InvalidInputError("gcd of two zero polynomials is undefined")
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    gaussian = not (f.is_real() and g.is_real())
    last = _subresultant_prs_last(_to_domain(f, gaussian), _to_domain(g, gaussian))
    if len(last) == 1:
        return Poly([Fraction(1)])
    if gaussian:
        lc = last[-1]
        return Poly(as_exact(c / lc) for c in last)
    lc = last[-1]
    return Poly(Fraction(c, lc) for c in last)


def squarefree_part(f: Poly) -> Poly:
    if f.is_zero():
        raise InvalidInputError("squarefree part of the zero polynomial")
    if f.degree == 0:
        return Poly([Fraction(1)])
    g = gcd_subresultant(f, f.derivative())
    q, r = divmod(f, g)
    assert r.is_zero()
    return q.monic()


# ---------------------------------------------------------------------------
# Sturm sequences


def _primitive_ints(cs: list) -> list:
    cont = 0
    for v in cs:
        cont = math.gcd(cont, v)
    return [v // cont for v in cs] if cont > 1 else cs


def _neg_prem_positive(a: list, b: list) -> list:
    # -(positive multiple of a mod b), primitive, over Z
    r = list(a)
    db = len(b) - 1
    lcb = b[-1]
    flips = 0
    while r and len(r) - 1 >= db:
        top = r[-1]
        shift = len(r) - 1 - db
        r = [lcb * c for c in r]
        for i, bc in enumerate(b):
            r[shift + i] -= top * bc
        r.pop()
        _strip(r)
        flips += 1
    if lcb < 0 and flips % 2:
        r = [-c for c in r]
    return _primitive_ints([-c for c in r])


def sturm_chain(f: Poly) -> list[Poly]:
    """Sturm chain of a squarefree real polynomial.

    Elements are positive rescalings of the classical chain (integral and
    primitive after the first), which leaves every sign count unchanged.
    """
    if f.is_zero():
        raise InvalidInputError("Sturm chain of the zero polynomial")
    if not f.is_real():
        raise InvalidInputError("Sturm chain needs real coefficients")
    f = f.real()
    if f.degree == 0:
        return [f]
    den = _denominator_lcm(f.coeffs)
    a = [int(Fraction(c) * den) for c in f.coeffs]
    b = _primitive_ints([i * c for i, c in enumerate(a)][1:])
    ints = [a, b]
    while True:
        r = _neg_prem_positive(ints[-2], ints[-1])
        if not r:
            break
        ints.append(r)
    chain = [f] + [Poly(Fraction(c) for c in cs) for cs in ints[1:]]
    if chain[-1].degree > 0:
        raise ContractViolationError(
            f"input is not squarefree: chain ends in {chain[-1]} of degree {chain[-1].degree}"
        )
    return chain


def _variations(signs) -> int:
    v, last = 0, 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            v += 1
        last = s
    return v


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _signs_at_infinity(chain, positive: bool):
    out = []
    for p in chain:
        s = _sign(p.lc)
        if not positive and p.degree % 2:
            s = -s
        out.append(s)
    return out


def sturm_count(f: Poly, interval=None) -> int:
    """Number of distinct real roots of squarefree ``f``.

    With ``interval=(lo, hi)`` the count is over the half-open interval
    (lo, hi]; otherwise over the whole real line.
    """
    chain = sturm_chain(f)
    if interval is None:
        return _variations(_signs_at_infinity(chain, False)) - _variations(
            _signs_at_infinity(chain, True)
        )
    lo, hi = (Fraction(v) for v in interval)
    if not lo < hi:
        raise InvalidInputError(f"empty interval ({lo}, {hi}]")
    return _variations([_sign(p(lo)) for p in chain]) - _variations(
        [_sign(p(hi)) for p in chain]
    )


# ---------------------------------------------------------------------------
# resultants


def resultant(f: Poly, g: Poly):
    """Exact resultant over the coefficient field (Euclidean recursion)."""
    if f.is_zero() or g.is_zero():
        return Fraction(0)
    sign = 1
    out = Fraction(1)
    a, b = f, g
    while True:
        da, db = a.degree, b.degree
        if db == 0:
            return sign * out * b.lc**da
        r = a % b
        if r.is_zero():
            return Fraction(0)
        if (da * db) % 2:
            sign = -sign
        out = out * b.lc ** (da - r.degree)
        a, b = b, r


def discriminant(f: Poly):
    d = f.degree
    if d < 1:
        raise InvalidInputError("discriminant needs degree >= 1")
    s = -1 if (d * (d - 1) // 2) % 2 else 1
    return s * resultant(f, f.derivative()) / f.lc


# ---------------------------------------------------------------------------
# numeric roots

CLUSTER_RADIUS = 1e-6


def _complex_coeffs(f: Poly) -> np.ndarray:
    return np.array([complex(c) for c in f.coeffs], dtype=complex)


def _residuals(cs: np.ndarray, roots: np.ndarray) -> np.ndarray:
    vals = np.polyval(cs[::-1], roots)
    deg = len(cs) - 1
    return np.abs(vals) / (1.0 + np.abs(roots)) ** deg


def _cluster(roots: np.ndarray) -> np.ndarray:
    out = roots.copy()
    used = np.zeros(len(roots), dtype=bool)
    for i in range(len(roots)):
        if used[i]:
            continue
        members = [i]
        for j in range(i + 1, len(roots)):
            if not used[j] and abs(roots[j] - roots[i]) < CLUSTER_RADIUS:
                members.append(j)
        if len(members) > 1:
            mean = roots[members].mean()
            out[members] = mean
            used[members] = True
    return out


def roots_numeric(f: Poly, tol: float = 1e-10) -> list[complex]:
    """All deg(f) complex roots (with multiplicity) in double precision.

    Companion-matrix eigenvalues (LAPACK balances the matrix first), roots
    closer than 1e-6 merged to their mean, then one Newton step per root
    which is kept only if it lowers that root's residual.  Raises
    :class:`NumericalFailure` when the worst scaled residual
    ``|f(r)| / (1 + |r|)^deg`` exceeds ``tol``.
    """
    if f.is_zero():
        raise InvalidInputError("roots of the zero polynomial")
    d = f.degree
    if d < 1:
        raise InvalidInputError("roots of a constant polynomial")
    cs = _complex_coeffs(f)
    cs = cs / cs[-1]
    real_input = bool(np.all(cs.imag == 0))
    if d == 1:
        roots = np.array([-cs[0]])
    else:
        comp = np.zeros((d, d), dtype=float if real_input else complex)
        comp[1:, :-1] = np.eye(d - 1)
        comp[:, -1] = -(cs[:-1].real if real_input else cs[:-1])
        roots = np.linalg.eigvals(comp).astype(complex)
    roots = _cluster(roots)
    before = _residuals(cs, roots)
    dcs = np.array([i * cs[i] for i in range(1, d + 1)])
    with np.errstate(all="ignore"):
        fv = np.polyval(cs[::-1], roots)
        dv = np.polyval(dcs[::-1], roots)
        step = np.where(dv != 0, fv / np.where(dv != 0, dv, 1), 0)
    polished = roots - step
    after = _residuals(cs, polished)
    better = np.isfinite(after) & (after < before)
    roots = np.where(better, polished, roots)
    if real_input:
        # tiny imaginary parts on roots that should be real are rounding noise
        roots = np.where(np.abs(roots.imag) == 0, roots.real + 0j, roots)
    achieved = float(np.max(_residuals(cs, roots)))
    if not achieved <= tol:
        raise NumericalFailure(
            f"root residual {achieved:.3e} exceeds tolerance {tol:.1e}", achieved=achieved
        )
    return sorted((complex(r) for r in roots), key=lambda r: (r.real, r.imag))


# ---------------------------------------------------------------------------
# serialization


def format_rational(c) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    try:
        return Fraction(str(s).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInputError(f"bad rational literal {s!r}") from exc


def _coeff_to_json(c):
    if isinstance(c, GaussRational):
        return {"re": format_rational(c.re), "im": format_rational(c.im)}
    if isinstance(c, (int, Fraction)):
        return format_rational(c)
    if isinstance(c, complex):
        return {"re": repr(c.real), "im": repr(c.imag)}
    return repr(float(c))


def _coeff_from_json(v):
    if isinstance(v, dict):
        return as_exact(GaussRational(parse_rational(v["re"]), parse_rational(v.get("im", "0"))))
    if isinstance(v, float):
        raise InvalidInputError("floating-point coefficient in an exact encoding; use 'p/q'")
    return parse_rational(v)


def poly_to_json(p: Poly) -> dict:
    return {"coeffs": [_coeff_to_json(c) for c in p.coeffs]}


def poly_from_json(obj) -> Poly:
    cs = obj["coeffs"] if isinstance(obj, dict) else obj
    return Poly(_coeff_from_json(v) for v in cs)
