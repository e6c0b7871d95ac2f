"""Membership, strata and the constructive maps on tuples of monic polynomials.

Membership and strata are exact.  The maps that move roots around
(``stabilize``, ``loop_product``, ``double_to_hplus``) go through numeric
roots and finish with a mandatory numeric membership re-check of their output.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidInputError, NumericalFailure, UnsupportedParametersError
from .polyarith import (
    GaussRational,
    Poly,
    as_exact,
    gcd_subresultant,
    poly_from_json,
    poly_to_json,
    roots_numeric,
    squarefree_part,
    sturm_count,
)

REGION_MAPS_VERSION = "exp-v1"
RECHECK_THRESHOLD = 1e-6
ROOT_TOL = 1e-8


class Family(str, Enum):
    POLY_C = "Poly_C"
    POLY_R = "Poly_R"
    Q_R = "Q_R"
    POLY_R_HPLUS = "Poly_R_Hplus"

    @property
    def is_real(self) -> bool:
        return self is not Family.POLY_C


@dataclass(frozen=True)
class SpaceId:
    family: Family
    d: int
    m: int
    n: int
    degrees: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.m < 1 or self.n < 1:
            raise InvalidInputError("m and n must be positive")
        if (self.m, self.n) == (1, 1):
            raise InvalidInputError("(m, n) = (1, 1) is excluded")
        if self.degrees is not None:
            degs = tuple(int(x) for x in self.degrees)
            if len(degs) != self.m or min(degs) < 1:
                raise InvalidInputError(f"degrees {degs} do not match m = {self.m}")
            object.__setattr__(self, "degrees", degs)
            object.__setattr__(self, "d", max(degs))
        elif self.d < 1:
            raise InvalidInputError("d must be positive")

    def slot_degrees(self) -> tuple[int, ...]:
        return self.degrees if self.degrees is not None else (self.d,) * self.m

    def with_degrees(self, degs: Sequence[int]) -> "SpaceId":
        degs = tuple(degs)
        if len(set(degs)) == 1:
            return SpaceId(self.family, degs[0], self.m, self.n)
        return SpaceId(self.family, max(degs), self.m, self.n, degs)


@dataclass(frozen=True)
class System:
    """An m-tuple of monic polynomials tagged with the space it should live in.

    ``region_maps`` is set on outputs of the numeric maps and names the
    homeomorphism conventions that produced them.
    """

    space: SpaceId
    polys: tuple[Poly, ...]
    region_maps: Optional[str] = None

    def __post_init__(self):
        polys = tuple(self.polys)
        object.__setattr__(self, "polys", polys)
        if len(polys) != self.space.m:
            raise InvalidInputError(f"expected {self.space.m} polynomials, got {len(polys)}")
        for p, dk in zip(polys, self.space.slot_degrees()):
            if p.degree != dk:
                raise InvalidInputError(f"{p} has degree {p.degree}, expected {dk}")
            if not p.is_monic():
                raise InvalidInputError(f"{p} is not monic")
            if self.space.family.is_real and not p.is_real():
                raise InvalidInputError(f"{self.space.family.value} needs real coefficients: {p}")

    @property
    def is_exact(self) -> bool:
        return all(p.is_exact() for p in self.polys)

    def conjugate(self) -> "System":
        return System(self.space, tuple(p.conj() for p in self.polys), self.region_maps)

    def as_family(self, family: Family) -> "System":
        return System(
            SpaceId(family, self.space.d, self.space.m, self.space.n, self.space.degrees),
            self.polys,
            self.region_maps,
        )


def make_system(family, polys, n: int) -> System:
    """Build a system from exact polynomials, inferring d, m and per-slot degrees."""
    polys = tuple(p if isinstance(p, Poly) else Poly.exact(p) for p in polys)
    degs = [p.degree for p in polys]
    space = SpaceId(Family(family), max(degs), len(polys), n)
    return System(space.with_degrees(degs), polys)


@dataclass(frozen=True)
class StratumSignature:
    i: int
    j: int

    @property
    def k(self) -> int:
        return self.i + self.j

    def as_tuple(self) -> tuple[int, int]:
        return (self.i, self.j)


# ---------------------------------------------------------------------------
# region maps


@dataclass(frozen=True)
class RegionMap:
    """One of the fixed conjugation-compatible homeomorphisms used to move roots.

    phi_right:  x+iy -> e^x + iy            onto (0, inf) x R
    psi_left:   x+iy -> -e^(-x) + iy        onto (-inf, 0) x R
    phi_d:      x+iy -> (d - e^(-x)) + iy   onto {Re < d}
    psi_double: x+iy -> x + i e^y           onto the open upper half plane
    """

    name: str
    d: float = 0.0

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        x, y = z.real, z.imag
        if self.name == "phi_right":
            out = np.exp(x) + 1j * y
        elif self.name == "psi_left":
            out = -np.exp(-x) + 1j * y
        elif self.name == "phi_d":
            out = (self.d - np.exp(-x)) + 1j * y
        elif self.name == "psi_double":
            out = x + 1j * np.exp(y)
        else:
            raise InvalidInputError(f"unknown region map {self.name!r}")
        return out


PHI_RIGHT = RegionMap("phi_right")
PSI_LEFT = RegionMap("psi_left")
PSI_DOUBLE = RegionMap("psi_double")


def phi_d(d: float) -> RegionMap:
    return RegionMap("phi_d", float(d))


def stabilization_anchors(d: int, m: int) -> list[Fraction]:
    return [Fraction(d) + Fraction(k, m + 1) for k in range(1, m + 1)]


# ---------------------------------------------------------------------------
# exact membership


def jet_family(sys: System) -> list[Poly]:
    """(f_k + f_k^{(t)}) for k = 1..m, t = 0..n-1, with the t = 0 entry f_k itself."""
    out = []
    for f in sys.polys:
        for t in range(sys.space.n):
            out.append(f if t == 0 else f + f.derivative(t))
    return out


def common_root_gcd(sys: System) -> Poly:
    """Monic gcd of every f_k^{(t)}, t < n; its roots are the common n-fold roots."""
    if not sys.is_exact:
        raise InvalidInputError("exact membership needs exact coefficients")
    g = None
    for f in sys.polys:
        for t in range(sys.space.n):
            h = f.derivative(t)
            g = h.monic() if g is None else gcd_subresultant(g, h)
            if g.degree == 0:
                return g
    return g


def _no_real_roots(f: Poly) -> bool:
    return sturm_count(squarefree_part(f)) == 0


def _hplus_shape(sys: System) -> bool:
    for k, (f, dk) in enumerate(zip(sys.polys, sys.space.slot_degrees()), start=1):
        if dk % 2 == 0:
            if not _no_real_roots(f):
                return False
        else:
            q, r = divmod(f, Poly([Fraction(-k), Fraction(1)]))
            if not r.is_zero():
                return False
            if q.degree > 0 and not _no_real_roots(q):
                return False
    return True


def is_member(sys: System) -> bool:
    g = common_root_gcd(sys)
    fam = sys.space.family
    if fam is Family.Q_R:
        return g.degree == 0 or sturm_count(squarefree_part(g)) == 0
    if g.degree > 0:
        return False
    if fam is Family.POLY_R_HPLUS:
        return _hplus_shape(sys)
    return True


def stratum_signature(sys: System) -> Optional[StratumSignature]:
    """Real / upper-half-plane counts of distinct common n-fold roots, or None for members."""
    if not all(p.is_real() for p in sys.polys):
        raise InvalidInputError("strata are defined for real-coefficient systems")
    g = common_root_gcd(sys)
    if g.degree == 0:
        return None
    s = squarefree_part(g).real()
    i = sturm_count(s)
    pairs, odd = divmod(s.degree - i, 2)
    assert odd == 0, "non-real roots of a real polynomial come in pairs"
    return StratumSignature(i, pairs)


def jet_embedding(f: Poly, n: int) -> System:
    """f -> (f, f+f', ..., f+f^{(n-1)}) as a candidate point of Poly^{d,n}_1(R)."""
    if n < 2:
        raise InvalidInputError("jet embedding needs n >= 2")
    if not f.is_monic() or not f.is_real():
        raise InvalidInputError("jet embedding takes a real monic polynomial")
    polys = tuple(f if t == 0 else f + f.derivative(t) for t in range(n))
    return System(SpaceId(Family.POLY_R, f.degree, n, 1), polys)


# ---------------------------------------------------------------------------
# numeric maps


def _roots_of(p: Poly) -> np.ndarray:
    return np.array(roots_numeric(p, ROOT_TOL), dtype=complex)


def _system_roots(sys: System) -> list[np.ndarray]:
    return [_roots_of(p) for p in sys.polys]


def _pair_conjugates(roots: np.ndarray):
    """Split roots into exactly-real values and upper-half-plane representatives."""
    scale = 1.0 + np.abs(roots)
    real_mask = np.abs(roots.imag) <= 1e-12 * scale
    reals = list(roots[real_mask].real)
    upper = sorted((r for r in roots[~real_mask] if r.imag > 0), key=lambda r: (r.real, r.imag))
    lower = [r for r in roots[~real_mask] if r.imag < 0]
    if len(upper) != len(lower):
        raise NumericalFailure("roots of a real polynomial are not conjugation-symmetric")
    paired = []
    for u in upper:
        idx = int(np.argmin([abs(u - np.conj(w)) for w in lower]))
        w = lower.pop(idx)
        paired.append(complex(0.5 * (u.real + w.real), 0.5 * (u.imag - w.imag)))
    return reals, paired


def _poly_from_roots(roots: np.ndarray, real: bool) -> Poly:
    if not real:
        cs = np.poly(roots)[::-1]
        return Poly([complex(c) for c in cs[:-1]] + [1.0])
    reals, pairs = _pair_conjugates(roots)
    acc = np.array([1.0])
    for x in reals:
        acc = np.convolve(acc, [-float(x), 1.0])
    for a in pairs:
        acc = np.convolve(acc, [abs(a) ** 2, -2.0 * a.real, 1.0])
    acc[-1] = 1.0
    return Poly([float(c) for c in acc])


def _nth_distance(alpha: complex, roots: np.ndarray, n: int) -> float:
    if len(roots) < n:
        return math.inf
    return float(np.sort(np.abs(roots - alpha))[n - 1])


def membership_margin(root_sets: Sequence[np.ndarray], n: int, family: Family) -> float:
    """Numeric distance of a root configuration from the discriminant.

    For each candidate alpha (a root of the first component) take the
    largest over components of the distance from alpha to that component's
    n-th closest root; alpha is a common n-fold root exactly when this is 0.
    The margin is the minimum over candidates (inf when none qualify).  Q_R
    only looks at real candidates.
    """
    best = math.inf
    for alpha in root_sets[0]:
        if family is Family.Q_R and alpha.imag != 0:
            continue
        worst = max(_nth_distance(alpha, rs, n) for rs in root_sets)
        best = min(best, worst)
    return best


def _recheck(root_sets, space: SpaceId, what: str) -> float:
    margin = membership_margin(root_sets, space.n, space.family)
    if not margin > RECHECK_THRESHOLD:
        raise NumericalFailure(
            f"{what}: output fails the numeric membership re-check (margin {margin:.3e})",
            achieved=margin,
        )
    return margin


def _require_member(sys: System, what: str) -> list[np.ndarray]:
    roots = _system_roots(sys)
    if sys.is_exact:
        ok = is_member(sys)
    else:
        ok = membership_margin(roots, sys.space.n, sys.space.family) > RECHECK_THRESHOLD
    if not ok:
        raise InvalidInputError(f"{what} is defined on members only")
    return roots


def _build(space: SpaceId, root_sets) -> System:
    real = space.family.is_real
    polys = tuple(_poly_from_roots(rs, real) for rs in root_sets)
    return System(space, polys, REGION_MAPS_VERSION)


def double_to_hplus(sys: System) -> System:
    """Poly^{d0,m}_n(C) -> Poly^{2 d0,m}_n(R; H+), alpha -> (z - psi(alpha))(z - conj psi(alpha))."""
    sp = sys.space
    roots = _require_member(sys.as_family(Family.POLY_C), "double_to_hplus")
    images = [PSI_DOUBLE(rs) for rs in roots]
    doubled = [np.concatenate([im, np.conj(im)]) for im in images]
    out_space = SpaceId(Family.POLY_R_HPLUS, 2 * sp.d, sp.m, sp.n).with_degrees(
        [2 * dk for dk in sp.slot_degrees()]
    )
    out = _build(out_space, doubled)
    _recheck(doubled, SpaceId(Family.POLY_R, out_space.d, sp.m, sp.n, out_space.degrees), "double_to_hplus")
    for im in images:
        if np.any(im.imag <= RECHECK_THRESHOLD):
            raise NumericalFailure("double_to_hplus produced a root too close to the real axis")
    return out


def stabilize(sys: System, slot: Optional[int] = None) -> System:
    """Degree-raising map: squeeze roots into {Re < d} and add one new real root.

    With ``slot=None`` every component gains the anchor root
    d + k/(m+1); with ``slot=i`` (1-based) only component i gains a root,
    which is the per-slot stabilization for unequal degree tuples.
    """
    sp = sys.space
    if sp.family is Family.POLY_R_HPLUS:
        raise UnsupportedParametersError("stabilize is not provided on the H+ subspace")
    if slot is not None and not 1 <= slot <= sp.m:
        raise InvalidInputError(f"slot {slot} out of range 1..{sp.m}")
    roots = _require_member(sys, "stabilize")
    d = sp.d
    fmap = phi_d(d)
    anchors = stabilization_anchors(d, sp.m)
    new_roots, new_degs = [], []
    for k, (rs, dk) in enumerate(zip(roots, sp.slot_degrees()), start=1):
        img = fmap(rs)
        if slot is None or slot == k:
            img = np.concatenate([img, [complex(float(anchors[k - 1]), 0.0)]])
            dk += 1
        new_roots.append(img)
        new_degs.append(dk)
    out_space = sp.with_degrees(new_degs)
    out = _build(out_space, new_roots)
    _recheck(new_roots, out_space, "stabilize")
    return out


def loop_product(sys1: System, sys2: System) -> System:
    """Componentwise product of phi_right-transplanted sys1 and psi_left-transplanted sys2."""
    a, b = sys1.space, sys2.space
    if (a.m, a.n, a.family) != (b.m, b.n, b.family):
        raise InvalidInputError("loop product needs matching (m, n, family)")
    r1 = _require_member(sys1, "loop_product")
    r2 = _require_member(sys2, "loop_product")
    roots = [np.concatenate([PHI_RIGHT(x), PSI_LEFT(y)]) for x, y in zip(r1, r2)]
    degs = [d1 + d2 for d1, d2 in zip(a.slot_degrees(), b.slot_degrees())]
    out_space = a.with_degrees(degs)
    out = _build(out_space, roots)
    check_space = out_space
    if a.family is Family.POLY_R_HPLUS:
        check_space = SpaceId(Family.POLY_R, out_space.d, a.m, a.n, out_space.degrees)
    _recheck(roots, check_space, "loop_product")
    return out


def numeric_member(sys: System) -> bool:
    """Numeric membership test for float-coefficient systems (threshold 1e-6)."""
    roots = _system_roots(sys)
    return membership_margin(roots, sys.space.n, sys.space.family) > RECHECK_THRESHOLD


def rationalize(sys: System, max_denominator: int = 10**12) -> System:
    """Exact rational approximation of a numeric system (for exact re-verification)."""
    polys = []
    for p in sys.polys:
        cs = []
        for c in p.coeffs:
            if isinstance(c, complex):
                cs.append(
                    as_exact(
                        GaussRational(
                            Fraction(c.real).limit_denominator(max_denominator),
                            Fraction(c.imag).limit_denominator(max_denominator),
                        )
                    )
                )
            else:
                cs.append(Fraction(c).limit_denominator(max_denominator))
        cs[-1] = Fraction(1)
        polys.append(Poly(cs))
    return System(sys.space, tuple(polys))


# ---------------------------------------------------------------------------
# JSON


def system_to_json(sys: System) -> dict:
    sp = sys.space
    out = {"family": sp.family.value, "d": sp.d, "m": sp.m, "n": sp.n}
    if sp.degrees is not None:
        out["degrees"] = list(sp.degrees)
    out["polys"] = [poly_to_json(p)["coeffs"] for p in sys.polys]
    if sys.region_maps:
        out["region_maps"] = sys.region_maps
    return out


def system_from_json(obj: dict) -> System:
    try:
        family = Family(obj["family"])
        m = int(obj.get("m", len(obj["polys"])))
        space = SpaceId(family, int(obj.get("d", 0)) or 1, m, int(obj["n"]), obj.get("degrees"))
        polys = tuple(poly_from_json(p) for p in obj["polys"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"malformed system JSON: {exc}") from exc
    return System(space, polys)
