"""Numeric evaluation of the natural maps into loop spaces, and their discrete invariants."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError, NumericalFailure, RefineFirstError
from .polyarith import Poly, gcd_subresultant, sturm_count
from .spaces import Family, System, is_member, jet_family

MAX_LOOP_POINTS = 2**20
STEP_LIMIT = 0.5


def normalize_point(v) -> np.ndarray:
    """Unit representative of a projective point, first nonzero coordinate with Re > 0."""
    v = np.asarray(v)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise InvalidInputError("the zero vector is not a projective point")
    v = v / norm
    for c in v:
        if c != 0:
            if np.real(c) < 0 or (np.real(c) == 0 and np.imag(c) < 0):
                v = -v
            break
    return v


def chordal(u: np.ndarray, v: np.ndarray) -> float:
    """Chordal distance between two points of real projective space."""
    return float(min(np.linalg.norm(u - v), np.linalg.norm(u + v)))


@dataclass
class LoopSample:
    t: np.ndarray  # grid on [-1, 1]; alpha = tan(pi t / 2)
    alpha: np.ndarray  # +-inf at the ends
    points: np.ndarray  # (len(t), mn), unit vectors
    basepoint: np.ndarray

    def max_step(self) -> float:
        return max(chordal(self.points[i], self.points[i + 1]) for i in range(len(self.t) - 1))

    def to_csv(self, stream=None) -> str:
        buf = stream if stream is not None else io.StringIO()
        w = csv.writer(buf)
        w.writerow(["t", "alpha"] + [f"x{i}" for i in range(self.points.shape[1])])
        for t, a, p in zip(self.t, self.alpha, self.points):
            w.writerow([repr(float(t)), repr(float(a))] + [repr(float(x)) for x in p])
        return buf.getvalue() if stream is None else ""


class _JetEvaluator:
    """Exact evaluation of the jet family at dyadic rationals, rounded at the end.

    Returns the raw unit vector, without sign normalization.
    """

    def __init__(self, sys: System):
        jets = jet_family(sys)
        den = 1
        for p in jets:
            for c in p.coeffs:
                den = math.lcm(den, Fraction(c).denominator)
        self.degree = max(p.degree for p in jets)
        self.ints = []
        for p in jets:
            cs = [int(Fraction(c) * den) for c in p.coeffs]
            cs += [0] * (self.degree + 1 - len(cs))
            self.ints.append(cs)
        self.dim = len(jets)

    def __call__(self, alpha: float) -> np.ndarray:
        p, q = float(alpha).as_integer_ratio()
        d = self.degree
        ppow = [1] * (d + 1)
        qpow = [1] * (d + 1)
        for e in range(1, d + 1):
            ppow[e] = ppow[e - 1] * p
            qpow[e] = qpow[e - 1] * q
        # homogenized: q^d * f(p/q), a positive multiple shared by all coordinates
        vals = [sum(c * ppow[e] * qpow[d - e] for e, c in enumerate(cs)) for cs in self.ints]
        top = max(abs(v) for v in vals)
        if top == 0:
            raise NumericalFailure(f"jet family vanishes at alpha = {alpha!r}")
        shift = max(top.bit_length() - 60, 0)
        if shift:
            vals = [v >> shift if v >= 0 else -((-v) >> shift) for v in vals]
        v = np.array(vals, dtype=float)
        return v / np.linalg.norm(v)


def eval_real_loop(sys: System, resolution: int = 64, max_points: int = MAX_LOOP_POINTS) -> LoopSample:
    """Sample the loop alpha -> [F_n(f_1)(alpha) : ... : F_n(f_m)(alpha)] on R u {inf}.

    The parameter is t in [-1, 1] with alpha = tan(pi t / 2); intervals are
    bisected until consecutive raw jet vectors (and hence the projective
    points) are closer than 0.5.
    """
    sp = sys.space
    if sp.m * sp.n < 3:
        raise InvalidInputError("the loop is defined for mn >= 3")
    if not is_member(sys.as_family(Family.Q_R)):
        raise InvalidInputError("system has a common real n-fold root (not in Q_R)")
    ev = _JetEvaluator(sys)
    base = normalize_point(np.ones(ev.dim))
    start = base if sp.d % 2 == 0 else -base

    def raw(t: float) -> np.ndarray:
        if t <= -1.0:
            return start
        if t >= 1.0:
            return base
        return ev(math.tan(math.pi * t / 2))

    # Refine on the raw vector too: near a small jet value it reverses
    # sign over a short interval, which the projective step cannot see.
    ts = [-1.0 + 2.0 * i / resolution for i in range(resolution + 1)]
    ts[-1] = 1.0
    raws = [raw(t) for t in ts]
    while True:
        new_t, new_r = [ts[0]], [raws[0]]
        refined = False
        for i in range(len(ts) - 1):
            u, v = raws[i], raws[i + 1]
            if np.linalg.norm(u - v) >= STEP_LIMIT:
                mid = 0.5 * (ts[i] + ts[i + 1])
                if not ts[i] < mid < ts[i + 1]:
                    raise NumericalFailure("loop refinement hit floating-point resolution")
                new_t.append(mid)
                new_r.append(raw(mid))
                refined = True
            new_t.append(ts[i + 1])
            new_r.append(v)
        ts, raws = new_t, new_r
        if len(ts) > max_points:
            raise NumericalFailure(
                f"loop refinement exceeded {max_points} points (near-degenerate member?)",
                achieved=len(ts),
            )
        if not refined:
            break
    pts = [normalize_point(r) for r in raws]
    pts[0] = pts[-1] = base
    t = np.array(ts)
    with np.errstate(over="ignore"):
        alpha = np.tan(np.pi * t / 2)
    alpha[0], alpha[-1] = -np.inf, np.inf
    return LoopSample(t, alpha, np.array(pts), base)


def loop_class_mod2(loop: LoopSample) -> int:
    """0 if the sign-continued lift of the projective loop closes up, 1 if it ends at the antipode."""
    pts = loop.points
    if pts.shape[1] < 3:
        raise InvalidInputError("mod-2 class needs mn >= 3")
    v = pts[0]
    for u in pts[1:]:
        plus, minus = np.linalg.norm(u - v), np.linalg.norm(u + v)
        if min(plus, minus) >= 1.0:
            raise RefineFirstError("chordal step >= 1; refine the loop sample first")
        v = u if plus <= minus else -u
    return 0 if float(np.dot(v, pts[0])) > 0 else 1


def component_index_12(f: Poly) -> int:
    """Number of conjugate pairs of non-real roots of a squarefree real polynomial."""
    if not f.is_real() or not f.is_monic() or not f.is_exact():
        raise InvalidInputError("component index needs an exact real monic polynomial")
    if f.degree > 1 and gcd_subresultant(f, f.derivative()).degree > 0:
        raise InvalidInputError(f"{f} has a repeated root; not in Poly^(d,1)_2(R)")
    pairs, odd = divmod(f.degree - sturm_count(f), 2)
    assert odd == 0
    return pairs


def hyperplane_pullback(sys: System, weights: Sequence) -> Poly:
    """sum over (k, t) of c_{k,t} (f_k + f_k^{(t)}): degree d exactly when sum(c) != 0."""
    jets = jet_family(sys)
    if len(weights) != len(jets):
        raise InvalidInputError(f"need {len(jets)} weights, got {len(weights)}")
    ws = [Fraction(w) for w in weights]
    if not any(ws):
        raise InvalidInputError("weights must not all vanish")
    out = Poly()
    for w, p in zip(ws, jets):
        if w:
            out = out + p * w
    return out


def electric_field_samples(roots: Sequence[complex], grid: Iterable[complex]):
    """Evaluate 1 + sum_k 1/(z - a_k) on a grid.

    Returns ``(values, flagged)``: values at the usable grid points, in
    order, and the indices of grid points that coincide with a root (skipped).
    """
    roots = [complex(r) for r in roots]
    if len(set(roots)) != len(roots):
        raise InvalidInputError("roots must be distinct")
    values, flagged = [], []
    for idx, z in enumerate(grid):
        z = complex(z)
        if any(z == a for a in roots):
            flagged.append(idx)
            continue
        values.append(1 + sum(1 / (z - a) for a in roots))
    return values, flagged
