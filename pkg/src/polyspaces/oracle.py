"""Brute-force certificates that share no code path with the fast engines.

* the Fox-Neuwirth cellular chain complex of the one-point compactified
  configuration space, for mod-2 braid homology;
* planted-root fuzzing of exact membership, re-checked with sympy;
* sampling experiments on the components of Poly^{d,1}_2(R).
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional

import sympy

from .errors import InternalConsistencyError, InvalidInputError
from .homology.series import FieldChoice, GradedDims
from .polyarith import Poly, discriminant, squarefree_part, sturm_count
from .scanning import component_index_12
from .spaces import Family, SpaceId, System, is_member, stratum_signature, system_to_json

COEFF_BOUND = 10
MAX_FN_POINTS = 8

# ---------------------------------------------------------------------------
# Fox-Neuwirth complex


def compositions(j: int, parts: int) -> list[tuple[int, ...]]:
    if parts == 1:
        return [(j,)]
    return [(a,) + rest for a in range(1, j - parts + 2) for rest in compositions(j - a, parts - 1)]


def _rank_f2(rows: list[int]) -> int:
    basis: dict[int, int] = {}  # leading bit -> row
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top not in basis:
                basis[top] = r
                break
            r ^= basis[top]
    return len(basis)


@dataclass
class FNComplex:
    """Cells are compositions (a_1..a_r) of j in dimension j - r."""

    j: int
    cells: dict[int, list[tuple[int, ...]]] = field(default_factory=dict)
    boundary: dict[int, list[int]] = field(default_factory=dict)  # dim q -> bitmask image per cell

    @classmethod
    def build(cls, j: int) -> "FNComplex":
        if not 1 <= j <= MAX_FN_POINTS:
            raise InvalidInputError(f"Fox-Neuwirth oracle supports 1 <= j <= {MAX_FN_POINTS}")
        cx = cls(j)
        for r in range(1, j + 1):
            cx.cells[j - r] = compositions(j, r)
        index = {q: {c: i for i, c in enumerate(cs)} for q, cs in cx.cells.items()}
        for q, cs in cx.cells.items():
            rows = []
            for a in cs:
                mask = 0
                for i in range(len(a) - 1):
                    if comb(a[i] + a[i + 1], a[i]) % 2:
                        merged = a[:i] + (a[i] + a[i + 1],) + a[i + 2 :]
                        mask ^= 1 << index[q + 1][merged]
                rows.append(mask)
            cx.boundary[q] = rows
        cx._check_square_zero()
        return cx

    def _apply(self, q: int, mask: int) -> int:
        out, i = 0, 0
        rows = self.boundary.get(q, [])
        while mask:
            if mask & 1:
                out ^= rows[i]
            mask >>= 1
            i += 1
        return out

    def _check_square_zero(self) -> None:
        for q, rows in self.boundary.items():
            for i, img in enumerate(rows):
                if img and self._apply(q + 1, img):
                    raise InternalConsistencyError(
                        f"d^2 != 0 on cell {self.cells[q][i]} (j = {self.j})"
                    )

    def betti(self) -> list[int]:
        ranks = {q: _rank_f2(rows) for q, rows in self.boundary.items()}
        return [
            len(self.cells[q]) - ranks.get(q, 0) - ranks.get(q - 1, 0)
            for q in range(self.j)
        ]


def fox_neuwirth_betti(j: int, qmax: Optional[int] = None) -> GradedDims:
    """mod-2 Betti numbers of C_j(C), unreduced, from the cellular complex."""
    dims = FNComplex.build(j).betti()
    if qmax is not None:
        dims = (dims + [0] * (qmax + 1))[: qmax + 1]
    return GradedDims(tuple(dims), FieldChoice.F2, False)


# ---------------------------------------------------------------------------
# random members


def random_monic(degree: int, rng: random.Random, bound: int = COEFF_BOUND) -> Poly:
    return Poly.exact([rng.randint(-bound, bound) for _ in range(degree)] + [1])


def random_member(
    family: Family, d: int, m: int, n: int, rng: random.Random, max_tries: int = 10_000
) -> tuple[System, int]:
    """Rejection sample an integer-coefficient member; returns (system, rejections)."""
    space = SpaceId(family, d, m, n)
    for tries in range(max_tries):
        sys = System(space, tuple(random_monic(d, rng) for _ in range(m)))
        if is_member(sys):
            return sys, tries
    raise InvalidInputError(f"no member of {space} found in {max_tries} draws")


def _sympy_poly(p: Poly) -> sympy.Poly:
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)],
                      _X, domain="QQ")


_X = sympy.Symbol("z")


def sympy_stratum(sys: System) -> Optional[tuple[int, int]]:
    """Independent recheck: (i, j) of the common n-fold roots, or None for members."""
    g = None
    for f in sys.polys:
        sf = _sympy_poly(f)
        for t in range(sys.space.n):
            h = sf.diff((_X, t)) if t else sf
            g = h if g is None else sympy.gcd(g, h)
    if g.degree() <= 0:
        return None
    s = sympy.Poly(sympy.quo(g, sympy.gcd(g, g.diff(_X))), _X, domain="QQ")
    i = s.count_roots()
    return (i, (s.degree() - i) // 2)


# ---------------------------------------------------------------------------
# planted-root fuzzing


@dataclass
class SampleReport:
    d: int
    m: int
    n: int
    trials: int
    seed: int
    planted: bool
    member_count: int = 0
    stratum_histogram: Counter = field(default_factory=Counter)
    rejections: int = 0
    draws: int = 0
    exceptions_genuine: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def member_rate(self) -> float:
        return self.member_count / self.trials if self.trials else 0.0

    @property
    def rejection_rate(self) -> float:
        return self.rejections / self.draws if self.draws else 0.0

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "m": self.m,
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "planted": self.planted,
            "member_count": self.member_count,
            "member_rate": self.member_rate,
            "stratum_histogram": {
                f"{i},{j}": c for (i, j), c in sorted(self.stratum_histogram.items())
            },
            "rejection_rate": self.rejection_rate,
            "exceptions_genuine": self.exceptions_genuine,
            "failures": self.failures,
            "ok": self.ok,
        }


def _random_rational(rng: random.Random, bound: int = COEFF_BOUND) -> Fraction:
    q = rng.randint(1, 4)
    return Fraction(rng.randint(-bound * q, bound * q), q)


def _plant_roots(i: int, j: int, rng: random.Random):
    reals, pairs = set(), set()
    while len(reals) < i:
        reals.add(_random_rational(rng))
    while len(pairs) < j:
        b = abs(_random_rational(rng))
        if b:
            pairs.add((_random_rational(rng), b))
    return sorted(reals), sorted(pairs)


def _factor_from(reals, pairs) -> Poly:
    out = Poly([Fraction(1)])
    for a in reals:
        out = out * Poly([-a, Fraction(1)])
    for a, b in pairs:
        out = out * Poly([a * a + b * b, -2 * a, Fraction(1)])
    return out


def _trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(f"{seed}:{trial}")


def _plant_shapes(d: int, n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(d + 1) for j in range(d + 1)
            if (i, j) != (0, 0) and n * (i + 2 * j) <= d]


def planted_trial(d: int, m: int, n: int, seed: int, trial: int):
    """One replayable planted trial: (system, planted (i, j), cofactor rejections, draws)."""
    rng = _trial_rng(seed, trial)
    i, j = rng.choice(_plant_shapes(d, n))
    reals, pairs = _plant_roots(i, j, rng)
    plant = _factor_from(reals, pairs) ** n
    rest = d - plant.degree
    rejections, draws = 0, 1
    if rest == 0:
        cof = [Poly([Fraction(1)])] * m
    elif m * n == 1 or (m == 1 and rest < n):
        cof = [random_monic(rest, rng) for _ in range(m)]
    else:
        cofsys, rejections = random_member(Family.POLY_R, rest, m, n, rng)
        draws += rejections
        cof = list(cofsys.polys)
    sys = System(SpaceId(Family.POLY_R, d, m, n), tuple(plant * c for c in cof))
    return sys, (i, j), rejections, draws


def planted_root_fuzz(d: int, m: int, n: int, trials: int, seed: int, plant: bool = True) -> SampleReport:
    """Membership fuzzing with an exact sympy recheck of every classification.

    With ``plant`` a common n-fold factor of random shape is multiplied into
    random members; the fast path must report non-membership and the planted
    stratum.  Without it, plain random draws are classified; members are
    counted and every non-member must be confirmed by the recheck.
    """
    if n > d:
        raise InvalidInputError("need n <= d")
    report = SampleReport(d, m, n, trials, seed, plant)
    space = SpaceId(Family.POLY_R, d, m, n)
    for t in range(trials):
        if plant:
            sys, planted, rej, draws = planted_trial(d, m, n, seed, t)
            report.rejections += rej
            report.draws += draws
        else:
            rng = _trial_rng(seed, t)
            sys = System(space, tuple(random_monic(d, rng) for _ in range(m)))
            planted = None
            report.draws += 1
        fast_member = is_member(sys)
        fast = None if fast_member else stratum_signature(sys).as_tuple()
        exact = sympy_stratum(sys)
        if fast_member:
            report.member_count += 1
        else:
            report.stratum_histogram[fast] += 1
        bad = fast != exact or (plant and fast != planted)
        if not plant and not fast_member and exact is not None:
            report.exceptions_genuine += 1
        if bad:
            report.failures.append({
                "trial": t,
                "seed": seed,
                "system": system_to_json(sys),
                "fast": fast,
                "exact": exact,
                "planted": planted,
            })
    return report


# ---------------------------------------------------------------------------
# components of Poly^{d,1}_2(R)


def _random_squarefree(d: int, rng: random.Random) -> Poly:
    while True:
        f = random_monic(d, rng)
        if squarefree_part(f).degree == d:
            return f


def _root_structured(d: int, rng: random.Random) -> tuple[Poly, int]:
    j = rng.randint(0, d // 2)
    reals, pairs = _plant_roots(d - 2 * j, j, rng)
    return _factor_from(reals, pairs), j


def _interpolate(xs, ys) -> Poly:
    # Newton divided differences, exact
    coef = list(ys)
    n = len(xs)
    for k in range(1, n):
        for i in range(n - 1, k - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - k])
    out = Poly([coef[-1]])
    for i in range(n - 2, -1, -1):
        out = out * Poly([-xs[i], Fraction(1)]) + Poly([coef[i]])
    return out


def path_discriminant(f: Poly, g: Poly) -> Poly:
    """disc((1-s) f + s g) as an exact polynomial in s."""
    d = f.degree
    xs = [Fraction(k) for k in range(2 * d - 1)]
    ys = [Fraction(discriminant(f * (1 - s) + g * s)) for s in xs]
    return _interpolate(xs, ys)


def path_certified(f: Poly, g: Poly) -> bool:
    """True when every point of the segment from f to g is squarefree."""
    if f.degree == 1:
        return True
    D = path_discriminant(f, g)
    if D(Fraction(0)) == 0 or D(Fraction(1)) == 0:
        return False
    if D.degree <= 0:
        return True
    return sturm_count(squarefree_part(D), (0, 1)) == 0


@dataclass
class Pi0Report:
    d: int
    trials: int
    seed: int
    histogram: dict
    modes: dict
    structured_mismatches: int
    paths_requested: int
    paths_checked: int = 0
    path_attempts: int = 0
    path_violations: list = field(default_factory=list)

    @property
    def expected_labels(self) -> list[int]:
        return list(range(self.d // 2 + 1))

    @property
    def missing_labels(self) -> list[int]:
        return [j for j in self.expected_labels if not self.histogram.get(j)]

    @property
    def extra_labels(self) -> list[int]:
        return sorted(j for j in self.histogram if j not in self.expected_labels)

    @property
    def ok(self) -> bool:
        return (
            not self.missing_labels
            and not self.extra_labels
            and not self.path_violations
            and self.structured_mismatches == 0
            and self.paths_checked >= self.paths_requested
        )

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "trials": self.trials,
            "seed": self.seed,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "sampling_modes": self.modes,
            "missing_labels": self.missing_labels,
            "extra_labels": self.extra_labels,
            "structured_mismatches": self.structured_mismatches,
            "paths_requested": self.paths_requested,
            "paths_checked": self.paths_checked,
            "path_attempts": self.path_attempts,
            "path_violations": self.path_violations,
            "ok": self.ok,
            "note": "straight-line checks are consistent with, not a proof of, the component count",
        }


def pi0_experiment_12(d: int, trials: int, seed: int, paths: int = 100, path_steps: int = 100) -> Pi0Report:
    """Label random squarefree real polynomials by non-real pair count.

    Half the draws are uniform integer coefficients, half are built from a
    random root configuration (uniform coefficients almost never land in
    the all-real component for larger d).  Straight-line paths between
    same-label samples are certified exact-member by a discriminant
    Sturm count, then checked for label constancy at ``path_steps + 1`` points.
    """
    if d < 1:
        raise InvalidInputError("d must be positive")
    rng = random.Random(seed)
    hist: Counter = Counter()
    modes = Counter()
    mismatches = 0
    by_label: dict[int, list[Poly]] = {}
    for _ in range(trials):
        if rng.random() < 0.5:
            f, expect = _random_squarefree(d, rng), None
            modes["coefficients"] += 1
        else:
            f, expect = _root_structured(d, rng)
            modes["roots"] += 1
        j = component_index_12(f)
        if expect is not None and j != expect:
            mismatches += 1
        hist[j] += 1
        bucket = by_label.setdefault(j, [])
        if len(bucket) < 200:
            bucket.append(f)
    report = Pi0Report(d, trials, seed, dict(hist), dict(modes), mismatches, paths)
    labels = sorted(j for j, fs in by_label.items() if len(fs) >= 2)
    max_attempts = 200 * paths
    while labels and report.paths_checked < paths and report.path_attempts < max_attempts:
        report.path_attempts += 1
        j = labels[report.path_attempts % len(labels)]
        f, g = rng.sample(by_label[j], 2)
        if not path_certified(f, g):
            continue
        report.paths_checked += 1
        for k in range(path_steps + 1):
            s = Fraction(k, path_steps)
            h = f * (1 - s) + g * s
            try:
                lab = component_index_12(h)
            except InvalidInputError:
                lab = None
            if lab != j:
                report.path_violations.append({"f": str(f), "g": str(g), "s": str(s), "label": lab})
                break
    return report
