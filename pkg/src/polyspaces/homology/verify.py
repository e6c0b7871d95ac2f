"""Degree-by-degree machine checks of the stable-range theorems."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..errors import UnsupportedParametersError
from .e1 import e1_table
from .formulas import DjProvider, betti_of_formula, space_formula, stability_dims
from .series import (
    FieldChoice,
    add_shifted,
    betti_Dj,
    betti_loop_model,
    double_loop_odd_sphere,
    loop_sphere,
    zeros,
)

CHECK_IDS = ("a", "b", "c", "d", "e", "f", "g")

DESCRIPTIONS = {
    "a": "PolyR splitting = Omega^2 S^(2mn-1) x Omega S^(mn-1) through D(d;m,n)",
    "b": "PolyC splitting = Omega^2 S^(2mn-1) through D(d;m,n;C)",
    "c": "QR splitting = James stage J_{floor(d/n)}(S^(mn-2)) through D(d;m,n)",
    "d": "sum_k E1[k,k+s] = H~_s(P)",
    "e": "PolyR(d,m,n) = PolyR(floor(d/n),mn,1) in all degrees",
    "f": "PolyR(d) = PolyR(d+1) (all degrees, or through D(d;m,n) at a jump of floor(d/n))",
    "g": "sum_j H~(Sigma^(2(mn-2)j) D_j) = H~(Omega^2 S^(2mn-1))",
}


@dataclass
class CheckResult:
    check_id: str
    upto: int
    failures: list = field(default_factory=list)  # (q, lhs, rhs)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "id": self.check_id,
            "description": DESCRIPTIONS[self.check_id],
            "upto": self.upto,
            "passed": self.passed,
            "failures": [list(f) for f in self.failures],
        }


@dataclass
class VerifyReport:
    d: int
    m: int
    n: int
    field: FieldChoice
    qmax: int
    D_real: int
    D_complex: int
    checks: list
    first_disagreement_a: Optional[int]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, cid: str) -> CheckResult:
        return next(c for c in self.checks if c.check_id == cid)

    @property
    def sharpness_margin(self) -> Optional[int]:
        """First degree beyond D(d;m,n) where check (a) would fail, relative to D."""
        if self.first_disagreement_a is None:
            return None
        return self.first_disagreement_a - self.D_real

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "m": self.m,
            "n": self.n,
            "field": self.field.value,
            "qmax": self.qmax,
            "D_real": self.D_real,
            "D_complex": self.D_complex,
            "passed": self.passed,
            "first_disagreement_a": self.first_disagreement_a,
            "checks": [c.to_json() for c in self.checks],
        }

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            tail = "" if c.passed else f"  first failure (q, lhs, rhs) = {c.failures[0]}"
            out.append(
                f"[{status}] ({c.check_id}) d={self.d} m={self.m} n={self.n} "
                f"{self.field.value} q<={c.upto}: {DESCRIPTIONS[c.check_id]}{tail}"
            )
        return out


def _compare(cid: str, lhs, rhs, upto: int) -> CheckResult:
    res = CheckResult(cid, upto)
    for q in range(upto + 1):
        a = lhs[q] if q < len(lhs) else 0
        b = rhs[q] if q < len(rhs) else 0
        if a != b:
            res.failures.append((q, a, b))
    return res


def _first_disagreement(lhs, rhs) -> Optional[int]:
    for q in range(max(len(lhs), len(rhs))):
        a = lhs[q] if q < len(lhs) else 0
        b = rhs[q] if q < len(rhs) else 0
        if a != b:
            return q
    return None


def snaith_sum(mn: int, field, qmax: int, dj: DjProvider = betti_Dj) -> list[int]:
    """Reduced series of the wedge of Sigma^{2(mn-2)j} D_j over all j >= 1 (up to qmax)."""
    acc = zeros(qmax)
    j = 1
    while 2 * (mn - 2) * j + j <= qmax:
        shift = 2 * (mn - 2) * j
        add_shifted(acc, dj(j, field, qmax - shift).dims, shift)
        j += 1
    return acc


def verify_theorems(
    d: int,
    m: int,
    n: int,
    field,
    qmax: Optional[int] = None,
    dj: DjProvider = betti_Dj,
) -> VerifyReport:
    """Run checks (a)-(g) for one parameter cell.

    ``dj`` supplies the reduced D_j series; it is a parameter only so that a
    deliberately corrupted table can be fed through the harness.
    """
    field = FieldChoice.parse(field)
    mn = m * n
    if mn < 3:
        raise UnsupportedParametersError("theorem checks need mn >= 3")
    D, DC = stability_dims(d, m, n)
    if qmax is None:
        qmax = DC + 10
    K = d // n

    def betti(space, dd, mm, nn):
        return betti_of_formula(space_formula(space, dd, mm, nn), field, qmax, dj).unreduced().dims

    poly_r = betti("PolyR", d, m, n)
    model = betti_loop_model(mn - 1, mn - 1, field, qmax).dims
    checks = [_compare("a", poly_r, model, min(D, qmax))]
    first_a = _first_disagreement(poly_r, model)

    poly_c = betti("PolyC", d, m, n)
    checks.append(_compare("b", poly_c, double_loop_odd_sphere(mn - 1, field, qmax), min(DC, qmax)))

    qr = betti("QR", d, m, n)
    checks.append(_compare("c", qr, loop_sphere(mn - 1, qmax, james_cut=K), min(D, qmax)))

    p_red = betti_of_formula(space_formula("P", d, m, n), field, qmax, dj).dims
    totals = e1_table(d, m, n, field, dj=dj).antidiagonal_totals(qmax)
    checks.append(_compare("d", totals, p_red, qmax))

    checks.append(_compare("e", poly_r, betti("PolyR", K, m * n, 1), qmax))

    poly_r_next = betti("PolyR", d + 1, m, n)
    same = K == (d + 1) // n
    checks.append(_compare("f", poly_r, poly_r_next, qmax if same else min(D, qmax)))

    model_red = list(double_loop_odd_sphere(mn - 1, field, qmax))
    model_red[0] -= 1
    checks.append(_compare("g", snaith_sum(mn, field, qmax, dj), model_red, qmax))

    return VerifyReport(d, m, n, field, qmax, D, DC, checks, first_a)
