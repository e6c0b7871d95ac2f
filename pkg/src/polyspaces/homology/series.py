"""Graded dimension vectors and the basic generating series.

Everything here is a list of non-negative integers indexed by homological
degree 0..qmax.  Products of spaces become convolutions, wedges become sums
of reduced series.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional

from ..errors import InvalidInputError


class FieldChoice(str, Enum):
    F2 = "F2"
    Q = "Q"

    @classmethod
    def parse(cls, value) -> "FieldChoice":
        if isinstance(value, cls):
            return value
        key = str(value).strip().upper()
        if key in ("F2", "Z2", "Z/2", "MOD2"):
            return cls.F2
        if key in ("Q", "QQ", "RATIONAL"):
            return cls.Q
        raise InvalidInputError(f"unsupported coefficient field {value!r} (use f2 or q)")


@dataclass(frozen=True)
class GradedDims:
    dims: tuple[int, ...]
    field: FieldChoice
    reduced: bool

    @property
    def qmax(self) -> int:
        return len(self.dims) - 1

    def __getitem__(self, q: int) -> int:
        if 0 <= q < len(self.dims):
            return self.dims[q]
        return 0

    def unreduced(self) -> "GradedDims":
        if not self.reduced:
            return self
        dims = list(self.dims)
        dims[0] += 1
        return GradedDims(tuple(dims), self.field, False)

    def reduce(self) -> "GradedDims":
        if self.reduced:
            return self
        dims = list(self.dims)
        dims[0] -= 1
        return GradedDims(tuple(dims), self.field, True)

    def nonzero(self) -> dict[int, int]:
        return {q: v for q, v in enumerate(self.dims) if v}

    def to_json(self) -> dict:
        return {
            "field": self.field.value,
            "reduced": self.reduced,
            "qmax": self.qmax,
            "dims": {str(q): v for q, v in self.nonzero().items()},
        }


def zeros(qmax: int) -> list[int]:
    return [0] * (qmax + 1)


def add_shifted(acc: list[int], series, shift: int) -> None:
    """acc[q + shift] += series[q] for all q that fit."""
    qmax = len(acc) - 1
    for q, v in enumerate(series):
        if v and q + shift <= qmax:
            acc[q + shift] += v


def convolve(a, b, qmax: int) -> list[int]:
    out = zeros(qmax)
    for i, x in enumerate(a):
        if not x or i > qmax:
            continue
        for j, y in enumerate(b):
            if i + j > qmax:
                break
            if y:
                out[i + j] += x * y
    return out


def polynomial_algebra(gen_degrees, qmax: int) -> list[int]:
    """Poincare series of a polynomial algebra on generators of the given degrees."""
    out = zeros(qmax)
    out[0] = 1
    for g in gen_degrees:
        if g < 1 or g > qmax:
            continue
        for q in range(g, qmax + 1):
            out[q] += out[q - g]
    return out


@lru_cache(maxsize=None)
def _cj_table(j: int, qmax: int) -> tuple[int, ...]:
    # monomials in y_k (k >= 1), deg 2^k - 1, weight 2^k; count those of weight <= j
    gens = []
    k = 1
    while 2**k <= j:
        gens.append((2**k - 1, 2**k))
        k += 1
    # table[w][q]: monomials of weight exactly w and degree q
    table = [zeros(qmax) for _ in range(j + 1)]
    table[0][0] = 1
    for deg, wt in gens:
        for w in range(wt, j + 1):
            src, dst = table[w - wt], table[w]
            for q in range(deg, qmax + 1):
                dst[q] += src[q - deg]
    out = zeros(qmax)
    for w in range(j + 1):
        for q in range(qmax + 1):
            out[q] += table[w][q]
    return tuple(out)


def betti_Cj_F2(j: int, qmax: int) -> GradedDims:
    """mod-2 Betti numbers of the unordered configuration space C_j(C).

    Counted on the monomial basis in generators y_k (k >= 1) of degree
    2^k - 1 and weight 2^k, weight at most j.
    """
    if j < 0:
        raise InvalidInputError("j must be non-negative")
    return GradedDims(_cj_table(j, qmax), FieldChoice.F2, False)


def betti_Dj(j: int, field, qmax: int) -> GradedDims:
    """Reduced Betti numbers of D_j = F(C,j)_+ smash_{S_j} (S^1)^{smash j}.

    Mod 2 this is the homology of C_j(C) shifted up by j (the sign twist
    disappears).  Rationally D_1 = S^1 and D_j is acyclic for j >= 2.
    """
    if j < 1:
        raise InvalidInputError("D_j needs j >= 1")
    field = FieldChoice.parse(field)
    acc = zeros(qmax)
    if field is FieldChoice.F2:
        if j <= qmax:
            add_shifted(acc, _cj_table(j, qmax - j), j)
    elif j == 1 and qmax >= 1:
        acc[1] = 1
    return GradedDims(tuple(acc), field, True)


def double_loop_odd_sphere(N: int, field, qmax: int) -> list[int]:
    """Unreduced series of the double loop space of S^(2N+1), N >= 1."""
    field = FieldChoice.parse(field)
    if field is FieldChoice.F2:
        gens, k = [], 0
        while (2**k) * 2 * N - 1 <= qmax:
            gens.append((2**k) * 2 * N - 1)
            k += 1
        return polynomial_algebra(gens, qmax)
    out = zeros(qmax)
    out[0] = 1
    if 2 * N - 1 <= qmax:
        out[2 * N - 1] = 1
    return out


def loop_sphere(N: int, qmax: int, james_cut: Optional[int] = None) -> list[int]:
    """Unreduced series of the loop space of S^N (N >= 2), optionally its James stage."""
    if N < 2:
        raise InvalidInputError("loop space of S^N needs N >= 2")
    out = zeros(qmax)
    c = 0
    while c * (N - 1) <= qmax and (james_cut is None or c <= james_cut):
        out[c * (N - 1)] = 1
        c += 1
    return out


def betti_loop_model(
    N2: Optional[int],
    N1: Optional[int],
    field,
    qmax: int,
    james_cut: Optional[int] = None,
) -> GradedDims:
    """Betti numbers of Omega^2 S^(2*N2+1) x Omega S^N1 (either factor may be None).

    With N2 = N1 = N this is the fixed-point model of the equivariant
    double loop space of CP^N.  ``james_cut`` truncates the single loop
    factor to its James stage J_cut(S^(N1-1)).
    """
    field = FieldChoice.parse(field)
    series = zeros(qmax)
    series[0] = 1
    if N2 is not None:
        series = convolve(series, double_loop_odd_sphere(N2, field, qmax), qmax)
    if N1 is not None:
        series = convolve(series, loop_sphere(N1, qmax, james_cut), qmax)
    return GradedDims(tuple(series), field, False)
