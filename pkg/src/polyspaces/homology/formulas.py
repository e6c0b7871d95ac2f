"""Stable splittings as symbolic wedges, and their Betti numbers."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from ..errors import InvalidInputError, UnsupportedParametersError
from .series import FieldChoice, GradedDims, add_shifted, betti_Dj, zeros

SPACES = ("PolyC", "PolyR", "QR", "B", "P")


def stability_dims(d: int, m: int, n: int) -> tuple[int, int]:
    """(D(d;m,n), D(d;m,n;C)) = ((mn-2)(floor(d/n)+1) - 1, (2mn-3)(floor(d/n)+1) - 1)."""
    if (m, n) == (1, 1) or min(d, m, n) < 1:
        raise InvalidInputError(f"bad parameters d={d}, m={m}, n={n}")
    k = d // n + 1
    return (m * n - 2) * k - 1, (2 * m * n - 3) * k - 1


@dataclass(frozen=True)
class Sphere:
    dim: int

    def __str__(self):
        return f"S^{self.dim}"


@dataclass(frozen=True)
class DjSummand:
    j: int

    def __str__(self):
        return f"D_{self.j}"


@dataclass(frozen=True)
class Summand:
    shift: int
    kind: Union[Sphere, DjSummand]

    def __str__(self):
        if isinstance(self.kind, Sphere):
            return str(Sphere(self.kind.dim + self.shift))
        return f"Sigma^{self.shift} {self.kind}" if self.shift else str(self.kind)


@dataclass(frozen=True)
class SpaceFormula:
    """A finite wedge of suspended spheres and D_j's."""

    summands: tuple[Summand, ...]
    label: str = ""

    def __str__(self):
        if not self.summands:
            return "*"
        return " v ".join(str(s) for s in self.summands)

    def __add__(self, other: "SpaceFormula") -> "SpaceFormula":
        label = " v ".join(x for x in (self.label, other.label) if x)
        return SpaceFormula(self.summands + other.summands, label)

    def to_json(self) -> list:
        out = []
        for s in self.summands:
            if isinstance(s.kind, Sphere):
                out.append({"sphere": s.kind.dim + s.shift})
            else:
                out.append({"shift": s.shift, "D": s.kind.j})
        return out


def _sphere_wedge(dims) -> tuple[Summand, ...]:
    return tuple(Summand(0, Sphere(a)) for a in dims)


def space_formula(space: str, d: int, m: int, n: int) -> SpaceFormula:
    """Stable wedge decomposition of one of PolyC, PolyR, QR, B, P at (d, m, n).

    With K = floor(d/n) and c = mn - 2:

    * PolyC:  Sigma^{2cj} D_j, 1 <= j <= K
    * PolyR:  S^{ci}, 1 <= i <= K, plus Sigma^{c(i+2j)} D_j over i >= 0, j >= 1, i+2j <= K
    * QR:     S^{ck}, 1 <= k <= K
    * B:      Sigma^{c(i+2j)} D_j over i, j >= 1, i+2j <= K
    * P:      PolyC(floor(d/2)) v B(d) v QR(d)
    """
    if space not in SPACES:
        raise InvalidInputError(f"unknown space {space!r}; expected one of {SPACES}")
    if m * n < 3:
        raise UnsupportedParametersError("splittings are only available for mn >= 3")
    if d < 0:
        raise InvalidInputError("d must be non-negative")
    K = d // n
    c = m * n - 2
    label = f"{space}({d},{m},{n})"
    if space == "PolyC":
        summ = tuple(Summand(2 * c * j, DjSummand(j)) for j in range(1, K + 1))
    elif space == "QR":
        summ = _sphere_wedge(c * k for k in range(1, K + 1))
    elif space in ("PolyR", "B"):
        i0 = 0 if space == "PolyR" else 1
        summ = _sphere_wedge(c * i for i in range(1, K + 1)) if space == "PolyR" else ()
        summ += tuple(
            Summand(c * (i + 2 * j), DjSummand(j))
            for j in range(1, K // 2 + 1)
            for i in range(i0, K - 2 * j + 1)
        )
    else:
        return SpaceFormula(
            (space_formula("PolyC", d // 2, m, n) + space_formula("B", d, m, n)
             + space_formula("QR", d, m, n)).summands,
            label,
        )
    return SpaceFormula(summ, label)


DjProvider = Callable[[int, FieldChoice, int], GradedDims]


def betti_of_formula(
    formula: SpaceFormula, field, qmax: int, dj: DjProvider = betti_Dj
) -> GradedDims:
    """Reduced Betti numbers of a wedge: the sum of the summands' reduced series."""
    field = FieldChoice.parse(field)
    acc = zeros(qmax)
    for s in formula.summands:
        if isinstance(s.kind, Sphere):
            a = s.kind.dim + s.shift
            if a <= qmax:
                acc[a] += 1
        elif s.shift + 1 <= qmax:
            add_shifted(acc, dj(s.kind.j, field, qmax - s.shift).dims, s.shift)
    return GradedDims(tuple(acc), field, True)
