"""First page of the Vassiliev spectral sequence for the real non-resultant spaces."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import UnsupportedParametersError
from .formulas import DjProvider
from .series import FieldChoice, betti_Dj, zeros


@dataclass(frozen=True)
class E1Table:
    d: int
    m: int
    n: int
    field: FieldChoice
    entries: dict = field(default_factory=dict)  # (k, s) -> dim, zeros omitted
    truncated: bool = True

    def __getitem__(self, key) -> int:
        return self.entries.get(tuple(key), 0)

    def antidiagonal_totals(self, smax: int) -> list[int]:
        """total[s] = sum_k E1[k, k + s] for s = 0..smax."""
        out = zeros(smax)
        for (k, s), v in self.entries.items():
            if 0 <= s - k <= smax:
                out[s - k] += v
        return out

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "m": self.m,
            "n": self.n,
            "field": self.field.value,
            "truncated": self.truncated,
            "entries": {f"{k},{s}": v for (k, s), v in sorted(self.entries.items())},
        }

    def to_text(self) -> str:
        if not self.entries:
            return "(empty E1 page)"
        rows = [f"{'k':>4} {'s':>6} {'dim':>5}"]
        for (k, s), v in sorted(self.entries.items()):
            rows.append(f"{k:>4} {s:>6} {v:>5}")
        return "\n".join(rows)


def e1_table(d: int, m: int, n: int, field, truncate: bool = True, dj: DjProvider = betti_Dj) -> E1Table:
    """E1[k, s] = sum_j dim H~_{s-(mn-1)k}(Sigma^{(mn-2)j} D_j) + dim H~_{s-(mn-1)k}(S^0).

    j runs over 1..min(k, floor(d/n) - k): a stratum with i real and j
    conjugate-pair roots uses n(i + 2j) = n(k + j) <= d of the root budget.
    ``truncate=False`` lets j run over 1..k instead.
    """
    field = FieldChoice.parse(field)
    mn = m * n
    if mn < 3:
        raise UnsupportedParametersError("E1 page is only available for mn >= 3")
    K = d // n
    entries: dict = {}
    for k in range(1, K + 1):
        base = (mn - 1) * k
        entries[(k, base)] = entries.get((k, base), 0) + 1
        jmax = min(k, K - k) if truncate else k
        for j in range(1, jmax + 1):
            shift = (mn - 2) * j
            # D_j lives in degrees j..2j-1 (F2) or degree 1 (Q, j = 1)
            series = dj(j, field, 2 * j).dims
            for q, v in enumerate(series):
                if v:
                    key = (k, base + shift + q)
                    entries[key] = entries.get(key, 0) + v
    return E1Table(d, m, n, field, entries, truncate)
