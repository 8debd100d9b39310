"""Writing NS vectors as d*h_F minus a nonnegative combination of lines."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..fermat.lines import H_F, LineConfiguration


@dataclass(frozen=True)
class DivisorExpression:
    """v = d*h_F - sum c_j [l_j]; line indices are 1-based (1..252)."""

    d: int
    terms: tuple[tuple[int, int], ...]

    def scaled(self, k: int) -> "DivisorExpression":
        return DivisorExpression(k * self.d, tuple((j, k * c) for j, c in self.terms))

    def vector(self, conf: LineConfiguration) -> np.ndarray:
        v = self.d * H_F.copy()
        for j, c in self.terms:
            v = v - c * conf.classes[j - 1]
        return v

    @property
    def indices(self) -> set[int]:
        return {j for j, _ in self.terms}


def express_divisor(v, conf: LineConfiguration) -> DivisorExpression:
    """Deck-partner substitution for positive basis coefficients, then
    cancellation of complete fibres l + l' = h_F."""
    v = np.asarray(v, dtype=np.int64)
    coef: dict[int, int] = {}
    d = 0
    for i, a in enumerate(v.tolist()):
        if a > 0:
            d += a
            j = conf.partner(i)
            coef[j] = coef.get(j, 0) + a
        elif a < 0:
            coef[i] = coef.get(i, 0) - a
    for j in sorted(coef):
        k = conf.partner(j)
        if j < k and k in coef:
            m = min(coef[j], coef[k])
            coef[j] -= m
            coef[k] -= m
            d -= m
    terms = tuple((j + 1, c) for j, c in sorted(coef.items()) if c)
    expr = DivisorExpression(d, terms)
    if not np.array_equal(expr.vector(conf), v):
        raise AssertionError("divisor expression does not reproduce the vector")
    return expr
