"""Differential forms on a coordinate chart with polynomial coefficients."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Mapping, Sequence

from .poly import Poly


def sort_with_sign(indices: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Return ``(sign, sorted_indices)``; sign is 0 when an index repeats."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, tuple(sorted(idx))
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(idx)


@dataclass(frozen=True)
class PolyForm:
    """A k-form ``sum_I f_I dx_I`` over an n-dimensional chart.

    Only strictly increasing index tuples with nonzero coefficient are kept.
    Indices are 0-based.
    """

    variables: tuple[str, ...]
    degree: int
    components: Mapping[tuple[int, ...], Poly] = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.variables)
        clean = {}
        for idx, f in self.components.items():
            idx = tuple(idx)
            if len(idx) != self.degree:
                raise ValueError(f"index {idx} does not match degree {self.degree}")
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise ValueError(f"index {idx} is not strictly increasing")
            if idx and (idx[0] < 0 or idx[-1] >= n):
                raise IndexError(f"index {idx} out of range for chart dimension {n}")
            if f:
                clean[idx] = f
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "components", clean)

    @property
    def dim(self) -> int:
        return len(self.variables)

    @classmethod
    def zero(cls, variables: Sequence[str], degree: int) -> PolyForm:
        return cls(tuple(variables), degree, {})

    @classmethod
    def from_poly(cls, f: Poly) -> PolyForm:
        return cls(f.variables, 0, {(): f})

    @classmethod
    def from_antisymmetric(cls, variables: Sequence[str], degree: int, values: Mapping) -> PolyForm:
        """Build from values on arbitrary index tuples, antisymmetrizing."""
        acc: dict[tuple[int, ...], Poly] = {}
        for idx, f in values.items():
            sign, key = sort_with_sign(idx)
            if sign == 0:
                continue
            acc[key] = acc.get(key, Poly.zero(variables)) + (f if sign > 0 else -f)
        return cls(tuple(variables), degree, acc)

    def __getitem__(self, idx: Sequence[int]) -> Poly:
        sign, key = sort_with_sign(idx)
        f = self.components.get(key)
        if sign == 0 or f is None:
            return Poly.zero(self.variables)
        return f if sign > 0 else -f

    def items(self) -> Iterator[tuple[tuple[int, ...], Poly]]:
        return iter(sorted(self.components.items()))

    def is_zero(self) -> bool:
        return not self.components

    def __bool__(self) -> bool:
        return bool(self.components)

    def __add__(self, other: PolyForm) -> PolyForm:
        self._check(other)
        acc = dict(self.components)
        for idx, f in other.components.items():
            acc[idx] = acc[idx] + f if idx in acc else f
        return PolyForm(self.variables, self.degree, acc)

    def __neg__(self) -> PolyForm:
        return PolyForm(self.variables, self.degree, {i: -f for i, f in self.components.items()})

    def __sub__(self, other: PolyForm) -> PolyForm:
        return self + (-other)

    def scale(self, f) -> PolyForm:
        return PolyForm(self.variables, self.degree, {i: g * f for i, g in self.components.items()})

    def _check(self, other: PolyForm) -> None:
        if other.variables != self.variables or other.degree != self.degree:
            raise ValueError("forms live on different charts or have different degrees")

    def wedge(self, other: PolyForm) -> PolyForm:
        self._check_chart(other)
        acc: dict = {}
        for i, f in self.components.items():
            for j, g in other.components.items():
                acc[i + j] = acc.get(i + j, Poly.zero(self.variables)) + f * g
        return PolyForm.from_antisymmetric(self.variables, self.degree + other.degree, acc)

    def _check_chart(self, other: PolyForm) -> None:
        if other.variables != self.variables:
            raise ValueError("forms live on different charts")

    def evaluate(self, vectors: Sequence[Sequence[Poly]]) -> Poly:
        """Contract with ``degree`` vector fields given by their coefficient lists."""
        if len(vectors) != self.degree:
            raise ValueError("wrong number of vector arguments")
        total = Poly.zero(self.variables)
        for idx, f in self.components.items():
            total = total + f * _det([[vectors[a][i] for i in idx] for a in range(self.degree)], self.variables)
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyForm):
            return NotImplemented
        return (self.variables, self.degree, self.components) == (
            other.variables,
            other.degree,
            other.components,
        )

    def __hash__(self) -> int:
        return hash((self.variables, self.degree, frozenset(self.components.items())))

    def __str__(self) -> str:
        if not self.components:
            return "0"
        parts = []
        for idx, f in self.items():
            basis = "^".join(f"d{self.variables[i]}" for i in idx)
            parts.append(f"({f})" + (f"*{basis}" if basis else ""))
        return " + ".join(parts)


def _det(m: list[list[Poly]], variables) -> Poly:
    k = len(m)
    if k == 0:
        return Poly.constant(variables, 1)
    if k == 1:
        return m[0][0]
    total = Poly.zero(variables)
    for col in range(k):
        if not m[0][col]:
            continue
        minor = [row[:col] + row[col + 1:] for row in m[1:]]
        term = m[0][col] * _det(minor, variables)
        total = total + term if col % 2 == 0 else total - term
    return total


def exterior_derivative(omega: PolyForm) -> PolyForm:
    """d of a polynomial k-form; the zero (k+1)-form when k >= n."""
    n, k = omega.dim, omega.degree
    out = {}
    for idx in combinations(range(n), k + 1):
        acc = Poly.zero(omega.variables)
        for m, i in enumerate(idx):
            f = omega.components.get(idx[:m] + idx[m + 1:])
            if f is None:
                continue
            df = f.diff(i)
            acc = acc + df if m % 2 == 0 else acc - df
        if acc:
            out[idx] = acc
    return PolyForm(omega.variables, k + 1, out)


def differential(f: Poly) -> PolyForm:
    return PolyForm(f.variables, 1, {(i,): f.diff(i) for i in range(f.nvars)})
