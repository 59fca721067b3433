"""Quadratic Lie algebras given by structure constants.

Vectors are coordinate sequences in the algebra's basis.  Entries may be
rationals or Polys, so the same bracket and pairing serve both constant
elements and pointwise operations on sections.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Sequence

import gmpy2

from . import linalg
from .exactpoly.poly import rational
from .report import CheckResult, Report

ZERO = gmpy2.mpq(0)


class LieAlgebraSpec:
    """Basis names, structure constants ``[X_i, X_j] = sum_k c[i][j][k] X_k``
    and a symmetric bilinear form ``B``.

    Construction does not validate; use ``validate_quadratic``.
    """

    def __init__(
        self,
        basis_names: Sequence[str],
        structure_constants: Mapping[tuple[int, int, int], object],
        form: Sequence[Sequence],
    ):
        self.basis_names = tuple(basis_names)
        d = self.dim = len(self.basis_names)
        self.constants: dict[tuple[int, int, int], gmpy2.mpq] = {}
        for (i, j, k), v in structure_constants.items():
            v = rational(v)
            if v:
                self.constants[(i, j, k)] = v
        self.form = linalg.to_matrix(form)
        if len(self.form) != d or any(len(r) != d for r in self.form):
            raise ValueError(f"form must be {d}x{d}")
        self._table: list[list[list[tuple[int, gmpy2.mpq]]]] = [[[] for _ in range(d)] for _ in range(d)]
        for (i, j, k), v in self.constants.items():
            self._table[i][j].append((k, v))
        self._form_rows = [[(j, b) for j, b in enumerate(row) if b] for row in self.form]

    @classmethod
    def from_antisymmetric(cls, basis_names, brackets: Mapping[tuple[int, int], Mapping[int, object]], form):
        """Build from ``[X_i, X_j]`` for i < j only, filling in ``[X_j, X_i]``."""
        c = {}
        for (i, j), out in brackets.items():
            for k, v in out.items():
                v = rational(v)
                c[(i, j, k)] = c.get((i, j, k), ZERO) + v
                c[(j, i, k)] = c.get((j, i, k), ZERO) - v
        return cls(basis_names, c, form)

    def index(self, name: str) -> int:
        return self.basis_names.index(name)

    def basis_vector(self, i: int) -> list:
        return [gmpy2.mpq(int(k == i)) for k in range(self.dim)]

    def constant(self, i: int, j: int, k: int) -> gmpy2.mpq:
        return self.constants.get((i, j, k), ZERO)

    def bracket(self, x: Sequence, y: Sequence, zero=ZERO) -> list:
        """``[x, y]`` for coordinate vectors with rational or Poly entries."""
        d = self.dim
        if len(x) != d or len(y) != d:
            raise ValueError(f"dimension mismatch: expected vectors of length {d}")
        out = [zero] * d
        table = self._table
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = table[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                entries = row[j]
                if not entries:
                    continue
                prod = xi * yj
                for k, c in entries:
                    out[k] = out[k] + prod * c
        return out

    def pair(self, x: Sequence, y: Sequence, zero=ZERO):
        """``B(x, y)``."""
        total = zero
        for i, xi in enumerate(x):
            if not xi:
                continue
            acc = zero
            for j, b in self._form_rows[i]:
                yj = y[j]
                if yj:
                    acc = acc + yj * b
            if acc:
                total = total + xi * acc
        return total

    def flat(self, x: Sequence) -> list:
        """The covector ``B(x, .)`` in the dual basis."""
        return linalg.matvec(self.form, [rational(v) for v in x])

    def ad(self, x: Sequence) -> linalg.Matrix:
        """Matrix of ``ad x`` acting on coordinate columns."""
        cols = [self.bracket(x, self.basis_vector(j)) for j in range(self.dim)]
        return linalg.transpose(cols)

    def is_abelian(self) -> bool:
        return not self.constants


def bracket(spec: LieAlgebraSpec, x: Sequence, y: Sequence) -> list:
    return spec.bracket(x, y)


def killing_form(spec: LieAlgebraSpec) -> linalg.Matrix:
    """``K[i][j] = tr(ad X_i ad X_j) = sum_{k,l} c[i][l][k] c[j][k][l]``."""
    d = spec.dim
    K = [[ZERO] * d for _ in range(d)]
    by_first: dict[int, list] = {}
    for (a, l, k), c in spec.constants.items():
        by_first.setdefault(a, []).append((l, k, c))
    for i in range(d):
        for j in range(i, d):
            total = ZERO
            for l, k, c in by_first.get(i, ()):
                c2 = spec.constants.get((j, k, l))
                if c2:
                    total += c * c2
            K[i][j] = K[j][i] = total
    return K


def _first(iterable):
    for item in iterable:
        return item
    return None


def validate_quadratic(spec: LieAlgebraSpec) -> Report:
    """Antisymmetry, Jacobi, symmetry, nondegeneracy and invariance of B."""
    d = spec.dim
    names = spec.basis_names
    rep = Report(f"quadratic Lie algebra ({d}-dimensional)")
    basis = [spec.basis_vector(i) for i in range(d)]

    bad = _first(
        (i, j, k)
        for i, j, k in product(range(d), repeat=3)
        if spec.constant(i, j, k) != -spec.constant(j, i, k)
    )
    rep.add(_triple_result("antisymmetry", "c[i][j][k] = -c[j][i][k]", bad, names, d ** 3))

    brackets = [[spec.bracket(basis[i], basis[j]) for j in range(d)] for i in range(d)]

    def jacobi(i, j, k):
        a = spec.bracket(basis[i], brackets[j][k])
        b = spec.bracket(basis[j], brackets[k][i])
        c = spec.bracket(basis[k], brackets[i][j])
        return [x + y + z for x, y, z in zip(a, b, c)]

    bad = _first(
        (i, j, k)
        for i in range(d)
        for j in range(i + 1, d)
        for k in range(j + 1, d)
        if any(jacobi(i, j, k))
    )
    rep.add(_triple_result("jacobi", "[X_i,[X_j,X_k]] + cyclic = 0", bad, names, d * (d - 1) * (d - 2) // 6))

    bad = _first((i, j) for i in range(d) for j in range(d) if spec.form[i][j] != spec.form[j][i])
    rep.add(_triple_result("form_symmetric", "B(X_i,X_j) = B(X_j,X_i)", bad, names, d * d))

    det = linalg.determinant(spec.form)
    rep.add(
        CheckResult(
            "form_nondegenerate",
            "det B != 0",
            bool(det),
            1,
            None if det else {"det": "0"},
        )
    )

    bad = _first(
        (i, j, k)
        for i, j, k in product(range(d), repeat=3)
        if spec.pair(brackets[i][j], basis[k]) != spec.pair(basis[i], brackets[j][k])
    )
    rep.add(_triple_result("form_invariant", "B([X_i,X_j],X_k) = B(X_i,[X_j,X_k])", bad, names, d ** 3))
    return rep


def _triple_result(name, statement, bad, names, cases) -> CheckResult:
    if bad is None:
        return CheckResult(name, statement, True, cases)
    return CheckResult(
        name,
        statement,
        False,
        cases,
        {"basis": "(" + ", ".join(names[i] for i in bad) + ")"},
    )


@dataclass(frozen=True)
class SubalgebraSpec:
    """A subspace ``p`` of ``g`` spanned by rational coordinate columns."""

    algebra: LieAlgebraSpec
    span: tuple[tuple, ...]

    def __post_init__(self):
        span = tuple(tuple(rational(x) for x in v) for v in self.span)
        object.__setattr__(self, "span", span)

    @classmethod
    def from_indices(cls, algebra: LieAlgebraSpec, indices: Sequence[int]) -> SubalgebraSpec:
        return cls(algebra, tuple(tuple(algebra.basis_vector(i)) for i in indices))

    @property
    def dim(self) -> int:
        return len(self.span)

    def contains(self, v: Sequence) -> bool:
        return linalg.in_span([list(s) for s in self.span], [rational(x) for x in v])

    def validate(self) -> Report:
        rep = Report("subalgebra")
        r = linalg.rank([list(v) for v in self.span]) if self.span else 0
        rep.add(
            CheckResult(
                "span_independent",
                "spanning vectors are linearly independent",
                r == len(self.span),
                len(self.span),
                None if r == len(self.span) else {"rank": str(r)},
            )
        )
        bad = None
        for a, b in product(range(self.dim), repeat=2):
            if a < b and not self.contains(self.algebra.bracket(self.span[a], self.span[b])):
                bad = (a, b)
                break
        rep.add(
            CheckResult(
                "closed_under_bracket",
                "[p, p] is contained in p",
                bad is None,
                self.dim * (self.dim - 1) // 2,
                None if bad is None else {"span_pair": str(bad)},
            )
        )
        return rep


def orthogonal_complement(sub: SubalgebraSpec) -> list[list]:
    """Basis of ``{x : B(x, p) = 0}`` from the exact kernel."""
    alg = sub.algebra
    rows = [alg.flat(v) for v in sub.span]
    return linalg.nullspace(rows, alg.dim)


def check_coisotropic(sub: SubalgebraSpec) -> bool:
    perp = orthogonal_complement(sub)
    span = [list(v) for v in sub.span]
    if not perp:
        return True
    if not span:
        return False
    return linalg.rank(span + perp) == linalg.rank(span)


def b_dual(functional: Sequence, spec: LieAlgebraSpec) -> list:
    """The unique ``s`` with ``B(s, x) = functional(x)``.  Raises on singular B."""
    return linalg.solve(spec.form, [rational(v) for v in functional])


@dataclass(frozen=True)
class GradingSpec:
    algebra: LieAlgebraSpec
    degree: tuple[int, ...]
    grading_element: tuple | None = None
    subalgebra: SubalgebraSpec | None = field(default=None, compare=False)

    def components(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for i, deg in enumerate(self.degree):
            out.setdefault(deg, []).append(i)
        return out


def validate_grading(gr: GradingSpec) -> Report:
    alg = gr.algebra
    d = alg.dim
    deg = gr.degree
    rep = Report("grading")
    basis = [alg.basis_vector(i) for i in range(d)]

    bad = None
    for i, j in product(range(d), repeat=2):
        out = alg.bracket(basis[i], basis[j])
        if any(v and deg[k] != deg[i] + deg[j] for k, v in enumerate(out)):
            bad = (i, j)
            break
    rep.add(_triple_result("grading_bracket", "[g_i, g_j] is contained in g_{i+j}", bad, alg.basis_names, d * d))

    if gr.grading_element is not None:
        E = [rational(x) for x in gr.grading_element]
        bad = None
        for i in range(d):
            if any(x != deg[i] * y for x, y in zip(alg.bracket(E, basis[i]), basis[i])):
                bad = (i,)
                break
        if bad is None and any(E[k] for k in range(d) if deg[k] != 0):
            bad = ()
        rep.add(
            CheckResult(
                "grading_element",
                "E lies in g_0 and [E, A] = i A for A in g_i",
                bad is None,
                d,
                None if bad is None else {"basis": ", ".join(alg.basis_names[i] for i in bad) or "E not in g_0"},
            )
        )

    bad = None
    for i, j in product(range(d), repeat=2):
        if deg[i] + deg[j] != 0 and alg.form[i][j] != 0:
            bad = (i, j)
            break
    rep.add(_triple_result("grading_orthogonality", "B(g_i, g_j) = 0 unless j = -i", bad, alg.basis_names, d * d))

    if gr.subalgebra is not None:
        nonneg = [basis[i] for i in range(d) if deg[i] >= 0]
        span = [list(v) for v in gr.subalgebra.span]
        same = (
            linalg.rank(span) == len(nonneg)
            and linalg.rank(span + nonneg) == len(nonneg)
        )
        rep.add(
            CheckResult(
                "grading_parabolic",
                "p equals the sum of the nonnegative graded pieces",
                same,
                1,
                None if same else {"dim_p": str(len(span)), "dim_nonneg": str(len(nonneg))},
            )
        )
    return rep
