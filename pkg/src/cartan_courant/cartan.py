"""A coisotropic Cartan geometry in a single local trivialization.

The chart is a polynomial coordinate patch; sections of the tractor bundle
are g-valued polynomial maps, and the Cartan connection is represented by a
gauge potential ``A = sum_i A_i dx_i`` normalized so that ``A_i - X_i`` is
p-valued, where ``X_1..X_n`` span a fixed complement of ``p``.  With this
normalization the anchor of a section is read off its transversal
coordinates and never requires inverting a polynomial matrix.
"""
from __future__ import annotations

from itertools import combinations
from typing import Mapping, Sequence

import gmpy2

from . import linalg
from .exactpoly import Poly, PolyForm, rational
from .exactpoly.poly import format_poly
from .liealg import LieAlgebraSpec, SubalgebraSpec, check_coisotropic, orthogonal_complement
from .report import CheckResult, Report


class Section:
    """A g-valued polynomial map on the chart, stored as basis coefficients."""

    __slots__ = ("names", "values", "_hash")

    def __init__(self, names: Sequence[str], values: Sequence[Poly]):
        self.names = names
        self.values = tuple(values)
        self._hash = None

    @property
    def variables(self) -> tuple[str, ...]:
        return self.values[0].variables

    def __add__(self, other: Section) -> Section:
        return Section(self.names, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other: Section) -> Section:
        return Section(self.names, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self) -> Section:
        return Section(self.names, [-a for a in self.values])

    def __mul__(self, f) -> Section:
        """Multiply by a Poly or a rational scalar."""
        if isinstance(f, Poly):
            if f.is_constant():
                f = f.constant_term()
            else:
                return Section(self.names, [a * f for a in self.values])
        return Section(self.names, [a.scale(f) for a in self.values])

    __rmul__ = __mul__

    def diff(self, i: int) -> Section:
        return Section(self.names, [a.diff(i) for a in self.values])

    def is_zero(self) -> bool:
        return not any(self.values)

    def __bool__(self) -> bool:
        return any(self.values)

    def __eq__(self, other) -> bool:
        return isinstance(other, Section) and self.values == other.values

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.values)
        return self._hash

    def __str__(self) -> str:
        parts = []
        for name, f in zip(self.names, self.values):
            if not f:
                continue
            if len(f.terms) == 1:
                text = format_poly(f)
                neg = text.startswith("-")
                body = text[1:] if neg else text
                body = name if body == "1" else f"{body}*{name}"
            else:
                neg, body = False, f"({format_poly(f)})*{name}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts) or "0"

    __repr__ = __str__


VectorField = tuple  # n Polys, coefficients of d/dx_i


def vf_apply(X: Sequence[Poly], f: Poly) -> Poly:
    """Directional derivative ``X(f)``."""
    total = Poly.zero(f.variables)
    for i, c in enumerate(X):
        if c:
            df = f.diff(i)
            if df:
                total = total + c * df
    return total


def vf_bracket(X: Sequence[Poly], Y: Sequence[Poly]) -> tuple[Poly, ...]:
    return tuple(vf_apply(X, Y[j]) - vf_apply(Y, X[j]) for j in range(len(X)))


class CartanModel:
    """Chart, coisotropic subalgebra, transversal frame and gauge potential.

    ``curvature`` may be supplied to run in synthetic mode; otherwise it is
    computed from the gauge.
    """

    def __init__(
        self,
        algebra: LieAlgebraSpec,
        subalgebra: SubalgebraSpec,
        coordinates: Sequence[str],
        transversal: Sequence[Sequence],
        gauge: Sequence[Sequence[Poly]] | None = None,
        curvature: Mapping[tuple[int, int], Sequence[Poly]] | None = None,
        name: str = "",
        grading=None,
    ):
        self.name = name
        self.algebra = algebra
        self.subalgebra = subalgebra
        self.grading = grading
        self.variables = tuple(coordinates)
        self.n = len(self.variables)
        self.d = algebra.dim
        self.names = algebra.basis_names
        self.transversal = [[rational(x) for x in v] for v in transversal]
        if len(self.transversal) != self.n:
            raise ValueError(
                f"transversal has {len(self.transversal)} vectors, chart has dimension {self.n}"
            )
        self._zero = Poly.zero(self.variables)
        self._one = Poly.constant(self.variables, 1)

        frame = self.transversal + [list(v) for v in subalgebra.span]
        self.frame_rank = linalg.rank(frame)
        self._frame_ok = self.frame_rank == self.d and len(frame) == self.d
        if self._frame_ok:
            inv = linalg.inverse(linalg.transpose(frame))
            self._anchor_rows = [[(j, c) for j, c in enumerate(inv[i]) if c] for i in range(self.n)]
            self._p_rows = [[(j, c) for j, c in enumerate(inv[i]) if c] for i in range(self.n, self.d)]
        else:
            self._anchor_rows = None
            self._p_rows = None

        self.pperp = orthogonal_complement(subalgebra)
        self.coisotropic = check_coisotropic(subalgebra)
        self._theta = None
        if len(self.pperp) == self.n:
            M = [[algebra.pair(s, X) for X in self.transversal] for s in self.pperp]
            if linalg.determinant(M):
                T = linalg.inverse(M)
                self._theta = [
                    [sum((T[j][a] * self.pperp[a][k] for a in range(self.n)), gmpy2.mpq(0)) for k in range(self.d)]
                    for j in range(self.n)
                ]
        # theta^j: p-perp valued, B(theta^j, X_i) = delta_ij
        self.theta_sections = (
            [self.constant_section(v) for v in self._theta] if self._theta is not None else None
        )

        if gauge is None:
            gauge = [[Poly.constant(self.variables, x) for x in X] for X in self.transversal]
        self.gauge = [a if isinstance(a, Section) else self.section(a) for a in gauge]
        if len(self.gauge) != self.n:
            raise ValueError("gauge must have one component per coordinate")

        self.synthetic = curvature is not None
        if curvature is None:
            self._kappa = self._curvature_from_gauge()
        else:
            kappa = {}
            for (i, j), v in curvature.items():
                s = v if isinstance(v, Section) else self.section(v)
                if i == j:
                    raise ValueError("curvature component with repeated index")
                if i > j:
                    i, j, s = j, i, -s
                kappa[(i, j)] = kappa[(i, j)] + s if (i, j) in kappa else s
            self._kappa = {k: v for k, v in kappa.items() if v}
        self._anchor_cache: dict[Section, tuple] = {}

    # -- sections -------------------------------------------------------------
    def section(self, values: Sequence) -> Section:
        vals = []
        for v in values:
            vals.append(v if isinstance(v, Poly) else Poly.constant(self.variables, v))
        if len(vals) != self.d:
            raise ValueError(f"section needs {self.d} components")
        return Section(self.names, vals)

    def constant_section(self, vector: Sequence) -> Section:
        return self.section([Poly.constant(self.variables, x) for x in vector])

    def basis_section(self, i: int) -> Section:
        return self.constant_section(self.algebra.basis_vector(i))

    def zero_section(self) -> Section:
        return Section(self.names, [self._zero] * self.d)

    def coordinate(self, i: int) -> Poly:
        return Poly.var(self.variables, i)

    def bracket(self, e1: Section, e2: Section) -> Section:
        """Pointwise Lie bracket ``[e1, e2]_g``."""
        return Section(self.names, self.algebra.bracket(e1.values, e2.values, self._zero))

    def pairing(self, e1: Section, e2: Section) -> Poly:
        """Pointwise ``B(e1, e2)``."""
        return self.algebra.pair(e1.values, e2.values, self._zero)

    def is_p_valued(self, e: Section) -> bool:
        return not any(self.anchor(e))

    def is_pperp_valued(self, e: Section) -> bool:
        """``B(e, p) = 0`` pointwise."""
        for v in self.subalgebra.span:
            if self.algebra.pair(e.values, v, self._zero):
                return False
        return True

    def p_part(self, e: Section) -> Section:
        """Coefficients of ``e`` along the spanning vectors of p."""
        return e - self.frame_section(self.anchor(e))

    def frame_section(self, X: Sequence[Poly]) -> Section:
        """``sum_i X_i * (constant section X_i)``: the transversal lift of X."""
        vals = [self._zero] * self.d
        for i, c in enumerate(X):
            if not c:
                continue
            for k, x in enumerate(self.transversal[i]):
                if x:
                    vals[k] = vals[k] + c * x
        return Section(self.names, vals)

    # -- anchor, connection, duals ---------------------------------------------
    def anchor(self, e: Section) -> tuple[Poly, ...]:
        """Coefficients of ``rho(e)``: the transversal coordinates of ``e``."""
        hit = self._anchor_cache.get(e)
        if hit is not None:
            return hit
        if self._anchor_rows is None:
            raise ValueError("transversal and p do not span g")
        out = []
        for row in self._anchor_rows:
            acc = self._zero
            for j, c in row:
                v = e.values[j]
                if v:
                    acc = acc + v * c
            out.append(acc)
        out = tuple(out)
        if len(self._anchor_cache) > 200000:
            self._anchor_cache.clear()
        self._anchor_cache[e] = out
        return out

    def gauge_on(self, X: Sequence[Poly]) -> Section:
        """``A(X) = sum_i X_i A_i``."""
        vals = [self._zero] * self.d
        for i, c in enumerate(X):
            if not c:
                continue
            for k, a in enumerate(self.gauge[i].values):
                if a:
                    vals[k] = vals[k] + c * a
        return Section(self.names, vals)

    def derivative(self, X: Sequence[Poly], e: Section) -> Section:
        """Componentwise directional derivative ``X(e)``."""
        return Section(self.names, [vf_apply(X, v) for v in e.values])

    def nabla(self, X: Sequence[Poly], e: Section) -> Section:
        """Tractor connection ``X(e) + [A(X), e]``."""
        return self.derivative(X, e) + self.bracket(self.gauge_on(X), e)

    def unit_field(self, j: int) -> tuple[Poly, ...]:
        return tuple(self._one if i == j else self._zero for i in range(self.n))

    def rho_star(self, alpha: PolyForm | Sequence[Poly]) -> Section:
        """The p-perp valued section ``s`` with ``B(s, e) = alpha(rho(e))``."""
        if self._theta is None:
            raise ValueError("p-perp is not dual to the transversal; model is not coisotropic")
        coeffs = _one_form_coefficients(alpha, self.n, self._zero)
        vals = [self._zero] * self.d
        for j, a in enumerate(coeffs):
            if not a:
                continue
            for k, t in enumerate(self._theta[j]):
                if t:
                    vals[k] = vals[k] + a * t
        return Section(self.names, vals)

    def rho_star_inverse(self, s: Section) -> PolyForm:
        """Pull a p-perp valued section back to a 1-form; raises if outside the image."""
        coeffs = [self.algebra.pair(s.values, X, self._zero) for X in self.transversal]
        if self.rho_star(coeffs) != s:
            raise ValueError(f"section {s} is not in the image of rho*")
        return PolyForm(self.variables, 1, {(j,): c for j, c in enumerate(coeffs)})

    def d_operator(self, f: Poly) -> Section:
        """``rho*(df)``, characterised by ``B(df_section, e) = rho(e) f``."""
        return self.rho_star([f.diff(j) for j in range(self.n)])

    # -- curvature -------------------------------------------------------------
    def _curvature_from_gauge(self) -> dict[tuple[int, int], Section]:
        kappa = {}
        A = self.gauge
        for i, j in combinations(range(self.n), 2):
            k = A[j].diff(i) - A[i].diff(j) + self.bracket(A[i], A[j])
            if k:
                kappa[(i, j)] = k
        return kappa

    def curvature(self) -> dict[tuple[int, int], Section]:
        """Nonzero components ``kappa_ij`` (i < j) of the g-valued 2-form."""
        return dict(self._kappa)

    def kappa_component(self, i: int, j: int) -> Section:
        if i == j:
            return self.zero_section()
        if i < j:
            return self._kappa.get((i, j), self.zero_section())
        return -self._kappa.get((j, i), self.zero_section())

    def kappa_fields(self, X: Sequence[Poly], Y: Sequence[Poly]) -> Section:
        """``kappa(X, Y)`` for vector fields."""
        vals = [self._zero] * self.d
        for (i, j), k in self._kappa.items():
            c = X[i] * Y[j] - X[j] * Y[i]
            if not c:
                continue
            for m, v in enumerate(k.values):
                if v:
                    vals[m] = vals[m] + c * v
        return Section(self.names, vals)

    def kappa(self, e1: Section, e2: Section) -> Section:
        """``kappa(rho e1, rho e2)``; vanishes on p-valued arguments."""
        return self.kappa_fields(self.anchor(e1), self.anchor(e2))

    def atiyah_bracket(self, e1: Section, e2: Section) -> Section:
        """The Lie algebroid bracket
        ``nabla_{rho e1} e2 - nabla_{rho e2} e1 - [e1, e2] - kappa(e1, e2)``."""
        X, Y = self.anchor(e1), self.anchor(e2)
        return self.nabla(X, e2) - self.nabla(Y, e1) - self.bracket(e1, e2) - self.kappa_fields(X, Y)

    # -- validation ------------------------------------------------------------
    def validate(self) -> Report:
        rep = Report(f"model {self.name}".strip())
        rep.add(
            CheckResult(
                "coisotropic",
                "p-perp is contained in p",
                self.coisotropic,
                1,
                None if self.coisotropic else {"dim_pperp": str(len(self.pperp))},
            )
        )
        rep.add(
            CheckResult(
                "transversal_complement",
                "transversal + p spans g",
                self._frame_ok,
                1,
                None if self._frame_ok else {"rank": str(self.frame_rank)},
            )
        )
        if not self._frame_ok:
            return rep
        bad = None
        for i, a in enumerate(self.gauge):
            if self.anchor(a) != self.unit_field(i):
                bad = i
                break
        rep.add(
            CheckResult(
                "gauge_normalized",
                "A_i - X_i is p-valued",
                bad is None,
                self.n,
                None if bad is None else {"component": self.variables[bad], "A": str(self.gauge[bad])},
            )
        )
        if self.synthetic:
            rep.add(bianchi_check(self))
            rep.add(synthetic_compatibility_check(self))
        return rep


def _one_form_coefficients(alpha, n: int, zero: Poly) -> list[Poly]:
    if isinstance(alpha, PolyForm):
        if alpha.degree != 1:
            raise ValueError("rho* takes a 1-form")
        return [alpha.components.get((j,), zero) for j in range(n)]
    coeffs = list(alpha)
    if len(coeffs) != n:
        raise ValueError(f"expected {n} coefficients")
    return coeffs


def bianchi_residual(model: CartanModel) -> dict[tuple[int, int, int], Section]:
    """Nonzero components of ``d kappa + [A ^ kappa]`` on i < j < k."""
    out = {}
    for i, j, k in combinations(range(model.n), 3):
        total = model.zero_section()
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            kbc = model.kappa_component(b, c)
            total = total + kbc.diff(a) + model.bracket(model.gauge[a], kbc)
        if total:
            out[(i, j, k)] = total
    return out


def bianchi_check(model: CartanModel) -> CheckResult:
    res = bianchi_residual(model)
    n3 = len(list(combinations(range(model.n), 3)))
    if not res:
        return CheckResult("bianchi", "d kappa + [A ^ kappa] = 0", True, n3)
    (idx, val), = list(res.items())[:1]
    return CheckResult(
        "bianchi",
        "d kappa + [A ^ kappa] = 0",
        False,
        n3,
        {"component": ",".join(model.variables[i] for i in idx), "residual": str(val)},
    )


def synthetic_compatibility_check(model: CartanModel) -> CheckResult:
    """A supplied curvature must differ from ``dA + [A, A]`` by a p-valued
    form, or the anchor stops being bracket preserving."""
    gauge_kappa = model._curvature_from_gauge()
    bad = None
    for i, j in combinations(range(model.n), 2):
        diff = model.kappa_component(i, j) - gauge_kappa.get((i, j), model.zero_section())
        if not model.is_p_valued(diff):
            bad = (i, j, diff)
            break
    return CheckResult(
        "synthetic_curvature_compatible",
        "kappa - (dA + [A,A]) is p-valued",
        bad is None,
        model.n * (model.n - 1) // 2,
        None if bad is None else {"component": f"{model.variables[bad[0]]},{model.variables[bad[1]]}", "difference": str(bad[2])},
    )
