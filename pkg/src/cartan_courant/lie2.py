"""The Lie 2-algebra ``Omega^1 --rho*--> Gamma(E)`` of a twisted Courant algebroid.

Degree-0 elements are Sections, degree-1 elements are 1-forms.  ``l1`` is
``rho*``, ``l2`` the skew bracket (pulled back through ``rho*`` when one
argument is a 1-form) and ``l3`` the Jacobiator of the skew bracket pulled
back to a 1-form.

The identities are checked in the Lada-Markl form
``sum_{i+j=n+1} sum_sigma chi(sigma) (-1)^(i(j-1)) l_j(l_i(x_sigma...), x_sigma...) = 0``
over unshuffles, which for a 2-term complex gives the chain-map, Jacobi
anomaly and l3-coherence conditions.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import gmpy2

from .battery import Battery
from .cartan import Section
from .courant import CourantAlgebroid, Limits, _describe
from .exactpoly import PolyForm
from .report import Report, check

HALF = gmpy2.mpq(1, 2)
SIXTH = gmpy2.mpq(1, 6)


@dataclass(frozen=True)
class GradedElement:
    degree: int
    value: Section | PolyForm

    def __post_init__(self):
        want = Section if self.degree == 0 else PolyForm
        if self.degree not in (0, 1) or not isinstance(self.value, want):
            raise ValueError("degree 0 holds a Section, degree 1 a 1-form")

    def __add__(self, other: GradedElement) -> GradedElement:
        if other.degree != self.degree:
            raise ValueError("cannot add elements of different degree")
        return GradedElement(self.degree, self.value + other.value)

    def scaled(self, c) -> GradedElement:
        v = self.value * c if self.degree == 0 else self.value.scale(c)
        return GradedElement(self.degree, v)

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def __str__(self) -> str:
        return f"[{self.degree}] {self.value}"


class Lie2Algebra:
    """``l1``, ``l2``, ``l3`` built from a ``CourantAlgebroid``.

    ``l3_scale`` multiplies ``l3`` (2 gives the doubled negative control);
    ``l3_route`` picks ``"nested"`` (skew-bracket Jacobiator),
    ``"jacobiator"`` (J - D T) or ``"explicit"`` (closed form in kappa).
    """

    def __init__(self, courant: CourantAlgebroid, l3_scale=1, l3_route: str = "nested"):
        if l3_route not in ("nested", "jacobiator", "explicit"):
            raise ValueError(f"unknown l3 route {l3_route!r}")
        self.C = courant
        self.model = courant.model
        self.l3_scale = gmpy2.mpq(l3_scale)
        self.l3_route = l3_route
        self._skew_cache: dict = {}

    # -- section-level operations ------------------------------------------------
    def skew_bracket(self, e1: Section, e2: Section) -> Section:
        """``1/2 (e1 o e2 - e2 o e1)``."""
        key = (e1, e2)
        hit = self._skew_cache.get(key)
        if hit is None:
            hit = (self.C.dorfman(e1, e2) - self.C.dorfman(e2, e1)) * HALF
            if len(self._skew_cache) > 200000:
                self._skew_cache.clear()
            self._skew_cache[key] = hit
        return hit

    def skew_bracket_via_d(self, e1: Section, e2: Section) -> Section:
        """``e1 o e2 - 1/2 D<e1, e2>``."""
        return self.C.dorfman(e1, e2) - self.C.d_operator(self.C.pairing(e1, e2)) * HALF

    def skew_bracket_expanded(self, e1: Section, e2: Section) -> Section:
        """The skew bracket written out in terms of nabla, kappa and [.,.]."""
        m, C = self.model, self.C
        X, Y = m.anchor(e1), m.anchor(e2)
        return (
            m.nabla(X, e2)
            - m.nabla(Y, e1)
            - m.bracket(e1, e2)
            - m.kappa_fields(X, Y)
            + C.kappa_dual(e2, e1)
            - C.kappa_dual(e1, e2)
            + (C.nabla_dual(e1, e2) - C.nabla_dual(e2, e1)) * HALF
        )

    def t_form(self, e1: Section, e2: Section, e3: Section):
        """``1/6 (<[[e1,e2]], e3> + c.p.)``."""
        p, sb = self.C.pairing, self.skew_bracket
        return (p(sb(e1, e2), e3) + p(sb(e2, e3), e1) + p(sb(e3, e1), e2)).scale(SIXTH)

    def t_form_expanded(self, e1: Section, e2: Section, e3: Section, printed_sign: bool = False):
        """``T`` written out in nabla, kappa and [.,.].

        Expanding ``<[[e1,e2]], e3>`` gives ``-B([e1,e2],e3)``; with
        ``printed_sign`` the bracket term enters with ``+`` instead, which is
        not equal to ``T`` on nonabelian algebras.
        """
        m = self.model
        total = m._zero
        for a, b, c in ((e1, e2, e3), (e2, e3, e1), (e3, e1, e2)):
            X, Y, Z = m.anchor(a), m.anchor(b), m.anchor(c)
            B = m.pairing
            br = B(m.bracket(a, b), c)
            term = (
                B(m.nabla(X, b), c)
                - B(m.nabla(Y, a), c)
                + (B(m.nabla(Z, a), b) - B(m.nabla(Z, b), a)).scale(HALF)
                + (br if printed_sign else -br)
                - B(m.kappa_fields(X, Y), c)
                + B(b, m.kappa_fields(X, Z))
                - B(a, m.kappa_fields(Y, Z))
            )
            total = total + term
        return total.scale(SIXTH)

    def script_jacobiator(self, e1: Section, e2: Section, e3: Section) -> Section:
        """``[[e1,[[e2,e3]]]] + c.p.``"""
        sb = self.skew_bracket
        return sb(e1, sb(e2, e3)) + sb(e2, sb(e3, e1)) + sb(e3, sb(e1, e2))

    def script_jacobiator_via_j(self, e1: Section, e2: Section, e3: Section) -> Section:
        """``J(e1,e2,e3) - D T(e1,e2,e3)``."""
        return self.C.jacobiator(e1, e2, e3) - self.C.d_operator(self.t_form(e1, e2, e3))

    def script_jacobiator_explicit(self, e1: Section, e2: Section, e3: Section, printed_sign: bool = False) -> Section:
        """Closed form of J in kappa minus ``D`` of the expanded ``T``."""
        return self.C.jacobiator_formula(e1, e2, e3) - self.C.d_operator(
            self.t_form_expanded(e1, e2, e3, printed_sign)
        )

    # -- graded operations -------------------------------------------------------
    def section(self, x: GradedElement) -> Section:
        return x.value if x.degree == 0 else self.model.rho_star(x.value)

    def pullback(self, s: Section) -> PolyForm:
        return self.model.rho_star_inverse(s)

    def zero(self, degree: int) -> GradedElement:
        m = self.model
        if degree == 0:
            return GradedElement(0, m.zero_section())
        return GradedElement(1, PolyForm.zero(m.variables, 1))

    def l1(self, x: GradedElement) -> GradedElement:
        if x.degree == 1:
            return GradedElement(0, self.model.rho_star(x.value))
        raise ValueError("l1 is defined on degree-1 elements")

    def l2(self, x: GradedElement, y: GradedElement) -> GradedElement | None:
        """None stands for the zero of the (absent) degree-2 space."""
        if x.degree == 1 and y.degree == 1:
            return None
        if x.degree == 0 and y.degree == 0:
            return GradedElement(0, self.skew_bracket(x.value, y.value))
        s = self.skew_bracket(self.section(x), self.section(y))
        return GradedElement(1, self.pullback(s))

    def l3(self, x: GradedElement, y: GradedElement, z: GradedElement) -> GradedElement:
        if x.degree or y.degree or z.degree:
            raise ValueError("l3 is only nonzero on degree-0 arguments")
        a, b, c = x.value, y.value, z.value
        if self.l3_route == "nested":
            s = self.script_jacobiator(a, b, c)
        elif self.l3_route == "jacobiator":
            s = self.script_jacobiator_via_j(a, b, c)
        else:
            s = self.script_jacobiator_explicit(a, b, c)
        return GradedElement(1, self.pullback(s * self.l3_scale if self.l3_scale != 1 else s))

    def bracket(self, k: int, args: list[GradedElement]) -> GradedElement | None:
        """``l_k`` with the degree bookkeeping of a 2-term complex; None means 0."""
        deg = sum(a.degree for a in args) + k - 2
        if deg not in (0, 1):
            return None
        if k == 1:
            return self.l1(args[0]) if args[0].degree == 1 else None
        if k == 2:
            return self.l2(*args)
        if k == 3:
            return self.l3(*args)
        return None


def _unshuffles(n: int, i: int):
    for head in combinations(range(n), i):
        tail = tuple(k for k in range(n) if k not in head)
        yield head + tail


def _koszul(perm: tuple[int, ...], degrees: list[int]) -> int:
    """``chi(sigma)``: permutation sign times the Koszul sign for odd elements."""
    sign = 1
    p = list(perm)
    for a in range(len(p)):
        for b in range(a + 1, len(p)):
            if p[a] > p[b]:
                sign = -sign
                if degrees[p[a]] % 2 and degrees[p[b]] % 2:
                    sign = -sign
    return sign


def lada_markl(L: Lie2Algebra, xs: list[GradedElement]) -> GradedElement:
    """The n-th L-infinity relation evaluated on ``xs``; zero when it holds."""
    n = len(xs)
    degrees = [x.degree for x in xs]
    out_degree = sum(degrees) + n - 3
    total = L.zero(out_degree)
    for i in range(1, n + 1):
        j = n + 1 - i
        for perm in _unshuffles(n, i):
            inner = L.bracket(i, [xs[k] for k in perm[:i]])
            if inner is None:
                continue
            outer = L.bracket(j, [inner] + [xs[k] for k in perm[i:]])
            if outer is None:
                continue
            sign = _koszul(perm, degrees) * (-1) ** (i * (j - 1))
            total = total + (outer if sign > 0 else outer.scaled(-1))
    return total


def lie2_identities(L: Lie2Algebra, bat: Battery, lim: Limits = Limits()) -> Report:
    m = L.model
    rep = Report("Lie 2-algebra")
    forms = [m.rho_star_inverse(m.d_operator(f)) for f in bat.functions]
    forms.append(PolyForm(m.variables, 1, {(0,): bat.functions[0] * m.coordinate(m.n - 1)}))
    g0 = [GradedElement(0, e) for e in bat.sections]
    g1 = [GradedElement(1, a) for a in forms]
    rng = bat.rng("lie2")

    def pick(pool, k):
        return [pool[rng.randrange(len(pool))] for _ in range(k)]

    pairs = [tuple(pick(g0, 1) + pick(g1, 1)) for _ in range(min(lim.pairs, 80))]
    rep.add(check(
        "l1_chain_map", "rho*(l2(e, a)) = l2(e, rho* a)", pairs,
        lambda e, a: lada_markl(L, [e, a]), _graded_describe,
    ))

    def antisym(x, y):
        return L.l2(x, y) + L.l2(y, x)

    mixed = [tuple(pick(g0, 2)) for _ in range(min(lim.pairs, 200))] + pairs
    rep.add(check("l2_antisymmetry", "l2(x, y) = -l2(y, x)", mixed, antisym, _graded_describe))

    triples = [tuple(GradedElement(0, e) for e in t) for t in bat.tuples(3, lim.triples // 2, tag="lie2-l3")]
    rep.add(check(
        "l3_jacobi_anomaly", "l2(e1,l2(e2,e3)) + c.p. = rho* l3(e1,e2,e3)", triples,
        lambda *xs: lada_markl(L, list(xs)), _graded_describe,
    ))
    mixed3 = [tuple(pick(g0, 2) + pick(g1, 1)) for _ in range(min(lim.triples // 2, 100))]
    rep.add(check(
        "l3_mixed_degree", "l2(e1,l2(e2,a)) + cyclic = l3(e1,e2,rho* a)", mixed3,
        lambda *xs: lada_markl(L, list(xs)), _graded_describe,
    ))
    quads = [tuple(GradedElement(0, e) for e in t) for t in bat.tuples(4, lim.quads // 2, tag="lie2-l4")]
    rep.add(check(
        "l3_coherence", "sum l2(l3(...), .) and l3(l2(.,.), ...) terms cancel", quads,
        lambda *xs: lada_markl(L, list(xs)), _graded_describe,
    ))
    return rep


def lie2_route_checks(L: Lie2Algebra, bat: Battery, lim: Limits = Limits()) -> Report:
    """Agreement of the different descriptions of the skew bracket, T and l3."""
    rep = Report("Lie 2-algebra formulas")
    pairs = list(bat.tuples(2, lim.pairs // 2, tag="skew"))
    rep.add(check("skew_bracket_forms", "1/2(e1 o e2 - e2 o e1) = e1 o e2 - 1/2 D<e1,e2>", pairs,
                  lambda a, b: L.skew_bracket(a, b) - L.skew_bracket_via_d(a, b), _describe))
    rep.add(check("skew_bracket_expanded", "the skew bracket equals its expansion in nabla and kappa", pairs,
                  lambda a, b: L.skew_bracket(a, b) - L.skew_bracket_expanded(a, b), _describe))
    triples = list(bat.tuples(3, lim.triples // 2, tag="t"))
    rep.add(check("t_antisymmetry", "T is totally antisymmetric", triples,
                  lambda a, b, c: (L.t_form(a, b, c) + L.t_form(b, a, c), L.t_form(a, b, c) + L.t_form(a, c, b)),
                  _describe))
    rep.add(check("t_expanded", "T equals its expansion with -B([e1,e2],e3)", triples,
                  lambda a, b, c: L.t_form(a, b, c) - L.t_form_expanded(a, b, c), _describe))
    printed = check("t_expanded_printed_sign", "T equals its expansion with +B([e1,e2],e3)", triples,
                    lambda a, b, c: L.t_form(a, b, c) - L.t_form_expanded(a, b, c, printed_sign=True), _describe)
    printed.advisory = True
    rep.add(printed)
    rep.add(check("script_jacobiator_routes", "[[e1,[[e2,e3]]]] + c.p. = J - D T", triples,
                  lambda a, b, c: L.script_jacobiator(a, b, c) - L.script_jacobiator_via_j(a, b, c), _describe))
    rep.add(check("l3_explicit", "l3 from the closed form in kappa equals the nested-bracket l3", triples,
                  lambda a, b, c: L.script_jacobiator(a, b, c) - L.script_jacobiator_explicit(a, b, c), _describe))
    return rep


def _graded_describe(case) -> str:
    return "(" + "; ".join(str(x) for x in case) + ")"
