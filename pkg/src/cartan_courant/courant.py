"""The pre-Courant structure on the tractor bundle of a coisotropic Cartan
geometry, its Jacobiator and Pontryagin 4-tensor.

Every dual section ``B(a, b(.))`` is realised as ``rho*`` of the 1-form
obtained by feeding coordinate vector fields into the open slot; since
``rho*`` lands in p-perp, all of them are killed by the anchor.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import gmpy2

from .battery import Battery
from .cartan import CartanModel, Section, vf_apply, vf_bracket
from .exactpoly import Poly, PolyForm, exterior_derivative
from .report import CheckResult, Report, check


class CourantAlgebroid:
    """Pairing, anchor and Dorfman bracket built from a ``CartanModel``.

    ``corrupt`` selects a deliberately broken variant for negative controls:
    ``"drop-nabla-term"`` removes ``B(nabla e1, e2)`` from the bracket and
    ``"flip-jacobiator-sign"`` flips the sign of one Jacobiator term.
    """

    CORRUPTIONS = ("drop-nabla-term", "flip-jacobiator-sign")

    def __init__(self, model: CartanModel, corrupt: str | None = None):
        if corrupt is not None and corrupt not in self.CORRUPTIONS:
            raise ValueError(f"unknown corruption {corrupt!r}")
        self.model = model
        self.corrupt = corrupt
        self._dorfman_cache: dict[tuple[Section, Section], Section] = {}
        self._jacobiator_cache: dict[tuple[Section, Section, Section], Section] = {}

    # -- small pieces ----------------------------------------------------------
    @property
    def n(self) -> int:
        return self.model.n

    def anchor(self, e: Section) -> tuple[Poly, ...]:
        return self.model.anchor(e)

    def pairing(self, e1: Section, e2: Section) -> Poly:
        return self.model.pairing(e1, e2)

    def d_operator(self, f: Poly) -> Section:
        return self.model.d_operator(f)

    def _kappa_slot(self, Y) -> list[Section]:
        """``kappa(Y, d/dx_j)`` for each j."""
        m = self.model
        return [m.kappa_fields(Y, m.unit_field(j)) for j in range(m.n)]

    def kappa_dual(self, e1: Section, e2: Section) -> Section:
        """``B(e1, kappa(e2, .))``: pairs with e3 to ``B(e1, kappa(e2, e3))``."""
        m = self.model
        coeffs = [m.pairing(e1, k) for k in self._kappa_slot(m.anchor(e2))]
        return m.rho_star(coeffs)

    def nested_kappa_dual(self, e3: Section, e2: Section, e1: Section) -> Section:
        """``B(e3, kappa(e2, kappa(e1, .)))`` with the inner value fed through the anchor."""
        m = self.model
        Y = m.anchor(e2)
        coeffs = []
        for inner in self._kappa_slot(m.anchor(e1)):
            coeffs.append(m.pairing(e3, m.kappa_fields(Y, m.anchor(inner))))
        return m.rho_star(coeffs)

    def nabla_dual(self, e1: Section, e2: Section) -> Section:
        """``B(nabla e1, e2)``: pairs with e3 to ``B(nabla_{rho e3} e1, e2)``."""
        m = self.model
        coeffs = [m.pairing(m.nabla(m.unit_field(j), e1), e2) for j in range(m.n)]
        return m.rho_star(coeffs)

    def beta(self, e1: Section, e2: Section) -> Section:
        m = self.model
        return (
            -m.bracket(e1, e2)
            - m.kappa(e1, e2)
            + self.kappa_dual(e2, e1)
            - self.kappa_dual(e1, e2)
        )

    # -- brackets --------------------------------------------------------------
    def dorfman(self, e1: Section, e2: Section) -> Section:
        key = (e1, e2)
        hit = self._dorfman_cache.get(key)
        if hit is not None:
            return hit
        m = self.model
        X, Y = m.anchor(e1), m.anchor(e2)
        out = (
            m.nabla(X, e2)
            - m.nabla(Y, e1)
            - m.bracket(e1, e2)
            - m.kappa_fields(X, Y)
            + self.kappa_dual(e2, e1)
            - self.kappa_dual(e1, e2)
        )
        if self.corrupt != "drop-nabla-term":
            out = out + self.nabla_dual(e1, e2)
        if len(self._dorfman_cache) > 500000:
            self._dorfman_cache.clear()
        self._dorfman_cache[key] = out
        return out

    def dorfman_via_beta(self, e1: Section, e2: Section) -> Section:
        """``nabla_{rho e1} e2 - nabla_{rho e2} e1 + B(nabla e1, e2) + beta(e1, e2)``."""
        m = self.model
        X, Y = m.anchor(e1), m.anchor(e2)
        return m.nabla(X, e2) - m.nabla(Y, e1) + self.nabla_dual(e1, e2) + self.beta(e1, e2)

    def dorfman_via_atiyah(self, e1: Section, e2: Section) -> Section:
        """Atiyah bracket plus the three p-perp valued correction terms."""
        return (
            self.model.atiyah_bracket(e1, e2)
            + self.kappa_dual(e2, e1)
            - self.kappa_dual(e1, e2)
            + self.nabla_dual(e1, e2)
        )

    def alt_bracket(self, e1: Section, e2: Section) -> Section:
        """The bracket without the kappa-dual terms."""
        m = self.model
        X, Y = m.anchor(e1), m.anchor(e2)
        return (
            m.nabla(X, e2)
            - m.nabla(Y, e1)
            + self.nabla_dual(e1, e2)
            - m.bracket(e1, e2)
            - m.kappa_fields(X, Y)
        )

    # -- Jacobiator and Pontryagin tensor ----------------------------------------
    def jacobiator(self, e1: Section, e2: Section, e3: Section) -> Section:
        """``e1 o (e2 o e3) - (e1 o e2) o e3 - e2 o (e1 o e3)``."""
        key = (e1, e2, e3)
        hit = self._jacobiator_cache.get(key)
        if hit is not None:
            return hit
        br = self.dorfman
        last = br(e2, br(e1, e3))
        if self.corrupt == "flip-jacobiator-sign":
            last = -last
        out = br(e1, br(e2, e3)) - br(br(e1, e2), e3) - last
        if len(self._jacobiator_cache) > 200000:
            self._jacobiator_cache.clear()
        self._jacobiator_cache[key] = out
        return out

    def jacobiator_formula(self, e1: Section, e2: Section, e3: Section) -> Section:
        """Closed form of the Jacobiator in terms of kappa: for each cyclic
        permutation, ``-[e1, B(e3,k(e2,.)) - B(e2,k(e3,.))]
        + B(e3,k(e2,k(e1,.))) - B(e2,k(e3,k(e1,.)))``."""
        m = self.model
        total = m.zero_section()
        for a, b, c in ((e1, e2, e3), (e2, e3, e1), (e3, e1, e2)):
            inner = self.kappa_dual(c, b) - self.kappa_dual(b, c)
            total = (
                total
                - m.bracket(a, inner)
                + self.nested_kappa_dual(c, b, a)
                - self.nested_kappa_dual(b, c, a)
            )
        return total

    def alt_jacobiator(self, e1: Section, e2: Section, e3: Section) -> Section:
        br = self.alt_bracket
        return br(e1, br(e2, e3)) - br(br(e1, e2), e3) - br(e2, br(e1, e3))

    def pontryagin(self, e1: Section, e2: Section, e3: Section, e4: Section) -> Poly:
        """``P(e1, e2, e3, e4) = B(J(e1, e2, e3), e4)``."""
        return self.pairing(self.jacobiator(e1, e2, e3), e4)

    def d_pontryagin(self, es: tuple[Section, ...], P=None, first_sum: int = 5) -> Poly:
        """The Chevalley-Eilenberg-type differential of P on five sections.

        ``first_sum`` is how many anchor terms enter; only 5 gives a closed P.
        """
        P = P or self.pontryagin
        m = self.model
        total = m._zero
        for i in range(first_sum):
            rest = es[:i] + es[i + 1:]
            term = vf_apply(m.anchor(es[i]), P(*rest))
            total = total + term if i % 2 == 0 else total - term
        for i in range(5):
            for j in range(i + 1, 5):
                rest = tuple(e for k, e in enumerate(es) if k not in (i, j))
                term = P(self.dorfman(es[i], es[j]), *rest)
                # (-1)^(i+j) with 1-based indices equals (-1)^(i+j) with 0-based
                total = total + term if (i + j) % 2 == 0 else total - term
        return total

    def h_form(self) -> PolyForm:
        """``H_{ijkl} = P(X_i, X_j, X_k, X_l)`` on constant transversal sections."""
        m = self.model
        frames = [m.constant_section(X) for X in m.transversal]
        comps = {}
        for idx in combinations(range(m.n), 4):
            comps[idx] = self.pontryagin(*(frames[i] for i in idx))
        return PolyForm(m.variables, 4, comps)


# -- checks --------------------------------------------------------------------
@dataclass(frozen=True)
class Limits:
    """Caps on how many tuples each check evaluates (see ``Battery.tuples``)."""

    pairs: int = 2500
    triples: int = 600
    quads: int = 200
    quints: int = 150
    p_cases: int = 60


def _describe(case) -> str:
    return "(" + "; ".join(str(e) for e in case) + ")"


def _pperp_residual(m: CartanModel, s: Section) -> tuple:
    """``B(s, v)`` for the spanning vectors v of p; all zero iff s is p-perp valued."""
    return tuple(m.algebra.pair(s.values, v, m._zero) for v in m.subalgebra.span)


def bracket_forms_check(C: CourantAlgebroid, bat: Battery, lim: Limits = Limits()) -> Report:
    rep = Report("bracket forms")
    pairs = list(bat.tuples(2, lim.pairs, tag="forms"))
    rep.add(check(
        "dorfman_via_beta",
        "e1 o e2 = nabla_{rho e1} e2 - nabla_{rho e2} e1 + B(nabla e1, e2) + beta(e1, e2)",
        pairs, lambda a, b: C.dorfman(a, b) - C.dorfman_via_beta(a, b), _describe,
    ))
    rep.add(check(
        "dorfman_via_atiyah",
        "e1 o e2 = <e1,e2> + B(e2,kappa(e1,.)) - B(e1,kappa(e2,.)) + B(nabla e1, e2)",
        pairs, lambda a, b: C.dorfman(a, b) - C.dorfman_via_atiyah(a, b), _describe,
    ))
    return rep


def beta_check(C: CourantAlgebroid, bat: Battery, lim: Limits = Limits()) -> Report:
    m = C.model
    rep = Report("beta")
    triples = list(bat.tuples(3, lim.triples, tag="beta"))

    def skew(a, b, c):
        v = C.pairing(C.beta(a, b), c)
        return (v + C.pairing(C.beta(b, a), c), v + C.pairing(C.beta(a, c), b))

    rep.add(check("beta_skew", "B(beta(e1,e2),e3) is totally skew", triples, skew, _describe))

    def anchor(a, b):
        X, Y = m.anchor(a), m.anchor(b)
        lhs = m.anchor(C.beta(a, b))
        rhs = vf_bracket(X, Y)
        nab = m.anchor(m.nabla(X, b) - m.nabla(Y, a))
        return tuple(l - r + q for l, r, q in zip(lhs, rhs, nab))

    rep.add(check(
        "beta_anchor",
        "rho(beta(e1,e2)) = [rho e1, rho e2] - rho(nabla_{rho e1} e2 - nabla_{rho e2} e1)",
        list(bat.tuples(2, lim.pairs, tag="beta-anchor")), anchor, _describe,
    ))
    return rep


def lie_algebroid_check(model: CartanModel, bat: Battery, lim: Limits = Limits()) -> Report:
    """Antisymmetry, Leibniz rule, anchor property and Jacobi for ``<.,.>``."""
    m = model
    br = m.atiyah_bracket
    rep = Report("Lie algebroid bracket")
    pairs = list(bat.tuples(2, lim.pairs, tag="atiyah"))
    rep.add(check("atiyah_antisymmetry", "<e1,e2> = -<e2,e1>", pairs, lambda a, b: br(a, b) + br(b, a), _describe))
    rep.add(check(
        "atiyah_anchor", "rho<e1,e2> = [rho e1, rho e2]", pairs,
        lambda a, b: tuple(l - r for l, r in zip(m.anchor(br(a, b)), vf_bracket(m.anchor(a), m.anchor(b)))),
        _describe,
    ))
    f = bat.functions[0]
    rep.add(check(
        "atiyah_leibniz", "<e1, f e2> = f <e1,e2> + (rho(e1) f) e2", pairs,
        lambda a, b: br(a, b * f) - br(a, b) * f - b * vf_apply(m.anchor(a), f), _describe,
    ))
    rep.add(check(
        "atiyah_jacobi", "<e1,<e2,e3>> + cyclic = 0", list(bat.tuples(3, lim.triples, tag="atiyah-jacobi")),
        lambda a, b, c: br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b)), _describe,
    ))
    return rep


def axioms_check(C: CourantAlgebroid, bat: Battery, lim: Limits = Limits()) -> Report:
    m = C.model
    rep = Report("pre-Courant axioms")
    pairs = list(bat.tuples(2, lim.pairs, tag="axioms"))
    rep.add(check(
        "anchor_morphism", "rho(e1 o e2) = [rho e1, rho e2]", pairs,
        lambda a, b: tuple(l - r for l, r in zip(m.anchor(C.dorfman(a, b)), vf_bracket(m.anchor(a), m.anchor(b)))),
        _describe,
    ))
    singles = [(e,) for e in bat.sections]
    rep.add(check(
        "self_bracket", "e o e = 1/2 D<e,e>", singles,
        lambda e: C.dorfman(e, e) - C.d_operator(C.pairing(e, e)) * gmpy2.mpq(1, 2), _describe,
    ))
    rep.add(check(
        "metric_invariance", "rho(e1)<e2,e3> = <e1 o e2, e3> + <e2, e1 o e3>",
        list(bat.tuples(3, lim.triples * 4, tag="axioms-iii")),
        lambda a, b, c: vf_apply(m.anchor(a), C.pairing(b, c)) - C.pairing(C.dorfman(a, b), c) - C.pairing(b, C.dorfman(a, c)),
        _describe,
    ))
    return rep


def pontryagin_check(C: CourantAlgebroid, bat: Battery, lim: Limits = Limits()) -> Report:
    rep = Report("Pontryagin tensor")
    P = C.pontryagin
    quads = list(bat.tuples(4, lim.quads, tag="pontryagin"))

    def antisym(*es):
        v = P(*es)
        out = []
        for i in range(3):
            sw = list(es)
            sw[i], sw[i + 1] = sw[i + 1], sw[i]
            out.append(v + P(*sw))
        return tuple(out)

    rep.add(check("pontryagin_antisymmetry", "P changes sign under each adjacent transposition", quads, antisym, _describe))
    fs = bat.functions

    def linear(*es):
        v = P(*es)
        out = []
        for i in range(4):
            f = fs[i % len(fs)]
            sc = list(es)
            sc[i] = sc[i] * f
            out.append(P(*sc) - v * f)
        return tuple(out)

    rep.add(check("pontryagin_function_linear", "P(.., f e_i, ..) = f P(.., e_i, ..) in every slot", quads, linear, _describe))
    return rep


def dp_check(C: CourantAlgebroid, bat: Battery, lim: Limits = Limits(), first_sum: int = 5) -> Report:
    rep = Report("closedness of P")
    quints = list(bat.tuples(5, lim.quints, tag="dp"))
    rep.add(check(
        "dp_zero", "D P(e1,...,e5) = 0", quints,
        lambda *es: C.d_pontryagin(es, first_sum=first_sum), _describe,
    ))
    return rep


def quotient_algebroid_check(C: CourantAlgebroid, bat: Battery, lim: Limits = Limits()) -> Report:
    """The bracket induced on sections of E / p-perp."""
    m = C.model
    rep = Report("quotient Lie algebroid")
    mixed = [(e, s) for e in bat.sections for s in bat.pperp_sections]
    if len(mixed) > lim.pairs:
        rng = bat.rng("quotient")
        mixed = [mixed[rng.randrange(len(mixed))] for _ in range(lim.pairs)]
    rep.add(check(
        "quotient_ideal", "e o s and s o e are p-perp valued when s is", mixed,
        lambda e, s: _pperp_residual(m, C.dorfman(e, s)) + _pperp_residual(m, C.dorfman(s, e)), _describe,
    ))
    pairs = list(bat.tuples(2, lim.pairs, tag="quotient"))
    rep.add(check(
        "quotient_skew", "e1 o e2 + e2 o e1 is p-perp valued", pairs,
        lambda a, b: _pperp_residual(m, C.dorfman(a, b) + C.dorfman(b, a)), _describe,
    ))
    rep.add(check(
        "quotient_jacobi", "e1 o (e2 o e3) + cyclic is p-perp valued",
        list(bat.tuples(3, lim.triples, tag="quotient-jacobi")),
        lambda a, b, c: _pperp_residual(
            m, C.dorfman(a, C.dorfman(b, c)) + C.dorfman(b, C.dorfman(c, a)) + C.dorfman(c, C.dorfman(a, b))
        ),
        _describe,
    ))
    rep.add(check(
        "quotient_anchor", "rho kills p-perp and rho(e1 o e2) = [rho e1, rho e2]",
        [(s, e) for s in bat.pperp_sections for e in bat.sections[: m.d]],
        lambda s, e: m.anchor(s) + tuple(
            l - r for l, r in zip(m.anchor(C.dorfman(s, e)), vf_bracket(m.anchor(s), m.anchor(e)))
        ),
        _describe,
    ))
    return rep


def strong_criteria(C: CourantAlgebroid, bat: Battery, lim: Limits = Limits()) -> Report:
    m = C.model
    rep = Report("twisted Courant criteria")
    pre = m.validate()
    rep.add(CheckResult(
        "preconditions", "the model itself is valid (normalized gauge; Bianchi in synthetic mode)",
        pre.passed, len(pre.checks),
        None if pre.passed else {"failed": ", ".join(c.name for c in pre.failures())},
    ))
    triples = list(bat.tuples(3, lim.triples, tag="s1"))
    rep.add(check("s1_pperp", "J(e1,e2,e3) is p-perp valued", triples,
                  lambda a, b, c: _pperp_residual(m, C.jacobiator(a, b, c)), _describe))
    cases = list(bat.mixed(bat.p_sections, 2, lim.triples, tag="s2"))

    def s2(e, a, b):
        return (C.jacobiator(e, a, b), C.jacobiator(a, e, b), C.jacobiator(a, b, e))

    rep.add(check("s2_kernel", "J vanishes when any argument is p-valued", cases, s2, _describe))
    for c in quotient_algebroid_check(C, bat, lim).checks:
        rep.add(c)
    return rep


def extract_h(C: CourantAlgebroid, bat: Battery, lim: Limits = Limits()) -> tuple[PolyForm, Report]:
    """H with ``P = rho* H``, plus the checks that justify it."""
    m = C.model
    rep = Report("twisting 4-form")
    H = C.h_form()
    quads = list(bat.tuples(4, lim.quads, tag="h"))
    if m.n < 4:
        rep.add(check("p_vanishes_low_dim", "P = 0 when the chart has dimension < 4", quads,
                      lambda *es: C.pontryagin(*es), _describe))
    rep.add(check("h_pullback", "P(e1,e2,e3,e4) = H(rho e1, rho e2, rho e3, rho e4)", quads,
                  lambda *es: C.pontryagin(*es) - H.evaluate([m.anchor(e) for e in es]), _describe))
    dH = exterior_derivative(H)
    rep.add(CheckResult("h_closed", "dH = 0", dH.is_zero(), 1, None if dH.is_zero() else {"dH": str(dH)}))
    rep.meta["H"] = str(H)
    return H, rep


def jacobiator_formula_check(C: CourantAlgebroid, bat: Battery, lim: Limits = Limits()) -> Report:
    rep = Report("closed-form Jacobiator")
    rep.add(check("jacobiator_closed_form", "J equals its closed form in kappa",
                  list(bat.tuples(3, lim.triples, tag="jformula")),
                  lambda a, b, c: C.jacobiator(a, b, c) - C.jacobiator_formula(a, b, c), _describe))
    return rep


def curvature_identity_check(C: CourantAlgebroid, bat: Battery, lim: Limits = Limits()) -> Report:
    """Curvature identities for p-valued arguments obtained from ``J(e,.,.) = 0``."""
    m = C.model
    kd = C.kappa_dual
    rep = Report("curvature identities")
    rng = bat.rng("curvature")
    ps, es = bat.p_sections, bat.sections
    n_cases = max(lim.p_cases, 50)
    cases = [(ps[rng.randrange(len(ps))], ps[rng.randrange(len(ps))], es[rng.randrange(len(es))]) for _ in range(n_cases)]
    rep.add(check(
        "p_bracket_symmetry", "[e1, B(e2,kappa(e3,.))] = [e2, B(e1,kappa(e3,.))] for p-valued e1, e2", cases,
        lambda a, b, c: m.bracket(a, kd(b, c)) - m.bracket(b, kd(a, c)), _describe,
    ))
    cases = [(ps[rng.randrange(len(ps))], es[rng.randrange(len(es))], es[rng.randrange(len(es))]) for _ in range(n_cases)]

    def three_term(e1, e2, e3):
        return (
            m.bracket(e1, kd(e3, e2) - kd(e2, e3))
            - m.bracket(e3, kd(e1, e2))
            + m.bracket(e2, kd(e1, e3))
            + C.nested_kappa_dual(e1, e2, e3)
            - C.nested_kappa_dual(e1, e3, e2)
        )

    rep.add(check("p_kernel_identity", "the kappa expression of J(e1,e2,e3) vanishes for p-valued e1", cases, three_term, _describe))
    return rep


def first_pontryagin_formula_check(C: CourantAlgebroid) -> Report:
    """Compare H with two readings of its closed form in kappa (advisory)."""
    m = C.model
    rep = Report("first Pontryagin form from kappa")
    H = C.h_form()
    frames = [m.constant_section(X) for X in m.transversal]

    def reading_a(e1, e2, e3, e4):
        return C.pairing(C.jacobiator_formula(e1, e2, e3), e4)

    def reading_b(e1, e2, e3, e4):
        es = (e1, e2, e3, e4)
        total = m._zero
        for k in range(4):
            rot = es[k:] + es[:k]
            term = reading_a(*rot)
            total = total + term if k % 2 == 0 else total - term
        return total * gmpy2.mpq(1, 4)

    for name, reading, text in (
        ("pontryagin_formula_slots", reading_a, "H(X1..X4) = B(closed-form J(X1,X2,X3), X4)"),
        ("pontryagin_formula_cyclic", reading_b, "H(X1..X4) = signed cyclic average of the closed form over all four slots"),
    ):
        res = check(name, text, [tuple(frames[i] for i in idx) for idx in combinations(range(m.n), 4)],
                    lambda *es, r=reading: r(*es) - H.evaluate([m.anchor(e) for e in es]), _describe)
        res.advisory = True
        rep.add(res)
    return rep


def kappa_skew_residual(m: CartanModel, a: Section, b: Section, c: Section) -> Poly:
    """``B(kappa(a,b),c) + B(kappa(a,c),b)``; total skewness means this is 0."""
    return m.pairing(m.kappa(a, b), c) + m.pairing(m.kappa(a, c), b)


def skew_kappa_check(C: CourantAlgebroid, bat: Battery, lim: Limits = Limits()) -> Report:
    m = C.model
    rep = Report("skew curvature")
    basis = [m.basis_section(i) for i in range(m.d)]
    hyp = check("kappa_totally_skew", "B(kappa(e1,e2),e3) is totally skew",
                [(a, b, c) for a in basis for b in basis for c in basis],
                lambda a, b, c: kappa_skew_residual(m, a, b, c),
                lambda case: _describe(case))
    hyp.advisory = True
    rep.add(hyp)
    if not hyp.passed:
        rep.add(CheckResult("alt_bracket_jacobi", "the bracket without kappa-dual terms satisfies Jacobi",
                            True, 0, note="not applicable: kappa is not totally skew"))
        return rep
    rep.add(check("alt_bracket_jacobi", "the bracket without kappa-dual terms satisfies Jacobi",
                  list(bat.tuples(3, lim.triples, tag="alt")),
                  lambda a, b, c: C.alt_jacobiator(a, b, c), _describe))
    return rep


def skew_kappa_instance(model: CartanModel) -> CartanModel:
    """A synthetic model with constant curvature making ``B(kappa(.,.),.)`` totally skew.

    Requires an abelian algebra and a constant gauge.  The unknowns are the
    coefficients of ``kappa_ij``; the linear constraints are total skewness
    against the transversal frame, ``B(kappa_ij, p) = 0`` and p-valuedness
    (so that kappa - dA - [A,A] is p-valued).  The sum of the exact
    nullspace basis is used.
    """
    from . import linalg

    if not model.algebra.is_abelian():
        raise ValueError("skew curvature instances are built over abelian algebras")
    if any(any(not v.is_constant() for v in a.values) for a in model.gauge):
        raise ValueError("gauge must be constant")
    n, d = model.n, model.d
    alg = model.algebra
    idx = {pair: k for k, pair in enumerate(combinations(range(n), 2))}
    nunk = len(idx) * d

    def var(i, j, a):
        return idx[(i, j)] * d + a

    def kappa_row(i, j, vec):
        """Row for ``B(kappa_ij, vec)`` with the orientation sign folded in."""
        row = [0] * nunk
        if i == j:
            return row
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        flat = alg.flat(vec)
        for a in range(d):
            row[var(i, j, a)] += sign * flat[a]
        return row

    X = model.transversal
    rows = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                r1, r2 = kappa_row(i, j, X[k]), kappa_row(i, k, X[j])
                rows.append([a + b for a, b in zip(r1, r2)])
    for (i, j) in idx:
        for v in model.subalgebra.span:
            rows.append(kappa_row(i, j, v))
        # p-valued: the transversal coordinates vanish
        for row in model._anchor_rows:
            r = [0] * nunk
            for a, c in row:
                r[var(i, j, a)] = c
            rows.append(r)
    null = linalg.nullspace(rows, nunk)
    if not null:
        raise ValueError("no nonzero totally skew curvature exists for this model")
    sol = [sum(v[t] for v in null) for t in range(nunk)]
    curvature = {(i, j): [sol[var(i, j, a)] for a in range(d)] for (i, j) in idx}
    return CartanModel(
        model.algebra, model.subalgebra, model.variables, model.transversal,
        [a.values for a in model.gauge], curvature, name=f"{model.name}-skew-kappa", grading=model.grading,
    )
