"""Multivariate polynomials with exact rational coefficients.

Monomials are packed into a single Python int, ``_BITS`` bits per variable,
so that multiplying two monomials is one integer addition.  Exponents must
stay below ``2**_BITS``; nothing in this package comes close.
"""
from __future__ import annotations

from typing import Iterable, Iterator, Sequence, Union

import gmpy2

Rational = gmpy2.mpq

_BITS = 16
_MASK = (1 << _BITS) - 1

Scalar = Union[int, "gmpy2.mpq"]


def rational(value) -> gmpy2.mpq:
    """Coerce ints, strings like ``"3/2"``, Fractions and mpq to an mpq."""
    if isinstance(value, str):
        return gmpy2.mpq(value.strip())
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return gmpy2.mpq(int(value.numerator), int(value.denominator))
    return gmpy2.mpq(value)


def pack(exponents: Sequence[int]) -> int:
    key = 0
    for i, e in enumerate(exponents):
        if e < 0 or e > _MASK:
            raise ValueError(f"exponent {e} out of range")
        key |= e << (_BITS * i)
    return key


def unpack(key: int, nvars: int) -> tuple[int, ...]:
    return tuple((key >> (_BITS * i)) & _MASK for i in range(nvars))


class Poly:
    """An immutable polynomial over a fixed, ordered list of variable names.

    ``terms`` maps packed monomials to nonzero mpq coefficients.  Arithmetic
    with ints and rationals promotes them to constants.
    """

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: dict[int, gmpy2.mpq] | None = None):
        self.variables = tuple(variables)
        self.terms = {} if terms is None else terms
        self._hash = None

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, variables: Sequence[str]) -> Poly:
        return cls(variables)

    @classmethod
    def constant(cls, variables: Sequence[str], c: Scalar) -> Poly:
        c = rational(c)
        return cls(variables, {0: c} if c else {})

    @classmethod
    def var(cls, variables: Sequence[str], name_or_index: str | int) -> Poly:
        variables = tuple(variables)
        i = variables.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        if not 0 <= i < len(variables):
            raise IndexError(f"variable index {i} out of range")
        return cls(variables, {1 << (_BITS * i): gmpy2.mpq(1)})

    @classmethod
    def from_terms(cls, variables: Sequence[str], items: Iterable[tuple[Sequence[int], Scalar]]) -> Poly:
        variables = tuple(variables)
        terms: dict[int, gmpy2.mpq] = {}
        for exps, c in items:
            if len(exps) != len(variables):
                raise ValueError("exponent vector length does not match variables")
            k = pack(exps)
            terms[k] = terms.get(k, gmpy2.mpq(0)) + rational(c)
        return cls(variables, {k: v for k, v in terms.items() if v})

    # -- structure ------------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.variables)

    def items(self) -> Iterator[tuple[tuple[int, ...], gmpy2.mpq]]:
        """Yield ``(exponents, coefficient)`` in canonical graded-lex order."""
        n = self.nvars
        decoded = [(unpack(k, n), c) for k, c in self.terms.items()]
        decoded.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)
        yield from decoded

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_term(self) -> gmpy2.mpq:
        return self.terms.get(0, gmpy2.mpq(0))

    def degree(self) -> int:
        if not self.terms:
            return -1
        n = self.nvars
        return max(sum(unpack(k, n)) for k in self.terms)

    def _check(self, other: Poly) -> None:
        if other.variables is not self.variables and other.variables != self.variables:
            raise ValueError(
                f"variable lists differ: {self.variables!r} vs {other.variables!r}"
            )

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.constant(self.variables, other)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other) -> Poly:
        if not isinstance(other, Poly):
            if not other:
                return self
            other = self._coerce(other)
        else:
            self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        terms = dict(self.terms)
        for k, c in other.terms.items():
            v = terms.get(k)
            if v is None:
                terms[k] = c
            else:
                v = v + c
                if v:
                    terms[k] = v
                else:
                    del terms[k]
        return Poly(self.variables, terms)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(self.variables, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> Poly:
        if isinstance(other, Poly):
            self._check(other)
            if not other.terms:
                return self
            terms = dict(self.terms)
            for k, c in other.terms.items():
                v = terms.get(k)
                if v is None:
                    terms[k] = -c
                else:
                    v = v - c
                    if v:
                        terms[k] = v
                    else:
                        del terms[k]
            return Poly(self.variables, terms)
        return self + (-rational(other))

    def __rsub__(self, other) -> Poly:
        return (-self) + other

    def scale(self, c: Scalar) -> Poly:
        c = rational(c)
        if not c:
            return Poly(self.variables)
        if c == 1:
            return self
        return Poly(self.variables, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return Poly(self.variables)
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (kb, cb), = b.items()
            if kb == 0:
                return self.scale(cb) if b is other.terms else other.scale(cb)
            return Poly(self.variables, {ka + kb: ca * cb for ka, ca in a.items()})
        terms: dict[int, gmpy2.mpq] = {}
        get = terms.get
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                v = get(k)
                terms[k] = ca * cb if v is None else v + ca * cb
        return Poly(self.variables, {k: v for k, v in terms.items() if v})

    def __rmul__(self, other) -> Poly:
        return self.scale(other)

    def __truediv__(self, other) -> Poly:
        if isinstance(other, Poly):
            if not other.is_constant() or other.is_zero():
                raise ZeroDivisionError("can only divide by a nonzero constant")
            other = other.constant_term()
        other = rational(other)
        if not other:
            raise ZeroDivisionError("division by zero")
        return self.scale(1 / other)

    def __pow__(self, e: int) -> Poly:
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Poly.constant(self.variables, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def diff(self, i: int) -> Poly:
        """Partial derivative with respect to the ``i``-th variable."""
        if not 0 <= i < self.nvars:
            raise IndexError(f"coordinate index {i} out of range for {self.nvars} variables")
        shift = _BITS * i
        unit = 1 << shift
        terms = {}
        for k, c in self.terms.items():
            e = (k >> shift) & _MASK
            if e:
                terms[k - unit] = c * e
        return Poly(self.variables, terms)

    def evaluate(self, point: Sequence[Scalar]) -> gmpy2.mpq:
        n = self.nvars
        pt = [rational(x) for x in point]
        total = gmpy2.mpq(0)
        for k, c in self.terms.items():
            v = c
            for i, e in enumerate(unpack(k, n)):
                if e:
                    v *= pt[i] ** e
            total += v
        return total

    # -- comparison / hashing ---------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.variables == other.variables and self.terms == other.terms
        try:
            c = rational(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.is_constant() and self.constant_term() == c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


def _format_rational(c: gmpy2.mpq) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_monomial(exps: Sequence[int], variables: Sequence[str]) -> str:
    parts = []
    for name, e in zip(variables, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    """Canonical text form; ``parse_poly`` reads it back to an equal Poly."""
    if not p.terms:
        return "0"
    out = []
    for exps, c in p.items():
        neg = c < 0
        a = -c if neg else c
        mono = format_monomial(exps, p.variables)
        if not mono:
            body = _format_rational(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_rational(a)}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)
