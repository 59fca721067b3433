"""Deterministic test sections for the identity checks.

The battery holds every constant basis section multiplied by ``1``, ``x1``
and ``x1*x2``, plus a few seeded pseudo-random sections of degree at most 2.
Each random section has a component along every transversal vector, so
tensors that only see anchors (the Pontryagin tensor, kappa) are exercised
with generic arguments rather than mostly zero ones.

Tuples of sections are enumerated in full when there are at most ``limit``
of them and otherwise sampled with a generator seeded from ``seed`` and the
arity, so a given seed always yields the same cases.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator

import gmpy2

from .cartan import CartanModel, Section
from .exactpoly import Poly

DEFAULT_SEED = 20240611


def random_poly(rng: random.Random, variables: tuple[str, ...], max_degree: int = 2, terms: int = 2) -> Poly:
    n = len(variables)
    out = []
    for _ in range(terms):
        exps = [0] * n
        for _ in range(rng.randint(0, max_degree)):
            if n:
                exps[rng.randrange(n)] += 1
        out.append((exps, gmpy2.mpq(rng.choice((-3, -2, -1, 1, 2, 3)), rng.choice((1, 1, 2)))))
    return Poly.from_terms(variables, out)


def random_section(model: CartanModel, rng: random.Random, max_degree: int = 2) -> Section:
    """A transversal part along every X_i plus one random basis direction."""
    X = [random_poly(rng, model.variables, max_degree) for _ in range(model.n)]
    e = model.frame_section(X)
    k = rng.randrange(model.d)
    return e + model.basis_section(k) * random_poly(rng, model.variables, max_degree)


def random_p_section(model: CartanModel, rng: random.Random, max_degree: int = 2) -> Section:
    """A random p-valued section built from the spanning vectors of p."""
    e = model.zero_section()
    for v in model.subalgebra.span:
        if rng.random() < 0.6:
            e = e + model.constant_section(v) * random_poly(rng, model.variables, max_degree, terms=1)
    if not e:
        e = model.constant_section(model.subalgebra.span[rng.randrange(len(model.subalgebra.span))])
    return e


@dataclass
class Battery:
    model: CartanModel
    seed: int = DEFAULT_SEED
    random_count: int = 4
    sections: list[Section] = field(init=False)
    p_sections: list[Section] = field(init=False)
    pperp_sections: list[Section] = field(init=False)
    functions: list[Poly] = field(init=False)

    def __post_init__(self):
        m = self.model
        rng = random.Random(self.seed)
        x = [m.coordinate(i) for i in range(m.n)]
        mults = [m._one]
        if m.n >= 1:
            mults.append(x[0])
        if m.n >= 2:
            mults.append(x[0] * x[1])
        self.sections = [m.basis_section(i) * f for f in mults for i in range(m.d)]
        self.sections += [random_section(m, rng) for _ in range(self.random_count)]
        self.p_sections = [m.constant_section(v) for v in m.subalgebra.span]
        self.p_sections += [random_p_section(m, rng) for _ in range(self.random_count)]
        self.pperp_sections = [m.constant_section(v) for v in m.pperp]
        self.pperp_sections += [
            sum((m.constant_section(v) * random_poly(rng, m.variables, terms=1) for v in m.pperp), m.zero_section())
            for _ in range(2)
        ]
        self.functions = [random_poly(rng, m.variables) for _ in range(3)]

    def rng(self, tag: str) -> random.Random:
        return random.Random(f"{self.seed}:{tag}")

    def tuples(self, arity: int, limit: int, pool: list[Section] | None = None, tag: str = "") -> Iterator[tuple]:
        """All ``arity``-tuples from ``pool`` if there are at most ``limit``,
        otherwise ``limit`` seeded samples."""
        pool = self.sections if pool is None else pool
        total = len(pool) ** arity
        if total <= limit:
            yield from product(pool, repeat=arity)
            return
        rng = self.rng(f"{tag}:{arity}")
        for _ in range(limit):
            yield tuple(pool[rng.randrange(len(pool))] for _ in range(arity))

    def mixed(self, first: list[Section], arity_rest: int, limit: int, tag: str = "") -> Iterator[tuple]:
        """Tuples whose first entry comes from ``first`` and the rest from the battery."""
        total = len(first) * len(self.sections) ** arity_rest
        if total <= limit:
            for head in first:
                for rest in product(self.sections, repeat=arity_rest):
                    yield (head,) + rest
            return
        rng = self.rng(f"mixed:{tag}:{arity_rest}")
        for _ in range(limit):
            head = first[rng.randrange(len(first))]
            yield (head,) + tuple(self.sections[rng.randrange(len(self.sections))] for _ in range(arity_rest))

