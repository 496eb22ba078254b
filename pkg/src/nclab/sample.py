"""Seeded random generators for polynomials and matrices.

Everything takes an explicit ``random.Random`` so that the randomized suites
and the CLI are reproducible from a single integer seed.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .fields import Field, Scalar
from .freealg import FreePoly
from .genmat import GenericMatrix
from .rings import CommPoly, mono_from_dict

#: Documented default seed used by the CLI and the randomized suites.
DEFAULT_SEED = 1729


def random_scalar(rng: random.Random, field: Field, span: int = 6) -> Scalar:
    if field.p:
        return field.scalar(rng.randrange(field.p))
    num = rng.randint(-span, span)
    den = rng.randint(1, span)
    return field.scalar(Fraction(num, den))


def random_nonzero_scalar(rng: random.Random, field: Field, span: int = 6) -> Scalar:
    while True:
        c = random_scalar(rng, field, span)
        if c:
            return c


def random_commpoly(
    rng: random.Random, variables, field: Field, max_degree: int = 3, max_terms: int = 4
) -> CommPoly:
    variables = list(variables)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        deg = rng.randint(0, max_degree)
        exps = {}
        for _ in range(deg):
            v = rng.choice(variables)
            exps[v] = exps.get(v, 0) + 1
        terms[mono_from_dict(exps)] = random_scalar(rng, field)
    return CommPoly(field, terms)


def random_freepoly(
    rng: random.Random, s: int, field: Field, max_degree: int = 3, max_terms: int = 4
) -> FreePoly:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        length = rng.randint(0, max_degree)
        word = tuple(rng.randint(1, s) for _ in range(length))
        terms[word] = random_scalar(rng, field)
    return FreePoly(s, field, terms)


def random_int_matrix(
    rng: random.Random, n: int, field: Field, lo: int = -5, hi: int = 5, zero_diagonal=False
) -> GenericMatrix:
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if zero_diagonal and i == j:
                row.append(CommPoly.zero(field))
            else:
                row.append(CommPoly.constant(field.scalar(rng.randint(lo, hi))))
        rows.append(row)
    return GenericMatrix(rows)
