"""Seeded random generators shared by the property suites.

Everything here returns exact rational objects; the suites assert exact
equality, so the generators keep numerators and denominators small only to
stay fast, not for accuracy.
"""

import random
from fractions import Fraction

from diffeokit.linalg import RatMat
from diffeokit.multilinear import index_basis
from diffeokit.symcalc import Poly, PolyForm, PolyMap
from diffeokit.tangent import VectDiagram


def rand_fraction(rng: random.Random, span: int = 4) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.choice([1, 1, 2, 3]))


def rand_matrix(rng: random.Random, rows: int, cols: int, span: int = 4) -> RatMat:
    return RatMat(rows, cols, [rand_fraction(rng, span) for _ in range(rows * cols)])


def rand_poly(rng: random.Random, nvars: int, max_degree: int = 2, max_terms: int = 3) -> Poly:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        exps = tuple(rng.randint(0, max_degree) for _ in range(nvars))
        terms[exps] = rand_fraction(rng)
    return Poly(nvars, terms)


def rand_pointed_map(
    rng: random.Random, source_dim: int, target_dim: int, max_degree: int = 2
) -> PolyMap:
    comps = []
    for _ in range(target_dim):
        p = rand_poly(rng, source_dim, max_degree)
        comps.append(p - Poly.constant(source_dim, p.constant_term))
    return PolyMap(source_dim, target_dim, comps)


def rand_form(rng: random.Random, nvars: int, degree: int, max_degree: int = 2) -> PolyForm:
    coeffs = [
        rand_poly(rng, nvars, max_degree)
        for _ in index_basis(nvars, degree).subsets
    ]
    return PolyForm(nvars, degree, coeffs)


def rand_diagram(
    rng: random.Random, max_objects: int = 4, max_dim: int = 3, max_arrows: int = 4
) -> VectDiagram:
    n = rng.randint(1, max_objects)
    objects = [rng.randint(0, max_dim) for _ in range(n)]
    arrows = []
    for _ in range(rng.randint(0, max_arrows)):
        i = rng.randrange(n)
        j = rng.randrange(n)
        arrows.append((i, j, rand_matrix(rng, objects[j], objects[i])))
    return VectDiagram(objects, arrows)


def derivative_by_difference(p: Poly, i: int) -> Poly:
    """Independent derivative oracle: expand (p(x + h e_i) - p(x)) / h and
    evaluate at h = 0, using only substitution and subtraction."""
    n = p.nvars
    args = []
    for j in range(1, n + 1):
        v = Poly.variable(n + 1, j)
        if j == i:
            v = v + Poly.variable(n + 1, n + 1)
        args.append(v)
    shifted = p.substitute(args, n + 1)
    base = p.substitute([Poly.variable(n + 1, j) for j in range(1, n + 1)], n + 1)
    diff = shifted - base
    quotient_terms = {}
    for exps, c in diff.terms.items():
        assert exps[-1] >= 1, "difference must vanish at h = 0"
        if exps[-1] == 1:
            key = exps[:-1]
            quotient_terms[key] = quotient_terms.get(key, Fraction(0)) + c
    return Poly(n, quotient_terms)
