"""Exact symbolic calculus: polynomials, polynomial maps and differential forms.

Polynomials are sparse maps from exponent vectors to rational coefficients,
normalized so that zero coefficients are never stored; equality of the
canonical form decides polynomial equality with zero tolerance.  Variables
are positional (s1..sn), which keeps composition free of renaming pitfalls.

Germs of pointed smooth maps are represented by pointed polynomial maps
(all constant terms zero).  Differential k-forms carry one polynomial
coefficient per element of the lexicographic wedge basis.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .linalg import RatMat, rational
from .multilinear import index_basis

__all__ = [
    "Poly",
    "PolyMap",
    "PolyForm",
    "compose_maps",
    "jacobian_at_zero",
    "wedge_forms",
    "pullback_form",
    "exterior_derivative",
    "form_value_at_zero",
]


class Poly:
    """Sparse multivariate polynomial over the rationals.

    ``terms`` maps exponent tuples of length ``nvars`` to nonzero
    coefficients.  Instances are treated as immutable values.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], object] | None = None):
        if nvars < 0:
            raise ValueError(f"negative variable count {nvars}")
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != nvars:
                    raise ValueError(
                        f"exponent vector {exps} has length {len(exps)}, expected {nvars}"
                    )
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                coeff = rational(coeff)
                if coeff != 0:
                    clean[exps] = coeff
        self.nvars = nvars
        self.terms = clean

    # -- construction -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value) -> "Poly":
        return cls(nvars, {(0,) * nvars: rational(value)})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Poly":
        """The coordinate s_i, with i in 1..nvars."""
        if not 1 <= i <= nvars:
            raise ValueError(f"variable s{i} out of range for {nvars} variables")
        exps = tuple(1 if j == i - 1 else 0 for j in range(nvars))
        return cls(nvars, {exps: 1})

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(
                    f"mixing polynomials in {self.nvars} and {other.nvars} variables"
                )
            return other
        return Poly.constant(self.nvars, other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            terms[exps] = terms.get(exps, Fraction(0)) + c
        return Poly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                terms[exps] = terms.get(exps, Fraction(0)) + c1 * c2
        return Poly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"polynomial powers need integer exponents >= 0, got {exponent}")
        result = Poly.constant(self.nvars, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- calculus and evaluation -------------------------------------------

    def derivative(self, i: int) -> "Poly":
        """Partial derivative with respect to s_i (i in 1..nvars)."""
        if not 1 <= i <= self.nvars:
            raise ValueError(f"variable s{i} out of range for {self.nvars} variables")
        terms: dict[tuple[int, ...], Fraction] = {}
        for exps, c in self.terms.items():
            e = exps[i - 1]
            if e == 0:
                continue
            new = list(exps)
            new[i - 1] = e - 1
            key = tuple(new)
            terms[key] = terms.get(key, Fraction(0)) + c * e
        return Poly(self.nvars, terms)

    def substitute(self, args: Sequence["Poly"], nvars: int) -> "Poly":
        """Substitute args[i] for s_{i+1}; the result lives in ``nvars`` variables."""
        if len(args) != self.nvars:
            raise ValueError(
                f"substitution needs {self.nvars} arguments, got {len(args)}"
            )
        for a in args:
            if a.nvars != nvars:
                raise ValueError(
                    f"substitution argument in {a.nvars} variables, expected {nvars}"
                )
        result = Poly.zero(nvars)
        for exps, c in self.terms.items():
            term = Poly.constant(nvars, c)
            for a, e in zip(args, exps):
                if e:
                    term = term * (a**e)
            result = result + term
        return result

    def evaluate(self, point: Sequence) -> Fraction:
        point = [rational(x) for x in point]
        if len(point) != self.nvars:
            raise ValueError(f"evaluation needs {self.nvars} coordinates, got {len(point)}")
        total = Fraction(0)
        for exps, c in self.terms.items():
            v = c
            for x, e in zip(point, exps):
                if e:
                    v *= x**e
            total += v
        return total

    @property
    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def linear_coefficient(self, i: int) -> Fraction:
        """Coefficient of s_i (i in 1..nvars)."""
        exps = tuple(1 if j == i - 1 else 0 for j in range(self.nvars))
        return self.terms.get(exps, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    # -- value semantics ----------------------------------------------------

    def _key(self):
        return (self.nvars, tuple(sorted(self.terms.items())))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)
        rendered = []
        for exps, coeff in items:
            factors = [
                f"s{i + 1}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(exps)
                if e > 0
            ]
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            rendered.append(("-" if coeff < 0 else "+", body))
        sign, body = rendered[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in rendered[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self.nvars}, {self})"


class PolyMap:
    """Polynomial map between Euclidean coordinate domains.

    One component polynomial per target coordinate, each in the source
    variables.  The map is pointed when every constant term vanishes.
    """

    __slots__ = ("source_dim", "target_dim", "components")

    def __init__(self, source_dim: int, target_dim: int, components: Sequence[Poly]):
        components = tuple(components)
        if len(components) != target_dim:
            raise ValueError(
                f"map into R^{target_dim} needs {target_dim} components, got {len(components)}"
            )
        for c in components:
            if c.nvars != source_dim:
                raise ValueError(
                    f"component in {c.nvars} variables, expected {source_dim}"
                )
        self.source_dim = source_dim
        self.target_dim = target_dim
        self.components = components

    @classmethod
    def identity(cls, n: int) -> "PolyMap":
        return cls(n, n, [Poly.variable(n, i) for i in range(1, n + 1)])

    @classmethod
    def zero_map(cls, source_dim: int, target_dim: int) -> "PolyMap":
        return cls(source_dim, target_dim, [Poly.zero(source_dim)] * target_dim)

    @classmethod
    def linear(cls, mat: RatMat) -> "PolyMap":
        """The linear map with matrix ``mat`` (rows index target coordinates)."""
        n = mat.cols
        comps = []
        for i in range(mat.rows):
            p = Poly.zero(n)
            for j in range(n):
                if mat[i, j] != 0:
                    p = p + Poly.variable(n, j + 1) * mat[i, j]
            comps.append(p)
        return cls(n, mat.rows, comps)

    @property
    def is_pointed(self) -> bool:
        return all(c.constant_term == 0 for c in self.components)

    def evaluate(self, point: Sequence) -> list[Fraction]:
        return [c.evaluate(point) for c in self.components]

    def _key(self):
        return (self.source_dim, self.target_dim, self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self) -> str:
        body = ", ".join(str(c) for c in self.components)
        return f"PolyMap(R^{self.source_dim} -> R^{self.target_dim}: [{body}])"


def compose_maps(f: PolyMap, g: PolyMap) -> PolyMap:
    """The composite f after g, by exact polynomial substitution."""
    if g.target_dim != f.source_dim:
        raise ValueError(
            f"cannot compose: inner map lands in R^{g.target_dim}, "
            f"outer map starts from R^{f.source_dim}"
        )
    comps = [c.substitute(g.components, g.source_dim) for c in f.components]
    return PolyMap(g.source_dim, f.target_dim, comps)


def jacobian_at_zero(f: PolyMap) -> RatMat:
    """Matrix of degree-1 coefficients of a pointed map."""
    if not f.is_pointed:
        bad = [i + 1 for i, c in enumerate(f.components) if c.constant_term != 0]
        raise ValueError(f"map is not pointed: components {bad} have constant terms")
    entries = []
    for c in f.components:
        entries.extend(c.linear_coefficient(j) for j in range(1, f.source_dim + 1))
    return RatMat(f.target_dim, f.source_dim, entries)


class PolyForm:
    """Differential form of fixed degree with polynomial coefficients.

    Coefficients are aligned with index_basis(domain_dim, degree); a degree
    exceeding the domain dimension leaves an empty coefficient list, the
    zero form of that degree.
    """

    __slots__ = ("domain_dim", "degree", "coeffs")

    def __init__(self, domain_dim: int, degree: int, coeffs: Sequence[Poly]):
        basis = index_basis(domain_dim, degree)
        coeffs = tuple(coeffs)
        if len(coeffs) != len(basis):
            raise ValueError(
                f"degree {degree} form on R^{domain_dim} needs {len(basis)} "
                f"coefficients, got {len(coeffs)}"
            )
        for c in coeffs:
            if c.nvars != domain_dim:
                raise ValueError(
                    f"coefficient in {c.nvars} variables, expected {domain_dim}"
                )
        self.domain_dim = domain_dim
        self.degree = degree
        self.coeffs = coeffs

    @classmethod
    def zero(cls, domain_dim: int, degree: int) -> "PolyForm":
        count = len(index_basis(domain_dim, degree))
        return cls(domain_dim, degree, [Poly.zero(domain_dim)] * count)

    @classmethod
    def from_terms(
        cls, domain_dim: int, degree: int, terms: Mapping[tuple[int, ...], Poly]
    ) -> "PolyForm":
        basis = index_basis(domain_dim, degree)
        coeffs = [Poly.zero(domain_dim)] * len(basis)
        for subset, poly in terms.items():
            coeffs[basis.position(subset)] = coeffs[basis.position(subset)] + poly
        return cls(domain_dim, degree, coeffs)

    @classmethod
    def coordinate_differential(cls, domain_dim: int, i: int) -> "PolyForm":
        """The constant 1-form d s_i."""
        return cls.from_terms(domain_dim, 1, {(i,): Poly.constant(domain_dim, 1)})

    def coefficient(self, subset) -> Poly:
        return self.coeffs[index_basis(self.domain_dim, self.degree).position(subset)]

    def __add__(self, other: "PolyForm") -> "PolyForm":
        self._require_like(other)
        return PolyForm(
            self.domain_dim,
            self.degree,
            [a + b for a, b in zip(self.coeffs, other.coeffs)],
        )

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        self._require_like(other)
        return PolyForm(
            self.domain_dim,
            self.degree,
            [a - b for a, b in zip(self.coeffs, other.coeffs)],
        )

    def __neg__(self) -> "PolyForm":
        return PolyForm(self.domain_dim, self.degree, [-c for c in self.coeffs])

    def scale(self, factor) -> "PolyForm":
        """Multiply every coefficient by a polynomial or scalar."""
        if not isinstance(factor, Poly):
            factor = Poly.constant(self.domain_dim, factor)
        return PolyForm(self.domain_dim, self.degree, [factor * c for c in self.coeffs])

    def _require_like(self, other: "PolyForm") -> None:
        if self.domain_dim != other.domain_dim or self.degree != other.degree:
            raise ValueError(
                f"form mismatch: degree {self.degree} on R^{self.domain_dim} vs "
                f"degree {other.degree} on R^{other.domain_dim}"
            )

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyForm):
            return NotImplemented
        return (
            self.domain_dim == other.domain_dim
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.domain_dim, self.degree, self.coeffs))

    def __repr__(self) -> str:
        basis = index_basis(self.domain_dim, self.degree)
        parts = [
            f"({c}) d{list(s)}"
            for s, c in zip(basis.subsets, self.coeffs)
            if not c.is_zero()
        ]
        body = " + ".join(parts) if parts else "0"
        return f"PolyForm(R^{self.domain_dim}, deg {self.degree}: {body})"


def _merge_ordered(I: tuple[int, ...], J: tuple[int, ...]):
    """Sorted merge of two disjoint increasing tuples and the merge sign.

    Returns (sign, merged) or None when the tuples intersect.  The sign is
    the parity of the permutation sorting the concatenation I + J.
    """
    if set(I) & set(J):
        return None
    inversions = 0
    for j in J:
        inversions += sum(1 for i in I if i > j)
    merged = tuple(sorted(I + J))
    return (-1 if inversions % 2 else 1), merged


def wedge_forms(a: PolyForm, b: PolyForm) -> PolyForm:
    """Exterior product; degrees add and signs follow the merge parity."""
    if a.domain_dim != b.domain_dim:
        raise ValueError(
            f"wedge of forms on R^{a.domain_dim} and R^{b.domain_dim}"
        )
    n = a.domain_dim
    degree = a.degree + b.degree
    acc: dict[tuple[int, ...], Poly] = {}
    a_basis = index_basis(n, a.degree).subsets
    b_basis = index_basis(n, b.degree).subsets
    for I, p in zip(a_basis, a.coeffs):
        if p.is_zero():
            continue
        for J, q in zip(b_basis, b.coeffs):
            if q.is_zero():
                continue
            merged = _merge_ordered(I, J)
            if merged is None:
                continue
            sign, K = merged
            contrib = p * q if sign > 0 else -(p * q)
            acc[K] = acc.get(K, Poly.zero(n)) + contrib
    return PolyForm.from_terms(n, degree, acc)


def exterior_derivative(w: PolyForm) -> PolyForm:
    """Coefficient-wise exterior derivative; applying it twice gives zero."""
    n, k = w.domain_dim, w.degree
    acc: dict[tuple[int, ...], Poly] = {}
    for I, p in zip(index_basis(n, k).subsets, w.coeffs):
        if p.is_zero():
            continue
        for i in range(1, n + 1):
            if i in I:
                continue
            dp = p.derivative(i)
            if dp.is_zero():
                continue
            sign, K = _merge_ordered((i,), I)
            acc[K] = acc.get(K, Poly.zero(n)) + (dp if sign > 0 else -dp)
    return PolyForm.from_terms(n, k + 1, acc)


def pullback_form(w: PolyForm, f: PolyMap) -> PolyForm:
    """Exact pullback of ``w`` along ``f``.

    Coefficients are composed with ``f`` and each target differential is
    pushed through the differentials of the components, so the expansion
    by minors of the Jacobian happens implicitly through wedge products.
    """
    if f.target_dim != w.domain_dim:
        raise ValueError(
            f"cannot pull a form on R^{w.domain_dim} back along a map into R^{f.target_dim}"
        )
    n = f.source_dim
    k = w.degree
    if k == 0:
        return PolyForm(n, 0, (w.coeffs[0].substitute(f.components, n),))
    d_components = [
        exterior_derivative(PolyForm(n, 0, (c,))) for c in f.components
    ]
    result = PolyForm.zero(n, k)
    unit = PolyForm(n, 0, (Poly.constant(n, 1),))
    for J, coeff in zip(index_basis(w.domain_dim, k).subsets, w.coeffs):
        if coeff.is_zero():
            continue
        wedge = unit
        for j in J:
            wedge = wedge_forms(wedge, d_components[j - 1])
        result = result + wedge.scale(coeff.substitute(f.components, n))
    return result


def form_value_at_zero(w: PolyForm) -> RatMat:
    """Constant terms of the coefficients, as a row in the wedge dual basis."""
    return RatMat.row([c.constant_term for c in w.coeffs])
