"""Functorial multilinear algebra on finite-dimensional rational spaces.

Exterior powers, tensor products and Hom/currying of linear maps, all in
fixed ordered bases so that matrix representations are reproducible:

* the wedge basis of degree k over an n-dimensional space is the list of
  strictly increasing k-element subsets of {1..n} in lexicographic order;
* the tensor basis of V (x) W is ordered with the V index major;
* Hom(W, Z) is identified with W* (x) Z, W index major.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

from .linalg import RatMat

__all__ = [
    "IndexBasis",
    "index_basis",
    "exterior_power_map",
    "tensor_product_map",
    "curry_hom",
    "uncurry_hom",
]


@dataclass(frozen=True)
class IndexBasis:
    """Ordered wedge basis: increasing k-subsets of {1..n}, lexicographic."""

    ambient_dim: int
    degree: int
    subsets: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.subsets)

    def position(self, subset) -> int:
        subset = tuple(subset)
        try:
            return self._positions()[subset]
        except KeyError:
            raise ValueError(
                f"{subset} is not an increasing {self.degree}-subset of "
                f"{{1..{self.ambient_dim}}}"
            ) from None

    def _positions(self) -> dict[tuple[int, ...], int]:
        # recomputed on demand; bases are tiny and cached by index_basis()
        return {s: i for i, s in enumerate(self.subsets)}


@lru_cache(maxsize=None)
def index_basis(n: int, k: int) -> IndexBasis:
    if n < 0 or k < 0:
        raise ValueError(f"index basis needs n, k >= 0, got ({n}, {k})")
    subs = tuple(combinations(range(1, n + 1), k))
    assert len(subs) == comb(n, k)
    return IndexBasis(n, k, subs)


def exterior_power_map(a: RatMat, k: int) -> RatMat:
    """Matrix of the k-th exterior power of ``a`` in lexicographic wedge bases.

    The entry at (J, I) is the k x k minor of ``a`` with rows J and
    columns I.  Degree 0 gives the 1x1 identity and degree 1 gives ``a``
    itself.
    """
    if k < 0:
        raise ValueError(f"exterior power degree must be >= 0, got {k}")
    if k == 0:
        return RatMat.identity(1)
    if k == 1:
        return a
    row_basis = index_basis(a.rows, k)
    col_basis = index_basis(a.cols, k)
    entries = []
    for J in row_basis.subsets:
        rsel = [j - 1 for j in J]
        for I in col_basis.subsets:
            entries.append(a.submatrix(rsel, [i - 1 for i in I]).det())
    return RatMat(len(row_basis), len(col_basis), entries)


def tensor_product_map(a: RatMat, b: RatMat) -> RatMat:
    """Kronecker product in the standard ordered tensor basis."""
    rows = a.rows * b.rows
    cols = a.cols * b.cols
    entries = [0] * (rows * cols)
    for i1 in range(a.rows):
        for i2 in range(b.rows):
            r = i1 * b.rows + i2
            for j1 in range(a.cols):
                av = a[i1, j1]
                if av == 0:
                    continue
                for j2 in range(b.cols):
                    entries[r * cols + (j1 * b.cols + j2)] = av * b[i2, j2]
    return RatMat(rows, cols, entries)


def _check_dims(dims) -> tuple[int, int, int]:
    p, q, r = dims
    if p < 0 or q < 0 or r < 0:
        raise ValueError(f"dims must be >= 0, got {dims}")
    return p, q, r


def curry_hom(dims: tuple[int, int, int], t: RatMat) -> RatMat:
    """Reshape a map V (x) W -> Z into a map V -> Hom(W, Z).

    ``dims`` is (dim V, dim W, dim Z) = (p, q, r); ``t`` must be r x (p*q).
    The result is (q*r) x p with Hom(W, Z) ordered W index major, and
    uncurry_hom inverts it bit for bit.
    """
    p, q, r = _check_dims(dims)
    if t.rows != r or t.cols != p * q:
        raise ValueError(
            f"expected a {r}x{p * q} matrix for dims (p={p}, q={q}, r={r}), "
            f"got {t.rows}x{t.cols}"
        )
    entries = [0] * (q * r * p)
    for j in range(q):
        for l in range(r):
            row = j * r + l
            for i in range(p):
                entries[row * p + i] = t[l, i * q + j]
    return RatMat(q * r, p, entries)


def uncurry_hom(dims: tuple[int, int, int], m: RatMat) -> RatMat:
    """Inverse of curry_hom for the same ``dims``."""
    p, q, r = _check_dims(dims)
    if m.rows != q * r or m.cols != p:
        raise ValueError(
            f"expected a {q * r}x{p} matrix for dims (p={p}, q={q}, r={r}), "
            f"got {m.rows}x{m.cols}"
        )
    entries = [0] * (r * p * q)
    for l in range(r):
        for i in range(p):
            for j in range(q):
                entries[l * (p * q) + i * q + j] = m[j * r + l, i]
    return RatMat(r, p * q, entries)
