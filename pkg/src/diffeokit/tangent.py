"""Fibre functors and their colimits: the engine behind every dimension count.

A presentation is turned into a diagram of finite-dimensional vector
spaces by applying, chart by chart, the degree-k wedge of the tangent
space at the marked point; arrows become exterior powers of Jacobians.
Colimits of such diagrams are computed as quotients of the direct sum by
the per-arrow relations, limits as kernels of the difference map.

The colimit basis is the complement of the relation span in direct-sum
coordinates, deterministic from pivot order, so cocone matrices are
reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .linalg import QuotientPresentation, RatMat, kernel_basis
from .multilinear import exterior_power_map
from .presentation import GermPresentation, PresentedMap, require_valid, require_valid_map
from .symcalc import jacobian_at_zero

__all__ = [
    "VectDiagram",
    "ColimitResult",
    "LimitResult",
    "apply_fibre_functor",
    "vect_colimit",
    "vect_limit",
    "rho_map",
    "pushforward_map",
]


@dataclass
class VectDiagram:
    """Objects with dimensions, arrows as matrices between them."""

    objects: list[int]
    arrows: list[tuple[int, int, RatMat]]

    def check_shapes(self) -> None:
        for src, dst, mat in self.arrows:
            if not (0 <= src < len(self.objects) and 0 <= dst < len(self.objects)):
                raise ValueError(f"arrow endpoints ({src}, {dst}) out of range")
            if mat.rows != self.objects[dst] or mat.cols != self.objects[src]:
                raise ValueError(
                    f"arrow {src} -> {dst} has shape {mat.rows}x{mat.cols}, "
                    f"expected {self.objects[dst]}x{self.objects[src]}"
                )


def _offsets(dims: list[int]) -> list[int]:
    offsets = []
    total = 0
    for d in dims:
        offsets.append(total)
        total += d
    return offsets


def apply_fibre_functor(p: GermPresentation, k: int) -> VectDiagram:
    """Degree-k wedge of the marked-point tangent space, chart by chart.

    Objects are C(dim, k) in chart order; each presented arrow becomes the
    k-th exterior power of the Jacobian of its germ at the marked point.
    Implicit identity arrows are omitted: they contribute only trivial
    relations, which never change a colimit (this is property-tested).
    """
    if k < 0:
        raise ValueError(f"degree must be >= 0, got {k}")
    require_valid(p)
    objects = [comb(dim, k) for _, dim in p.charts]
    arrows = []
    for a in p.arrows:
        mat = exterior_power_map(jacobian_at_zero(a.germ), k)
        arrows.append((p.chart_index(a.src), p.chart_index(a.dst), mat))
    diagram = VectDiagram(objects, arrows)
    diagram.check_shapes()
    return diagram


@dataclass
class ColimitResult:
    """Colimit of a diagram of vector spaces, in direct-sum coordinates.

    ``cocones[i]`` maps object i into the colimit; for every arrow
    (i, j, A) the identity cocones[j] @ A == cocones[i] holds exactly, and
    the stacked cocones are jointly surjective.
    """

    dim: int
    cocones: list[RatMat]
    relations: QuotientPresentation

    @property
    def projection(self) -> RatMat:
        return self.relations.projection

    @property
    def section(self) -> RatMat:
        return self.relations.section


def vect_colimit(d: VectDiagram) -> ColimitResult:
    """Direct sum of the objects modulo one relation per arrow and source
    basis vector: the image of the vector through the arrow minus the
    vector itself."""
    d.check_shapes()
    offsets = _offsets(d.objects)
    total = sum(d.objects)
    rel_cols: list[list] = []
    for src, dst, mat in d.arrows:
        for s in range(d.objects[src]):
            col = [0] * total
            for r in range(d.objects[dst]):
                col[offsets[dst] + r] += mat[r, s]
            col[offsets[src] + s] -= 1
            rel_cols.append(col)
    rel_data = [rel_cols[j][i] for i in range(total) for j in range(len(rel_cols))]
    relations = QuotientPresentation.from_relation_span(
        total, RatMat(total, len(rel_cols), rel_data)
    )
    cocones = [
        relations.projection.column_block(offsets[i], d.objects[i])
        for i in range(len(d.objects))
    ]
    return ColimitResult(relations.quotient_dim, cocones, relations)


@dataclass
class LimitResult:
    """Limit of a diagram: kernel of the difference map on the product."""

    dim: int
    cones: list[RatMat]


def vect_limit(d: VectDiagram) -> LimitResult:
    d.check_shapes()
    offsets = _offsets(d.objects)
    total = sum(d.objects)
    constraint_rows: list[list] = []
    for src, dst, mat in d.arrows:
        for r in range(d.objects[dst]):
            row = [0] * total
            for s in range(d.objects[src]):
                row[offsets[src] + s] += mat[r, s]
            row[offsets[dst] + r] -= 1
            constraint_rows.append(row)
    constraints = RatMat.from_rows(constraint_rows, cols=total)
    basis = kernel_basis(constraints)
    cones = []
    for i, dim in enumerate(d.objects):
        cones.append(
            RatMat(
                dim,
                basis.cols,
                [basis[offsets[i] + r, c] for r in range(dim) for c in range(basis.cols)],
            )
        )
    return LimitResult(basis.cols, cones)


def _assembled_map(blocks: list[RatMat], target_dim: int) -> RatMat:
    return RatMat.hstack(blocks, rows=target_dim)


def _descend(assembled: RatMat, colimit: ColimitResult, what: str) -> RatMat:
    """Factor a map defined on the direct sum through the colimit.

    Well-definedness (the relation span is annihilated) is always checked
    rather than assumed; a failure here means an internal inconsistency in
    Jacobians or sign conventions and is surfaced loudly.
    """
    residual = assembled @ colimit.relations.relation_basis
    if not residual.is_zero():
        raise AssertionError(
            f"internal error: {what} does not annihilate the relation space"
        )
    return assembled @ colimit.section


def rho_map(p: GermPresentation, k: int) -> RatMat:
    """Comparison map from the degree-k fibre colimit to the k-th wedge of
    the tangent fibre.

    On the slot of chart i it is the exterior power of the tangent cocone,
    descended through the colimit projection.
    """
    tangent = vect_colimit(apply_fibre_functor(p, 1))
    ck = vect_colimit(apply_fibre_functor(p, k))
    target_dim = comb(tangent.dim, k)
    blocks = [exterior_power_map(c, k) for c in tangent.cocones]
    assembled = _assembled_map(blocks, target_dim)
    return _descend(assembled, ck, "the comparison map")


def pushforward_map(m: PresentedMap, k: int) -> tuple[RatMat, RatMat]:
    """Maps induced on the degree-k fibre and on the k-th wedge of the
    tangent fibre, asserted to commute with the comparison maps."""
    if k < 0:
        raise ValueError(f"degree must be >= 0, got {k}")
    require_valid_map(m)
    source, target = m.source, m.target

    def induced(degree: int) -> RatMat:
        src_colim = vect_colimit(apply_fibre_functor(source, degree))
        dst_colim = vect_colimit(apply_fibre_functor(target, degree))
        blocks = []
        for cid, _ in source.charts:
            tchart, germ = m.assignments[cid]
            wedge_jac = exterior_power_map(jacobian_at_zero(germ), degree)
            blocks.append(dst_colim.cocones[target.chart_index(tchart)] @ wedge_jac)
        assembled = _assembled_map(blocks, dst_colim.dim)
        return _descend(assembled, src_colim, "the induced fibre map")

    fibre_push = induced(k)
    tangent_push = induced(1)
    wedge_push = exterior_power_map(tangent_push, k)

    lhs = rho_map(target, k) @ fibre_push
    rhs = wedge_push @ rho_map(source, k)
    if lhs != rhs:
        raise AssertionError(
            "internal error: induced maps do not commute with the comparison map"
        )
    return fibre_push, wedge_push
