"""Differential forms as compatible families of chart-level forms.

A presented form assigns a polynomial form to every chart; it is
compatible when pulling the target form back along any presented germ
recovers the source form exactly.  Compatible families evaluate at the
marked point to linear functionals on the degree-k fibre colimit, which is
where all pointwise comparisons happen.

The space of all global forms is never materialized: the module works with
finite families and their pointwise spans.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import RatMat, kernel_basis, solve_exact
from .presentation import GermPresentation, PresentedMap, require_valid
from .symcalc import (
    PolyForm,
    PolyMap,
    form_value_at_zero,
    jacobian_at_zero,
    pullback_form,
)
from .tangent import apply_fibre_functor, pushforward_map, rho_map, vect_colimit
from .multilinear import exterior_power_map

__all__ = [
    "PresentedForm",
    "PointForm",
    "PresentedSection",
    "CompatibilityReport",
    "SectionReport",
    "IncompatibleFormError",
    "check_form_compatibility",
    "check_on_top_charts",
    "vanishes_at_point",
    "form_at_point",
    "restrict_ambient_form",
    "tilde_form_at_point",
    "tilde_form_along_map",
    "rho_dual",
    "reachable_fibre_dim",
    "check_section",
]


@dataclass(frozen=True)
class PresentedForm:
    """One polynomial form per chart; a candidate global form."""

    degree: int
    chart_forms: dict[str, PolyForm]
    name: str = ""

    def __eq__(self, other):
        if not isinstance(other, PresentedForm):
            return NotImplemented
        return self.degree == other.degree and self.chart_forms == other.chart_forms


@dataclass(frozen=True)
class PointForm:
    """A linear functional on the degree-k fibre colimit at the marked point."""

    degree: int
    coords: RatMat  # 1 x fibre_dim row

    def is_zero(self) -> bool:
        return self.coords.is_zero()


@dataclass
class CompatibilityReport:
    ok: bool
    failing_arrow: str | None = None
    residual: PolyForm | None = None

    def __bool__(self) -> bool:
        return self.ok


class IncompatibleFormError(ValueError):
    def __init__(self, message: str, failing_arrow: str | None = None):
        super().__init__(message)
        self.failing_arrow = failing_arrow


def _require_shapes(p: GermPresentation, w: PresentedForm) -> None:
    for cid, dim in p.charts:
        form = w.chart_forms.get(cid)
        if form is None:
            raise ValueError(f"form {w.name!r} has no component on chart {cid!r}")
        if form.domain_dim != dim:
            raise ValueError(
                f"component on chart {cid!r} lives on R^{form.domain_dim}, "
                f"chart has dimension {dim}"
            )
        if form.degree != w.degree:
            raise ValueError(
                f"component on chart {cid!r} has degree {form.degree}, "
                f"family is declared degree {w.degree}"
            )


def check_form_compatibility(p: GermPresentation, w: PresentedForm) -> CompatibilityReport:
    """A family is compatible when every presented germ pulls the target
    component back to the source component, exactly.  On failure the
    counterexample arrow and the exact polynomial residual are reported."""
    require_valid(p)
    _require_shapes(p, w)
    for a in p.arrows:
        pulled = pullback_form(w.chart_forms[a.dst], a.germ)
        residual = pulled - w.chart_forms[a.src]
        if not residual.is_zero():
            return CompatibilityReport(False, a.name, residual)
    return CompatibilityReport(True)


def check_on_top_charts(p: GermPresentation, w: PresentedForm, n: int) -> CompatibilityReport:
    """Compatibility checked only along germs between top-dimensional charts.

    Only defined when the degree equals ``n`` and ``n`` is the maximal
    chart dimension.
    """
    require_valid(p)
    max_dim = max((dim for _, dim in p.charts), default=0)
    if n != max_dim:
        raise ValueError(f"top dimension is {max_dim}, got n={n}")
    if w.degree != n:
        raise ValueError(
            f"top-chart checking needs degree {n}, family has degree {w.degree}"
        )
    _require_shapes(p, w)
    for a in p.arrows:
        if p.chart_dim(a.src) != n or p.chart_dim(a.dst) != n:
            continue
        pulled = pullback_form(w.chart_forms[a.dst], a.germ)
        residual = pulled - w.chart_forms[a.src]
        if not residual.is_zero():
            return CompatibilityReport(False, a.name, residual)
    return CompatibilityReport(True)


def vanishes_at_point(w: PresentedForm) -> bool:
    """True when every component evaluates to zero at the marked point."""
    return all(
        form_value_at_zero(form).is_zero() for form in w.chart_forms.values()
    )


def form_at_point(p: GermPresentation, w: PresentedForm) -> PointForm:
    """Assemble the per-chart values at the marked point into a functional
    on the degree-k fibre colimit.

    Compatibility is required and implies that the assembled row
    annihilates the relation space; that is still asserted rather than
    trusted."""
    report = check_form_compatibility(p, w)
    if not report.ok:
        raise IncompatibleFormError(
            f"form {w.name!r} is incompatible (counterexample arrow {report.failing_arrow!r})",
            report.failing_arrow,
        )
    colim = vect_colimit(apply_fibre_functor(p, w.degree))
    blocks = [form_value_at_zero(w.chart_forms[cid]) for cid, _ in p.charts]
    assembled = RatMat.hstack(blocks, rows=1)
    if not (assembled @ colim.relations.relation_basis).is_zero():
        raise AssertionError(
            "internal error: a compatible family failed to annihilate the relations"
        )
    return PointForm(w.degree, assembled @ colim.section)


def restrict_ambient_form(p: GermPresentation, w_amb: PolyForm) -> PresentedForm:
    """Pull an ambient form back along every chart embedding.

    The result is automatically compatible; that is asserted, not assumed.
    """
    require_valid(p)
    if p.ambient is None:
        raise ValueError(f"presentation {p.name!r} carries no ambient data")
    if w_amb.domain_dim != p.ambient.dim:
        raise ValueError(
            f"ambient form lives on R^{w_amb.domain_dim}, ambient space is R^{p.ambient.dim}"
        )
    chart_forms = {
        cid: pullback_form(w_amb, p.ambient.embeddings[cid]) for cid, _ in p.charts
    }
    result = PresentedForm(w_amb.degree, chart_forms, name="ambient-restriction")
    report = check_form_compatibility(p, result)
    if not report.ok:
        raise AssertionError(
            "internal error: ambient restriction produced an incompatible family "
            f"(arrow {report.failing_arrow!r})"
        )
    return result


def _tangent_pushforward_to_ambient(p: GermPresentation) -> RatMat:
    """Matrix of the map from the tangent fibre colimit into the ambient
    tangent space, assembled from embedding Jacobians."""
    tangent = vect_colimit(apply_fibre_functor(p, 1))
    blocks = [
        jacobian_at_zero(p.ambient.embeddings[cid]) for cid, _ in p.charts
    ]
    assembled = RatMat.hstack(blocks, rows=p.ambient.dim)
    if not (assembled @ tangent.relations.relation_basis).is_zero():
        raise AssertionError(
            "internal error: ambient Jacobians do not annihilate the tangent relations"
        )
    return assembled @ tangent.section


def tilde_form_at_point(p: GermPresentation, w_amb: PolyForm) -> RatMat:
    """Value of an ambient form on the k-th wedge of the tangent fibre.

    Computed as the pullback of the ambient value along the exterior power
    of the tangent pushforward into the ambient space; returned as a row
    functional on the wedge of the tangent colimit."""
    require_valid(p)
    if p.ambient is None:
        raise ValueError(f"presentation {p.name!r} carries no ambient data")
    if w_amb.domain_dim != p.ambient.dim:
        raise ValueError(
            f"ambient form lives on R^{w_amb.domain_dim}, ambient space is R^{p.ambient.dim}"
        )
    push = _tangent_pushforward_to_ambient(p)
    return form_value_at_zero(w_amb) @ exterior_power_map(push, w_amb.degree)


def tilde_form_along_map(
    m: PresentedMap, target_value: RatMat | PointForm, k: int
) -> RatMat:
    """Pull a functional on the k-th wedge of the target tangent fibre back
    along the wedge of the tangent pushforward of ``m``.

    A plain row is read as a functional on the tangent wedge.  A PointForm
    (a functional on the target's degree-k fibre) is first carried across
    the comparison map; when it does not factor through it, no tangent-wedge
    value exists and the call is rejected.
    """
    if isinstance(target_value, PointForm):
        carried = solve_exact(
            rho_dual(m.target, k), target_value.coords.transpose()
        )
        if carried is None:
            raise ValueError(
                "the pointwise value does not factor through the comparison map"
            )
        target_functional = carried.transpose()
    else:
        target_functional = target_value
    _, wedge_push = pushforward_map(m, k)
    if target_functional.rows != 1 or target_functional.cols != wedge_push.rows:
        raise ValueError(
            f"expected a 1x{wedge_push.rows} functional, got "
            f"{target_functional.rows}x{target_functional.cols}"
        )
    return target_functional @ wedge_push


def rho_dual(p: GermPresentation, k: int) -> RatMat:
    """Transpose of the comparison map: functionals on the tangent wedge
    restrict to functionals on the degree-k fibre."""
    return rho_map(p, k).transpose()


def reachable_fibre_dim(p: GermPresentation, forms: list[PresentedForm]) -> int:
    """Dimension of the span of the pointwise values of the given family.

    This realizes, for a finite family, the fibre of globally extendable
    forms at the marked point.  An incompatible member is rejected by name.
    """
    if not forms:
        return 0
    degrees = {w.degree for w in forms}
    if len(degrees) > 1:
        raise ValueError(f"mixed degrees in family: {sorted(degrees)}")
    rows = []
    for idx, w in enumerate(forms):
        try:
            rows.append(form_at_point(p, w).coords)
        except IncompatibleFormError as exc:
            label = w.name or f"#{idx}"
            raise ValueError(f"family member {label} is incompatible: {exc}") from exc
    return RatMat.vstack(rows).rank()


@dataclass(frozen=True)
class PresentedSection:
    """Per-chart symbolic data for a section of the tangent or cotangent
    bundle over a wedge-type presentation.

    For the tangent bundle each chart carries a polynomial map from chart
    coordinates to coefficient vectors in the chart's tangent frame; for
    the cotangent bundle the coefficients are dual, with an optional
    functional prescribing the value at the wedge point."""

    bundle: str  # "tangent" | "cotangent"
    chart_data: dict[str, PolyMap]
    point_functional: RatMat | None = None
    name: str = ""
    space: str = ""


@dataclass
class SectionReport:
    valid: bool
    bundle: str
    constraints: list[str] = field(default_factory=list)
    functional: RatMat | None = None


def _section_values_at_zero(p: GermPresentation, s: PresentedSection) -> dict[str, list]:
    values = {}
    for cid, dim in p.charts:
        data = s.chart_data.get(cid)
        if data is None:
            if dim == 0:
                values[cid] = []
                continue
            raise ValueError(f"section gives no data on chart {cid!r}")
        if data.source_dim != dim or data.target_dim != dim:
            raise ValueError(
                f"section data on chart {cid!r} has shape R^{data.source_dim} -> "
                f"R^{data.target_dim}, expected R^{dim} -> R^{dim}"
            )
        values[cid] = [c.constant_term for c in data.components]
    return values


def check_section(p: GermPresentation, s: PresentedSection) -> SectionReport:
    """Decide smoothness of a section across the wedge point.

    Tangent case: the cocone images of the chart values at the marked
    point must agree as a single vector of the tangent colimit; with a
    zero-dimensional chart present this pins the common value to zero and
    forces the vanishing of every component whose cocone image is
    independent.  Cotangent case: a single functional on the tangent
    colimit must restrict to every chart's value, decided by an exact
    linear solve.  Only wedge-type presentations are accepted; elsewhere
    the smoothness criterion encoded here is not justified."""
    require_valid(p)
    if not p.wedge_type:
        raise ValueError(
            f"presentation {p.name!r} is not wedge-type; section checking is undefined"
        )
    if s.bundle not in ("tangent", "cotangent"):
        raise ValueError(f"unknown bundle selector {s.bundle!r}")

    tangent = vect_colimit(apply_fibre_functor(p, 1))
    values = _section_values_at_zero(p, s)

    if s.bundle == "tangent":
        images = {}
        for cid, _ in p.charts:
            idx = p.chart_index(cid)
            images[cid] = tangent.cocones[idx] @ RatMat.column(values[cid])
        chart_ids = p.chart_ids
        valid = all(
            images[chart_ids[0]] == images[cid] for cid in chart_ids[1:]
        )
        constraints = []
        has_point_chart = any(dim == 0 for _, dim in p.charts)
        if has_point_chart:
            for cid, dim in p.charts:
                if dim == 0:
                    continue
                cocone = tangent.cocones[p.chart_index(cid)]
                ker = kernel_basis(cocone)
                for comp in range(dim):
                    if all(ker[comp, c] == 0 for c in range(ker.cols)):
                        constraints.append(
                            f"component {comp + 1} of chart {cid!r} must vanish "
                            f"at the marked point"
                        )
        else:
            constraints.append("all chart values must share one colimit image")
        return SectionReport(valid, "tangent", constraints)

    # cotangent: find one functional restricting to every chart value
    rows = []
    rhs = []
    for cid, _ in p.charts:
        cocone = tangent.cocones[p.chart_index(cid)]
        rows.append(cocone.transpose())
        rhs.append(RatMat.column(values[cid]))
    system = RatMat.vstack(rows, cols=tangent.dim)
    target = RatMat.vstack(rhs, cols=1)
    constraints = [
        f"functional l on the {tangent.dim}-dimensional tangent fibre with "
        f"l . cocone = chart value at the marked point, for every chart"
    ]
    if s.point_functional is not None:
        ell = s.point_functional
        if ell.rows != 1 or ell.cols != tangent.dim:
            raise ValueError(
                f"prescribed functional must be 1x{tangent.dim}, got {ell.rows}x{ell.cols}"
            )
        ok = system @ ell.transpose() == target
        return SectionReport(ok, "cotangent", constraints, ell if ok else None)
    solution = solve_exact(system, target)
    if solution is None:
        return SectionReport(False, "cotangent", constraints, None)
    return SectionReport(True, "cotangent", constraints, solution.transpose())
