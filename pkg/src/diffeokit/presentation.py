"""Finite presentations of the category of pointed plot germs at a point.

A presentation lists charts (Euclidean domains of pointed plots) and
pointed polynomial transition germs between them, optionally together with
a pointed embedding of every chart into a common ambient space.  Identity
arrows are implicit on every chart.

The tool computes exactly over the presented fragment; answers are answers
about the fragment.  Whether a fragment is cofinal in the full germ
category is the user's responsibility and in general undecidable from
finite data.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .symcalc import PolyMap, compose_maps

__all__ = [
    "Arrow",
    "Ambient",
    "GermPresentation",
    "PresentedMap",
    "ValidationReport",
    "ClosureResult",
    "FilterednessReport",
    "validate_presentation",
    "composition_closure",
    "filteredness",
    "validate_presented_map",
]


@dataclass(frozen=True)
class Arrow:
    """A named pointed germ between two charts."""

    name: str
    src: str
    dst: str
    germ: PolyMap


@dataclass(frozen=True)
class Ambient:
    """A pointed embedding of every chart into R^dim."""

    dim: int
    embeddings: dict[str, PolyMap]

    def __eq__(self, other):
        if not isinstance(other, Ambient):
            return NotImplemented
        return self.dim == other.dim and self.embeddings == other.embeddings


class GermPresentation:
    """Charts plus pointed transition germs, the finite input to all fibre
    computations.

    ``wedge_type`` marks presentations whose charts meet only at the marked
    point; the section checker is defined only for those.
    """

    def __init__(
        self,
        name: str,
        charts: list[tuple[str, int]],
        arrows: list[Arrow],
        ambient: Ambient | None = None,
        wedge_type: bool = False,
    ):
        self.name = name
        self.charts = [(str(cid), int(dim)) for cid, dim in charts]
        self.arrows = list(arrows)
        self.ambient = ambient
        self.wedge_type = bool(wedge_type)
        self._dims = dict(self.charts)
        self._index = {cid: i for i, (cid, _) in enumerate(self.charts)}

    @property
    def chart_ids(self) -> list[str]:
        return [cid for cid, _ in self.charts]

    def has_chart(self, cid: str) -> bool:
        return cid in self._dims

    def chart_dim(self, cid: str) -> int:
        try:
            return self._dims[cid]
        except KeyError:
            raise ValueError(f"unknown chart {cid!r} in space {self.name!r}") from None

    def chart_index(self, cid: str) -> int:
        try:
            return self._index[cid]
        except KeyError:
            raise ValueError(f"unknown chart {cid!r} in space {self.name!r}") from None

    def __eq__(self, other) -> bool:
        if not isinstance(other, GermPresentation):
            return NotImplemented
        return (
            self.name == other.name
            and self.charts == other.charts
            and self.arrows == other.arrows
            and self.ambient == other.ambient
            and self.wedge_type == other.wedge_type
        )

    def __repr__(self) -> str:
        return (
            f"GermPresentation({self.name!r}, charts={self.charts}, "
            f"arrows={len(self.arrows)}, ambient={'yes' if self.ambient else 'no'})"
        )


@dataclass
class ValidationReport:
    ok: bool
    issues: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def validate_presentation(p: GermPresentation) -> ValidationReport:
    """Check every structural invariant, itemizing each violation.

    Violated polynomial identities are reported with the exact residual.
    """
    issues: list[str] = []

    seen = set()
    for cid, dim in p.charts:
        if cid in seen:
            issues.append(f"duplicate chart id {cid!r}")
        seen.add(cid)
        if dim < 0:
            issues.append(f"chart {cid!r} has negative dimension {dim}")

    seen_arrows = set()
    for a in p.arrows:
        if a.name in seen_arrows:
            issues.append(f"duplicate arrow id {a.name!r}")
        seen_arrows.add(a.name)
        if not p.has_chart(a.src):
            issues.append(f"arrow {a.name!r} has unknown source chart {a.src!r}")
            continue
        if not p.has_chart(a.dst):
            issues.append(f"arrow {a.name!r} has unknown target chart {a.dst!r}")
            continue
        src_dim = p.chart_dim(a.src)
        dst_dim = p.chart_dim(a.dst)
        if a.germ.source_dim != src_dim or a.germ.target_dim != dst_dim:
            issues.append(
                f"arrow {a.name!r}: germ has shape R^{a.germ.source_dim} -> "
                f"R^{a.germ.target_dim}, chart dimensions require R^{src_dim} -> R^{dst_dim}"
            )
            continue
        if not a.germ.is_pointed:
            issues.append(f"arrow {a.name!r}: germ is not pointed")

    if p.ambient is not None:
        amb = p.ambient
        if amb.dim < 0:
            issues.append(f"ambient dimension {amb.dim} is negative")
        for cid, dim in p.charts:
            emb = amb.embeddings.get(cid)
            if emb is None:
                issues.append(f"chart {cid!r} has no ambient embedding")
                continue
            if emb.source_dim != dim or emb.target_dim != amb.dim:
                issues.append(
                    f"embedding of chart {cid!r} has shape R^{emb.source_dim} -> "
                    f"R^{emb.target_dim}, expected R^{dim} -> R^{amb.dim}"
                )
                continue
            if not emb.is_pointed:
                issues.append(f"embedding of chart {cid!r} is not pointed")
        for a in p.arrows:
            src_emb = amb.embeddings.get(a.src)
            dst_emb = amb.embeddings.get(a.dst)
            if src_emb is None or dst_emb is None:
                continue
            if (
                a.germ.source_dim != p.chart_dim(a.src)
                or a.germ.target_dim != p.chart_dim(a.dst)
                or dst_emb.source_dim != a.germ.target_dim
            ):
                continue
            via_arrow = compose_maps(dst_emb, a.germ)
            for c, (lhs, rhs) in enumerate(zip(via_arrow.components, src_emb.components)):
                residual = lhs - rhs
                if not residual.is_zero():
                    issues.append(
                        f"ambient incompatibility on arrow {a.name!r}, "
                        f"coordinate {c + 1}: residual {residual}"
                    )

    return ValidationReport(not issues, issues)


def require_valid(p: GermPresentation) -> None:
    report = validate_presentation(p)
    if not report.ok:
        raise ValueError(
            f"invalid presentation {p.name!r}: " + "; ".join(report.issues)
        )


@dataclass
class ClosureResult:
    arrows: list[Arrow]
    closed: bool


def _identity_arrows(p: GermPresentation) -> list[Arrow]:
    return [
        Arrow(f"id_{cid}", cid, cid, PolyMap.identity(dim)) for cid, dim in p.charts
    ]


def composition_closure(p: GermPresentation, depth: int) -> ClosureResult:
    """Saturate the arrow set under composition, up to word length ``depth``.

    Words are built from the presented arrows; identities count as the
    empty word.  Arrows are deduplicated by exact polynomial equality of
    their germs.  ``closed`` reports whether a fixed point was reached
    within the bound; composites beyond the bound are discarded.
    """
    if depth < 1:
        raise ValueError(f"closure depth must be >= 1, got {depth}")
    require_valid(p)

    arrows: dict[tuple[str, str, PolyMap], Arrow] = {}

    def add(arrow: Arrow) -> bool:
        key = (arrow.src, arrow.dst, arrow.germ)
        if key in arrows:
            return False
        arrows[key] = arrow
        return True

    for a in _identity_arrows(p):
        add(a)
    generators = []
    for a in p.arrows:
        add(a)
        generators.append(a)

    word_length = 1
    closed = False
    while True:
        additions = []
        current = list(arrows.values())
        for g in generators:
            for w in current:
                if w.dst != g.src:
                    continue
                germ = compose_maps(g.germ, w.germ)
                key = (w.src, g.dst, germ)
                if key not in arrows:
                    additions.append(Arrow(f"{g.name}.{w.name}", w.src, g.dst, germ))
        # the same composite can arise from several pairs; dedup preserves order
        fresh = []
        seen_new = set()
        for a in additions:
            key = (a.src, a.dst, a.germ)
            if key not in arrows and key not in seen_new:
                seen_new.add(key)
                fresh.append(a)
        if not fresh:
            closed = True
            break
        word_length += 1
        if word_length > depth:
            closed = False
            break
        for a in fresh:
            add(a)

    return ClosureResult(list(arrows.values()), closed)


@dataclass
class FilterednessReport:
    weakly_filtered: str  # "yes" | "no" | "unknown"
    filtered: str  # "yes" | "no" | "unknown"
    closure_reached: bool
    arrow_count: int


def filteredness(p: GermPresentation, depth: int) -> FilterednessReport:
    """Decide (weak) filteredness within the closed arrow set.

    Weak filteredness asks for a common receiving chart for every pair of
    charts; filteredness additionally asks every parallel pair of arrows to
    be coequalized by some arrow.  When the closure is not reached within
    ``depth`` both verdicts are "unknown": a non-closing arrow monoid is a
    legitimate input, not an error.
    """
    closure = composition_closure(p, depth)
    if not closure.closed:
        return FilterednessReport("unknown", "unknown", False, len(closure.arrows))

    arrows = closure.arrows
    chart_ids = p.chart_ids
    targets_from: dict[str, set[str]] = {cid: set() for cid in chart_ids}
    for a in arrows:
        targets_from[a.src].add(a.dst)

    weakly = True
    for i, ci in enumerate(chart_ids):
        for cj in chart_ids[i:]:
            if not (targets_from[ci] & targets_from[cj]):
                weakly = False
                break
        if not weakly:
            break

    if not weakly:
        return FilterednessReport("no", "no", True, len(arrows))

    by_source: dict[str, list[Arrow]] = {cid: [] for cid in chart_ids}
    for a in arrows:
        by_source[a.src].append(a)

    filtered = True
    for i, f in enumerate(arrows):
        for g in arrows[i + 1 :]:
            if f.src != g.src or f.dst != g.dst or f.germ == g.germ:
                continue
            coequalized = False
            for h in by_source[f.dst]:
                if compose_maps(h.germ, f.germ) == compose_maps(h.germ, g.germ):
                    coequalized = True
                    break
            if not coequalized:
                filtered = False
                break
        if not filtered:
            break

    return FilterednessReport("yes", "yes" if filtered else "no", True, len(arrows))


class PresentedMap:
    """A map of presentations: chart assignments with pointed factorizations.

    Each source chart is sent to a target chart through a pointed germ, and
    every source arrow must commute with the assignments through some
    target arrow (identities included), exactly.
    """

    def __init__(
        self,
        source: GermPresentation,
        target: GermPresentation,
        assignments: dict[str, tuple[str, PolyMap]],
    ):
        self.source = source
        self.target = target
        self.assignments = dict(assignments)

    @classmethod
    def identity(cls, p: GermPresentation) -> "PresentedMap":
        return cls(
            p, p, {cid: (cid, PolyMap.identity(dim)) for cid, dim in p.charts}
        )


def validate_presented_map(m: PresentedMap) -> ValidationReport:
    issues: list[str] = []
    src_report = validate_presentation(m.source)
    if not src_report.ok:
        issues.append(f"source presentation invalid: {'; '.join(src_report.issues)}")
    dst_report = validate_presentation(m.target)
    if not dst_report.ok:
        issues.append(f"target presentation invalid: {'; '.join(dst_report.issues)}")
    if issues:
        return ValidationReport(False, issues)

    for cid, dim in m.source.charts:
        if cid not in m.assignments:
            issues.append(f"source chart {cid!r} has no assignment")
            continue
        tchart, germ = m.assignments[cid]
        if not m.target.has_chart(tchart):
            issues.append(f"chart {cid!r} is sent to unknown target chart {tchart!r}")
            continue
        if germ.source_dim != dim or germ.target_dim != m.target.chart_dim(tchart):
            issues.append(
                f"assignment of chart {cid!r} has shape R^{germ.source_dim} -> "
                f"R^{germ.target_dim}, expected R^{dim} -> R^{m.target.chart_dim(tchart)}"
            )
            continue
        if not germ.is_pointed:
            issues.append(f"assignment of chart {cid!r} is not pointed")
    if issues:
        return ValidationReport(False, issues)

    candidate_arrows = _identity_arrows(m.target) + list(m.target.arrows)
    for a in m.source.arrows:
        ti, phi_i = m.assignments[a.src]
        tj, phi_j = m.assignments[a.dst]
        lhs = compose_maps(phi_j, a.germ)
        matched = False
        for h in candidate_arrows:
            if h.src != ti or h.dst != tj:
                continue
            if lhs == compose_maps(h.germ, phi_i):
                matched = True
                break
        if not matched:
            issues.append(
                f"arrow {a.name!r} does not commute with the chart assignments "
                f"through any target arrow {ti!r} -> {tj!r}"
            )

    return ValidationReport(not issues, issues)


def require_valid_map(m: PresentedMap) -> None:
    report = validate_presented_map(m)
    if not report.ok:
        raise ValueError("invalid presented map: " + "; ".join(report.issues))
