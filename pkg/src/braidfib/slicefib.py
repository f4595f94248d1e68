"""Combinatorial singular fibrations on planar slice surfaces.

A slice is a sphere minus 2b disks: one meridian circle per braid strand in
the left column of a reference grid, one per return strand on the right.
The circle map restricts to each boundary circle with degree +-1, so every
angle theta hits each circle exactly once and a regular leaf is a perfect
matching of the circles by disjoint arcs.

The state stored here is exactly that picture:

* ``circles``  - boundary circles with grid placement and degree sign,
* ``xsings``   - interior saddle points of the map (x-singularities), each
  with an exact rational angle, a counterclockwise germ quadruple and an
  arrow decoration (``outward_upper``),
* ``family``   - the matching of circles on every interval between
  consecutive singular angles.

Everything else (marked points, leaf edges, faces of the combinatorial map,
Euler characteristic) is derived.  Angles are exact ``Fraction`` values in
[0, 1), so ordering and interval membership are decidable and every state
serializes deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction


class SliceError(ValueError):
    """Base class for slice-level errors."""


class InvalidSlice(SliceError):
    pass


class SingularAngle(SliceError):
    pass


class MalformedSingularity(SliceError):
    pass


Angle = Fraction


def norm_angle(x: Fraction) -> Angle:
    """Normalize an exact angle into [0, 1)."""
    return Fraction(x) % 1


def angle_in(theta: Angle, lo: Angle, hi: Angle) -> bool:
    """Membership of theta in the cyclic open interval swept from lo up to hi."""
    span = (hi - lo) % 1
    if span == 0:
        return theta != lo
    return (theta - lo) % 1 < span and theta != lo


def cyclic_midpoint(lo: Angle, hi: Angle) -> Angle:
    span = (hi - lo) % 1
    if span == 0:
        span = Fraction(1)
    return norm_angle(lo + span / 2)


LEFT = "L"
RIGHT = "R"

Pair = frozenset
Pairing = frozenset  # frozenset of 2-element frozensets of circle ids


def make_pairing(pairs) -> Pairing:
    return frozenset(frozenset(p) for p in pairs)


def pairing_partner(pairing: Pairing, cid: int) -> int | None:
    for p in pairing:
        if cid in p:
            (other,) = p - {cid}
            return other
    return None


def surger(pairing: Pairing, alpha: int, beta: int, straight: bool) -> Pairing:
    """Band surgery cutting the arcs at circles alpha and beta.

    The two cut arcs must be distinct.  ``straight`` rejoins the cut ends as
    (alpha, beta) + (far, far); the alternative rejoins each cut end to the
    other arc's far end.
    """
    arc_a = next((p for p in pairing if alpha in p), None)
    arc_b = next((p for p in pairing if beta in p), None)
    if arc_a is None or arc_b is None:
        raise SliceError(f"no arc at circle {alpha if arc_a is None else beta}")
    if arc_a == arc_b:
        raise SliceError(f"cannot surger an arc against itself at ({alpha},{beta})")
    (fa,) = arc_a - {alpha}
    (fb,) = arc_b - {beta}
    rest = pairing - {arc_a, arc_b}
    if straight:
        new = {frozenset({alpha, beta}), frozenset({fa, fb})}
    else:
        new = {frozenset({alpha, fb}), frozenset({fa, beta})}
    return rest | new


@dataclass(frozen=True)
class CircleInfo:
    """One boundary circle: stable id, current label, grid spot, degree."""

    cid: int
    label: tuple[str, int]  # (side, index): (L, i) is C_i, (R, i) is C_i'
    row: int
    col: str  # LEFT or RIGHT column of the grid
    degree: int  # +-1, sign of the boundary circle map

    def label_str(self) -> str:
        side, i = self.label
        return f"C{i}" if side == LEFT else f"C{i}'"


@dataclass(frozen=True)
class XSingularity:
    """An interior saddle of the slice map, with its arrow decoration.

    ``germs`` lists the four circles reached by the rays of the singular
    leaf, in counterclockwise order, normalized so that the quadrants
    between germs (0,1) and (2,3) are the ones swept by angles just above
    ``theta`` (so the pairing just below contains {g1,g2} and {g3,g0}).
    ``outward_upper`` records which opposite quadrant pair is outward.
    """

    xid: str
    theta: Angle
    germs: tuple[int, int, int, int]
    outward_upper: bool

    def __post_init__(self):
        if len(set(self.germs)) != 4:
            raise MalformedSingularity(
                f"{self.xid}: germ circles must be 4 distinct, got {self.germs}"
            )

    def lower_doors(self) -> Pairing:
        g = self.germs
        return make_pairing([(g[1], g[2]), (g[3], g[0])])

    def upper_doors(self) -> Pairing:
        g = self.germs
        return make_pairing([(g[0], g[1]), (g[2], g[3])])

    def outward_axis(self) -> tuple[int, int]:
        """The opposite germ pair (by position 0..3) bounding the outward regions."""
        # Axis (0,2) bounds the quadrants between germs (1,2) and (3,0): the
        # lower pair.  Axis (1,3) bounds the upper pair.
        return (1, 3) if self.outward_upper else (0, 2)


@dataclass(frozen=True)
class MarkedPoint:
    """A point of a boundary circle hit by a singular leaf or boundary extremum."""

    cid: int
    theta: Angle
    kind: str  # "leaf_endpoint", "boundary_min", "boundary_max"
    ref: tuple[str, int] | None = None  # (xid, germ position) for leaf endpoints


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    element: str
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[ValidationIssue, ...]
    warnings: tuple[ValidationIssue, ...]

    @property
    def valid(self) -> bool:
        return not self.errors


@dataclass(frozen=True)
class SliceFibration:
    """A combinatorial singular fibration on one planar slice.

    ``family`` maps each cyclic interval between consecutive singular angles
    to the pairing of circle ids realized by the regular leaves there; with
    no singularities it is a single entry keyed by (0, 0) covering the whole
    circle.  ``closed_leaves`` counts circle leaf components per interval
    (always zero in the construction; kept representable and warned about).
    """

    circles: tuple[CircleInfo, ...]
    xsings: tuple[XSingularity, ...]
    family: tuple[tuple[tuple[Angle, Angle], Pairing], ...]
    closed_leaves: tuple[int, ...] = ()
    extra_marks: tuple[MarkedPoint, ...] = ()
    pending_rotation: tuple[tuple[int, int], ...] = ()  # (row, half turns)

    # -- basic access ------------------------------------------------------

    def circle(self, cid: int) -> CircleInfo:
        for c in self.circles:
            if c.cid == cid:
                return c
        raise SliceError(f"no circle with id {cid}")

    def circle_at(self, row: int, col: str) -> CircleInfo:
        for c in self.circles:
            if c.row == row and c.col == col:
                return c
        raise SliceError(f"no circle at row {row} col {col}")

    def by_label(self, side: str, index: int) -> CircleInfo:
        for c in self.circles:
            if c.label == (side, index):
                return c
        raise SliceError(f"no circle labeled ({side},{index})")

    def rows(self) -> list[int]:
        return sorted({c.row for c in self.circles})

    def xsing(self, xid: str) -> XSingularity:
        for x in self.xsings:
            if x.xid == xid:
                return x
        raise SliceError(f"no x-singularity {xid}")

    def singular_angles(self) -> list[Angle]:
        return sorted({x.theta for x in self.xsings})

    def interval_index(self, theta: Angle) -> int:
        theta = norm_angle(theta)
        angles = self.singular_angles()
        if not angles:
            return 0
        for k, (lo, hi) in enumerate(iv for iv, _ in self.family):
            if angle_in(theta, lo, hi):
                return k
        raise SingularAngle(f"angle {theta} is singular")

    def pairing_at(self, theta: Angle) -> Pairing:
        return self.family[self.interval_index(theta)][1]

    def marks(self) -> tuple[MarkedPoint, ...]:
        """Leaf-endpoint marks induced by the x-singularities, plus extras."""
        out = []
        for x in self.xsings:
            for pos, cid in enumerate(x.germs):
                out.append(MarkedPoint(cid, x.theta, "leaf_endpoint", (x.xid, pos)))
        return tuple(out) + self.extra_marks

    # -- serialization -----------------------------------------------------

    def canonical(self) -> dict:
        """A stable, JSON-friendly description (used for digests and files)."""
        return {
            "circles": [
                {
                    "id": c.cid,
                    "label": c.label_str(),
                    "row": c.row,
                    "col": c.col,
                    "degree": c.degree,
                }
                for c in sorted(self.circles, key=lambda c: (c.row, c.col))
            ],
            "xsings": [
                {
                    "id": x.xid,
                    "theta": str(x.theta),
                    "germs": list(x.germs),
                    "outward_axis": list(x.outward_axis()),
                }
                for x in sorted(self.xsings, key=lambda x: (x.theta, x.xid))
            ],
            "family": [
                {
                    "interval": [str(lo), str(hi)],
                    "pairs": sorted(sorted(p) for p in pairing),
                }
                for (lo, hi), pairing in self.family
            ],
        }


# -- constructors ------------------------------------------------------------


def whole_circle_family(pairing: Pairing):
    return (((Fraction(0), Fraction(0)), pairing),)


def initial_annulus_fibration() -> SliceFibration:
    """The slice just above the bottom cap: an annulus fibered by arcs.

    Two boundary circles C_1 and C_1', no singular leaves; every leaf is a
    single arc between the two circles and the boundary map has degree +-1.
    """
    c1 = CircleInfo(cid=1, label=(LEFT, 1), row=1, col=LEFT, degree=1)
    c1p = CircleInfo(cid=2, label=(RIGHT, 1), row=1, col=RIGHT, degree=-1)
    pairing = make_pairing([(1, 2)])
    return SliceFibration(
        circles=(c1, c1p),
        xsings=(),
        family=whole_circle_family(pairing),
        closed_leaves=(0,),
    )


def build_family(angles: list[Angle], pairings: list[Pairing]):
    """Assemble the interval->pairing table from sorted singular angles."""
    if not angles:
        assert len(pairings) == 1
        return whole_circle_family(pairings[0])
    assert len(pairings) == len(angles)
    out = []
    for k, lo in enumerate(angles):
        hi = angles[(k + 1) % len(angles)]
        out.append(((lo, hi), pairings[k]))
    return tuple(out)


# -- queries -----------------------------------------------------------------


def singular_values(sf: SliceFibration) -> list[Angle]:
    """All angles carrying a leaf singularity or boundary-critical mark."""
    report = validate_slice(sf)
    if not report.valid:
        raise InvalidSlice("; ".join(f"{i.code}:{i.detail}" for i in report.errors))
    vals = {x.theta for x in sf.xsings}
    vals |= {m.theta for m in sf.extra_marks if m.kind != "leaf_endpoint"}
    return sorted(vals)


@dataclass(frozen=True)
class LeafComponent:
    kind: str  # "arc" or "circle"
    endpoints: tuple[int, ...]  # two circle ids for arcs, empty for circles


def regular_leaf(sf: SliceFibration, theta: Angle) -> list[LeafComponent]:
    """The leaf at a regular angle: arcs pairing the circles, plus circles."""
    theta = norm_angle(theta)
    if theta in {x.theta for x in sf.xsings}:
        raise SingularAngle(f"angle {theta} is singular")
    k = sf.interval_index(theta)
    pairing = sf.family[k][1]
    comps = [
        LeafComponent("arc", tuple(sorted(p))) for p in sorted(pairing, key=sorted)
    ]
    n_closed = sf.closed_leaves[k] if k < len(sf.closed_leaves) else 0
    comps.extend(LeafComponent("circle", ()) for _ in range(n_closed))
    return comps


def quadrants(x: XSingularity) -> dict[str, tuple[tuple[int, int], tuple[int, int]]]:
    """Outward and inward quadrant pairs, as pairs of bounding germ positions."""
    if len(set(x.germs)) != 4:
        raise MalformedSingularity(f"{x.xid} has malformed germs")
    upper = ((0, 1), (2, 3))
    lower = ((1, 2), (3, 0))
    if x.outward_upper:
        return {"outward": upper, "inward": lower}
    return {"outward": lower, "inward": upper}


# -- validation --------------------------------------------------------------


def _check_doors(sf: SliceFibration, errors: list[ValidationIssue]) -> None:
    """Sweep the circle once and check every rewiring against its germs."""
    angles = sf.singular_angles()
    if not angles:
        if len(sf.family) != 1:
            errors.append(
                ValidationIssue("family", "-", "no singular angles but multiple intervals")
            )
        return
    if len(sf.family) != len(angles):
        errors.append(
            ValidationIssue(
                "family",
                "-",
                f"{len(sf.family)} intervals for {len(angles)} singular angles",
            )
        )
        return
    by_theta: dict[Angle, list[XSingularity]] = {}
    for x in sf.xsings:
        by_theta.setdefault(x.theta, []).append(x)
    # circles touched at a shared angle must be disjoint
    for theta, group in by_theta.items():
        touched: set[int] = set()
        for x in group:
            if touched & set(x.germs):
                errors.append(
                    ValidationIssue(
                        "shared_level",
                        x.xid,
                        f"angle {theta} shared by singularities with common circles",
                    )
                )
            touched |= set(x.germs)
    for k, lo in enumerate(angles):
        below = sf.family[(k - 1) % len(angles)][1]
        above = sf.family[k][1]
        expected = below
        for x in by_theta[lo]:
            low, up = x.lower_doors(), x.upper_doors()
            if not low <= expected:
                errors.append(
                    ValidationIssue(
                        "door_mismatch",
                        x.xid,
                        f"lower doors {sorted(sorted(p) for p in low)} absent below {lo}",
                    )
                )
                return
            expected = (expected - low) | up
        if expected != above:
            errors.append(
                ValidationIssue(
                    "rewiring",
                    str(lo),
                    "family above the level does not match the door rewiring",
                )
            )
            return


def _band_count(sf: SliceFibration) -> int:
    """Count maximal product bands of regular leaves (complement faces).

    A band is one arc swept over a maximal run of intervals; it starts where
    its pair first appears after a rewiring, and a pair present on every
    interval and never door-adjacent sweeps the whole circle as one band.
    """
    n = len(sf.family)
    if n == 1:
        return len(sf.family[0][1])
    bands = 0
    everywhere = set(sf.family[0][1])
    for _, pairing in sf.family:
        everywhere &= pairing
    for k in range(n):
        below = sf.family[(k - 1) % n][1]
        bands += len(sf.family[k][1] - below)
    for p in everywhere:
        touched = any(
            p in (x.lower_doors() | x.upper_doors()) for x in sf.xsings
        )
        if not touched:
            bands += 1
    return bands


def euler_map_data(sf: SliceFibration) -> tuple[int, int, int, int]:
    """(V, E, F, components) of the combinatorial map on the sphere.

    Circles count as map cycles (a bare circle is a synthetic vertex with a
    loop).  F includes the hole faces, one per circle.  For any map on the
    sphere V - E + F = 1 + #components.
    """
    marks = [m for m in sf.marks() if m.kind == "leaf_endpoint"]
    per_circle: dict[int, int] = {c.cid: 0 for c in sf.circles}
    for m in marks:
        per_circle[m.cid] += 1
    n_x = len(sf.xsings)
    bare = sum(1 for cnt in per_circle.values() if cnt == 0)
    v = n_x + len(marks) + bare
    e = 4 * n_x + len(marks) + bare  # rays + circle arcs + bare loops
    f = _band_count(sf) + len(sf.circles)
    # connectivity: circles merged through the singular leaves
    parent: dict[int, int] = {c.cid: c.cid for c in sf.circles}

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in sf.xsings:
        r = find(x.germs[0])
        for g in x.germs[1:]:
            parent[find(g)] = r
    comps = len({find(c.cid) for c in sf.circles}) if sf.circles else 0
    return v, e, f, comps


def validate_slice(sf: SliceFibration) -> ValidationReport:
    """Check every structural invariant; violations become report entries."""
    errors: list[ValidationIssue] = []
    warnings: list[ValidationIssue] = []

    ids = [c.cid for c in sf.circles]
    if len(set(ids)) != len(ids):
        errors.append(ValidationIssue("circle_ids", "-", "duplicate circle ids"))
    labels = [c.label for c in sf.circles]
    if len(set(labels)) != len(labels):
        errors.append(ValidationIssue("circle_labels", "-", "duplicate labels"))
    spots = [(c.row, c.col) for c in sf.circles]
    if len(set(spots)) != len(spots):
        errors.append(ValidationIssue("grid", "-", "two circles share a grid spot"))
    if sf.circles and sum(c.degree for c in sf.circles) != 0:
        errors.append(
            ValidationIssue("degree", "-", "boundary degrees do not sum to zero")
        )
    for c in sf.circles:
        if c.degree not in (1, -1):
            errors.append(
                ValidationIssue("degree", c.label_str(), f"degree {c.degree}")
            )

    idset = set(ids)
    for x in sf.xsings:
        if len(set(x.germs)) != 4:
            errors.append(
                ValidationIssue("MalformedSingularity", x.xid, "germ count != 4")
            )
            continue
        if not set(x.germs) <= idset:
            errors.append(
                ValidationIssue("MalformedSingularity", x.xid, "germ on unknown circle")
            )
        if not 0 <= x.theta < 1:
            errors.append(
                ValidationIssue("angle", x.xid, f"angle {x.theta} not in [0,1)")
            )

    # every interval pairing must be a perfect matching of the circles
    for (lo, hi), pairing in sf.family:
        seen: set[int] = set()
        for p in pairing:
            if len(p) != 2:
                errors.append(ValidationIssue("pairing", str(lo), f"bad pair {set(p)}"))
                continue
            seen |= set(p)
        if seen != idset or 2 * len(pairing) != len(idset):
            errors.append(
                ValidationIssue(
                    "pairing",
                    f"({lo},{hi})",
                    "interval pairing is not a perfect matching of the circles",
                )
            )

    if not errors:
        _check_doors(sf, errors)

    if not errors and sf.circles:
        v, e, f, comps = euler_map_data(sf)
        if v - e + f != 1 + comps:
            errors.append(
                ValidationIssue(
                    "euler",
                    "-",
                    f"map has V-E+F = {v - e + f} but {comps} component(s): "
                    "not planar on the sphere",
                )
            )

    for k, count in enumerate(sf.closed_leaves):
        if count:
            warnings.append(
                ValidationIssue(
                    "circle_leaf",
                    f"interval {k}",
                    f"{count} closed leaf component(s); construction never makes these",
                )
            )
    for m in sf.extra_marks:
        if m.kind not in ("leaf_endpoint", "boundary_min", "boundary_max"):
            errors.append(ValidationIssue("mark", str(m.cid), f"bad kind {m.kind}"))
    # boundary min/max marks must balance per circle
    per: dict[int, int] = {}
    for m in sf.extra_marks:
        if m.kind == "boundary_min":
            per[m.cid] = per.get(m.cid, 0) + 1
        elif m.kind == "boundary_max":
            per[m.cid] = per.get(m.cid, 0) - 1
    for cid, bal in per.items():
        if bal != 0:
            errors.append(
                ValidationIssue(
                    "boundary_marks",
                    str(cid),
                    "boundary min/max counts differ on one circle",
                )
            )

    return ValidationReport(tuple(errors), tuple(warnings))


def with_pending_rotation(sf: SliceFibration, row: int, sign: int) -> SliceFibration:
    """Record a half-turn isotopy beneath ``row``; cancels with its inverse."""
    pend = dict(sf.pending_rotation)
    pend[row] = pend.get(row, 0) + sign
    items = tuple(sorted((r, n) for r, n in pend.items() if n != 0))
    return replace(sf, pending_rotation=items)
