"""The catalog of elementary movie moves on slice fibrations.

Every move is a pure ``before -> (after, record)`` function.  The record
carries the move's declared effect on each fiber (per cyclic angle
interval) so fibers can be reassembled downstream, plus the local-model
classification used by the total-function validator.

Conventions fixed here (the figures pin these only pictorially):

* the strand-arc level at the bottom of the braid region is angle 0;
* the saddle pair created when row i opens sits at angles +-1/2^(i+1);
* each crossing transports one saddle point once around the circle
  (winding +-1), through its outward side, so every fiber receives exactly
  one band surgery per crossing;
* a crossing finishes by exchanging the two strand circles' grid rows and
  their labels, so labels always read off rows.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .slicefib import (
    LEFT,
    RIGHT,
    Angle,
    CircleInfo,
    Pairing,
    SliceError,
    SliceFibration,
    ValidationReport,
    XSingularity,
    angle_in,
    build_family,
    make_pairing,
    norm_angle,
    pairing_partner,
    surger,
    validate_slice,
    whole_circle_family,
    with_pending_rotation,
)


class MoveError(SliceError):
    pass


class PatternMismatch(MoveError):
    pass


class NoSuchRow(MoveError):
    pass


class LeafNotInward(MoveError):
    """A max movie's designated leaf does not lie toward the inward regions."""


class UnbalancedWinding(MoveError):
    pass


class WrongRegions(MoveError):
    """An eta arc approaches its singularity through the inward regions."""


class EndpointAngleMismatch(MoveError):
    pass


class SignMismatch(MoveError):
    pass


# fiber effect kinds
NONE = "none"
SADDLE = "saddle"
ARC_BIRTH = "arc_birth"
ARC_DEATH = "arc_death"
BOUNDARY_MIN = "boundary_min"
BOUNDARY_MAX = "boundary_max"

FULL_CIRCLE = (Fraction(0), Fraction(0))


@dataclass(frozen=True)
class EtaSpec:
    """Combinatorial description of a band-movie arc.

    The arc starts and ends on the leaf at ``endpoint_theta``, crosses the
    singularity ``xid`` at its midpoint, and winds ``l`` around the circle.
    The certificate lists the singular levels crossed by each half; the two
    halves must cross equally often (the balance condition).
    """

    xid: str
    endpoint_theta: Angle
    winding: Fraction
    certificate_first: tuple[str, ...] = ()
    certificate_second: tuple[str, ...] = ()

    def balanced(self) -> bool:
        return len(self.certificate_first) == len(self.certificate_second)


@dataclass(frozen=True)
class MoveRecord:
    """One validated elementary move with its declared per-fiber effects."""

    kind: str
    params: tuple
    interval: tuple[Fraction, Fraction]  # time interval [t_a, t_b]
    before: int  # index of the before-slice in the movie's slice list
    after: int
    fiber_effects: tuple[tuple[tuple[Angle, Angle], str], ...]
    eta: EtaSpec | None = None

    def effect_at(self, theta: Angle) -> list[str]:
        """All non-trivial effects whose interval contains theta."""
        theta = norm_angle(theta)
        out = []
        for (lo, hi), kind in self.fiber_effects:
            if kind == NONE:
                continue
            if (lo, hi) == FULL_CIRCLE or angle_in(theta, lo, hi):
                out.append(kind)
        return out


def _require_valid(sf: SliceFibration, context: str) -> None:
    report = validate_slice(sf)
    if not report.valid:
        raise MoveError(
            f"{context}: invalid slice: "
            + "; ".join(f"{i.code}:{i.detail}" for i in report.errors)
        )


def _next_cid(sf: SliceFibration) -> int:
    return max((c.cid for c in sf.circles), default=0) + 1


def _resweep(base: Pairing, xsings: tuple[XSingularity, ...]):
    """Rebuild the interval family from the base pairing and door tables.

    ``base`` is the pairing on the interval containing angle 0 (the wrap
    interval).  Raises MoveError if the doors do not chain consistently or
    the sweep fails to close up.
    """
    levels = sorted({x.theta for x in xsings})
    if not levels:
        return whole_circle_family(base)
    by_theta: dict[Angle, list[XSingularity]] = {}
    for x in xsings:
        by_theta.setdefault(x.theta, []).append(x)
    pairings = []
    current = base
    for lv in levels:
        for x in by_theta[lv]:
            low, up = x.lower_doors(), x.upper_doors()
            if not low <= current:
                raise MoveError(
                    f"door mismatch at level {lv} ({x.xid}): "
                    f"missing {sorted(sorted(p) for p in low - current)}"
                )
            current = (current - low) | up
        pairings.append(current)
    if pairings[-1] != base:
        raise MoveError("sweep does not close up around the circle")
    return build_family(levels, pairings)


def _gap_points(sf: SliceFibration, g: int) -> tuple[int, int, int, int]:
    """Circle ids (a, b, a', b') at rows g and g+1 of gap g."""
    a = sf.circle_at(g, LEFT).cid
    b = sf.circle_at(g + 1, LEFT).cid
    ap = sf.circle_at(g, RIGHT).cid
    bp = sf.circle_at(g + 1, RIGHT).cid
    return a, b, ap, bp


def gap_delta(g: int) -> Angle:
    """Angle of the saddle pair guarding gap g (between rows g and g+1)."""
    return Fraction(1, 2 ** (g + 2))


# -- rotation isotopy ---------------------------------------------------------


def rotate_pair(sf: SliceFibration, i: int, sign: int):
    """Half-turn isotopy of the leaf complex beneath row i.

    Pure isotopy: the matching family and all angles are untouched; the
    recorded twist orients the next opening at row i.  Two opposite
    rotations cancel exactly.
    """
    if sign not in (1, -1):
        raise MoveError(f"rotation sign must be +-1, got {sign}")
    rows = sf.rows()
    if i < 2 or (rows and i > max(rows) + 1) or not rows:
        raise NoSuchRow(f"cannot rotate beneath row {i}")
    after = with_pending_rotation(sf, i, sign)
    record = MoveRecord(
        kind="rotation",
        params=(i, sign),
        interval=(Fraction(0), Fraction(0)),
        before=-1,
        after=-1,
        fiber_effects=((FULL_CIRCLE, NONE),),
    )
    return after, record


# -- min movie ----------------------------------------------------------------


def min_movie(sf: SliceFibration, i: int):
    """Open a strand minimum beneath the current pattern at row i.

    Adds the row-i circle pair on the strand-arc leaf, two saddle points at
    angles +-delta with outward regions toward that leaf, and (for i >= 3)
    re-lands the corner rays of the previous pair around the new circles.
    The twist recorded by the preceding rotation fixes the chirality.
    """
    _require_valid(sf, "min_movie")
    rows = sf.rows()
    if not rows or i != max(rows) + 1 or i < 2:
        raise PatternMismatch(f"row {i} is not the next row to open")
    pend = dict(sf.pending_rotation)
    n_turns = pend.pop(i, 0)
    sigma = 1
    if n_turns % 2 != 0:
        sigma = 1 if n_turns > 0 else -1

    u = sf.circle_at(i - 1, LEFT).cid
    up = sf.circle_at(i - 1, RIGHT).cid
    base = sf.pairing_at(Fraction(0))
    if frozenset({u, up}) not in base:
        raise PatternMismatch(
            f"strand-arc leaf does not pair the row-{i - 1} circles"
        )

    delta = gap_delta(i - 1)
    n = _next_cid(sf)
    npr = n + 1
    new_circles = sf.circles + (
        CircleInfo(n, (LEFT, i), i, LEFT, 1),
        CircleInfo(npr, (RIGHT, i), i, RIGHT, -1),
    )
    x_r = XSingularity(
        xid=f"x{i}R", theta=delta, germs=(up, npr, n, u), outward_upper=False
    )
    x_l = XSingularity(
        xid=f"x{i}L", theta=1 - delta, germs=(up, u, n, npr), outward_upper=True
    )

    xsings = list(sf.xsings)
    if i >= 3:
        # rays near the host strand re-land around the new circles; this
        # touches the host band's corners and everything stacked above them
        sub = {up: u, u: n} if sigma == 1 else {u: up, up: npr}
        hit = sum(
            1
            for x in xsings
            if frozenset({u, up}) in (x.lower_doors() | x.upper_doors())
        )
        if hit != 2:
            raise PatternMismatch(
                f"expected 2 corner singularities at the host band, found {hit}"
            )
        xsings = [
            replace(x, germs=tuple(sub.get(g, g) for g in x.germs))
            for x in xsings
        ]
    xsings.extend([x_r, x_l])

    base_after = base | make_pairing([(n, npr)])
    family = _resweep(base_after, tuple(xsings))
    after = SliceFibration(
        circles=new_circles,
        xsings=tuple(xsings),
        family=family,
        closed_leaves=(0,) * len(family),
        pending_rotation=tuple(sorted(pend.items())),
    )
    _require_valid(after, "min_movie output")
    record = MoveRecord(
        kind="min_movie",
        params=(i, sigma),
        interval=(Fraction(0), Fraction(0)),
        before=-1,
        after=-1,
        fiber_effects=((FULL_CIRCLE, ARC_BIRTH),),
    )
    return after, record


# -- max movie ----------------------------------------------------------------


def max_movie(sf: SliceFibration, i: int):
    """Cap off the row-i circle pair below a strand maximum.

    Requires the designated leaf (the parallel level between the two
    consumed saddle points) to lie toward their inward regions; that is the
    state every homogeneous word reaches after its crossings, and exactly
    what fails when the crossings are skipped.
    """
    _require_valid(sf, "max_movie")
    rows = sf.rows()
    if not rows or i != max(rows) or i < 2:
        raise PatternMismatch(f"row {i} is not the bottom row")
    n = sf.circle_at(i, LEFT).cid
    npr = sf.circle_at(i, RIGHT).cid
    pair = frozenset({n, npr})

    born = [x for x in sf.xsings if pair in x.upper_doors()]
    died = [x for x in sf.xsings if pair in x.lower_doors()]
    if len(born) != 1 or len(died) != 1:
        raise PatternMismatch(
            f"row-{i} pair is not guarded by exactly one saddle pair"
        )
    x_lo, x_hi = born[0], died[0]
    # the parallel band between them must sit on both inward sides
    if x_lo.outward_upper or not x_hi.outward_upper:
        raise LeafNotInward(
            f"leaf between {x_lo.xid} and {x_hi.xid} lies toward outward regions"
        )

    keep = tuple(x for x in sf.xsings if x.xid not in (x_lo.xid, x_hi.xid))
    family = _drop_pair_from_family(sf, keep, n, npr)
    # corner rays that reached the dying circles re-land: re-solve from doors
    affected = [x.xid for x in keep if n in x.germs or npr in x.germs]
    xsings = _resolve_gap_germs(keep, family, affected)
    after = SliceFibration(
        circles=tuple(c for c in sf.circles if c.cid not in (n, npr)),
        xsings=xsings,
        family=family,
        closed_leaves=(0,) * len(family),
        pending_rotation=sf.pending_rotation,
    )
    _require_valid(after, "max_movie output")
    record = MoveRecord(
        kind="max_movie",
        params=(i,),
        interval=(Fraction(0), Fraction(0)),
        before=-1,
        after=-1,
        fiber_effects=((FULL_CIRCLE, ARC_DEATH),),
    )
    return after, record


def _delete_circles(pairing: Pairing, n: int, npr: int) -> Pairing:
    """Remove two circles from a pairing, joining their orphaned partners."""
    pn = pairing_partner(pairing, n)
    pnp = pairing_partner(pairing, npr)
    if pn is None or pnp is None:
        raise MoveError("circle to delete is unmatched")
    out = {p for p in pairing if n not in p and npr not in p}
    if pn == npr:
        return frozenset(out)
    out.add(frozenset({pn, pnp}))
    return frozenset(out)


def _drop_pair_from_family(sf: SliceFibration, keep, n: int, npr: int):
    """Family after deleting two circles and the levels that only moved them.

    The old intervals separated by a removed level must agree once the pair
    is gone; anything else means the two saddles did more than guard it.
    """
    kept_levels = sorted({x.theta for x in keep})
    reduced = [
        (iv, _delete_circles(pairing, n, npr)) for iv, pairing in sf.family
    ]
    if not kept_levels:
        pairings = {p for _, p in reduced}
        if len(pairings) != 1:
            raise PatternMismatch(
                "family does not become constant after removing the capped pair"
            )
        return whole_circle_family(pairings.pop())
    out = []
    for lv_idx, lv in enumerate(kept_levels):
        hi = kept_levels[(lv_idx + 1) % len(kept_levels)]
        span = [
            p
            for (lo, _), p in reduced
            if lo == lv or angle_in(lo, lv, hi)
        ]
        if len(set(span)) != 1:
            raise PatternMismatch(
                f"sub-intervals above level {lv} disagree after the cap"
            )
        out.append(span[0])
    return build_family(kept_levels, out)


# -- band movie ---------------------------------------------------------------


def band_movie(sf: SliceFibration, eta: EtaSpec):
    """Transport a saddle point by the winding of eta, surgering swept leaves.

    Zero winding leaves the slice untouched apart from the singularity
    joining the endpoint leaf's level.  A sweep must enter through the
    outward regions and may not cross other singular levels (crossings wrap
    a full turn and are handled by ``crossing_move``, which generates its
    own certificates).
    """
    _require_valid(sf, "band_movie")
    x = sf.xsing(eta.xid)
    if not eta.balanced():
        raise UnbalancedWinding(
            f"eta crosses {len(eta.certificate_first)} edges on one side "
            f"and {len(eta.certificate_second)} on the other"
        )
    l = Fraction(eta.winding)
    target = norm_angle(x.theta - l)
    if target != norm_angle(eta.endpoint_theta):
        raise EndpointAngleMismatch(
            f"transport lands at {target}, eta endpoints sit at {eta.endpoint_theta}"
        )
    if l == 0:
        record = MoveRecord(
            kind="band_movie",
            params=(eta.xid,),
            interval=(Fraction(0), Fraction(0)),
            before=-1,
            after=-1,
            fiber_effects=((FULL_CIRCLE, NONE),),
            eta=eta,
        )
        return sf, record
    downward = l > 0
    if downward and x.outward_upper:
        raise WrongRegions(f"{eta.xid} can only be pushed through its upper side")
    if not downward and not x.outward_upper:
        raise WrongRegions(f"{eta.xid} can only be pushed through its lower side")
    if abs(l) >= 1:
        raise MoveError("full-turn transports are performed by crossing_move")
    # swept window (target, theta) going up, or (theta, target) going up
    lo, hi = (target, x.theta) if downward else (x.theta, target)
    others = [y for y in sf.xsings if y.xid != x.xid]
    for y in others:
        if angle_in(y.theta, lo, hi):
            raise MoveError(
                f"sweep window ({lo},{hi}) crosses level {y.theta} of {y.xid}"
            )
    # leaves inside the window swap across the moving saddle's doors
    low, up_doors = x.lower_doors(), x.upper_doors()
    moved = replace(x, theta=target)
    new_xs = tuple(others) + (moved,)
    base = sf.pairing_at(Fraction(0))
    if angle_in(Fraction(0), lo, hi):
        want, got = (low, up_doors) if downward else (up_doors, low)
        if not want <= base:
            raise MoveError("base leaf does not hug the doors of the swept saddle")
        base = (base - want) | got
    family = _resweep(base, new_xs)
    after = replace(
        sf,
        xsings=new_xs,
        family=family,
        closed_leaves=(0,) * len(family),
    )
    _require_valid(after, "band_movie output")
    sweep = ((lo, hi), SADDLE)
    record = MoveRecord(
        kind="band_movie",
        params=(eta.xid,),
        interval=(Fraction(0), Fraction(0)),
        before=-1,
        after=-1,
        fiber_effects=(sweep, ((hi, lo), NONE)),
        eta=eta,
    )
    return after, record


# -- crossing move ------------------------------------------------------------

# Anchor tables for the per-fiber band surgery of one crossing, keyed by the
# gap's phase (how many crossings it has already absorbed).  An anchor names
# the two circles whose arcs are cut; ``straight`` picks which way the four
# cut ends rejoin.  Primed anchors mirror the picture for negative letters.


def _crossing_anchor(phase: int, x_side: bool, a, b, ap, bp, sign: int):
    if phase % 2 == 0:
        alpha, beta = (a, b) if x_side else (a, bp)
    else:
        alpha, beta = (b, bp) if x_side else (b, ap)
    if sign == -1:
        swap = {a: ap, ap: a, b: bp, bp: b}
        alpha, beta = swap[alpha], swap[beta]
    return alpha, beta, True


def _surgery_candidates(pairing: Pairing, preferred, gap_pts):
    """All band surgeries cutting two gap-circle arcs, preferred one first.

    Yields distinct resulting pairings; the order is deterministic so the
    chain search below always lands on the same movie.
    """
    a, b, ap, bp = gap_pts
    anchors = [preferred[:2]] + [
        (x, y)
        for x in (a, b, ap, bp)
        for y in (a, b, ap, bp)
        if x < y
    ]
    seen = set()
    for alpha, beta in anchors:
        arc_a = next((p for p in pairing if alpha in p), None)
        arc_b = next((p for p in pairing if beta in p), None)
        if arc_a is None or arc_b is None or arc_a == arc_b:
            continue
        for straight in (True, False):
            result = surger(pairing, alpha, beta, straight)
            if result not in seen:
                seen.add(result)
                yield result, (alpha, beta, straight)


def _is_door_swap(below: Pairing, above: Pairing) -> bool:
    """True when two pairings differ by one saddle-level rewiring."""
    gone, born = below - above, above - below
    if len(gone) != 2 or len(born) != 2:
        return False
    return frozenset().union(*gone) == frozenset().union(*born)


def _chain_surgeries(sf: SliceFibration, gap_pts, preferred_for):
    """Yield every way to pick one band surgery per interval so the rewired
    family still chains as a door swap at each singular level.

    Depth-first over the candidate surgeries, local-model anchors first;
    deterministic, and pruned hard by the chain condition as the sweep
    proceeds.  The caller keeps the first solution whose assembled slice
    passes full validation.
    """
    entries = list(sf.family)
    m = len(entries)
    results: list[Pairing | None] = [None] * m

    def feasible(k: int, cand: Pairing) -> bool:
        prev = results[(k - 1) % m]
        if prev is not None and not _is_door_swap(prev, cand):
            return False
        nxt = results[(k + 1) % m]
        if nxt is not None and not _is_door_swap(cand, nxt):
            return False
        return True

    def dfs(k: int):
        if k == m:
            yield list(results)
            return
        _, pairing = entries[k]
        for cand, _choice in _surgery_candidates(pairing, preferred_for(k), gap_pts):
            if not feasible(k, cand):
                continue
            results[k] = cand
            yield from dfs(k + 1)
            results[k] = None

    yield from dfs(0)


def detect_gap_phase(sf: SliceFibration, g: int) -> int | None:
    """Read a gap's crossing count parity off the base-regime pattern."""
    a, b, ap, bp = _gap_points(sf, g)
    base = sf.pairing_at(Fraction(0))
    if frozenset({a, ap}) in base and frozenset({b, bp}) in base:
        return 0
    if frozenset({a, b}) in base or frozenset({ap, bp}) in base:
        return 1
    if frozenset({a, bp}) in base or frozenset({ap, b}) in base:
        return 2
    return None


def crossing_move(
    sf: SliceFibration,
    j: int,
    sign: int,
    first_occurrence: bool,
    phase: int | None = None,
    expected_sign: int | None = None,
):
    """One crossing of the braid word: a full-turn band movie, then the two
    strand circles exchange rows and labels.

    Every fiber receives exactly one band surgery.  The local rewiring
    depends on how many crossings the gap has already absorbed (first
    occurrences start from the freshly opened pattern, repeats from the
    exchanged one, alternating between its two forms thereafter).
    """
    _require_valid(sf, "crossing_move")
    if sign not in (1, -1):
        raise MoveError(f"crossing sign must be +-1, got {sign}")
    if expected_sign is not None and sign != expected_sign:
        raise SignMismatch(
            f"letter sign {sign} conflicts with signature sign {expected_sign}"
        )
    rows = sf.rows()
    if j < 1 or j + 1 not in rows or j not in rows:
        raise PatternMismatch(f"no adjacent rows {j},{j + 1} for a crossing")
    a, b, ap, bp = _gap_points(sf, j)
    if phase is None:
        phase = detect_gap_phase(sf, j)
        if phase is None:
            raise PatternMismatch(
                f"cannot read the gap-{j} pattern off the base regime"
            )
    if first_occurrence != (phase == 0):
        raise PatternMismatch(
            f"occurrence flag {first_occurrence} conflicts with gap phase {phase}"
        )
    delta = gap_delta(j)
    gap_xs = [
        x
        for x in sf.xsings
        if x.theta in (delta, 1 - delta)
        and len({a, b, ap, bp} & set(x.germs)) >= 2
    ]
    if len(gap_xs) != 2:
        raise PatternMismatch(f"gap {j} is not guarded by its saddle pair")

    levels = sorted({x.theta for x in sf.xsings})

    def preferred_for(k: int):
        (lo, hi), _ = sf.family[k]
        mid = lo + ((hi - lo) % 1 or Fraction(1)) / 2
        x_side = angle_in(norm_angle(mid), norm_angle(-delta), delta)
        return _crossing_anchor(phase, x_side, a, b, ap, bp, sign)

    chained = _chain_surgeries(sf, (a, b, ap, bp), preferred_for)
    if chained is None:
        raise PatternMismatch(
            f"no chain of band surgeries realizes the crossing at gap {j}"
        )
    new_pairings, _choices = chained
    family = tuple(
        (iv, new_pairings[k]) for k, (iv, _) in enumerate(sf.family)
    )
    # every saddle whose doors were rewired acquires a re-solved germ table
    changed = []
    for x in sf.xsings:
        k = levels.index(x.theta)
        below_new = new_pairings[(k - 1) % len(levels)]
        above_new = new_pairings[k]
        if (below_new - above_new) != x.lower_doors() or (
            above_new - below_new
        ) != x.upper_doors():
            changed.append(x.xid)
    xsings = _resolve_gap_germs(sf.xsings, family, changed)
    # exchange rows and labels of the strand circles
    circles = []
    for c in sf.circles:
        if c.cid == a:
            circles.append(replace(c, row=j + 1, label=(LEFT, j + 1)))
        elif c.cid == b:
            circles.append(replace(c, row=j, label=(LEFT, j)))
        else:
            circles.append(c)
    after = SliceFibration(
        circles=tuple(circles),
        xsings=xsings,
        family=family,
        closed_leaves=(0,) * len(family),
        pending_rotation=sf.pending_rotation,
    )
    _require_valid(after, "crossing_move output")

    transported = next(
        x for x in gap_xs if (x.theta == delta) == (sign == 1)
    )
    winding = Fraction(1) if not transported.outward_upper else Fraction(-1)
    eta = EtaSpec(
        xid=transported.xid,
        endpoint_theta=transported.theta,
        winding=winding,
        certificate_first=tuple(str(t) for t in levels),
        certificate_second=tuple(str(t) for t in levels),
    )
    record = MoveRecord(
        kind="crossing",
        params=(j, sign, bool(first_occurrence), phase),
        interval=(Fraction(0), Fraction(0)),
        before=-1,
        after=-1,
        fiber_effects=((FULL_CIRCLE, SADDLE),),
        eta=eta,
    )
    return after, record


def _resolve_gap_germs(xsings, family, xids):
    """Re-solve germ tables from the rewired family at the given saddles."""
    levels = sorted({x.theta for x in xsings})
    pair_at = {iv[0]: pairing for iv, pairing in family}

    def around(theta: Angle):
        k = levels.index(theta)
        above = pair_at[levels[k]]
        below = pair_at[levels[k - 1]] if k > 0 else pair_at[levels[-1]]
        return below, above

    out = []
    for x in xsings:
        if x.xid not in xids:
            out.append(x)
            continue
        below, above = around(x.theta)
        lower = below - above
        upper = above - below
        if len(lower) != 2 or len(upper) != 2:
            raise MoveError(
                f"{x.xid}: rewired family does not isolate a door swap at {x.theta}"
            )
        out.append(replace(x, germs=solve_germs(x.germs, lower, upper)))
    return tuple(out)


def solve_germs(old, lower: Pairing, upper: Pairing):
    """Pick the germ quadruple matching the given doors, preferring the
    cyclic order closest to the previous one."""
    lowers = [tuple(sorted(p)) for p in sorted(lower, key=sorted)]
    cands = []
    for p in lowers:
        for g1, g2 in (p, p[::-1]):
            g0 = pairing_partner(upper, g1)
            g3 = pairing_partner(upper, g2)
            if g0 is None or g3 is None:
                continue
            cand = (g0, g1, g2, g3)
            if len(set(cand)) == 4:
                cands.append(cand)
    if not cands:
        raise MoveError("no germ quadruple realizes the door swap")

    def score(cand):
        old_adj = {(old[k], old[(k + 1) % 4]) for k in range(4)}
        new_adj = {(cand[k], cand[(k + 1) % 4]) for k in range(4)}
        return len(old_adj & new_adj)

    cands.sort(key=lambda c: (-score(c), c))
    return cands[0]


# -- caps ---------------------------------------------------------------------


def cap_off(sf: SliceFibration):
    """Close the final annulus over the top strand maximum."""
    _require_valid(sf, "cap_off")
    if len(sf.circles) != 2 or sf.xsings:
        raise PatternMismatch("cap_off needs a bare annulus slice")
    after = SliceFibration(
        circles=(),
        xsings=(),
        family=whole_circle_family(frozenset()),
        closed_leaves=(0,),
    )
    record = MoveRecord(
        kind="cap_off",
        params=(),
        interval=(Fraction(0), Fraction(0)),
        before=-1,
        after=-1,
        fiber_effects=((FULL_CIRCLE, ARC_DEATH),),
    )
    return after, record


# -- classification -----------------------------------------------------------

MODEL_TABLE = {
    "meridional_start": ("Model(ii)", "Model(viii)"),
    "min_movie": ("Model(iv)", "Model(viii)"),
    "max_movie": ("Model(vii)", "Model(iii)"),
    "cap_off": ("Model(vii)", "Model(vi)"),
    "rotation": (),
    "band_movie": ("ArrowX",),
    "crossing": ("ArrowX",),
}


def classify_event(record: MoveRecord, slice_after: SliceFibration | None = None):
    """Match every singular event of a record against the local models.

    Transport moves additionally check that the declared winding agrees
    with the singularity's arrow decoration; a conflict reports Unmatched.
    """
    models = list(MODEL_TABLE.get(record.kind, ("Unmatched",)))
    if record.kind in ("band_movie", "crossing") and record.eta is not None:
        if record.eta.winding == 0:
            return []
        if slice_after is not None:
            try:
                x = slice_after.xsing(record.eta.xid)
            except SliceError:
                return ["Unmatched"]
            downward = record.eta.winding > 0
            if downward == x.outward_upper:
                return ["Unmatched"]
        if not record.eta.balanced():
            return ["Unmatched"]
    return models
