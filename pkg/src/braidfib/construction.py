"""End-to-end construction of the fibration movie for a homogeneous braid.

The movie runs over a bounded timeline: the bottom cap on [-1, 0], the
strand minima on [0, 1], one crossing per word letter on the uniform
subdivision of [1, 2], the strand maxima on [2, 3], and the top cap on
[3, 4].  ``build_movie`` is deterministic: the same word always yields the
same records, slices, and serialization bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction

from .braid import (
    BraidWord,
    HomogeneitySignature,
    NotHomogeneous,
    first_occurrences,
    homogeneity_signature,
)
from .moves import (
    ARC_BIRTH,
    FULL_CIRCLE,
    MODEL_TABLE,
    MoveError,
    MoveRecord,
    cap_off,
    classify_event,
    crossing_move,
    max_movie,
    min_movie,
    rotate_pair,
)
from .slicefib import (
    SliceFibration,
    initial_annulus_fibration,
    validate_slice,
    whole_circle_family,
)

FORMAT_VERSION = "braidfib-movie/1"


class ConstructionError(RuntimeError):
    """An internal move failed while building a movie (a construction bug,
    as opposed to a rejected input)."""

    def __init__(self, record_index: int, message: str):
        self.record_index = record_index
        super().__init__(f"record {record_index}: {message}")


@dataclass(frozen=True)
class Timeline:
    """Segment boundaries of the movie, with letters assigned to crossings.

    ``boundaries`` runs -1, 0, .., 1 = t_1 < t_2 < .. < t_{n+1} = 2, .., 3, 4.
    """

    boundaries: tuple[Fraction, ...]
    crossing_times: tuple[Fraction, ...]  # t_1 .. t_{n+1}
    letters: tuple[tuple[int, int], ...]

    def crossing_interval(self, i: int) -> tuple[Fraction, Fraction]:
        return self.crossing_times[i], self.crossing_times[i + 1]


def build_timeline(word: BraidWord) -> Timeline:
    """Uniform crossing times t_i = 1 + (i-1)/n inside [1, 2]."""
    n = word.length
    if n:
        crossing = tuple(Fraction(1) + Fraction(i, n) for i in range(n + 1))
    else:
        crossing = (Fraction(1), Fraction(2))
    b = word.strands
    step1 = tuple(
        Fraction(k, 2 * (b - 1)) for k in range(2 * (b - 1) + 1)
    ) if b > 1 else (Fraction(0), Fraction(1))
    step3 = tuple(
        Fraction(2) + Fraction(k, b - 1) for k in range(b)
    ) if b > 1 else (Fraction(2), Fraction(3))
    bounds = [Fraction(-1)]
    for t in step1 + crossing[1:-1] + step3 + (Fraction(4),):
        if t not in bounds:
            bounds.append(t)
    bounds = sorted(set(bounds) | {Fraction(0), Fraction(1), Fraction(2), Fraction(3)})
    return Timeline(tuple(bounds), crossing, word.letters)


@dataclass(frozen=True)
class Movie:
    """The full movie: records in time order plus every boundary slice."""

    braid: BraidWord
    signature: HomogeneitySignature
    timeline: Timeline
    records: tuple[MoveRecord, ...]
    slices: tuple[SliceFibration, ...]

    def slice_before(self, record: MoveRecord) -> SliceFibration:
        return self.slices[record.before]

    def slice_after(self, record: MoveRecord) -> SliceFibration:
        return self.slices[record.after]


@dataclass
class _Builder:
    records: list
    slices: list

    def push(self, before_idx: int, sf: SliceFibration, record: MoveRecord,
             interval: tuple[Fraction, Fraction]) -> int:
        self.slices.append(sf)
        after_idx = len(self.slices) - 1
        self.records.append(
            replace(record, before=before_idx, after=after_idx, interval=interval)
        )
        return after_idx


def _empty_slice() -> SliceFibration:
    return SliceFibration(
        circles=(), xsings=(), family=whole_circle_family(frozenset()),
        closed_leaves=(0,),
    )


def run_step1(word: BraidWord) -> tuple[list[MoveRecord], list[SliceFibration]]:
    """Bottom cap and strand minima: meridional start, then per row i >= 2 a
    rotation of sign s_{i-1} followed by the opening of the row."""
    sig = homogeneity_signature(word)
    b = word.strands
    builder = _Builder([], [])
    builder.slices.append(_empty_slice())
    sf = initial_annulus_fibration()
    start = MoveRecord(
        kind="meridional_start",
        params=(),
        interval=(Fraction(-1), Fraction(0)),
        before=0,
        after=1,
        fiber_effects=((FULL_CIRCLE, ARC_BIRTH),),
    )
    idx = builder.push(0, sf, start, (Fraction(-1), Fraction(0)))
    n_steps = 2 * (b - 1)
    for i in range(2, b + 1):
        k = 2 * (i - 2)
        t0 = Fraction(k, n_steps)
        t1 = Fraction(k + 1, n_steps)
        t2 = Fraction(k + 2, n_steps)
        try:
            sf, rec = rotate_pair(sf, i, sig.sign(i - 1))
            idx = builder.push(idx, sf, rec, (t0, t1))
            sf, rec = min_movie(sf, i)
            idx = builder.push(idx, sf, rec, (t1, t2))
        except MoveError as exc:
            raise ConstructionError(len(builder.records), str(exc)) from exc
    return builder.records, builder.slices


def run_step2(
    records: list[MoveRecord],
    slices: list[SliceFibration],
    word: BraidWord,
) -> tuple[list[MoveRecord], list[SliceFibration]]:
    """One crossing move per word letter on the uniform timeline."""
    sig = homogeneity_signature(word)
    timeline = build_timeline(word)
    firsts = first_occurrences(word)
    builder = _Builder(records, slices)
    sf = slices[-1]
    idx = len(slices) - 1
    phases: dict[int, int] = {}
    for i, (j, sign) in enumerate(word.letters):
        phase = phases.get(j, 0)
        try:
            sf, rec = crossing_move(
                sf, j, sign, firsts[i],
                phase=phase, expected_sign=sig.sign(j),
            )
        except MoveError as exc:
            raise ConstructionError(len(builder.records), str(exc)) from exc
        idx = builder.push(idx, sf, rec, timeline.crossing_interval(i))
        phases[j] = phase + 1
    return builder.records, builder.slices


def run_step3(
    records: list[MoveRecord],
    slices: list[SliceFibration],
    word: BraidWord,
) -> tuple[list[MoveRecord], list[SliceFibration]]:
    """Strand maxima from the bottom row up, then the top cap."""
    b = word.strands
    builder = _Builder(records, slices)
    sf = slices[-1]
    idx = len(slices) - 1
    n_steps = max(b - 1, 1)
    for count, i in enumerate(range(b, 1, -1)):
        t0 = Fraction(2) + Fraction(count, n_steps)
        t1 = Fraction(2) + Fraction(count + 1, n_steps)
        try:
            sf, rec = max_movie(sf, i)
        except MoveError as exc:
            raise ConstructionError(len(builder.records), str(exc)) from exc
        idx = builder.push(idx, sf, rec, (t0, t1))
    try:
        sf, rec = cap_off(sf)
    except MoveError as exc:
        raise ConstructionError(len(builder.records), str(exc)) from exc
    builder.push(idx, sf, rec, (Fraction(3), Fraction(4)))
    return builder.records, builder.slices


def build_movie(word: BraidWord) -> Movie:
    """Compose the three steps for a homogeneous word.

    Raises NotHomogeneous for rejected inputs and ConstructionError for
    internal move failures (which indicate a bug, not bad input).
    """
    try:
        sig = homogeneity_signature(word)
    except NotHomogeneous:
        raise
    except Exception as exc:
        raise NotHomogeneous(str(exc)) from exc
    records, slices = run_step1(word)
    records, slices = run_step2(records, slices, word)
    records, slices = run_step3(records, slices, word)
    return Movie(
        braid=word,
        signature=sig,
        timeline=build_timeline(word),
        records=tuple(records),
        slices=tuple(slices),
    )


# -- movie validation ---------------------------------------------------------


@dataclass(frozen=True)
class MovieValidation:
    """Verdict per total-function condition, with per-record classification."""

    arrow_issues: tuple[str, ...]
    model_issues: tuple[str, ...]
    end_issues: tuple[str, ...]
    classifications: tuple[tuple[int, tuple[str, ...]], ...]

    @property
    def verdict(self) -> bool:
        return not (self.arrow_issues or self.model_issues or self.end_issues)


def validate_movie(movie: Movie) -> MovieValidation:
    """Check the three conditions that make the total function a fibration:
    consistent arrow data at transported saddles, catalog models at every
    slice-surface event, and trivial fibrations at both caps."""
    arrow: list[str] = []
    model: list[str] = []
    end: list[str] = []
    classifications = []

    for k, rec in enumerate(movie.records):
        before = movie.slices[rec.before] if 0 <= rec.before < len(movie.slices) else None
        after = movie.slices[rec.after] if 0 <= rec.after < len(movie.slices) else None
        if after is not None:
            rep = validate_slice(after)
            if not rep.valid:
                model.append(
                    f"record {k} ({rec.kind}): invalid slice: "
                    + "; ".join(i.code for i in rep.errors)
                )
        models = tuple(classify_event(rec, after))
        classifications.append((k, models))
        if "Unmatched" in models:
            arrow.append(
                f"record {k} ({rec.kind}): event does not match any catalog model"
            )
        elif rec.kind not in MODEL_TABLE:
            model.append(f"record {k}: unknown move kind {rec.kind!r}")
        # declared transport directions must agree with arrow decorations
        if rec.eta is not None and rec.eta.winding != 0 and after is not None:
            try:
                x = after.xsing(rec.eta.xid)
            except Exception:
                arrow.append(f"record {k}: transported saddle vanished")
            else:
                if (rec.eta.winding > 0) == x.outward_upper:
                    arrow.append(
                        f"record {k}: winding {rec.eta.winding} against the "
                        f"arrows of {x.xid}"
                    )
        # fiber effects must partition the circle
        spans = [
            (hi - lo) % 1 if (lo, hi) != FULL_CIRCLE else Fraction(1)
            for (lo, hi), _ in rec.fiber_effects
        ]
        total = sum(spans, Fraction(0))
        if total != 1 and not (
            len(spans) == len(rec.fiber_effects) and total == len(
                [s for s in spans if s == 1]
            )
        ):
            model.append(f"record {k}: fiber effects do not partition the circle")

    if not movie.records:
        end.append("movie has no records")
    else:
        first = movie.slices[movie.records[0].before]
        last = movie.slices[movie.records[-1].after]
        if first.circles:
            end.append("movie does not start from the empty slice")
        if last.circles:
            end.append("movie does not end at the empty slice")
        if movie.records[0].kind != "meridional_start":
            end.append("movie does not open with the bottom cap")
        if movie.records[-1].kind != "cap_off":
            end.append("movie does not close with the top cap")

    return MovieValidation(
        arrow_issues=tuple(arrow),
        model_issues=tuple(model),
        end_issues=tuple(end),
        classifications=tuple(classifications),
    )


# -- serialization ------------------------------------------------------------


def movie_to_json(movie: Movie) -> str:
    """Versioned, byte-stable serialization of a movie."""

    def frac(x: Fraction) -> str:
        return str(x)

    doc = {
        "format_version": FORMAT_VERSION,
        "braid": {
            "word": movie.braid.format(),
            "strands": movie.braid.strands,
            "signature": list(movie.signature.signs),
        },
        "timeline": {
            "boundaries": [frac(t) for t in movie.timeline.boundaries],
            "crossing_times": [frac(t) for t in movie.timeline.crossing_times],
        },
        "records": [
            {
                "index": k,
                "kind": rec.kind,
                "params": [
                    str(p) if isinstance(p, Fraction) else p for p in rec.params
                ],
                "interval": [frac(rec.interval[0]), frac(rec.interval[1])],
                "before": rec.before,
                "after": rec.after,
                "fiber_effects": [
                    {"interval": [frac(lo), frac(hi)], "effect": kind}
                    for (lo, hi), kind in rec.fiber_effects
                ],
                "eta": None
                if rec.eta is None
                else {
                    "xid": rec.eta.xid,
                    "endpoint_theta": frac(rec.eta.endpoint_theta),
                    "winding": frac(rec.eta.winding),
                    "crossed_first": list(rec.eta.certificate_first),
                    "crossed_second": list(rec.eta.certificate_second),
                },
            }
            for k, rec in enumerate(movie.records)
        ],
        "slices": [sf.canonical() for sf in movie.slices],
    }
    return json.dumps(doc, indent=1, sort_keys=True)
