"""Stepwise rewards over CTE subqueries.

The generated statement is segmented into its CTE bodies plus the final
SELECT; each step's plan is matched against the reference plan and credited
with the newly covered fraction of reference nodes:

    c_i = |(union of matched reference sets through step i)| / |reference nodes|
    r_i = c_i - c_{i-1}

Already-covered reference nodes earn nothing twice, so the increments sum
to the final coverage and never exceed 1.
"""
from __future__ import annotations

from dataclasses import dataclass

from .matching import DEFAULT_ALPHA, MatchError, partial_match
from .planner import lower, normalize, rot_as_tree
from .planner.catalog import Catalog
from .planner.rot import RotError, RotGraph
from .sqlfront import ParseError, parse, tokenize


@dataclass(frozen=True)
class Segment:
    name: str | None  # CTE name; None marks the final SELECT
    span: tuple[int, int]  # character span of the segment body in source
    end_token: int  # index of the token that closes the segment


@dataclass
class Segmentation:
    segments: list[Segment]
    source: str

    def __len__(self) -> int:
        return len(self.segments)


@dataclass(frozen=True)
class StepReward:
    index: int
    matched_count: int  # |covered(i)|
    cumulative: float  # c_i
    increment: float  # r_i
    end_token: int
    error: str | None = None  # lowering failure for this step, if any


@dataclass
class StepTrace:
    steps: list[StepReward]
    reference_node_count: int

    @property
    def total(self) -> float:
        return sum(s.increment for s in self.steps)


def segment_cte(gen_sql: str) -> Segmentation:
    """Split a statement into CTE segments plus the final SELECT."""
    tokens = tokenize(gen_sql)
    ast = parse(gen_sql)
    last_index = len(tokens) - 1
    root = ast.root
    if root.kind != "with-clause":
        first = tokens[0].span[0]
        last = tokens[-1].span[1]
        return Segmentation([Segment(None, (first, last), last_index)], gen_sql)
    segments = []
    for cte in root.children[:-1]:
        segments.append(
            Segment(cte.attrs["name"], tuple(cte.attrs["_body_span"]), cte.attrs["_end_token"])
        )
    main_start = root.attrs.get("_main_start", 0)
    segments.append(Segment(None, (main_start, tokens[-1].span[1]), last_index))
    return Segmentation(segments, gen_sql)


def _prefix_sql(seg: Segmentation, i: int, skip: frozenset[int] = frozenset()) -> str:
    """Executable statement for step i: earlier CTEs plus a star-select of
    step i (the final segment keeps its own body). Segments in `skip` —
    earlier ones that already failed to lower — are left out so an
    independent later step can still earn credit."""
    segment = seg.segments[i]
    clauses = []
    upto = len(seg.segments) - 1 if segment.name is None else i + 1
    for j in range(upto):
        if j in skip:
            continue
        prior = seg.segments[j]
        if prior.name is None:
            continue
        body = seg.source[prior.span[0] : prior.span[1]]
        clauses.append(f"{prior.name} AS ({body})")
    if segment.name is None:
        body = seg.source[segment.span[0] : segment.span[1]]
        if not clauses:
            return body
        return f"WITH {', '.join(clauses)} {body}"
    return f"WITH {', '.join(clauses)} SELECT * FROM {segment.name}"


def step_rot(seg: Segmentation, i: int, catalog: Catalog, skip: frozenset[int] = frozenset()) -> RotGraph:
    """Normalized plan of the i-th segment; raises RotError / ParseError."""
    if not 0 <= i < len(seg.segments):
        raise IndexError(f"segment {i} out of range")
    sql = _prefix_sql(seg, i, skip)
    return normalize(lower(parse(sql), catalog))


def step_rewards(
    gen_sql: str,
    ref_sql: str,
    catalog: Catalog,
    alpha: float = DEFAULT_ALPHA,
) -> StepTrace:
    """Incremental coverage trace of the generated CTE chain against the reference."""
    try:
        ref_rot = normalize(lower(parse(ref_sql), catalog))
    except ParseError as exc:
        raise MatchError("reference", "syntax", str(exc)) from exc
    except RotError as exc:
        raise MatchError("reference", "rot", str(exc)) from exc
    try:
        segmentation = segment_cte(gen_sql)
    except ParseError as exc:
        raise MatchError("generated", "syntax", str(exc)) from exc

    ref_tree = rot_as_tree(ref_rot)
    total_nodes = len(ref_tree)
    covered: set[int] = set()
    steps: list[StepReward] = []
    previous = 0.0
    failed: set[int] = set()
    for i, segment in enumerate(segmentation.segments):
        error = None
        try:
            gen_tree = rot_as_tree(step_rot(segmentation, i, catalog, frozenset(failed)))
            report = partial_match(gen_tree, ref_tree, alpha)
            covered |= report.matched_reference
        except (RotError, ParseError) as exc:  # unlowerable step earns nothing
            error = str(exc)
            failed.add(i)
        cumulative = len(covered) / total_nodes
        steps.append(
            StepReward(
                index=i,
                matched_count=len(covered),
                cumulative=cumulative,
                increment=cumulative - previous,
                end_token=segment.end_token,
                error=error,
            )
        )
        previous = cumulative
    return StepTrace(steps, total_nodes)
