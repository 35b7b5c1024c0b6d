"""Diagram containers and commutativity verdicts.

A diagram bundles a generator map, named objects of the lifted algebra, and
named edges carrying lift terms between them. A goal is a parallel pair of
edge paths; checking one dissolves both composites and compares the results.
In the braided flavor the verdict is tri-state, because a pair of composites
can disagree as braids while still agreeing at the permutation level; the
symmetric and plain flavors collapse to a binary verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .braid_core import Perm, braid_str, normalize_braid, perm_braid, perm_one_line
from .errors import BoundaryError, StructureError, PathError, UnknownName, UnsupportedOp
from .free_cat import (
    Flavor,
    FreeMor,
    Gen,
    Obj,
    fmor_equal,
    permutation_shadow,
    project_generator,
    underlying_permutation,
)
from .functor_eval import FunctorSpec, lambda_eval
from .ualg import ObjMap, UCompose, UId, UMor, UObj, dissolve, format_uobj, umor_shadow, validate_umor

EQUAL = "equal"
EQUAL_IN_S_ONLY = "equal_in_s_only"
NOT_EQUAL = "not_equal"

Verdict = str


@dataclass(frozen=True)
class Edge:
    name: str
    source: str
    target: str
    term: UMor


@dataclass(frozen=True)
class Goal:
    """A parallel pair of paths, each a tuple of edge names written
    outermost-first: the last name is applied first."""

    name: str
    left: tuple[str, ...]
    right: tuple[str, ...]


@dataclass(frozen=True)
class Diagram:
    flavor: Flavor
    phi: ObjMap
    nodes: dict[str, UObj]
    edges: dict[str, Edge]
    goals: tuple[Goal, ...]
    functor: FunctorSpec | None = None
    interp: dict[str, Obj] | None = None


def validate_diagram(d: Diagram) -> None:
    """Check every edge term against its declared endpoints and every goal
    against its paths. Nodes are expected in normalized form."""
    for e in d.edges.values():
        for node in (e.source, e.target):
            if node not in d.nodes:
                raise UnknownName(f"edge {e.name}: no node named {node!r}")
        src, tgt = validate_umor(e.term, d.phi, d.flavor)
        if src != d.nodes[e.source]:
            raise BoundaryError(
                f"edge {e.name}: term starts at {format_uobj(src)}, "
                f"node {e.source} is {format_uobj(d.nodes[e.source])}"
            )
        if tgt != d.nodes[e.target]:
            raise BoundaryError(
                f"edge {e.name}: term ends at {format_uobj(tgt)}, "
                f"node {e.target} is {format_uobj(d.nodes[e.target])}"
            )
    for g in d.goals:
        if not g.left or not g.right:
            raise PathError(f"goal {g.name}: both sides need at least one edge")
        lends = path_endpoints(d, g.left)
        rends = path_endpoints(d, g.right)
        if lends != rends:
            raise BoundaryError(
                f"goal {g.name}: sides run {lends[0]} -> {lends[1]} and {rends[0]} -> {rends[1]}"
            )


def _edge(d: Diagram, name: str) -> Edge:
    e = d.edges.get(name)
    if e is None:
        raise UnknownName(f"no edge named {name!r}")
    return e


def path_endpoints(d: Diagram, path: Sequence[str]) -> tuple[str, str]:
    """Source and target node names of a nonempty path, checking junctions."""
    if not path:
        raise PathError("empty path has no endpoints")
    for late, early in zip(path, path[1:]):
        if _edge(d, late).source != _edge(d, early).target:
            raise PathError(
                f"cannot compose {late} after {early}: {early} ends at "
                f"{_edge(d, early).target}, {late} starts at {_edge(d, late).source}"
            )
    return _edge(d, path[-1]).source, _edge(d, path[0]).target


def compose_path(d: Diagram, path: Sequence[str], at: str | None = None) -> UMor:
    """The composite term of a path written outermost-first. An empty path
    is an identity and needs an explicit node to sit at."""
    if not path:
        if at is None:
            raise PathError("empty path needs a node")
        if at not in d.nodes:
            raise UnknownName(f"no node named {at!r}")
        return UId(d.nodes[at])
    path_endpoints(d, path)
    term = _edge(d, path[0]).term
    for name in path[1:]:
        term = UCompose(term, _edge(d, name).term)
    return term


def check_goal(d: Diagram, goal: Goal) -> Verdict:
    lv = dissolve(compose_path(d, goal.left), d.phi, d.flavor)
    rv = dissolve(compose_path(d, goal.right), d.phi, d.flavor)
    if fmor_equal(lv, rv):
        return EQUAL
    if d.flavor == "B" and underlying_permutation(lv) == underlying_permutation(rv):
        return EQUAL_IN_S_ONLY
    return NOT_EQUAL


@dataclass(frozen=True)
class SideReport:
    path: tuple[str, ...]
    word: str
    nf: str
    perm: Perm
    image: FreeMor | None = None


@dataclass(frozen=True)
class GoalReport:
    goal: str
    verdict: Verdict
    left: SideReport
    right: SideReport
    projections: dict[Gen, tuple[Perm, Perm]]


def _side_report(d: Diagram, path: Sequence[str], u: FreeMor, image: FreeMor | None) -> SideReport:
    if d.flavor == "B":
        word = braid_str(u.content)
        nf = str(normalize_braid(u.content))
    elif d.flavor == "S":
        word = braid_str(perm_braid(u.content))
        nf = word
    else:
        word = ""
        nf = ""
    return SideReport(tuple(path), word, nf, underlying_permutation(u), image)


def explain_goal(
    d: Diagram,
    goal: Goal,
    functor: FunctorSpec | None = None,
    interp: Mapping[str, Obj] | None = None,
) -> GoalReport:
    """Everything check_goal sees, plus per-generator self-permutations of
    the permutation shadows and, when a functor is configured, the evaluated
    composites themselves."""
    functor = functor if functor is not None else d.functor
    interp = interp if interp is not None else d.interp
    lt = compose_path(d, goal.left)
    rt = compose_path(d, goal.right)
    lv = dissolve(lt, d.phi, d.flavor)
    rv = dissolve(rt, d.phi, d.flavor)
    images: tuple[FreeMor | None, FreeMor | None] = (None, None)
    if functor is not None and interp is not None:
        images = (
            lambda_eval(lt, functor, interp, d.phi),
            lambda_eval(rt, functor, interp, d.phi),
        )
    ls, rs = permutation_shadow(lv), permutation_shadow(rv)
    projections = {
        g: (project_generator(ls, g), project_generator(rs, g))
        for g in d.phi.target.names
    }
    return GoalReport(
        goal=goal.name,
        verdict=check_goal(d, goal),
        left=_side_report(d, goal.left, lv, images[0]),
        right=_side_report(d, goal.right, rv, images[1]),
        projections=projections,
    )


def report_json(rep: GoalReport) -> dict:
    """The stable machine shape. Permutations are 1-based one-line images,
    matching braid letter indexing."""

    def side(s: SideReport) -> dict:
        return {"word": s.word, "nf": s.nf, "perm": perm_one_line(s.perm)}

    return {
        "goal": rep.goal,
        "verdict": rep.verdict,
        "left": side(rep.left),
        "right": side(rep.right),
        "projections": {
            g: {"left": perm_one_line(l), "right": perm_one_line(r)}
            for g, (l, r) in rep.projections.items()
        },
    }


def diagram_shadow(d: Diagram) -> Diagram:
    """The same diagram with every braid forgotten down to its permutation.
    Verdicts of the shadow agree with the original when that was EQUAL or
    EQUAL_IN_S_ONLY."""
    if d.flavor == "M":
        raise UnsupportedOp("plain monoidal diagrams have no symmetric shadow")
    edges = {name: Edge(e.name, e.source, e.target, umor_shadow(e.term)) for name, e in d.edges.items()}
    return Diagram("S", d.phi, dict(d.nodes), edges, d.goals, None, d.interp)


def all_parallel_goals(d: Diagram, max_edges: int = 12) -> tuple[Goal, ...]:
    """Every unordered pair of distinct simple parallel paths, as goals.
    Capped by edge count: path enumeration is exponential in general."""
    if len(d.edges) > max_edges:
        raise StructureError(f"{len(d.edges)} edges is past the enumeration cap ({max_edges})")
    outgoing: dict[str, list[Edge]] = {}
    for e in d.edges.values():
        outgoing.setdefault(e.source, []).append(e)
    for es in outgoing.values():
        es.sort(key=lambda e: e.name)

    paths: dict[tuple[str, str], list[tuple[str, ...]]] = {}

    def walk(node: str, seen: tuple[str, ...], trail: tuple[str, ...]) -> None:
        for e in outgoing.get(node, ()):
            if e.target in seen:
                continue
            found = trail + (e.name,)
            paths.setdefault((seen[0], e.target), []).append(found)
            walk(e.target, seen + (e.target,), found)

    for node in sorted(d.nodes):
        walk(node, (node,), ())

    goals: list[Goal] = []
    for (src, tgt), found in sorted(paths.items()):
        for i in range(len(found)):
            for j in range(i + 1, len(found)):
                # stored head-first; goals list edges outermost-first
                left = tuple(reversed(found[i]))
                right = tuple(reversed(found[j]))
                goals.append(Goal(f"{src}..{tgt}#{len(goals)}", left, right))
    return tuple(goals)
