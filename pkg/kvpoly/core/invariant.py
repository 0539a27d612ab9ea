"""
kvpoly Invariants

Assembles the bracket [G] from the orientation state sum, the partition
polynomial {G}, the normalized invariant P(G) and the one-crossing criterion.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Tuple

from .diagram import (
    Diagram,
    DiagramError,
    component_units,
    diagram_components,
    graph_components,
    smooth_A,
    smooth_B,
    vertexify,
)
from .laurent import (
    ONE,
    VERTEX_FACTOR,
    ZERO,
    LaurentPolynomial,
    lp_add,
    lp_monomial,
    lp_mul,
    lp_pow,
    lp_scale,
    lp_to_json,
)
from .orientation import (
    OrientationAssignment,
    crossing_sign,
    enumerate_hyperbolic,
    hyperbolic_state_sum,
    twisting_number,
    writhe,
)

logger = logging.getLogger(__name__)


class Mark(str, Enum):
    """Partition mark at a crossing; vertical marks carry signature A."""

    VERTICAL = "vertical"
    HORIZONTAL = "horizontal"


@dataclass(frozen=True)
class PartitionClass:
    """Orbit of hyperbolic orientations under reversal of whole diagram components."""

    marks: Tuple[Tuple[int, Mark], ...]
    signature: LaurentPolynomial
    representative: OrientationAssignment
    size: int


@dataclass(frozen=True)
class OneCrossingResult:
    vanishes: bool
    c_a: int
    c_b: int
    c_v: int


@dataclass(frozen=True)
class InvariantReport:
    """Everything ``kv compute`` reports for one diagram."""

    bracket: LaurentPolynomial
    braces: LaurentPolynomial
    normalized: LaurentPolynomial
    twist: int
    c: int
    v: int
    crossings: int
    diagram_components: int
    separable: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bracket": lp_to_json(self.bracket),
            "braces": lp_to_json(self.braces),
            "normalized": lp_to_json(self.normalized),
            "twist": self.twist,
            "c": self.c,
            "v": self.v,
            "crossings": self.crossings,
            "diagram_components": self.diagram_components,
            "separable": self.separable,
        }


def planar_value(c: int, v: int) -> LaurentPolynomial:
    """Closed form for crossing-free diagrams: 2^(c-1) (-A - A^-1)^v."""
    if c < 1:
        raise ValueError(f"Component count must be positive, got {c}")
    return lp_scale(lp_pow(VERTEX_FACTOR, v), Fraction(2) ** (c - 1))


def bracket(d: Diagram) -> LaurentPolynomial:
    """[G] = 1/2 (-A - A^-1)^v * sum over hyperbolic orientations of A^writhe."""
    total = lp_mul(lp_pow(VERTEX_FACTOR, d.n_vertices), hyperbolic_state_sum(d))
    return lp_scale(total, Fraction(1, 2))


def _canonical(d: Diagram, h: OrientationAssignment, groups) -> OrientationAssignment:
    """Reverse each diagram component whose smallest unit runs backwards."""
    flip_arcs: List[int] = []
    flip_loops: List[int] = []
    for group in groups:
        kind, index = min(group)
        forward = h.direction(index) if kind == "arc" else h.loops[index]
        if not forward:
            for unit_kind, unit in group:
                (flip_arcs if unit_kind == "arc" else flip_loops).append(unit)
    return h.reversed(flip_arcs, flip_loops)


def partition_classes(d: Diagram) -> List[PartitionClass]:
    """
    Partitions as orbits of hyperbolic orientations.

    Two orientations are in the same class when they differ by reversing whole
    diagram components. A crossing is marked vertical when its sign is +1.

    Returns:
        2^(c - dcount) classes for a separable diagram, none otherwise;
        a crossing-free diagram gives the single null partition
    """
    hyperbolic = enumerate_hyperbolic(d)
    if not hyperbolic:
        return []
    groups = component_units(d, join_crossings=True)

    orbits: Dict[OrientationAssignment, int] = {}
    for h in hyperbolic:
        key = _canonical(d, h, groups)
        orbits[key] = orbits.get(key, 0) + 1

    classes: List[PartitionClass] = []
    for representative, size in orbits.items():
        marks = tuple(
            (i, Mark.VERTICAL if crossing_sign(d, representative, i) == 1 else Mark.HORIZONTAL)
            for i in d.crossing_indices
        )
        signature = lp_monomial(1, writhe(d, representative))
        classes.append(PartitionClass(marks, signature, representative, size))

    classes.sort(key=lambda p: (-p.signature.max_degree, [m.value for _, m in p.marks]))
    logger.debug(f"{len(classes)} partition classes from {len(hyperbolic)} orientations")
    return classes


def braces(d: Diagram) -> LaurentPolynomial:
    """{G}: sum of partition signatures, zero for a non-separable diagram."""
    total = ZERO
    for partition in partition_classes(d):
        total = lp_add(total, partition.signature)
    return total


def normalized(d: Diagram) -> LaurentPolynomial:
    """
    P(G) = A^-t [G] / (2^(c-1) (-A - A^-1)^v), computed without division
    as A^-t * state sum * 2^-c.
    """
    t = twisting_number(d)
    c = graph_components(d)
    shifted = lp_mul(lp_monomial(1, -t), hyperbolic_state_sum(d))
    return lp_scale(shifted, Fraction(1, 2**c))


def planarity_obstruction(d: Diagram) -> bool:
    """True when P(G) != 1, which rules out isotopy to a planar graph."""
    return normalized(d) != ONE


def one_crossing_test(d: Diagram) -> OneCrossingResult:
    """
    Compare component counts of both smoothings and the vertexification of
    the only crossing; equal counts mean the bracket vanishes.

    Raises:
        DiagramError: If the diagram does not have exactly one crossing
    """
    crossings = d.crossing_indices
    if len(crossings) != 1:
        raise DiagramError(f"One-crossing test needs exactly 1 crossing, found {len(crossings)}")
    index = crossings[0]
    c_a = graph_components(smooth_A(d, index))
    c_b = graph_components(smooth_B(d, index))
    c_v = graph_components(vertexify(d, index))
    return OneCrossingResult(c_a == c_b == c_v, c_a, c_b, c_v)


def compute_report(d: Diagram, workers: int = 1) -> InvariantReport:
    """Compute every reported invariant of a diagram."""
    state_sum = hyperbolic_state_sum(d, workers=workers)
    t = twisting_number(d)
    c = graph_components(d)
    v = d.n_vertices
    dcount = diagram_components(d)
    report = InvariantReport(
        bracket=lp_scale(lp_mul(lp_pow(VERTEX_FACTOR, v), state_sum), Fraction(1, 2)),
        braces=braces(d),
        normalized=lp_scale(lp_mul(lp_monomial(1, -t), state_sum), Fraction(1, 2**c)),
        twist=t,
        c=c,
        v=v,
        crossings=d.n_crossings,
        diagram_components=dcount,
        separable=not state_sum.is_zero,
    )
    logger.debug(f"Report for {d}: bracket = {report.bracket}")
    return report
