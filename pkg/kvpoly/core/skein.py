"""
kvpoly Skein Oracle

Brute-force evaluation of [G] by expanding every crossing with the skein
relation [X] = A [smooth_A] + A^-1 [smooth_B] + [vertex] down to crossing-free
graphs, plus the per-crossing skein residual of the state-sum evaluator.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Deque

from .diagram import Diagram, graph_components, smooth_A, smooth_B, vertexify
from .invariant import bracket, planar_value
from .laurent import A, A_INV, ONE, ZERO, LaurentPolynomial, lp_add, lp_mul

logger = logging.getLogger(__name__)

DEFAULT_CAP = 12

PIVOTS = ("lowest", "highest")


class ExpansionLimitError(RuntimeError):
    """Raised when a diagram has more crossings than the oracle is allowed to expand."""

    def __init__(self, crossings: int, cap: int) -> None:
        self.crossings = crossings
        self.cap = cap
        super().__init__(f"Diagram has {crossings} crossings, oracle cap is {cap}")


@dataclass(frozen=True)
class ExpansionNode:
    """A diagram on the expansion stack and the A-power weight accumulated to reach it."""

    diagram: Diagram
    weight: LaurentPolynomial


def oracle_bracket(d: Diagram, cap: int = DEFAULT_CAP, pivot: str = "lowest") -> LaurentPolynomial:
    """
    Evaluate [G] by full skein expansion.

    Leaves have no crossings and contribute 2^(c-1) (-A - A^-1)^v.

    Args:
        d: Diagram
        cap: Largest crossing count allowed (3^cap leaves)
        pivot: Expand the "lowest" or "highest" indexed crossing first

    Returns:
        The bracket polynomial

    Raises:
        ExpansionLimitError: If the diagram has more than ``cap`` crossings
        ValueError: If ``pivot`` is not recognised
    """
    if pivot not in PIVOTS:
        raise ValueError(f"Unknown pivot '{pivot}', expected one of {', '.join(PIVOTS)}")
    if d.n_crossings > cap:
        raise ExpansionLimitError(d.n_crossings, cap)

    stack: Deque[ExpansionNode] = deque([ExpansionNode(d, ONE)])
    total = ZERO
    leaves = 0

    while stack:
        node = stack.pop()
        crossings = node.diagram.crossing_indices
        if not crossings:
            value = planar_value(graph_components(node.diagram), node.diagram.n_vertices)
            total = lp_add(total, lp_mul(node.weight, value))
            leaves += 1
            continue

        index = crossings[0] if pivot == "lowest" else crossings[-1]
        stack.append(ExpansionNode(smooth_A(node.diagram, index), lp_mul(node.weight, A)))
        stack.append(ExpansionNode(smooth_B(node.diagram, index), lp_mul(node.weight, A_INV)))
        stack.append(ExpansionNode(vertexify(node.diagram, index), node.weight))

    logger.debug(f"Skein expansion ({pivot} pivot) of {d.n_crossings} crossings: {leaves} leaves")
    return total


def skein_residual(d: Diagram, index: int) -> LaurentPolynomial:
    """
    [G] - (A [smooth_A] + A^-1 [smooth_B] + [vertexify]) at one crossing,
    every term from the state sum. Zero whenever the state sum is correct.

    Raises:
        DiagramError: If the node is a vertex or the index is out of range
    """
    expansion = lp_add(
        lp_add(lp_mul(A, bracket(smooth_A(d, index))), lp_mul(A_INV, bracket(smooth_B(d, index)))),
        bracket(vertexify(d, index)),
    )
    return bracket(d) - expansion
