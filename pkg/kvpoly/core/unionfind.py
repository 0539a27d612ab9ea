"""
Union-find with parity.

Each element carries a bit relative to its root; ``union(a, b, parity)``
records ``bit(a) xor bit(b) == parity`` and reports contradictions.
"""

import logging
from typing import Dict, Hashable, Iterable, List, Tuple

logger = logging.getLogger(__name__)


class ParityUnionFind:
    """Disjoint sets with a parity offset from each element to its root."""

    def __init__(self, elements: Iterable[Hashable] = ()) -> None:
        self.parents: Dict[Hashable, Hashable] = {}
        self.parity: Dict[Hashable, int] = {}
        self.heights: Dict[Hashable, int] = {}
        for element in elements:
            self.add(element)

    def add(self, element: Hashable) -> None:
        if element not in self.parents:
            self.parents[element] = element
            self.parity[element] = 0
            self.heights[element] = 1

    def find(self, element: Hashable) -> Tuple[Hashable, int]:
        """
        Root of an element and the element's parity relative to it.

        Compresses the path on the way back.
        """
        path: List[Hashable] = []
        node = element
        while self.parents[node] != node:
            path.append(node)
            node = self.parents[node]
        root = node
        # Walk back from the node nearest the root, accumulating parity.
        acc = 0
        for node in reversed(path):
            acc ^= self.parity[node]
            self.parity[node] = acc
            self.parents[node] = root
        return root, self.parity[element] if path else 0

    def union(self, a: Hashable, b: Hashable, parity: int) -> bool:
        """
        Require ``bit(a) xor bit(b) == parity``.

        Returns:
            False if the requirement contradicts earlier ones, True otherwise
        """
        root_a, pa = self.find(a)
        root_b, pb = self.find(b)
        if root_a == root_b:
            consistent = (pa ^ pb) == parity
            if not consistent:
                logger.debug(f"Parity conflict between {a!r} and {b!r}")
            return consistent
        if self.heights[root_a] > self.heights[root_b]:
            root_a, root_b, pa, pb = root_b, root_a, pb, pa
        self.parents[root_a] = root_b
        self.parity[root_a] = pa ^ pb ^ parity
        self.heights[root_b] = max(self.heights[root_b], self.heights[root_a] + 1)
        return True

    def roots(self) -> List[Hashable]:
        return sorted({self.find(element)[0] for element in self.parents})
