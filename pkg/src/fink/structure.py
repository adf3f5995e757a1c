"""Decomposition graphs, intertwined extraction, star splitting, smallness.

A block lying in two spans has one witness per side.  Its decomposition
graph is bipartite: one vertex per generator used on each side, an edge
whenever the two tetris images share support.  The block is intertwined
when that graph is connected.  Disconnected blocks split along the
connected component of the rightmost left-side generator, and minimality
of the producing prefix forces the discarded part to miss the level k;
a discarded part attaining k is reported as a MinimalityViolation.

``star_split`` decomposes ``star(p, q)`` around an intertwined anchor p
into parts strictly below and strictly above p, after checking that the
pointwise maximum agrees with p on p's whole support window.  Failures of
that window check (ClaimViolation) would falsify the construction and
abort loudly rather than being papered over.
"""

from __future__ import annotations

from dataclasses import dataclass

from .blocks import Subblock, add, star, tetris
from .errors import (
    ClaimViolation,
    MinimalityViolation,
    NoIntersection,
    NotIntertwined,
    WitnessMismatch,
)
from .span import (
    DEFAULT_CAP_BITS,
    Combination,
    CommonElement,
    evaluate,
    first_common_element,
    intersect_spans,
    membership_witness,
)

__all__ = [
    "DecompositionGraph",
    "decomposition_graph",
    "is_intertwined",
    "ExtractionResult",
    "extract_intertwined",
    "star_split",
    "SmallnessCertificate",
    "smallness_check",
]


class _UnionFind:
    def __init__(self, size):
        self.parent = list(range(size))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


@dataclass(frozen=True)
class DecompositionGraph:
    """Bipartite graph over the generator indices used by the two witnesses."""

    left: tuple
    right: tuple
    edges: tuple

    def is_connected(self):
        order = len(self.left) + len(self.right)
        if order <= 1:
            return True
        slot = {("L", i): n for n, i in enumerate(self.left)}
        slot.update({("R", j): len(self.left) + n for n, j in enumerate(self.right)})
        uf = _UnionFind(order)
        for i, j in self.edges:
            uf.union(slot[("L", i)], slot[("R", j)])
        roots = {uf.find(n) for n in range(order)}
        return len(roots) == 1

    def component_of_left(self, vertex):
        """Vertices reachable from the left vertex, as (left set, right set)."""
        by_left = {}
        by_right = {}
        for i, j in self.edges:
            by_left.setdefault(i, []).append(j)
            by_right.setdefault(j, []).append(i)
        seen_left, seen_right = {vertex}, set()
        frontier = [("L", vertex)]
        while frontier:
            side, v = frontier.pop()
            neighbours = by_left.get(v, ()) if side == "L" else by_right.get(v, ())
            for w in neighbours:
                if side == "L":
                    if w not in seen_right:
                        seen_right.add(w)
                        frontier.append(("R", w))
                else:
                    if w not in seen_left:
                        seen_left.add(w)
                        frontier.append(("L", w))
        return frozenset(seen_left), frozenset(seen_right)

    def render_lines(self):
        return [f"L{i} - R{j}" for i, j in self.edges]


def _checked_witnesses(block, left_witness, right_witness, left, right):
    if evaluate(left, left_witness) != block:
        raise WitnessMismatch(f"left witness does not produce {block.render()}")
    if evaluate(right, right_witness) != block:
        raise WitnessMismatch(f"right witness does not produce {block.render()}")


def decomposition_graph(block, left_witness, right_witness, left, right):
    """Build the bipartite support-overlap graph of one common block."""
    _checked_witnesses(block, left_witness, right_witness, left, right)
    left_images = [
        (i, set(tetris(left.blocks[i], e).support)) for i, e in left_witness.terms
    ]
    right_images = [
        (j, set(tetris(right.blocks[j], e).support)) for j, e in right_witness.terms
    ]
    edges = []
    for i, a in left_images:
        for j, b in right_images:
            if a & b:
                edges.append((i, j))
    return DecompositionGraph(
        left=tuple(i for i, _ in left_images),
        right=tuple(j for j, _ in right_images),
        edges=tuple(sorted(edges)),
    )


def is_intertwined(block, left_witness, right_witness, left, right):
    """True when the decomposition graph of the common block is connected."""
    return decomposition_graph(block, left_witness, right_witness, left, right).is_connected()


@dataclass(frozen=True)
class ExtractionResult:
    """An intertwined common block plus the minimal prefix length used."""

    prefix_length: int
    element: CommonElement


def _suffix_split(witness, kept_indices):
    kept, dropped = [], []
    for term in witness.terms:
        (kept if term[0] in kept_indices else dropped).append(term)
    return tuple(kept), tuple(dropped)


def settle_intertwined(element, left, right):
    """Split a common element until its decomposition graph is connected.

    Repeatedly takes the connected component of the rightmost left-side
    generator (an upward-closed set of witness indices on both sides) and
    keeps that part.  A discarded part attaining k raises
    MinimalityViolation: whenever the element came from a minimal prefix,
    such a part would be a common block over a shorter prefix.
    """
    block = element.block
    left_w, right_w = element.left_witness, element.right_witness
    for _ in range(len(left_w.terms) + len(right_w.terms) + 1):
        graph = decomposition_graph(block, left_w, right_w, left, right)
        if graph.is_connected():
            return CommonElement(block, left_w, right_w)
        comp_left, comp_right = graph.component_of_left(max(graph.left))
        # anything but an upward-closed component falsifies the split rule
        if comp_left != {i for i in graph.left if i >= min(comp_left)} or comp_right != {
            j for j in graph.right if j >= min(comp_right)
        }:
            raise ClaimViolation("split component is not upward-closed")
        kept_l, dropped_l = _suffix_split(left_w, comp_left)
        kept_r, dropped_r = _suffix_split(right_w, comp_right)
        dropped_block = evaluate(left, Combination(dropped_l, starred=True))
        if dropped_block != evaluate(right, Combination(dropped_r, starred=True)):
            raise ClaimViolation("discarded parts of the two witnesses disagree")
        if dropped_block.is_block:
            raise MinimalityViolation(
                f"discarded part {dropped_block.render()} attains {dropped_block.k}"
            )
        # the kept part holds every full-value position, so its minimal
        # exponent is 0 on both sides and it stays a span member
        left_w = Combination(kept_l, starred=False)
        right_w = Combination(kept_r, starred=False)
        block = evaluate(left, left_w)
        if block != evaluate(right, right_w):
            raise ClaimViolation("kept parts of the two witnesses disagree")
    raise ClaimViolation("splitting failed to terminate")


def extract_intertwined(left, right, cap_bits=DEFAULT_CAP_BITS):
    """Produce an intertwined block in the intersection of the two spans.

    Finds the minimal prefix of ``left`` whose span meets ``right``'s span,
    takes the least common block in canonical order (lexicographic on the
    value vector), and settles it with the component-split rule.  Raises
    NoIntersection when the full spans are disjoint; MinimalityViolation
    from the split would contradict the minimality of the prefix.
    """
    common = ()
    length = 0
    for length in range(1, len(left) + 1):
        common = intersect_spans(left.prefix(length), right, cap_bits)
        if common:
            break
    if not common:
        raise NoIntersection(f"no common block among {len(left)} generators")
    element = min(common, key=lambda ce: ce.block.values)
    settled = settle_intertwined(element, left.prefix(length), right)
    return ExtractionResult(length, settled)


def star_split(anchor, other, left, right):
    """Split ``star(anchor, other)`` around the intertwined anchor.

    Both arguments are CommonElements over the same two sequences.  Returns
    ``(below, above)`` with ``below < anchor < above``, both lying in the
    starred spans of both sequences, and
    ``add(add(below, anchor.block), above) == star(anchor.block, other.block)``.
    """
    _checked_witnesses(anchor.block, anchor.left_witness, anchor.right_witness, left, right)
    _checked_witnesses(other.block, other.left_witness, other.right_witness, left, right)
    if not is_intertwined(
        anchor.block, anchor.left_witness, anchor.right_witness, left, right
    ):
        raise NotIntertwined(f"anchor {anchor.block.render()} is not intertwined")

    p = anchor.block
    merged = star(p, other.block)
    for pos in range(p.min_support, p.max_support + 1):
        if merged.value_at(pos) != p.value_at(pos):
            raise ClaimViolation(
                f"star disagrees with the anchor at position {pos}: "
                f"{merged.value_at(pos)} != {p.value_at(pos)}"
            )
    below = merged.restrict_below(p.min_support)
    above = merged.restrict_above(p.max_support)
    if add(add(below, p), above) != merged:
        raise ClaimViolation("window split does not reassemble the star")
    if not (below.before(p) and p.before(above)):
        raise ClaimViolation("window split violates the block order")
    for part, name in ((below, "below"), (above, "above")):
        if part.is_empty:
            continue  # the empty subblock is a starred-span member vacuously
        for seq, side in ((left, "left"), (right, "right")):
            if membership_witness(part, seq, starred=True) is None:
                raise ClaimViolation(
                    f"{name} part {part.render()} missing from the {side} starred span"
                )
    return below, above


@dataclass(frozen=True)
class SmallnessCertificate:
    """Outcome of the horizon emptiness probe behind the smallness criterion.

    ``empty_at_horizon`` certifies that after dropping ``tail_index`` blocks
    from the left stream, the two truncated spans share nothing below the
    horizon; ``witness`` carries a common element when the verdict is
    ``nonempty``.
    """

    tail_index: int
    horizon: int
    verdict: str
    witness: CommonElement | None = None

    def render(self):
        return f"small? n={self.tail_index} H={self.horizon} verdict={self.verdict}"


def smallness_check(left_stream, right_stream, tail_index, horizon, cap_bits=DEFAULT_CAP_BITS):
    """Probe whether the left tail's span misses the right span at the horizon."""
    left_seq = left_stream.tail(tail_index).truncate(horizon)
    right_seq = right_stream.truncate(horizon)
    found = first_common_element(left_seq, right_seq, cap_bits)
    if found is None:
        return SmallnessCertificate(tail_index, horizon, "empty_at_horizon")
    return SmallnessCertificate(tail_index, horizon, "nonempty", witness=found)
