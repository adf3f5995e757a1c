"""Family validation and the diagonalization engine.

Given finitely many streams whose spans pairwise intersect in small sets,
the engine picks one block per step, cycling through the members, so that
the growing span of chosen blocks never raises its valuation against any
non-source member.  Each step verifies that stability claim exactly (the
valuation before and after adding the block must agree, and any new common
element must use the fresh block with a positive tetris exponent); a
failure aborts the run with ClaimViolation rather than being skipped.
"""

from __future__ import annotations

from dataclasses import dataclass

from .blocks import peak
from .errors import (
    ClaimViolation,
    HorizonExhausted,
    InvalidSequence,
    MismatchedLevel,
    NotAlmostDisjoint,
)
from .span import (
    DEFAULT_CAP_BITS,
    BlockSequence,
    intersect_spans,
    membership_witness,
    valuation,
)
from .structure import smallness_check

__all__ = [
    "AlmostDisjointFamily",
    "StabilityCheck",
    "DiagonalStep",
    "DiagonalTrace",
    "validate_family",
    "choose_next",
    "run_diagonalization",
]


@dataclass(frozen=True)
class AlmostDisjointFamily:
    """A validated family: streams, truncations, and pairwise valuation bounds."""

    members: tuple
    k: int
    tail_index: int
    horizon: int
    bounds: tuple  # symmetric matrix of HorizonValuation, None on the diagonal
    truncations: tuple

    def __len__(self):
        return len(self.members)


def validate_family(members, tail_index, horizon, cap_bits=DEFAULT_CAP_BITS):
    """Check pairwise smallness at the horizon and record pairwise bounds.

    Smallness is probed in both tail directions for every pair; the first
    failing ordered pair raises NotAlmostDisjoint(i, j).  The bounds matrix
    holds the valuation of each pairwise intersection of full truncations.
    """
    members = tuple(members)
    if not members:
        raise InvalidSequence("a family needs at least one member")
    k = members[0].k
    for member in members[1:]:
        if member.k != k:
            raise MismatchedLevel(f"family levels {k} and {member.k}")
    count = len(members)
    for i in range(count):
        for j in range(count):
            if i == j:
                continue
            certificate = smallness_check(
                members[i], members[j], tail_index, horizon, cap_bits
            )
            if certificate.verdict != "empty_at_horizon":
                raise NotAlmostDisjoint(i, j, certificate)
    truncations = tuple(member.truncate(horizon) for member in members)
    grid = [[None] * count for _ in range(count)]
    for i in range(count):
        for j in range(i + 1, count):
            common = intersect_spans(truncations[i], truncations[j], cap_bits)
            bound = valuation((ce.block for ce in common), horizon=horizon)
            grid[i][j] = grid[j][i] = bound
    return AlmostDisjointFamily(
        members=members,
        k=k,
        tail_index=tail_index,
        horizon=horizon,
        bounds=tuple(tuple(row) for row in grid),
        truncations=truncations,
    )


@dataclass(frozen=True)
class StabilityCheck:
    """Valuation of one member's intersection before and after a step."""

    member: int
    before: object  # HorizonValuation
    after: object

    def render(self):
        return f"{self.member}:{self.before.render_value()}->{self.after.render_value()}"


@dataclass(frozen=True)
class DiagonalStep:
    index: int
    member: int
    block: object  # Subblock
    between_index: int | None
    checks: tuple

    def render(self):
        j = "-" if self.between_index is None else str(self.between_index)
        body = ",".join(check.render() for check in self.checks)
        return f"step={self.index} q={self.block.render()} J={j} checks=[{body}]"


@dataclass(frozen=True)
class DiagonalTrace:
    steps: tuple
    finals: tuple  # one HorizonValuation per member, over all chosen blocks

    def chosen(self):
        return tuple(step.block for step in self.steps)

    def render_lines(self):
        return [step.render() for step in self.steps]


def _engaged(family, step_index):
    member = step_index % len(family)
    limit = min(step_index, len(family))
    return [i for i in range(limit) if i != member]


def choose_next(family, chosen, step_index):
    """First-fit choice of the next block from the step's source member.

    The candidate must lie strictly after the previous choice with some
    same-stream block strictly between the two, and its peak must exceed
    every engaged pairwise bound.  Returns (block, between_index); the
    between index is None on the opening step.
    """
    member = step_index % len(family)
    candidates = family.truncations[member].blocks
    previous = chosen[-1] if chosen else None
    if previous is None:
        if not candidates:
            raise HorizonExhausted(f"member {member} has no block inside the horizon")
        return candidates[0], None
    bounds = [
        family.bounds[member][i]
        for i in _engaged(family, step_index)
    ]
    floors = [b.value for b in bounds if b is not None and b.value is not None]
    for position, candidate in enumerate(candidates):
        if not previous.before(candidate):
            continue
        between = None
        for j in range(position):
            if previous.before(candidates[j]) and candidates[j].before(candidate):
                between = j
                break
        if between is None:
            continue
        if any(peak(candidate) <= floor for floor in floors):
            continue
        return candidate, between
    raise HorizonExhausted(
        f"no admissible block for member {member} at step {step_index}"
    )


def _intersection_valuation(family, chosen_blocks, member, cap_bits):
    seq = BlockSequence(family.k, chosen_blocks)
    common = intersect_spans(seq, family.truncations[member], cap_bits)
    value = valuation((ce.block for ce in common), horizon=family.horizon)
    return common, value


def run_diagonalization(family, cycles=1, cap_bits=DEFAULT_CAP_BITS):
    """Run ``cycles`` passes over the family, verifying stability at each step.

    Returns the trace (chosen blocks, between indices, per-step checks and
    the final per-member valuations).  Raises ClaimViolation the moment a
    stability check or the positive-exponent condition fails, and
    HorizonExhausted when no admissible block exists.
    """
    if cycles < 1:
        raise ValueError("cycles must be at least 1")
    count = len(family)
    chosen = []
    steps = []
    for n in range(cycles * count):
        member = n % count
        block, between = choose_next(family, chosen, n)
        if membership_witness(block, family.truncations[member]) is None:
            raise ClaimViolation("chosen block missing from its source span", step=n)
        checks = []
        for i in _engaged(family, n):
            _, before = _intersection_valuation(family, chosen, i, cap_bits)
            after_common, after = _intersection_valuation(
                family, chosen + [block], i, cap_bits
            )
            fresh_index = len(chosen)
            for ce in after_common:
                meets = any(ce.block.value_at(pos) for pos in block.support)
                if not meets:
                    continue
                exponent = dict(ce.left_witness.terms).get(fresh_index)
                if exponent is None or exponent <= 0:
                    raise ClaimViolation(
                        f"common element {ce.block.render()} uses the fresh block "
                        f"with exponent {exponent}",
                        step=n,
                        member=i,
                    )
            if before.value != after.value:
                raise ClaimViolation(
                    f"valuation moved {before.render_value()} -> {after.render_value()}",
                    step=n,
                    member=i,
                )
            checks.append(StabilityCheck(i, before, after))
        chosen.append(block)
        steps.append(DiagonalStep(n, member, block, between, tuple(checks)))

    finals = []
    for i in range(count):
        _, final = _intersection_valuation(family, chosen, i, cap_bits)
        last_source = (cycles - 1) * count + i
        _, reference = _intersection_valuation(
            family, chosen[: last_source + 1], i, cap_bits
        )
        ceiling = [
            bound.value
            for j, bound in enumerate(family.bounds[i])
            if j != i and bound is not None and bound.value is not None
        ]
        if reference.value is not None:
            ceiling.append(reference.value)
        if final.value is not None and (not ceiling or final.value > max(ceiling)):
            raise ClaimViolation(
                f"final valuation {final.render_value()} exceeds its bound",
                member=i,
            )
        finals.append(final)
    return DiagonalTrace(tuple(steps), tuple(finals))
