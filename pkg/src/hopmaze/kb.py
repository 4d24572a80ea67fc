"""Experience memory and the knowledge base distilled from it.

Three extraction rules turn raw transitions into counted relations:

1. a wall digit and a crossing digit of the same direction shown in one
   panel record the inequality ``wall > crossing`` for that direction;
2. a direction's wall digit changing arithmetically across a valid move
   records the inequality ``before > after`` (or ``after > before`` for
   the opposite direction), tied to the displacement;
3. a digit of the moved direction that is present before the move, equal
   to the displacement, and gone afterwards records the equality
   ``digit = displacement``.

Entries with visitation count below the threshold theta are not treated
as understood. The candidate queries at the bottom enumerate digit pairs
for the seven generalization-test units; every predicate is pure set
logic over these counts, so a brute-force re-check over raw memory must
agree with it.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .core import MAX_DIGIT, Direction, Move, PanelDescription
from .env import EpisodeLog

_DIRS = tuple(Direction)

#: Where the goal-digit companion of an ST-1 quadruple lives, per tested
#: direction (the construction pairs a tested ray with the goal axis one
#: quarter turn counterclockwise of it).
ST1_GOAL_DIR = {_DIRS[i]: _DIRS[(i - 1) % 4] for i in range(4)}

SUBCATEGORIES = ("ST-1", "ST-2", "AfT-1", "AfT-2", "AfT-3", "AfT-4", "AnT")

PairKey = tuple[Direction, int, int]  # (direction, greater, lesser)


@dataclass(frozen=True)
class MemEntry:
    """One remembered transition."""

    before: PanelDescription
    move: Move
    valid: bool
    after: PanelDescription

    def to_dict(self) -> dict:
        return {
            "before": self.before.to_dict(),
            "move": self.move.to_dict(),
            "valid": self.valid,
            "after": self.after.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> MemEntry:
        return cls(
            before=PanelDescription.from_dict(data["before"]),
            move=Move.from_dict(data["move"]),
            valid=data["valid"],
            after=PanelDescription.from_dict(data["after"]),
        )


def memory_from_log(log: EpisodeLog) -> list[MemEntry]:
    return [MemEntry(s.before, s.move, s.valid, s.after) for s in log.steps]


def save_memory(path: str, mem: list[MemEntry]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for entry in mem:
            fh.write(json.dumps(entry.to_dict(), separators=(",", ":")) + "\n")


def load_memory(path: str) -> list[MemEntry]:
    with open(path, "r", encoding="utf-8") as fh:
        return [MemEntry.from_dict(json.loads(line)) for line in fh if line.strip()]


def goal_digit_along(desc: PanelDescription, direction: Direction) -> Optional[int]:
    """The displayed goal digit for ``direction``, if the goal lies that way."""
    gx, gy = desc.goal_offset
    component = gx * direction.dx + gy * direction.dy
    return component if component > 0 else None


@dataclass
class KnowledgeBase:
    """Counted relations plus the raw-occurrence side tables the test
    generator needs."""

    theta: int = 3
    co_counts: Counter = field(default_factory=Counter)  # rule 1, PairKey
    ac_counts: Counter = field(default_factory=Counter)  # rule 2, PairKey
    eq_counts: Counter = field(default_factory=Counter)  # rule 3, (direction, value)
    quad_seen: dict = field(default_factory=dict)  # PairKey -> set of (v3, v4)
    wall_seen: set = field(default_factory=set)  # (direction, value) with count > 0
    goal_seen: set = field(default_factory=set)  # (direction, value) with count > 0

    @property
    def kb_s(self) -> frozenset:
        return frozenset(k for k, c in self.co_counts.items() if c >= self.theta)

    @property
    def kb_ac(self) -> frozenset:
        return frozenset(k for k, c in self.ac_counts.items() if c >= self.theta)

    @property
    def kb_a_eq(self) -> frozenset:
        return frozenset(k for k, c in self.eq_counts.items() if c >= self.theta)

    def co_seen_anywhere(self, hi: int, lo: int) -> bool:
        return any(self.co_counts[(d, hi, lo)] for d in Direction)

    def ac_seen_anywhere(self, hi: int, lo: int) -> bool:
        return any(self.ac_counts[(d, hi, lo)] for d in Direction)


def _absorb_panel(kb: KnowledgeBase, panel: PanelDescription) -> None:
    for d in Direction:
        wall = panel.wall_dist.get(d)
        if wall:
            kb.wall_seen.add((d, wall))
        goal = goal_digit_along(panel, d)
        if goal:
            kb.goal_seen.add((d, goal))
    for d in Direction:
        wall = panel.wall_dist.get(d)
        crossing = panel.crossing_dist.get(d)
        if wall and crossing:
            key = (d, wall, crossing)
            kb.co_counts[key] += 1
            v3 = panel.wall_dist.get(d.opposite())
            v4 = goal_digit_along(panel, ST1_GOAL_DIR[d])
            if v3 and v4:
                kb.quad_seen.setdefault(key, set()).add((v3, v4))


def build_kb(mem: list[MemEntry], theta: int = 3) -> KnowledgeBase:
    """Fold the three extraction rules over memory; pure and mergeable."""
    kb = KnowledgeBase(theta=theta)
    for entry in mem:
        _absorb_panel(kb, entry.before)
        _absorb_panel(kb, entry.after)
        disp = entry.move.displacement
        if not entry.valid or disp == 0:
            continue
        d = entry.move.direction
        o = d.opposite()
        w1 = entry.before.wall_dist.get(d)
        w2 = entry.after.wall_dist.get(d)
        if w1 and w2 and w1 - w2 == disp:
            kb.ac_counts[(d, w1, w2)] += 1
        b1 = entry.before.wall_dist.get(o)
        b2 = entry.after.wall_dist.get(o)
        if b1 and b2 and b2 - b1 == disp:
            kb.ac_counts[(o, b2, b1)] += 1
        gone = {entry.after.wall_dist.get(d), entry.after.crossing_dist.get(d)}
        for value in (entry.before.wall_dist.get(d), entry.before.crossing_dist.get(d)):
            if value is not None and value == disp and value not in gone:
                kb.eq_counts[(d, value)] += 1
    return kb


def kb_dump(kb: KnowledgeBase) -> str:
    """Human-readable audit listing of every counted relation."""
    lines = [f"knowledge base, theta = {kb.theta}"]
    lines.append(f"co-occurrence inequalities ({len(kb.kb_s)} understood):")
    for d, hi, lo in _sorted_keys(kb.co_counts):
        count = kb.co_counts[(d, hi, lo)]
        mark = "" if count >= kb.theta else "   (below theta)"
        lines.append(f"  {d.name.lower():5s}: {hi} > {lo}   x{count}{mark}")
    lines.append(f"transition inequalities ({len(kb.kb_ac)} understood):")
    for d, hi, lo in _sorted_keys(kb.ac_counts):
        count = kb.ac_counts[(d, hi, lo)]
        mark = "" if count >= kb.theta else "   (below theta)"
        lines.append(f"  {d.name.lower():5s}: {hi} > {lo}   x{count}{mark}")
    lines.append(f"displacement equalities ({len(kb.kb_a_eq)} understood):")
    for d, v in sorted(kb.eq_counts, key=lambda k: (_DIRS.index(k[0]), k[1])):
        count = kb.eq_counts[(d, v)]
        mark = "" if count >= kb.theta else "   (below theta)"
        lines.append(f"  {d.name.lower():5s}: {v} = displacement {v}   x{count}{mark}")
    return "\n".join(lines)


def _sorted_keys(counts: Counter) -> list[PairKey]:
    return sorted(counts, key=lambda k: (_DIRS.index(k[0]), k[1], k[2]))


# ---------------------------------------------------------------------------
# test-candidate queries


@dataclass(frozen=True)
class Candidate:
    """A digit pair to build one test problem around.

    ``companions`` is only set for ST-1: the wall digit opposite the
    tested direction and the goal digit along ``ST1_GOAL_DIR`` that make
    up the never-observed quadruple.
    """

    category: str
    direction: Direction
    hi: int
    lo: int
    companions: Optional[tuple[int, int]] = None

    def pair(self) -> tuple[int, int]:
        return (self.hi, self.lo)


def query_subcategory(kb: KnowledgeBase, sub: str) -> list[Candidate]:
    """Candidates for one test unit; deterministic order. The seven units
    are mutually exclusive by construction: positive conditions require
    understood entries (count >= theta), exclusions require raw count 0."""
    if sub not in SUBCATEGORIES:
        raise ValueError(f"unknown test unit {sub!r}")
    return _QUERIES[sub](kb)


def query(kb: KnowledgeBase, category: str) -> list[Candidate]:
    """All candidates of one coarse category: ST, AfT, or AnT."""
    subs = [s for s in SUBCATEGORIES if s.split("-")[0] == category]
    if not subs:
        raise ValueError(f"unknown category {category!r}")
    out: list[Candidate] = []
    for sub in subs:
        out.extend(query_subcategory(kb, sub))
    return out


def _query_st1(kb: KnowledgeBase) -> list[Candidate]:
    out = []
    for key in sorted(kb.kb_s, key=lambda k: (_DIRS.index(k[0]), k[1], k[2])):
        d, hi, lo = key
        seen = kb.quad_seen.get(key, set())
        v3s = sorted(v for dd, v in kb.wall_seen if dd is d.opposite())
        v4s = sorted(v for dd, v in kb.goal_seen if dd is ST1_GOAL_DIR[d])
        for v3 in v3s:
            for v4 in v4s:
                if (v3, v4) not in seen:
                    out.append(Candidate("ST-1", d, hi, lo, (v3, v4)))
    return out


def _query_st2(kb: KnowledgeBase) -> list[Candidate]:
    by_pair: dict[tuple[int, int], set[Direction]] = {}
    for d, hi, lo in kb.kb_s:
        by_pair.setdefault((hi, lo), set()).add(d)
    out = []
    for hi, lo in sorted(by_pair):
        for d in Direction:
            if kb.co_counts[(d, hi, lo)] == 0:
                out.append(Candidate("ST-2", d, hi, lo))
    return out


def _query_aft1(kb: KnowledgeBase) -> list[Candidate]:
    out = []
    for d, hi, lo in sorted(kb.kb_ac, key=lambda k: (_DIRS.index(k[0]), k[1], k[2])):
        if not kb.co_seen_anywhere(hi, lo):
            out.append(Candidate("AfT-1", d, hi, lo))
    return out


def _eq_values(kb: KnowledgeBase, direction: Direction) -> set[int]:
    return {v for dd, v in kb.kb_a_eq if dd is direction}


def _query_aft2(kb: KnowledgeBase) -> list[Candidate]:
    out = []
    for d in Direction:
        values = sorted(_eq_values(kb, d))
        for hi in values:
            for lo in values:
                if (
                    lo < hi
                    and not kb.co_seen_anywhere(hi, lo)
                    and not kb.ac_seen_anywhere(hi, lo)
                ):
                    out.append(Candidate("AfT-2", d, hi, lo))
    return out


def _query_aft3(kb: KnowledgeBase) -> list[Candidate]:
    known: dict[tuple[int, int], set[Direction]] = {}
    for d, hi, lo in kb.kb_ac:
        known.setdefault((hi, lo), set()).add(d)
    out = []
    for hi, lo in sorted(known):
        if kb.co_seen_anywhere(hi, lo):
            continue
        for d in Direction:
            if kb.ac_counts[(d, hi, lo)] == 0:
                out.append(Candidate("AfT-3", d, hi, lo))
    return out


def _query_aft4(kb: KnowledgeBase) -> list[Candidate]:
    out = []
    per_dir = {d: _eq_values(kb, d) for d in Direction}
    for d_hi in Direction:
        for hi in sorted(per_dir[d_hi]):
            for d_lo in Direction:
                if d_lo is d_hi:
                    continue
                for lo in sorted(per_dir[d_lo]):
                    if lo >= hi:
                        continue
                    if any(hi in per_dir[d] and lo in per_dir[d] for d in Direction):
                        continue  # derivable within one direction: AfT-2 ground
                    if kb.co_seen_anywhere(hi, lo) or kb.ac_seen_anywhere(hi, lo):
                        continue
                    out.append(Candidate("AfT-4", d_hi, hi, lo))
    return sorted(set(out), key=lambda c: (_DIRS.index(c.direction), c.hi, c.lo))


def _understood_pairs(kb: KnowledgeBase) -> set[tuple[int, int]]:
    """Direction-agnostic pairs the agent can know directly: co-occurrence,
    transitions, or any two understood equalities."""
    pairs = {(hi, lo) for _, hi, lo in kb.kb_s}
    pairs |= {(hi, lo) for _, hi, lo in kb.kb_ac}
    eq_values = {v for _, v in kb.kb_a_eq}
    for hi in eq_values:
        for lo in eq_values:
            if lo < hi:
                pairs.add((hi, lo))
    return pairs


def _query_ant(kb: KnowledgeBase) -> list[Candidate]:
    understood = _understood_pairs(kb)
    raw_eq_values = {v for (_, v), c in kb.eq_counts.items() if c > 0}
    has_template = any(
        (a, b) in understood and (b, c) in understood and (a, c) in understood
        for a, b in understood
        for c in range(1, b)
        if (b, c) in understood
    )
    if not has_template:
        return []
    out = []
    for hi in range(2, MAX_DIGIT + 1):
        for lo in range(1, hi):
            if kb.co_seen_anywhere(hi, lo) or kb.ac_seen_anywhere(hi, lo):
                continue
            if hi in raw_eq_values and lo in raw_eq_values:
                continue
            bridged = any(
                (hi, mid) in understood and (mid, lo) in understood
                for mid in range(lo + 1, hi)
            )
            if not bridged:
                continue
            for d in Direction:
                out.append(Candidate("AnT", d, hi, lo))
    return out


_QUERIES = {
    "ST-1": _query_st1,
    "ST-2": _query_st2,
    "AfT-1": _query_aft1,
    "AfT-2": _query_aft2,
    "AfT-3": _query_aft3,
    "AfT-4": _query_aft4,
    "AnT": _query_ant,
}
