"""Daikon-style likely-invariant detection over trace logs.

Template family: per-variable constants, tightest observed bounds, signs;
per-pair equality, strict/non-strict order, and constant difference.
"One of {...}" value-set facts are deliberately never produced.

Implication suppression (exhaustive; anything else that holds is emitted):
  * x == c suppresses x's bounds and signs;
  * x == y suppresses x <= y, y <= x, x < y, y < x, and the c == 0
    constant-difference;
  * a strict sign (x > 0 or x < 0) suppresses its weak form.
"""

from dataclasses import dataclass, field
from itertools import combinations

from .errors import UnmappedPoint

CONST_DIFF_LIMIT = 100


def fmt_const(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


@dataclass
class InvariantSet:
    by_point: dict = field(default_factory=dict)     # point id -> sorted strings
    point_kinds: dict = field(default_factory=dict)  # point id -> kind

    def as_dict(self):
        return {p: self.by_point[p] for p in sorted(self.by_point)}


def _point_invariants(snaps):
    variables = sorted(set.intersection(*[set(s) for s in snaps])) if snaps else []
    out = set()
    constant = set()
    for x in variables:
        vals = [s[x] for s in snaps]
        first = vals[0]
        if all(v == first and type(v) is type(first) for v in vals):
            out.add(f"{x} == {fmt_const(first)}")
            constant.add(x)
            continue
        out.add(f"{x} >= {fmt_const(min(vals))}")
        out.add(f"{x} <= {fmt_const(max(vals))}")
        if all(v > 0 for v in vals):
            out.add(f"{x} > 0")
            out.add(f"{x} != 0")
        elif all(v >= 0 for v in vals):
            out.add(f"{x} >= 0")
        if all(v < 0 for v in vals):
            out.add(f"{x} < 0")
            out.add(f"{x} != 0")
        elif all(v <= 0 for v in vals):
            out.add(f"{x} <= 0")
        if all(v != 0 for v in vals) and not all(v > 0 for v in vals) \
                and not all(v < 0 for v in vals):
            out.add(f"{x} != 0")
    for x, y in combinations(variables, 2):  # x < y lexicographically
        xs = [s[x] for s in snaps]
        ys = [s[y] for s in snaps]
        pairs = list(zip(xs, ys))
        if all(a == b for a, b in pairs):
            out.add(f"{x} == {y}")
            continue
        if all(a < b for a, b in pairs):
            out.add(f"{x} < {y}")
        if all(a <= b for a, b in pairs):
            out.add(f"{x} <= {y}")
        if all(a > b for a, b in pairs):
            out.add(f"{y} < {x}")
        if all(a >= b for a, b in pairs):
            out.add(f"{y} <= {x}")
        if all(isinstance(a, int) and isinstance(b, int) for a, b in pairs):
            d = pairs[0][0] - pairs[0][1]
            if d != 0 and abs(d) <= CONST_DIFF_LIMIT and \
                    all(a - b == d for a, b in pairs):
                out.add(f"{x} == {y} + {d}")
    return sorted(out)


def detect(log, min_samples=2):
    """Every template instance holding on all snapshots of each point with
    at least min_samples snapshots, after implication suppression."""
    if min_samples < 1:
        raise ValueError("min_samples must be >= 1")
    result = InvariantSet()
    for pid, snaps in log.samples.items():
        if len(snaps) < min_samples:
            continue
        result.by_point[pid] = _point_invariants(snaps)
        result.point_kinds[pid] = log.point_kinds.get(pid, "")
    return result


def flatten(inv_set):
    """Point ids and their invariants, sorted-point order, one per line."""
    lines = []
    for pid in sorted(inv_set.by_point):
        lines.append(pid)
        lines.extend(inv_set.by_point[pid])
    if not lines:
        return ""
    return "\n".join(lines) + "\n"


def match_points(a, b):
    """Pairs the two sets' points by kind and sorted-id order within each
    kind. Raises UnmappedPoint when the shapes disagree."""
    def by_kind(s):
        groups = {}
        for pid in sorted(s.by_point):
            groups.setdefault(s.point_kinds.get(pid, ""), []).append(pid)
        return groups

    ga, gb = by_kind(a), by_kind(b)
    if set(ga) != set(gb) or any(len(ga[k]) != len(gb[k]) for k in ga):
        raise UnmappedPoint(f"point shapes differ: {ga} vs {gb}")
    mapping = {}
    for kind in ga:
        for pa, pb in zip(ga[kind], gb[kind]):
            mapping[pa] = pb
    return mapping


def invariants_equal_modulo_rename(a, b, point_map):
    """True iff mapped points carry identical sorted invariant lists."""
    if set(point_map) != set(a.by_point) or \
            set(point_map.values()) != set(b.by_point):
        raise UnmappedPoint("point map does not cover both invariant sets")
    return all(a.by_point[pa] == b.by_point[pb] for pa, pb in point_map.items())
