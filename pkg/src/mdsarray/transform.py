"""Lifting a code to support additional repair degrees.

One lift round space-shares l_0 = delta/delta_0 instances of the base code
and folds key-matrix combinations of a goal node's later instances into the
parity equations of its earlier instances (the appended data).  The part
schedule fixes, per goal node, exactly which (instance, part) chunks feed
each appended term; applying the round once per goal set upgrades every node
to the full degree set, multiplying the sub-packetization by l_0 each time.
"""

import math
from dataclasses import dataclass

from .arraycode import ArrayCode, LiftInfo
from .linalg import MatrixGF, blkdiag_repeat, hstack, vstack


class DegreeError(ValueError):
    pass


@dataclass(frozen=True)
class DegreeSet:
    degrees: tuple

    def __post_init__(self):
        d = self.degrees
        if len(d) < 1 or any(x < 2 for x in d):
            raise DegreeError(f"degrees must all be >= 2, got {d}")
        if list(d) != sorted(set(d)):
            raise DegreeError(f"degrees must be strictly increasing, got {d}")

    @classmethod
    def make(cls, degrees) -> "DegreeSet":
        return cls(tuple(degrees))

    @property
    def m(self) -> int:
        return len(self.degrees)

    @property
    def lcm(self) -> int:
        return math.lcm(*self.degrees)

    @property
    def l(self) -> tuple:
        """Instance counts per degree band: l_z = lcm/delta_z, plus a final 0."""
        return tuple(self.lcm // d for d in self.degrees) + (0,)

    def band_of(self, a: int) -> int:
        """The w with l_{w+1} <= a < l_w."""
        l = self.l
        for w in range(self.m):
            if l[w + 1] <= a < l[w]:
                return w
        raise DegreeError(f"instance {a} out of range [0, {l[0]})")


@dataclass
class PartSchedule:
    """Ordered (instance, part) pairs feeding the appended data.

    sets[j] lists the pairs consumed by degree band j in ascending
    (instance, part) order; parts[(j, a)] is its a-th equal slice.  The
    schedule is identical for every goal node.
    """

    degrees: DegreeSet
    sets: dict
    parts: dict

    def band_terms(self, a: int):
        """Flattened (key_index, instance, part) terms of the appended data
        for instance a; empty when a falls in the zero band."""
        ds = self.degrees
        l = ds.l
        if a >= l[1]:
            return []
        w = ds.band_of(a)
        d = ds.degrees
        out = []
        for j in range(1, w + 1):
            base_v = d[j - 1] - d[0]
            for idx, (b, u) in enumerate(self.parts[(j, a)]):
                out.append((base_v + idx, b, u))
        return out


def build_part_schedule(ds: DegreeSet) -> PartSchedule:
    """Seed each band with its fresh instances, then fold the earlier bands'
    slices forward and split into equal parts, all in (instance, part) order."""
    if ds.m < 2:
        return PartSchedule(ds, {}, {})
    l = ds.l
    d = ds.degrees
    d0 = d[0]  # parts per instance = smallest degree
    sets = {}
    for j in range(1, ds.m):
        sets[j] = [(a, u) for a in range(l[j], l[j - 1]) for u in range(d0)]
    parts = {}
    _split(sets[1], l[1], 1, parts)
    for j in range(2, ds.m):
        merged = list(sets[j])
        for a in range(l[j], l[j - 1]):
            for jj in range(1, j):
                merged.extend(parts[(jj, a)])
        merged.sort()
        sets[j] = merged
        _split(merged, l[j], j, parts)
    sets = {j: tuple(v) for j, v in sets.items()}
    sched = PartSchedule(ds, sets, parts)
    _check_sizes(sched)
    return sched


def _split(entries, pieces, j, parts):
    size, rem = divmod(len(entries), pieces)
    if rem:
        raise DegreeError(
            f"band {j} has {len(entries)} entries, not divisible into {pieces}"
        )
    for a in range(pieces):
        parts[(j, a)] = tuple(entries[a * size : (a + 1) * size])


def _check_sizes(sched: PartSchedule):
    d = sched.degrees.degrees
    l = sched.degrees.l
    for j in range(1, sched.degrees.m):
        want = (d[j] - d[j - 1]) * l[j]
        if len(sched.sets[j]) != want:
            raise DegreeError(
                f"band {j} size {len(sched.sets[j])}, expected {want}"
            )


def appended_block(
    code: ArrayCode, ds: DegreeSet, sched: PartSchedule, keys: dict, t: int, i: int, a: int
) -> MatrixGF:
    """Rows mapping a goal node's full stacked vector (length l_0 * L) to the
    appended data of instance a (length L); zero for the top band."""
    import numpy as np

    from .indexing import insert_digit_index

    l0 = ds.l[0]
    if not 0 <= a < l0:
        raise DegreeError(f"instance {a} out of range [0, {l0})")
    L = code.L
    field = code.field
    out = MatrixGF.zeros(field, L, l0 * L)
    d0 = code.delta0
    base_n = code.base_N
    npr = base_n // d0
    axis = code.part_axis[i]
    acc = out.a
    for v, b, u in sched.band_terms(a):
        kk = keys[(t, i, v)].a
        # K @ Phi restricted to the instance-b column block.  The part
        # extractor picks, per base-size slice, the digit class of the
        # node's axis, so column c of K lands inside slice c // npr at the
        # coordinate with digit `u` re-inserted on that axis.
        cols = np.arange(kk.shape[1])
        within = np.array(
            [insert_digit_index(m, axis, u, d0) for m in range(npr)], dtype=np.int64
        )
        dest = b * L + (cols // npr) * base_n + within[cols % npr]
        if field.p == 2:
            acc[:, dest] ^= kk
        else:
            acc[:, dest] = (acc[:, dest].astype(np.int64) + kk) % field.p
    return out


def lift_code(
    base: ArrayCode,
    degrees: DegreeSet,
    goal,
    r_set=None,
) -> ArrayCode:
    """One round of the construction: space sharing plus appended data for
    the goal nodes, with repair/select/key matrices lifted alongside."""
    goal = tuple(sorted(goal))
    if degrees.degrees[0] != base.delta0:
        raise DegreeError(
            f"degree set must start at delta0={base.delta0}, got {degrees.degrees}"
        )
    if degrees.degrees[-1] > base.r:
        raise DegreeError(
            f"largest degree {degrees.degrees[-1]} exceeds r={base.r}"
        )
    if goal:
        if len(goal) > base.delta0:
            raise DegreeError(f"at most delta0={base.delta0} goal nodes per round")
        homes = [s for s in base.goal_sets if set(goal) <= set(s)]
        if not homes:
            raise DegreeError(f"goal nodes {goal} span multiple goal sets")
    if r_set is None:
        r_set = tuple(sorted(set(range(base.n)) - set(goal))[-base.r :])

    l0 = degrees.l[0]
    L = l0 * base.L
    sched = build_part_schedule(degrees)
    keys_used = {
        (t, i, v): base.keys[(t, i, v)]
        for (t, i, v) in base.keys
        if i in goal
    }

    blocks = {}
    for t in range(base.r):
        for i in range(base.n):
            blk = blkdiag_repeat(base.blocks[(t, i)], l0)
            if i in goal and degrees.m > 1:
                appended = vstack(
                    [
                        appended_block(base, degrees, sched, base.keys, t, i, a)
                        for a in range(l0)
                    ]
                )
                blk = blk + appended
            blocks[(t, i)] = blk

    repair = {}
    select = {}
    for i in range(base.n):
        if i in goal:
            r0 = base.repair[(i, base.delta0)]
            s0 = base.select[(i, base.delta0)]
            for z, dz in enumerate(degrees.degrees):
                lz = degrees.l[z]
                pad = MatrixGF.zeros(
                    base.field, lz * r0.rows, (l0 - lz) * base.L
                )
                repair[(i, dz)] = hstack([blkdiag_repeat(r0, lz), pad])
                select[(i, dz)] = hstack([blkdiag_repeat(s0, lz), pad])
        else:
            for (j, d), m in base.repair.items():
                if j == i:
                    repair[(i, d)] = blkdiag_repeat(m, l0)
                    select[(i, d)] = blkdiag_repeat(base.select[(j, d)], l0)

    keys = {key: blkdiag_repeat(m, l0) for key, m in base.keys.items()}

    goal_round = dict(base.goal_round)
    for i in goal:
        goal_round[i] = base.depth

    return ArrayCode(
        n=base.n,
        k=base.k,
        field=base.field,
        delta0=base.delta0,
        degrees=degrees.degrees,
        L=L,
        alpha=base.alpha * l0,
        base_N=base.base_N,
        blocks=blocks,
        repair=repair,
        select=select,
        keys=keys,
        goal_sets=base.goal_sets,
        goal_round=goal_round,
        part_axis=base.part_axis,
        parent=base,
        lift=LiftInfo(
            goal_set=goal,
            degrees=degrees,
            schedule=sched,
            keys=keys_used,
            replaced=tuple(r_set),
        ),
        constants=base.constants,
        seed=base.seed,
    )


def upgrade_all_nodes(base: ArrayCode, degrees: DegreeSet) -> ArrayCode:
    """Apply the lift once per goal set, giving every node the full degree
    set; final sub-packetization is l_0^mu times the base's."""
    code = base
    for goal in base.goal_sets:
        code = lift_code(code, degrees, goal)
    return code


def final_subpacketization(n: int, delta0: int, degrees) -> int:
    """delta^ceil(n/delta0) without materializing anything."""
    ds = DegreeSet.make(degrees)
    mu = (n + delta0 - 1) // delta0
    return ds.l[0] ** mu * delta0**mu
