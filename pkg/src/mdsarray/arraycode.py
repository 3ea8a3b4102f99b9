"""The ArrayCode container shared by the base construction and the lifts.

An (n, k) array code in parity-check form: r*L equations sum_i A[t,i] f_i = 0
with L x L effective blocks (appended data absorbed into the owning node's
column).  Repair and select matrices are kept per node per supported degree;
lifted codes keep a reference to the code they were lifted from, which is
what the repair procedures run against.
"""

from dataclasses import dataclass, field

from .gf import Field
from .linalg import MatrixGF


@dataclass
class LiftInfo:
    goal_set: tuple  # nodes upgraded in this round
    degrees: "object"  # DegreeSet
    schedule: "object"  # PartSchedule shared by all goal nodes
    keys: dict  # (t, i, v) -> MatrixGF at parent level, i in goal_set
    replaced: tuple  # the r nodes whose stored data was re-solved


@dataclass
class ArrayCode:
    n: int
    k: int
    field: Field
    delta0: int
    degrees: tuple  # the degree set the code targets (realized after lifting)
    L: int  # sub-packetization
    alpha: int  # L / base sub-packetization
    base_N: int
    blocks: dict  # (t, i) -> MatrixGF, L x L
    repair: dict  # (i, degree) -> MatrixGF, L/degree x L
    select: dict  # (i, degree) -> MatrixGF
    keys: dict  # (t, i, v) -> MatrixGF, L x L/delta0
    goal_sets: tuple  # partition of [0, n) used by the round schedule
    goal_round: dict  # i -> round index after which i has all degrees
    part_axis: dict = None  # i -> digit axis whose classes split i's fragment
    parent: "ArrayCode | None" = None
    lift: LiftInfo | None = None
    constants: "object | None" = None
    seed: int = 0
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def r(self) -> int:
        return self.n - self.k

    @property
    def depth(self) -> int:
        d = 0
        node = self.parent
        while node is not None:
            d += 1
            node = node.parent
        return d

    def degrees_of(self, i: int):
        return sorted(d for (j, d) in self.repair if j == i)

    def block(self, t: int, i: int) -> MatrixGF:
        return self.blocks[(t, i)]

    def validate_shapes(self):
        for (t, i), b in self.blocks.items():
            if b.shape != (self.L, self.L):
                raise ValueError(f"block ({t},{i}) has shape {b.shape}")
        for (i, d), m in self.repair.items():
            if m.shape != (self.L // d, self.L):
                raise ValueError(f"repair matrix ({i},{d}) has shape {m.shape}")
        for (i, d), m in self.select.items():
            if m.shape != (self.L // d, self.L):
                raise ValueError(f"select matrix ({i},{d}) has shape {m.shape}")
