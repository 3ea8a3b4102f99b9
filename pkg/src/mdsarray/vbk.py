"""The base (n, k) access-optimal MDS array code.

Sub-packetization N = delta0^ceil(n/delta0) with delta0 in {2, 3, 4}.  Node
i = delta0*x + y owns digit axis x; its parity blocks act diagonally except
on rows whose x-digit equals y, where they couple the delta0 digit-siblings.
Repair of a node reads the N/delta0 rows selected by its digit, one symbol
per row, which is what makes the code access-optimal.

The per-axis coefficient tables are drawn from a seeded shuffle under the
required distinctness constraints.  No closed-form sufficient condition for
the MDS property is assumed: construction validates it by direct rank
checks and resamples with the next seed on failure.
"""

import random
from dataclasses import dataclass

import numpy as np

from .arraycode import ArrayCode
from .gf import Field, build_field, next_pow2
from .indexing import replace_digit_index, selector_matrix
from .linalg import MatrixGF

MDS_RETRY_CAP = 32


class ParameterError(ValueError):
    pass


class ConstructionError(RuntimeError):
    pass


def field_size_bound(n: int, delta0: int) -> int:
    if delta0 == 2:
        return 6 * ((n + 1) // 2) + 2
    return 18 * ((n + delta0 - 1) // delta0) + 2


@dataclass(frozen=True)
class VbkParams:
    n: int
    k: int
    delta0: int

    def __post_init__(self):
        if self.delta0 not in (2, 3, 4):
            raise ParameterError(f"delta0 must be 2, 3 or 4, got {self.delta0}")
        if self.k < 1 or self.n <= self.k:
            raise ParameterError(f"need 1 <= k < n, got ({self.n},{self.k})")
        if self.r <= self.delta0:
            raise ParameterError(
                f"need r = n-k > delta0: r={self.r}, delta0={self.delta0}"
            )

    @property
    def r(self) -> int:
        return self.n - self.k

    @property
    def tau(self) -> int:
        return (self.n + self.delta0 - 1) // self.delta0

    @property
    def N(self) -> int:
        return self.delta0**self.tau

    def min_q(self) -> int:
        return field_size_bound(self.n, self.delta0)

    def check_field(self, field: Field):
        if field.q < self.min_q():
            raise ParameterError(
                f"field GF({field.q}) below required size {self.min_q()}"
            )


@dataclass(frozen=True)
class VbkConstants:
    """epsilon, the per-axis theta table, and the key-coefficient list.

    theta[x] holds (theta_0 .. theta_3) for axis x (entries beyond what the
    delta0 x delta0 coefficient matrix needs stay zero).  All realized
    coefficient-matrix entries are pairwise distinct field elements, and the
    zeta values avoid every lambda in use.
    """

    epsilon: int
    theta: tuple  # tuple over axes of 4-tuples
    zeta: tuple
    seed: int


def _theta_count(delta0: int) -> int:
    return 2 if delta0 == 2 else 4


def theta_matrix(field: Field, constants: VbkConstants, delta0: int, x: int) -> MatrixGF:
    e = constants.epsilon
    t = constants.theta[x]
    m = field.mul
    if delta0 == 2:
        rows = [[t[0], m(e, t[1])], [t[1], t[0]]]
    elif delta0 == 3:
        rows = [
            [t[0], m(e, t[1]), m(e, t[2])],
            [t[1], t[0], m(e, t[3])],
            [t[2], t[3], t[0]],
        ]
    else:
        rows = [
            [t[0], m(e, t[1]), m(e, t[2]), m(e, t[3])],
            [t[1], t[0], m(e, t[3]), m(e, t[2])],
            [t[2], t[3], t[0], m(e, t[1])],
            [t[3], t[2], t[1], t[0]],
        ]
    return MatrixGF.from_rows(field, rows)


def choose_constants(
    params: VbkParams, field: Field, num_zeta: int, seed: int
) -> VbkConstants:
    """Greedy assignment from a seeded shuffle of the field.

    Keeps {theta_0x} and {theta_ix, eps*theta_ix} distinct across all axes,
    and zeta distinct from every lambda value.  Deterministic per seed.
    """
    params.check_field(field)
    rng = random.Random(seed)
    pool = list(range(2, field.q))
    rng.shuffle(pool)
    epsilon = pool.pop()
    used = set()
    theta = []
    extras = _theta_count(params.delta0) - 1
    for _ in range(params.tau):
        row = [0, 0, 0, 0]
        row[0] = _pick(pool, lambda v: v not in used)
        used.add(row[0])
        for i in range(1, extras + 1):
            v = _pick(
                pool,
                lambda v: v not in used and field.mul(epsilon, v) not in used,
            )
            row[i] = v
            used.add(v)
            used.add(field.mul(epsilon, v))
        theta.append(tuple(row))
    constants = VbkConstants(epsilon=epsilon, theta=tuple(theta), zeta=(), seed=seed)
    forbidden = set(_lambda_table(field, constants, params).ravel().tolist())
    zeta = []
    for _ in range(num_zeta):
        v = _pick(pool, lambda v: v not in forbidden)
        zeta.append(v)
        forbidden.add(v)
    return VbkConstants(
        epsilon=epsilon, theta=tuple(theta), zeta=tuple(zeta), seed=seed
    )


def _pick(pool, ok):
    for idx, v in enumerate(pool):
        if ok(v):
            return pool.pop(idx)
    raise ConstructionError("field too small to satisfy distinctness constraints")


def _lambda_table(field: Field, constants: VbkConstants, params: VbkParams) -> np.ndarray:
    """lam[i, v] for node i = delta0*x + y is entry (v, y) of the axis-x
    coefficient matrix."""
    d0 = params.delta0
    lam = np.zeros((params.n, d0), dtype=np.uint16)
    for i in range(params.n):
        x, y = divmod(i, d0)
        th = theta_matrix(field, constants, d0, x)
        for v in range(d0):
            lam[i, v] = th.a[v, y]
    return lam


def parity_block(
    field: Field, params: VbkParams, lam: np.ndarray, epsilon: int, t: int, i: int
) -> MatrixGF:
    """The N x N block of node i in parity-check group t."""
    if not 0 <= t < params.r or not 0 <= i < params.n:
        raise ParameterError(f"block index ({t},{i}) out of range")
    d0 = params.delta0
    N = params.N
    x, y = divmod(i, d0)
    out = np.zeros((N, N), dtype=np.uint16)
    scale = d0**x
    for a in range(N):
        ax = (a // scale) % d0
        out[a, a] = field.pow(int(lam[i, ax]), t)
        if ax == y:
            for u in range(d0):
                if u == y:
                    continue
                coef = epsilon if u < y else 1
                col = replace_digit_index(a, x, u, d0)
                out[a, col] = field.mul(coef, field.pow(int(lam[i, u]), t))
    return MatrixGF(field, out)


def repair_selector(field: Field, params: VbkParams, i: int) -> MatrixGF:
    """Repair and select matrix of node i (they coincide): the digit
    selector on the node's axis, one nonzero per row."""
    x, y = divmod(i, params.delta0)
    return selector_matrix(field, x, y, params.delta0, params.tau)


def base_key_matrix(
    field: Field, constants: VbkConstants, params: VbkParams, t: int, i: int, v: int
) -> MatrixGF:
    """zeta_v^t times the transpose of the node's repair matrix."""
    if not 0 <= v < len(constants.zeta):
        raise ParameterError(f"key index {v} out of range")
    r = repair_selector(field, params, i)
    return r.T.scale(field.pow(constants.zeta[v], t))


def goal_partition(n: int, delta0: int) -> tuple:
    mu = (n + delta0 - 1) // delta0
    sets = []
    for s in range(mu):
        hi = min((s + 1) * delta0, n)
        sets.append(tuple(range(s * delta0, hi)))
    return tuple(sets)


def build_vbk(
    n: int,
    k: int,
    delta0: int,
    degrees=None,
    q: int | None = None,
    field: Field | None = None,
    seed: int = 0,
    validate: bool = True,
    mds_samples: int = 20,
) -> ArrayCode:
    """Construct the base code, validating MDS by direct rank checks.

    `degrees` (default (delta0,)) fixes how many key-coefficient values are
    drawn; the resulting code carries key matrices for every node so any
    goal set can be lifted later.
    """
    params = VbkParams(n, k, delta0)
    if degrees is None:
        degrees = (delta0,)
    degrees = tuple(sorted(degrees))
    if degrees[0] != delta0:
        raise ParameterError(f"smallest degree {degrees[0]} must equal delta0")
    if degrees[-1] > params.r:
        raise ParameterError(
            f"largest degree {degrees[-1]} exceeds r = {params.r}"
        )
    if field is None:
        field = build_field(q if q is not None else next_pow2(params.min_q()))
    params.check_field(field)
    num_zeta = degrees[-1] - delta0

    last_err = None
    for attempt in range(MDS_RETRY_CAP):
        constants = choose_constants(params, field, num_zeta, seed + attempt)
        code = _assemble(params, field, constants, degrees, seed + attempt)
        if not validate:
            return code
        if _mds_ok(code, mds_samples, seed + attempt):
            return code
        last_err = f"MDS check failed for seed {seed + attempt}"
    raise ConstructionError(
        f"could not find MDS constants after {MDS_RETRY_CAP} attempts: {last_err}"
    )


def build_from_constants(
    params: VbkParams, field: Field, constants: VbkConstants, degrees, seed: int
) -> ArrayCode:
    """Rebuild the exact code for stored constants (no validation)."""
    return _assemble(params, field, constants, tuple(degrees), seed)


def _assemble(params, field, constants, degrees, seed) -> ArrayCode:
    lam = _lambda_table(field, constants, params)
    blocks = {}
    for t in range(params.r):
        for i in range(params.n):
            blocks[(t, i)] = parity_block(
                field, params, lam, constants.epsilon, t, i
            )
    repair = {}
    select = {}
    for i in range(params.n):
        v = repair_selector(field, params, i)
        repair[(i, params.delta0)] = v
        select[(i, params.delta0)] = v
    keys = {}
    for i in range(params.n):
        for t in range(params.r):
            for v in range(len(constants.zeta)):
                keys[(t, i, v)] = base_key_matrix(
                    field, constants, params, t, i, v
                )
    return ArrayCode(
        n=params.n,
        k=params.k,
        field=field,
        delta0=params.delta0,
        degrees=tuple(degrees),
        L=params.N,
        alpha=1,
        base_N=params.N,
        blocks=blocks,
        repair=repair,
        select=select,
        keys=keys,
        goal_sets=goal_partition(params.n, params.delta0),
        goal_round={i: None for i in range(params.n)},
        part_axis={i: i // params.delta0 for i in range(params.n)},
        parent=None,
        lift=None,
        constants=constants,
        seed=seed,
    )


def _mds_ok(code: ArrayCode, samples: int, seed: int) -> bool:
    from .verify import check_mds

    report = check_mds(code, samples=samples, seed=seed)
    return report.passed
