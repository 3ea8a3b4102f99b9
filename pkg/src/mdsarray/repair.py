"""Single-node repair with exact download and access accounting.

Every repair downloads, per helper j, the compressed slice R f_j picked by
the failed node's repair matrix for the requested degree.  Goal nodes of the
outermost lift round solve the key-augmented band systems; all other nodes
run the remainder procedure, reconstructing the appended terms from their
own downloaded slices before each band solve.  Transcripts log transferred
symbols, the exact symbol indices read at each helper, and the band solve
order.
"""

from dataclasses import dataclass, field

import numpy as np

from .arraycode import ArrayCode
from .indexing import (
    axis_part_extractor,
    extract_axis_part,
    merge_axis_parts,
)
from .linalg import MatrixGF, SingularMatrixError, hstack, solve_right, vstack


class RepairError(ValueError):
    pass


class AlignmentError(RepairError):
    """The select/repair pair does not align interference for this node."""


@dataclass(frozen=True)
class RepairPlan:
    failed: int
    helpers: tuple
    theta: int  # d - k + 1 for d helpers; must be a supported degree

    @property
    def d(self) -> int:
        return len(self.helpers)

    def excluded(self, n: int) -> tuple:
        drop = set(self.helpers) | {self.failed}
        return tuple(j for j in range(n) if j not in drop)


def make_plan(code: ArrayCode, failed: int, helpers) -> RepairPlan:
    helpers = tuple(sorted(helpers))
    if failed in helpers:
        raise RepairError(f"failed node {failed} cannot be a helper")
    if len(set(helpers)) != len(helpers):
        raise RepairError("duplicate helpers")
    if any(j < 0 or j >= code.n for j in helpers):
        raise RepairError("helper index out of range")
    theta = len(helpers) - code.k + 1
    if theta < 2:
        raise RepairError(
            f"{len(helpers)} helpers gives degree parameter {theta}; need >= 2"
        )
    if (failed, theta) not in code.repair:
        raise RepairError(
            f"node {failed} does not support repair from {len(helpers)} helpers"
        )
    return RepairPlan(failed=failed, helpers=helpers, theta=theta)


@dataclass
class RepairTranscript:
    downloaded: dict  # helper -> symbols transferred
    accessed: dict  # helper -> set of symbol indices read
    solve_order: list = field(default_factory=list)  # (band, instance, tags)

    @property
    def downloaded_total(self) -> int:
        return sum(self.downloaded.values())

    @property
    def accessed_total(self) -> int:
        return sum(len(v) for v in self.accessed.values())


def interference_projection(S: MatrixGF, A: MatrixGF, R: MatrixGF) -> MatrixGF:
    """The unique X with X @ R = S @ A, existing when the rows of S @ A lie
    in the row space of the full-row-rank R."""
    try:
        return solve_right(R, S @ A)
    except SingularMatrixError as e:
        raise AlignmentError(f"interference not aligned: {e}") from e


def goal_solve_plan(ds, sched, z: int):
    """Band-by-band solve schedule for a goal node repaired at degree index z.

    Returns (band, instance, unknown_tags, eliminated_tags, solved_tags)
    tuples; tags are ("f", a) for a full instance slice and ("p", b, u) for
    part u of instance b.
    """
    l = ds.l
    steps = []
    for w in range(z, ds.m):
        for a in reversed(range(l[w + 1], l[w])):
            solved = [("f", a)]
            eliminated = []
            unknowns = [("f", a)]
            for u in range(1, w + 1):
                tags = [("p", b, h) for (b, h) in sched.parts[(u, a)]]
                unknowns.extend(tags)
                if u <= z:
                    solved.extend(tags)
                else:
                    eliminated.extend(tags)
            steps.append(
                (w, a, tuple(unknowns), tuple(eliminated), tuple(solved))
            )
    return steps


def _proj_stack(code: ArrayCode, i: int, theta: int, j: int) -> MatrixGF:
    """vstack over t of the interference projections of node j onto node i's
    degree-theta repair subspace."""
    key = ("proj", i, theta, j)
    out = code._cache.get(key)
    if out is None:
        R = code.repair[(i, theta)]
        S = code.select[(i, theta)]
        out = vstack(
            [
                interference_projection(S, code.blocks[(t, j)], R)
                for t in range(code.r)
            ]
        )
        code._cache[key] = out
    return out


def _own_stack(code: ArrayCode, i: int, theta: int) -> MatrixGF:
    key = ("own", i, theta)
    out = code._cache.get(key)
    if out is None:
        S = code.select[(i, theta)]
        out = vstack([S @ code.blocks[(t, i)] for t in range(code.r)])
        code._cache[key] = out
    return out


def _neg(fieldp, vec):
    if fieldp.p == 2:
        return vec
    return ((-vec.astype(np.int64)) % fieldp.p).astype(np.uint16)


def _acc(fieldp, acc, term):
    if fieldp.p == 2:
        return acc ^ term
    return ((acc.astype(np.int64) + term) % fieldp.p).astype(np.uint16)


def _download(code: ArrayCode, plan: RepairPlan, word) -> tuple:
    """Helper-side compression: y_j = R f_j, plus transfer/access accounting
    from the literal nonzero support of R's rows."""
    R = code.repair[(plan.failed, plan.theta)]
    skey = ("support", plan.failed, plan.theta)
    support = code._cache.get(skey)
    if support is None:
        support = frozenset(np.nonzero(R.a.any(axis=0))[0].tolist())
        code._cache[skey] = support
    downloads = {}
    downloaded = {}
    accessed = {}
    for j in plan.helpers:
        downloads[j] = R.matvec(np.ascontiguousarray(word[j], dtype=np.uint16))
        downloaded[j] = R.rows
        accessed[j] = set(support)
    return downloads, RepairTranscript(downloaded=downloaded, accessed=accessed)


def repair_base_node(code: ArrayCode, plan: RepairPlan, word):
    """Plain repair on an unlifted code: one aligned system over the whole
    fragment."""
    if code.parent is not None:
        raise RepairError("repair_base_node expects an unlifted code")
    i = plan.failed
    theta = plan.theta
    downloads, transcript = _download(code, plan, word)
    dz = plan.excluded(code.n)
    m = hstack(
        [_own_stack(code, i, theta)] + [_proj_stack(code, i, theta, j) for j in dz]
    )
    rhs = np.zeros(m.rows, dtype=np.uint16)
    for j in plan.helpers:
        rhs = _acc(code.field, rhs, _proj_stack(code, i, theta, j).matvec(downloads[j]))
    sol = _cached_inverse(code, ("base", i, theta, dz), m).matvec(
        _neg(code.field, rhs)
    )
    transcript.solve_order.append((0, 0, (("f", 0),)))
    return sol[: code.L], transcript


def _cached_inverse(code: ArrayCode, key, m: MatrixGF) -> MatrixGF:
    inv = code._cache.get(("inv",) + key)
    if inv is None:
        try:
            inv = m.inverse()
        except SingularMatrixError as e:
            raise RepairError(f"repair system singular for {key}: {e}") from e
        code._cache[("inv",) + key] = inv
    return inv


def goal_repair_system_for(par: ArrayCode, keys: dict, ds, i: int, z: int, d_set) -> tuple:
    """The key-augmented coefficient matrix for a goal node lifted over the
    given base code, plus the per-band key column groups.

    Usable structurally: only base-level matrices are touched, so the lifted
    code never needs to exist.
    """
    d = ds.degrees
    if not 0 <= z < ds.m:
        raise RepairError(f"degree index {z} out of range")
    if len(d_set) != par.r - d[z]:
        raise RepairError(
            f"excluded set size {len(d_set)}, expected {par.r - d[z]}"
        )
    s0 = par.select[(i, par.delta0)]
    kcols = []
    for v in range(d[-1] - d[0]):
        kcols.append(vstack([s0 @ keys[(t, i, v)] for t in range(par.r)]))
    gammas = []
    for u in range(1, ds.m):
        gammas.append(hstack(kcols[d[u - 1] - d[0] : d[u] - d[0]]))
    cols = [_own_stack(par, i, par.delta0)]
    cols += [_proj_stack(par, i, par.delta0, j) for j in d_set]
    cols += kcols[: d[z] - d[0]]
    m = hstack(cols)
    return m, gammas


def goal_repair_system(code: ArrayCode, i: int, z: int, d_set) -> tuple:
    """goal_repair_system_for at the outermost lift of a built code."""
    if code.lift is None or i not in code.lift.goal_set:
        raise RepairError(f"node {i} is not a goal node of the outermost lift")
    return goal_repair_system_for(
        code.parent, code.lift.keys, code.lift.degrees, i, z, d_set
    )


def repair_goal_node(code: ArrayCode, plan: RepairPlan, word):
    """Repair a goal node of the outermost lift round at any supported
    degree: solve the band systems from the top band down, peeling known
    key-column terms, then reassemble the tail instances from the solved
    part chunks."""
    if code.lift is None:
        raise RepairError("repair_goal_node expects a lifted code")
    i = plan.failed
    if i not in code.lift.goal_set:
        raise RepairError(f"node {i} is not in the outermost goal set")
    par = code.parent
    ds = code.lift.degrees
    sched = code.lift.schedule
    z = ds.degrees.index(plan.theta)
    l = ds.l
    lp = par.L
    np_ = lp // par.delta0  # rows per downloaded instance slice
    d0 = code.delta0

    downloads, transcript = _download(code, plan, word)
    dz = plan.excluded(code.n)
    m, gammas = goal_repair_system(code, i, z, dz)
    minv = _cached_inverse(code, ("goal", i, z, dz), m)
    helper_proj = {j: _proj_stack(par, i, par.delta0, j) for j in plan.helpers}

    axis = code.part_axis[i]
    inst = {}
    parts_solved = {}

    def part_value(b, h):
        if b in inst:
            return extract_axis_part(inst[b], par.alpha, par.base_N, d0, axis, h)
        if (b, h) in parts_solved:
            return parts_solved[(b, h)]
        raise RepairError(f"schedule violation: part ({b},{h}) not yet solved")

    for w, a, _unknowns, _elim, solved_tags in goal_solve_plan(ds, sched, z):
        rhs = np.zeros(m.rows, dtype=np.uint16)
        for j in plan.helpers:
            y = downloads[j][a * np_ : (a + 1) * np_]
            rhs = _acc(code.field, rhs, helper_proj[j].matvec(y))
        for u in range(z + 1, w + 1):
            vec = np.concatenate(
                [part_value(b, h) for (b, h) in sched.parts[(u, a)]]
            )
            rhs = _acc(code.field, rhs, gammas[u - 1].matvec(vec))
        sol = minv.matvec(_neg(code.field, rhs))
        inst[a] = sol[:lp]
        off = lp + len(dz) * np_
        for u in range(1, z + 1):
            for b, h in sched.parts[(u, a)]:
                parts_solved[(b, h)] = sol[off : off + np_]
                off += np_
        transcript.solve_order.append((w, a, solved_tags))

    slices = []
    for a in range(l[0]):
        if a in inst:
            slices.append(inst[a])
        else:
            chunks = [parts_solved[(a, h)] for h in range(d0)]
            slices.append(
                merge_axis_parts(chunks, par.alpha, par.base_N, d0, axis)
            )
    return np.concatenate(slices), transcript


def _appended_projection(code: ArrayCode, i: int, theta: int, j: int, t: int, v: int, u: int) -> MatrixGF:
    """W with W @ R_{i,theta} = S_{i,theta} K_{t,j,v} Phi_u at the parent
    level: lets a remainder node rebuild appended terms from its own
    downloaded slices."""
    key = ("appw", i, theta, j, t, v, u)
    out = code._cache.get(key)
    if out is None:
        par = code.parent
        phi = _phi_matrix(code, j, u)
        sk = par.select[(i, theta)] @ code.lift.keys[(t, j, v)] @ phi
        try:
            out = solve_right(par.repair[(i, theta)], sk)
        except SingularMatrixError as e:
            raise RepairError(
                f"appended-data rank condition fails for node {i} degree {theta}: {e}"
            ) from e
        code._cache[key] = out
    return out


def _phi_matrix(code: ArrayCode, j: int, u: int) -> MatrixGF:
    """Part extractor of goal node j at the parent level."""
    key = ("phi", code.part_axis[j], u)
    out = code._cache.get(key)
    if out is None:
        par = code.parent
        d0 = code.delta0
        width = 1
        while d0**width < par.base_N:
            width += 1
        out = axis_part_extractor(
            code.field, par.alpha, code.part_axis[j], u, d0, width
        )
        code._cache[key] = out
    return out


def repair_remainder_node(code: ArrayCode, plan: RepairPlan, word):
    """Repair a node outside the outermost goal set at any degree it already
    supported below: per instance, rebuild the goal nodes' appended terms
    from downloaded slices, then solve the aligned system."""
    if code.lift is None:
        raise RepairError("repair_remainder_node expects a lifted code")
    i = plan.failed
    goal = code.lift.goal_set
    if i in goal:
        raise RepairError(f"node {i} is a goal node; use repair_goal_node")
    par = code.parent
    theta = plan.theta
    if (i, theta) not in par.repair:
        raise RepairError(
            f"node {i} lacks degree-{theta} repair in the lifted-from code"
        )
    ds = code.lift.degrees
    sched = code.lift.schedule
    l = ds.l
    lp = par.L
    rows = lp // theta

    downloads, transcript = _download(code, plan, word)
    dz = plan.excluded(code.n)
    m = hstack(
        [_own_stack(par, i, theta)]
        + [_proj_stack(par, i, theta, j) for j in dz]
    )
    minv = _cached_inverse(code, ("rn", i, theta, dz), m)
    helper_proj = {j: _proj_stack(par, i, theta, j) for j in plan.helpers}

    rf = {}  # (j, b) -> R_{i,theta} f_j^{(b)} for excluded nodes
    inst = {}

    def rf_value(j, b):
        if j in plan.helpers:
            return downloads[j][b * rows : (b + 1) * rows]
        if (j, b) in rf:
            return rf[(j, b)]
        raise RepairError(f"schedule violation: slice ({j},{b}) not available")

    for w in range(ds.m):
        for a in reversed(range(l[w + 1], l[w])):
            rhs = np.zeros(m.rows, dtype=np.uint16)
            for j in plan.helpers:
                rhs = _acc(
                    code.field, rhs, helper_proj[j].matvec(rf_value(j, a))
                )
            for j in goal:
                for t in range(par.r):
                    seg = np.zeros(rows, dtype=np.uint16)
                    for v, b, h in sched.band_terms(a):
                        w_mat = _appended_projection(code, i, theta, j, t, v, h)
                        seg = _acc(code.field, seg, w_mat.matvec(rf_value(j, b)))
                    if seg.any():
                        rhs[t * rows : (t + 1) * rows] = _acc(
                            code.field, rhs[t * rows : (t + 1) * rows], seg
                        )
            sol = minv.matvec(_neg(code.field, rhs))
            inst[a] = sol[:lp]
            for pos, j in enumerate(dz):
                rf[(j, a)] = sol[lp + pos * rows : lp + (pos + 1) * rows]
            transcript.solve_order.append(
                (w, a, (("f", a),) + tuple(("rf", j, a) for j in dz))
            )

    return np.concatenate([inst[a] for a in range(l[0])]), transcript


def repair_node(code: ArrayCode, plan: RepairPlan, word):
    """Dispatch to the right procedure for this code and failed node."""
    if code.parent is None:
        return repair_base_node(code, plan, word)
    if plan.failed in code.lift.goal_set:
        return repair_goal_node(code, plan, word)
    return repair_remainder_node(code, plan, word)


@dataclass
class AuditReport:
    bound: int
    downloaded_total: int
    accessed_total: int
    optimal_repair: bool
    optimal_access: bool

    def __str__(self):
        return (
            f"downloaded {self.downloaded_total}/{self.bound} symbols, "
            f"accessed {self.accessed_total}, "
            f"optimal repair: {'yes' if self.optimal_repair else 'no'}, "
            f"optimal access: {'yes' if self.optimal_access else 'no'}"
        )


def transcript_audit(transcript: RepairTranscript, code: ArrayCode, plan: RepairPlan) -> AuditReport:
    """Check the transcript against the repair-bandwidth lower bound
    d*L/(d-k+1) and the access-equals-transfer criterion."""
    bound = plan.d * code.L // (plan.d - code.k + 1)
    total = transcript.downloaded_total
    if total < bound:
        raise RepairError(
            f"transcript below the cut-set bound: {total} < {bound}"
        )
    return AuditReport(
        bound=bound,
        downloaded_total=total,
        accessed_total=transcript.accessed_total,
        optimal_repair=total == bound,
        optimal_access=transcript.accessed_total == total,
    )
