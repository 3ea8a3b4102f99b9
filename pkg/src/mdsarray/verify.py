"""Brute-force certification of the code properties.

Every claim the library makes about a constructed code is checkable here by
direct computation: MDS rank checks over fragment subsets, the key-matrix
conditions behind the lift, repair-bandwidth equality, and the selector
identity oracle.  Checks are exhaustive when the subset space is small and
seeded-sampled otherwise, so every report is reproducible.
"""

import itertools
import random
from dataclasses import dataclass

import numpy as np

from .arraycode import ArrayCode
from .gf import build_field
from .indexing import axis_part_extractor, selector_matrix
from .linalg import MatrixGF, hstack, vstack

EXHAUSTIVE_LIMIT = 500


@dataclass
class PropertyReport:
    name: str
    scope: str
    passed: bool
    counterexample: tuple | None = None
    details: str = ""

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def line(self) -> str:
        extra = f" counterexample={self.counterexample}" if self.counterexample else ""
        det = f" ({self.details})" if self.details else ""
        return f"{self.name}: {self.verdict} [{self.scope}]{extra}{det}"

    def record(self) -> str:
        ce = "" if self.counterexample is None else repr(self.counterexample)
        return (
            f"property={self.name}\tverdict={self.verdict}\tscope={self.scope}"
            f"\tcounterexample={ce}\tdetails={self.details}"
        )


def _subset_iter(pool, size, samples, seed):
    """All size-subsets when few enough (or samples=None), else a seeded
    sample; returns (subsets, scope string)."""
    total = 1
    npool = len(pool)
    for i in range(size):
        total = total * (npool - i) // (i + 1)
    if samples is None or total <= EXHAUSTIVE_LIMIT:
        return list(itertools.combinations(pool, size)), f"exhaustive {total}"
    rng = random.Random(seed)
    seen = set()
    while len(seen) < min(samples, total):
        seen.add(tuple(sorted(rng.sample(list(pool), size))))
    return sorted(seen), f"sampled {len(seen)} of {total}"


def check_mds(code: ArrayCode, mode: str = "auto", samples: int = 20, seed: int = 0) -> PropertyReport:
    """Every r-subset of fragments must be solvable from the rest: the
    stacked blocks of the subset form a nonsingular r*L square."""
    if mode == "exhaustive":
        samples = None
    subsets, scope = _subset_iter(range(code.n), code.r, samples, seed)
    want = code.r * code.L
    for sub in subsets:
        m = hstack(
            [
                vstack([code.blocks[(t, i)] for t in range(code.r)])
                for i in sub
            ]
        )
        if m.rank() != want:
            return PropertyReport("mds", scope, False, counterexample=sub)
    return PropertyReport("mds", scope, True)


def check_c1(code: ArrayCode, goal) -> PropertyReport:
    """Key matrices of one goal node vanish under the select matrices of the
    others in the same set."""
    goal = tuple(goal)
    num_keys = len({v for (_, _, v) in code.keys})
    for i in goal:
        for j in goal:
            if i == j:
                continue
            s = code.select[(j, code.delta0)]
            for t in range(code.r):
                for v in range(num_keys):
                    if not (s @ code.keys[(t, i, v)]).is_zero():
                        return PropertyReport(
                            "c1", "exhaustive", False, counterexample=(i, j, t, v)
                        )
    return PropertyReport("c1", "exhaustive", True)


def _key_system(code: ArrayCode, i: int, z: int, d_set, degrees) -> MatrixGF:
    from .repair import _own_stack, _proj_stack

    d = degrees.degrees
    s0 = code.select[(i, code.delta0)]
    cols = [_own_stack(code, i, code.delta0)]
    cols += [_proj_stack(code, i, code.delta0, j) for j in d_set]
    for v in range(d[z] - d[0]):
        cols.append(vstack([s0 @ code.keys[(t, i, v)] for t in range(code.r)]))
    return hstack(cols)


def check_c2(
    code: ArrayCode, goal, degrees, samples: int = 30, seed: int = 0
) -> PropertyReport:
    """For each goal node and degree index z >= 1, the key-augmented repair
    system stays nonsingular for every excluded set."""
    d = degrees.degrees
    scope = None
    for i in goal:
        for z in range(1, degrees.m):
            pool = [j for j in range(code.n) if j != i]
            subsets, scope = _subset_iter(pool, code.r - d[z], samples, seed)
            for sub in subsets:
                m = _key_system(code, i, z, sub, degrees)
                if m.rank() != m.rows:
                    return PropertyReport(
                        "c2", scope, False, counterexample=(i, z, sub)
                    )
    return PropertyReport("c2", scope or "exhaustive", True)


def check_c3(code: ArrayCode, goal, degrees=None, zs=(0,)) -> PropertyReport:
    """Appended terms must be computable from downloaded slices: stacking a
    node's repair matrix with any select-key-extractor product must not
    raise its rank."""
    goal = set(goal)
    num_keys = len({v for (_, _, v) in code.keys})
    d0 = code.delta0
    allowed = None
    if zs is not None and degrees is not None:
        allowed = {degrees.degrees[z] for z in zs if z < degrees.m}
    checked = 0
    for i in range(code.n):
        if i in goal:
            continue
        for (node, theta) in sorted(code.repair):
            if node != i:
                continue
            if allowed is not None and theta not in allowed:
                continue
            r = code.repair[(i, theta)]
            s = code.select[(i, theta)]
            want = code.L // theta
            width = 1
            while d0**width < code.base_N:
                width += 1
            for j in goal:
                for u in range(d0):
                    phi = axis_part_extractor(
                        code.field, code.alpha, code.part_axis[j], u, d0, width
                    )
                    for t in range(code.r):
                        for v in range(num_keys):
                            sk = s @ code.keys[(t, j, v)] @ phi
                            if vstack([r, sk]).rank() != want:
                                return PropertyReport(
                                    "c3",
                                    "exhaustive",
                                    False,
                                    counterexample=(i, theta, j, t, v, u),
                                )
                            checked += 1
    return PropertyReport("c3", "exhaustive", True, details=f"{checked} stacks")


def check_delta0_repair(code: ArrayCode, samples: int = 20, seed: int = 0) -> PropertyReport:
    """Every node recovers exactly from every smallest-degree helper set at
    the bandwidth bound."""
    from .codec import encode
    from .repair import make_plan, repair_node, transcript_audit

    rng = np.random.RandomState(seed)
    data = [
        rng.randint(0, code.field.q, code.L).astype(np.uint16)
        for _ in range(code.k)
    ]
    word = encode(code, data)
    d0 = code.k + code.delta0 - 1
    scope = None
    for i in range(code.n):
        pool = [j for j in range(code.n) if j != i]
        subsets, scope = _subset_iter(pool, d0, samples, seed)
        for helpers in subsets:
            plan = make_plan(code, i, helpers)
            frag, transcript = repair_node(code, plan, word)
            audit = transcript_audit(transcript, code, plan)
            if not np.array_equal(frag, word[i]) or not audit.optimal_repair:
                return PropertyReport(
                    "delta0-repair", scope, False, counterexample=(i, helpers)
                )
    return PropertyReport("delta0-repair", scope or "exhaustive", True)


def check_tmds(code: ArrayCode, degrees, samples: int = 30, seed: int = 0) -> list:
    """The certificate making a base code eligible for the degree lift:
    MDS, smallest-degree repair for all nodes, and the three key-matrix
    conditions per goal set."""
    reports = [
        check_mds(code, samples=samples, seed=seed),
        check_delta0_repair(code, samples=samples, seed=seed),
    ]
    if not code.keys:
        reports.append(
            PropertyReport(
                "c1", "exhaustive", False, details="code has no key matrices"
            )
        )
        return reports
    for x, goal in enumerate(code.goal_sets):
        for rep in (
            check_c1(code, goal),
            check_c2(code, goal, degrees, samples=samples, seed=seed),
            check_c3(code, goal, degrees, zs=(0,)),
        ):
            rep.name = f"{rep.name}[J{x}]"
            reports.append(rep)
    return reports


def check_repair_bound(
    code: ArrayCode, samples: int = 20, seed: int = 0, nodes=None, degrees=None
) -> PropertyReport:
    """Run the repair engine for every node and supported degree; recovered
    fragments must match and download = access = d*L/(d-k+1) exactly."""
    from .codec import encode
    from .repair import make_plan, repair_node, transcript_audit

    rng = np.random.RandomState(seed)
    data = [
        rng.randint(0, code.field.q, code.L).astype(np.uint16)
        for _ in range(code.k)
    ]
    word = encode(code, data)
    scope = None
    for i in nodes if nodes is not None else range(code.n):
        for theta in code.degrees_of(i):
            if degrees is not None and theta not in degrees:
                continue
            d = code.k + theta - 1
            pool = [j for j in range(code.n) if j != i]
            subsets, scope = _subset_iter(pool, d, samples, seed)
            for helpers in subsets:
                plan = make_plan(code, i, helpers)
                frag, transcript = repair_node(code, plan, word)
                audit = transcript_audit(transcript, code, plan)
                ok = (
                    np.array_equal(frag, word[i])
                    and audit.optimal_repair
                    and audit.optimal_access
                )
                if not ok:
                    return PropertyReport(
                        "repair-bound",
                        scope,
                        False,
                        counterexample=(i, theta, helpers),
                        details=str(audit),
                    )
    return PropertyReport("repair-bound", scope or "exhaustive", True)


def _t_matrix_chunk(field, x, xt, v, h, base, width) -> MatrixGF:
    """Drop-and-prepend commutation witness paired with the contiguous-chunk
    part selector: drops the digit fixed by (x, xt, v), prepends h."""
    npr = base ** (width - 1)
    out = np.zeros((npr, npr), dtype=np.uint16)
    top = base ** (width - 2)
    for a in range(npr):
        pos = xt - 1 if x < xt else xt
        scale = base**pos
        if (a // scale) % base != v:
            continue
        dropped = (a // (scale * base)) * scale + a % scale
        out[a, h * top + dropped] = 1
    return MatrixGF(field, out)


def _t_matrix_axis(field, x, xt, v, h, base, width) -> MatrixGF:
    """Replace-digit commutation witness paired with the digit-class part
    selector: rows with digit v at the contracted axis get h written there."""
    from .indexing import replace_digit_index

    npr = base ** (width - 1)
    out = np.zeros((npr, npr), dtype=np.uint16)
    pos = xt if xt < x else xt - 1
    scale = base**pos
    for a in range(npr):
        if (a // scale) % base != v:
            continue
        out[a, replace_digit_index(a, pos, h, base)] = 1
    return MatrixGF(field, out)


def check_selector_identities(
    base: int, width: int, field=None, convention: str = "axis"
) -> PropertyReport:
    """Oracle for the selector-matrix identities: orthogonality of same-axis
    selectors, and the commutation through part extraction that the appended
    data relies on.

    convention="axis" pairs digit-class parts with the replace-digit witness
    (the identity this construction uses; holds for every axis order).
    convention="chunk" pairs contiguous-chunk parts with the
    drop-and-prepend witness; that identity only holds when the outer axis
    is below the transposed one, which is why the construction divides
    fragments by digit class instead.
    """
    if field is None:
        field = build_field(4 if base != 4 else 5)
    npr = base ** (width - 1)
    eye = MatrixGF.identity(field, npr)
    sel = {
        (x, u): selector_matrix(field, x, u, base, width)
        for x in range(width)
        for u in range(base)
    }
    name = f"selector-identities[{convention}]"
    for x in range(width):
        for u in range(base):
            for v in range(base):
                prod = sel[(x, u)] @ sel[(x, v)].T
                want = eye if u == v else MatrixGF.zeros(field, npr, npr)
                if prod != want:
                    return PropertyReport(
                        name,
                        "exhaustive",
                        False,
                        counterexample=("orthogonality", x, u, v),
                    )
    from .indexing import part_selector

    for x in range(width):
        for xt in range(width):
            if x == xt:
                continue
            for u in range(base):
                for v in range(base):
                    for h in range(base):
                        if convention == "chunk":
                            delta = part_selector(field, h, npr, base)
                            t = _t_matrix_chunk(field, x, xt, v, h, base, width)
                        else:
                            delta = sel[(xt, h)]
                            t = _t_matrix_axis(field, x, xt, v, h, base, width)
                        lhs = sel[(x, u)] @ (sel[(xt, v)].T @ delta)
                        if lhs != t @ sel[(x, u)]:
                            return PropertyReport(
                                name,
                                "exhaustive",
                                False,
                                counterexample=("commutation", x, xt, u, v, h),
                            )
    return PropertyReport(name, "exhaustive", True)


# -- fixtures for exercising the failure paths --


def zero_block_fixture(code: ArrayCode, t: int = 0, i: int = 0) -> ArrayCode:
    """A broken copy with one parity block zeroed; MDS must fail."""
    import copy

    broken = copy.copy(code)
    broken.blocks = dict(code.blocks)
    broken.blocks[(t, i)] = MatrixGF.zeros(code.field, code.L, code.L)
    broken._cache = {}
    return broken


def collided_zeta_fixture(n: int, k: int, delta0: int, degrees, seed: int = 0) -> ArrayCode:
    """A base code whose first key coefficient collides with a lambda value,
    violating the distinctness the key-augmented systems rely on."""
    from dataclasses import replace

    from .vbk import VbkParams, build_from_constants, build_vbk, _lambda_table

    good = build_vbk(n, k, delta0, degrees=degrees, seed=seed)
    params = VbkParams(n, k, delta0)
    lam = _lambda_table(good.field, good.constants, params)
    bad_consts = replace(
        good.constants,
        zeta=(int(lam[0, 0]),) + good.constants.zeta[1:],
    )
    return build_from_constants(params, good.field, bad_consts, tuple(degrees), seed)


def densified_repair_fixture(code: ArrayCode, i: int) -> ArrayCode:
    """Replace a node's repair matrix by an invertible recombination with
    dense rows.  Repair still works (same row space), and because the row
    space pins the reachable column support, the accessed-symbol set cannot
    actually grow: useful for checking that the audit counts distinct
    symbols, not row weights."""
    import copy

    u = np.eye(code.L // code.delta0, dtype=np.uint16)
    for r in range(1, u.shape[0]):
        u[r, r - 1] = 1
    dense = MatrixGF(code.field, u) @ code.repair[(i, code.delta0)]
    broken = copy.copy(code)
    broken.repair = dict(code.repair)
    broken.repair[(i, code.delta0)] = dense
    broken._cache = {}
    return broken


def wasteful_helper_transcript(transcript, extra: int = 8):
    """Transcript as produced by helpers that read more symbols than they
    send; trips the access flag while the bandwidth flag stays green."""
    import copy

    fat = copy.deepcopy(transcript)
    for j, acc in fat.accessed.items():
        top = max(acc) if acc else 0
        acc.update(range(top + 1, top + 1 + extra))
    return fat


def render_text(reports) -> str:
    return "\n".join(r.line() for r in reports)


def render_records(reports) -> str:
    return "\n".join(r.record() for r in reports)
