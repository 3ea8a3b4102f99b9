"""Encode and erasure-decode codewords of any ArrayCode.

A codeword is n fragments of L symbols satisfying all r parity-check groups.
Encoding solves the stacked r*L x r*L system for the non-systematic
fragments; the inverse is cached per fragment set, so bulk work is one
matrix multiply per stripe batch.
"""

import numpy as np

from .arraycode import ArrayCode
from .indexing import extract_axis_part
from .linalg import MatrixGF, SingularMatrixError, hstack, vstack


class CodecError(ValueError):
    pass


def syndrome(code: ArrayCode, fragments) -> list:
    """The r parity-check group sums; all zero iff `fragments` is a codeword."""
    out = []
    for t in range(code.r):
        acc = np.zeros(code.L, dtype=np.uint16)
        for i in range(code.n):
            term = code.blocks[(t, i)].matvec(fragments[i])
            acc = _acc(code, acc, term)
        out.append(acc)
    return out


def _acc(code, acc, term):
    if code.field.p == 2:
        return acc ^ term
    return ((acc.astype(np.int64) + term) % code.field.p).astype(np.uint16)


def _neg(code, vec):
    if code.field.p == 2:
        return vec
    return ((-vec.astype(np.int64)) % code.field.p).astype(np.uint16)


def _solver_for(code: ArrayCode, unknown) -> MatrixGF:
    """Cached inverse of the stacked blocks of the unknown fragment set."""
    key = ("solver", tuple(unknown))
    inv = code._cache.get(key)
    if inv is None:
        cols = [
            vstack([code.blocks[(t, i)] for t in range(code.r)]) for i in unknown
        ]
        m = hstack(cols)
        try:
            inv = m.inverse()
        except SingularMatrixError as e:
            raise CodecError(
                f"fragment set {unknown} is not recoverable: {e}"
            ) from e
        code._cache[key] = inv
    return inv


def _solve_missing(code: ArrayCode, known: dict, unknown):
    """Solve the parity equations for the `unknown` fragments given all
    others; `known` maps node -> fragment (or column batch of fragments)."""
    first = next(iter(known.values()))
    batch = first.ndim == 2
    width = first.shape[1] if batch else 1
    rhs = np.zeros((code.r * code.L, width), dtype=np.uint16)
    for t in range(code.r):
        seg = slice(t * code.L, (t + 1) * code.L)
        acc = np.zeros((code.L, width), dtype=np.uint16)
        for j, frag in known.items():
            f2 = frag[:, None] if frag.ndim == 1 else frag
            acc = _acc(code, acc, code.blocks[(t, j)].matvec(f2))
        rhs[seg] = acc
    inv = _solver_for(code, unknown)
    sol = inv.matvec(_neg(code, rhs))
    out = {}
    for pos, i in enumerate(unknown):
        seg = sol[pos * code.L : (pos + 1) * code.L]
        out[i] = seg[:, 0] if not batch else seg
    return out


def encode(code: ArrayCode, data, systematic=None) -> list:
    """Build a codeword holding the k data fragments at the systematic
    node indices (default [0, k)); the rest are solved from the parity
    equations, so the syndrome of the result is exactly zero."""
    systematic = tuple(systematic) if systematic is not None else tuple(range(code.k))
    if len(systematic) != code.k or len(set(systematic)) != code.k:
        raise CodecError(f"systematic set must hold k={code.k} distinct nodes")
    data = [np.ascontiguousarray(d, dtype=np.uint16) for d in data]
    if len(data) != code.k or any(d.shape[0] != code.L for d in data):
        raise CodecError(f"need k={code.k} fragments of length L={code.L}")
    known = dict(zip(systematic, data))
    unknown = tuple(i for i in range(code.n) if i not in known)
    solved = _solve_missing(code, known, unknown)
    word = [None] * code.n
    for i, frag in known.items():
        word[i] = frag
    for i, frag in solved.items():
        word[i] = frag
    return word


def reconstruct(code: ArrayCode, surviving: dict) -> list:
    """Recover the full codeword from any k fragments (dense solve)."""
    if len(surviving) != code.k:
        raise CodecError(f"need exactly k={code.k} surviving fragments")
    known = {
        i: np.ascontiguousarray(f, dtype=np.uint16) for i, f in surviving.items()
    }
    unknown = tuple(i for i in range(code.n) if i not in known)
    solved = _solve_missing(code, known, unknown)
    word = [None] * code.n
    for i, frag in known.items():
        word[i] = frag
    for i, frag in solved.items():
        word[i] = frag
    return word


def reconstruct_induction(code: ArrayCode, surviving: dict) -> list:
    """Recover the codeword instance by instance, peeling appended data.

    Runs on lifted codes only: the top band of instances satisfies the
    parent's plain parity equations; once those slices are known, the
    appended terms of lower bands are computable and each instance reduces
    to a parent-level solve.
    """
    if code.parent is None or code.lift is None:
        raise CodecError("induction decode requires a lifted code")
    if len(surviving) != code.k:
        raise CodecError(f"need exactly k={code.k} surviving fragments")
    parent = code.parent
    ds = code.lift.degrees
    sched = code.lift.schedule
    keys = code.lift.keys
    goal = set(code.lift.goal_set)
    l0 = ds.l[0]
    Lp = parent.L
    known = {
        i: np.ascontiguousarray(f, dtype=np.uint16) for i, f in surviving.items()
    }
    unknown = tuple(i for i in range(code.n) if i not in known)
    slices = {i: [None] * l0 for i in range(code.n)}
    for i, f in known.items():
        for a in range(l0):
            slices[i][a] = f[a * Lp : (a + 1) * Lp]

    def appended(t, i, a):
        acc = np.zeros(Lp, dtype=np.uint16)
        for v, b, u in sched.band_terms(a):
            part = extract_axis_part(
                slices[i][b], parent.alpha, parent.base_N, code.delta0,
                code.part_axis[i], u,
            )
            acc = _acc(parent, acc, keys[(t, i, v)].matvec(part))
        return acc

    for a in reversed(range(l0)):
        rhs = np.zeros((parent.r * Lp, 1), dtype=np.uint16)
        for t in range(parent.r):
            seg = slice(t * Lp, (t + 1) * Lp)
            acc = np.zeros(Lp, dtype=np.uint16)
            for j in known:
                acc = _acc(parent, acc, parent.blocks[(t, j)].matvec(slices[j][a]))
                if j in goal:
                    acc = _acc(parent, acc, appended(t, j, a))
            for j in unknown:
                if j in goal:
                    acc = _acc(parent, acc, appended(t, j, a))
            rhs[seg, 0] = acc
        inv = _solver_for(parent, unknown)
        sol = inv.matvec(_neg(parent, rhs))
        for pos, i in enumerate(unknown):
            slices[i][a] = sol[pos * Lp : (pos + 1) * Lp, 0]

    word = [None] * code.n
    for i in range(code.n):
        word[i] = np.concatenate(slices[i])
    for i, f in known.items():
        word[i] = f
    return word
