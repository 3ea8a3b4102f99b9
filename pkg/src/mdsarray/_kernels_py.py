"""Pure-Python (numpy) implementations of the hot matrix kernels.

Mirrors the compiled extension in `_kernels.pyx`; the two must stay
interchangeable.  Elements are uint16, `expt`/`logt` are the field's antilog
and log tables (log[0] is a sentinel mapping products with a zero operand
into the zeroed tail of `expt`).
"""

import numpy as np

NAME = "python"


def matmul(a, b, expt, logt, p):
    m, kk = a.shape
    n = b.shape[1]
    if p != 2:
        return ((a.astype(np.int64) @ b.astype(np.int64)) % p).astype(np.uint16)
    out = np.zeros((m, n), dtype=np.uint16)
    la = logt[a]
    lb = logt[b]
    for k in range(kk):
        out ^= expt[la[:, k : k + 1] + lb[k]]
    return out


def row_reduce(m, main_cols, expt, logt, qm1, p, reduced):
    """In-place Gauss(-Jordan) elimination pivoting on the first `main_cols`
    columns; trailing columns ride along as an augment.  Returns the rank."""
    rows = m.shape[0]
    rank = 0
    for c in range(main_cols):
        sub = m[rank:, c]
        nz = np.nonzero(sub)[0]
        if nz.size == 0:
            continue
        pr = rank + int(nz[0])
        if pr != rank:
            m[[rank, pr], :] = m[[pr, rank], :]
        piv = int(m[rank, c])
        if p == 2:
            if piv != 1:
                inv = expt[qm1 - logt[piv]]
                m[rank, c:] = expt[logt[m[rank, c:]] + int(logt[inv])]
            if reduced:
                others = np.nonzero(m[:, c])[0]
                others = others[others != rank]
            else:
                others = rank + 1 + np.nonzero(m[rank + 1 :, c])[0]
            if others.size:
                f = logt[m[others, c]]
                m[others, c:] ^= expt[logt[m[rank, c:]][None, :] + f[:, None]]
        else:
            if piv != 1:
                inv = int(expt[qm1 - logt[piv]])
                m[rank, c:] = (m[rank, c:].astype(np.int64) * inv % p).astype(
                    np.uint16
                )
            if reduced:
                others = np.nonzero(m[:, c])[0]
                others = others[others != rank]
            else:
                others = rank + 1 + np.nonzero(m[rank + 1 :, c])[0]
            if others.size:
                f = m[others, c].astype(np.int64)
                block = m[others, c:].astype(np.int64)
                block = (block - f[:, None] * m[rank, c:].astype(np.int64)) % p
                m[others, c:] = block.astype(np.uint16)
        rank += 1
        if rank == rows:
            break
    return rank
