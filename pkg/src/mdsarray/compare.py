"""Parameter comparison against the two reference multi-degree families.

Formula-level only: sub-packetization, smallest usable field (optionally
rounded up to a power of two), and per-node storage capacity N*log2(q).
The reference families both use sub-packetization delta^n; family "diag"
needs q >= delta*n, family "perm" needs q >= n+1.
"""

import math
from dataclasses import dataclass

from .gf import next_pow2
from .transform import DegreeSet
from .vbk import field_size_bound


@dataclass
class CompareRow:
    name: str
    degrees: tuple
    subpack_base: int
    subpack_exp: int
    min_q: int
    q: int  # rounded field actually used

    @property
    def subpacketization(self) -> int:
        return self.subpack_base**self.subpack_exp

    @property
    def storage_capacity(self) -> float:
        return self.subpacketization * math.log2(self.q)

    def cells(self) -> tuple:
        return (
            self.name,
            "{" + ",".join(str(d) for d in self.degrees) + "}",
            f"{self.subpack_base}^{self.subpack_exp}",
            f"2^{self.q.bit_length() - 1}" if self.q & (self.q - 1) == 0 else str(self.q),
            f"{int(round(math.log2(self.q)))}*{self.subpack_base}^{self.subpack_exp}",
        )


def reduction_factor(n: int, delta: int) -> tuple:
    """Sub-packetization reduction vs the delta^n families when the base
    degree exceeds 4 and the construction runs with degree 4 added."""
    ceil4 = -(-n // 4)
    if delta % 4 == 0:
        num, den = delta ** (n - ceil4), 1
    elif delta % 2 == 0:
        num, den = delta ** (n - ceil4), 2**ceil4
    else:
        num, den = delta ** (n - ceil4), 4**ceil4
    return num, den


def compare_rows(n: int, k: int, delta0: int, degrees, pow2: bool = True) -> list:
    """Rows for this construction and the two delta^n references."""
    ds = DegreeSet.make(degrees)
    delta = ds.lcm
    rows = []
    if delta0 <= 4:
        exp = -(-n // delta0)
        bound = field_size_bound(n, delta0)
    else:
        # base degree above 4: run with degree 4 added, lcm(4, delta)
        exp = -(-n // 4)
        delta = math.lcm(4, delta)
        bound = 18 * exp + 2
    rows.append(
        CompareRow(
            name="this code",
            degrees=tuple(degrees),
            subpack_base=delta,
            subpack_exp=exp,
            min_q=bound,
            q=next_pow2(bound) if pow2 else bound,
        )
    )
    delta_ref = ds.lcm
    yb3_bound = delta_ref * n
    yb4_bound = n + 1
    rows.append(
        CompareRow(
            name="diag family",
            degrees=tuple(degrees),
            subpack_base=delta_ref,
            subpack_exp=n,
            min_q=yb3_bound,
            q=next_pow2(yb3_bound) if pow2 else yb3_bound,
        )
    )
    rows.append(
        CompareRow(
            name="perm family",
            degrees=tuple(degrees),
            subpack_base=delta_ref,
            subpack_exp=n,
            min_q=yb4_bound,
            q=next_pow2(yb4_bound) if pow2 else yb4_bound,
        )
    )
    return rows


def render_table(groups) -> str:
    header = ("code", "degrees", "subpacketization", "field size", "capacity N*log q")
    widths = [len(h) for h in header]
    all_rows = []
    for rows in groups:
        for row in rows:
            cells = row.cells()
            all_rows.append(cells)
            widths = [max(w, len(c)) for w, c in zip(widths, cells)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    for cells in all_rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(cells, widths)))
    return "\n".join(lines)
