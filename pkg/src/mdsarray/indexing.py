"""Base-s digit combinatorics behind the array-code index structure.

Digit tuples are most-significant-first: (a_{w-1}, ..., a_0), so digit
position x addresses tuple index w-1-x.  Selector matrices are materialized
as explicit 0/1 matrices so everything downstream is uniform matrix algebra.
"""

import numpy as np

from .linalg import MatrixGF


def expand(a: int, base: int, width: int) -> tuple:
    if not 0 <= a < base**width:
        raise ValueError(f"{a} out of range for {width} base-{base} digits")
    digits = []
    for _ in range(width):
        digits.append(a % base)
        a //= base
    return tuple(reversed(digits))


def compose(digits, base: int) -> int:
    a = 0
    for d in digits:
        if not 0 <= d < base:
            raise ValueError(f"digit {d} out of range for base {base}")
        a = a * base + d
    return a


def replace_digit(digits, x: int, value: int) -> tuple:
    """Set digit position x (counting from the least significant)."""
    w = len(digits)
    if not 0 <= x < w:
        raise ValueError(f"digit position {x} out of range for width {w}")
    out = list(digits)
    out[w - 1 - x] = value
    return tuple(out)


def insert_digit(digits, x: int, value: int) -> tuple:
    """Insert a digit so it lands at position x of the widened tuple."""
    w = len(digits)
    if not 0 <= x <= w:
        raise ValueError(f"insert position {x} out of range for width {w}")
    out = list(digits)
    out.insert(w - x, value)
    return tuple(out)


def replace_digit_index(a: int, x: int, value: int, base: int) -> int:
    """Integer form of replace_digit."""
    scale = base**x
    return a - ((a // scale) % base) * scale + value * scale


def insert_digit_index(a: int, x: int, value: int, base: int) -> int:
    """Integer form of insert_digit."""
    scale = base**x
    high, low = divmod(a, scale)
    return (high * base + value) * scale + low


def selector_matrix(field, axis: int, digit: int, base: int, width: int) -> MatrixGF:
    """The s^(w-1) x s^w matrix whose rows pick out indices with the given
    digit on the given axis, in ascending index order."""
    if not 0 <= axis < width:
        raise ValueError(f"axis {axis} out of range for width {width}")
    if not 0 <= digit < base:
        raise ValueError(f"digit {digit} out of range for base {base}")
    nrows = base ** (width - 1)
    out = np.zeros((nrows, base**width), dtype=np.uint16)
    for a in range(nrows):
        out[a, insert_digit_index(a, axis, digit, base)] = 1
    return MatrixGF(field, out)


def part_selector(field, part: int, size: int, parts: int) -> MatrixGF:
    """size x (parts*size) matrix extracting the part-th equal chunk."""
    if not 0 <= part < parts:
        raise ValueError(f"part {part} out of range")
    out = np.zeros((size, parts * size), dtype=np.uint16)
    out[:, part * size : (part + 1) * size] = np.eye(size, dtype=np.uint16)
    return MatrixGF(field, out)


def part_extractor(field, alpha: int, part: int, size: int, parts: int) -> MatrixGF:
    """Block diagonal of `alpha` copies of part_selector: maps a vector of
    alpha stacked (parts*size)-slices to the part-th chunk of each slice."""
    out = np.zeros((alpha * size, alpha * parts * size), dtype=np.uint16)
    eye = np.eye(size, dtype=np.uint16)
    for i in range(alpha):
        out[
            i * size : (i + 1) * size,
            i * parts * size + part * size : i * parts * size + (part + 1) * size,
        ] = eye
    return MatrixGF(field, out)


def extract_part(vec: np.ndarray, alpha: int, part: int, n: int, parts: int) -> np.ndarray:
    """Fast equivalent of part_extractor(...).matvec(vec)."""
    size = n // parts
    return np.ascontiguousarray(
        vec.reshape(alpha, n)[:, part * size : (part + 1) * size]
    ).reshape(-1)


def merge_parts(parts_list, alpha: int, n: int) -> np.ndarray:
    """Reassemble a length alpha*n vector from its per-part chunks."""
    num = len(parts_list)
    size = n // num
    out = np.zeros((alpha, n), dtype=np.uint16)
    for u, chunk in enumerate(parts_list):
        out[:, u * size : (u + 1) * size] = np.asarray(chunk).reshape(alpha, size)
    return out.reshape(-1)


def axis_part_extractor(field, alpha: int, axis: int, part: int, base: int, width: int) -> MatrixGF:
    """Block diagonal of `alpha` digit selectors: per base-size slice, picks
    the coordinates whose digit on `axis` equals `part`."""
    from .linalg import blkdiag

    return blkdiag([selector_matrix(field, axis, part, base, width)] * alpha)


def extract_axis_part(vec: np.ndarray, alpha: int, n: int, base: int, axis: int, part: int) -> np.ndarray:
    """Fast equivalent of axis_part_extractor(...).matvec(vec); n = base**width."""
    low = base**axis
    high = (alpha * n) // (base * low)
    return np.ascontiguousarray(
        vec.reshape(high, base, low)[:, part, :]
    ).reshape(-1)


def merge_axis_parts(parts_list, alpha: int, n: int, base: int, axis: int) -> np.ndarray:
    """Inverse of extract_axis_part over all parts."""
    low = base**axis
    high = (alpha * n) // (base * low)
    out = np.zeros((high, base, low), dtype=np.uint16)
    for u, chunk in enumerate(parts_list):
        out[:, u, :] = np.asarray(chunk).reshape(high, low)
    return out.reshape(-1)
