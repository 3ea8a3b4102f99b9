import numpy as np
import pytest

from mdsarray.gf import build_field
from mdsarray.indexing import (
    axis_part_extractor,
    compose,
    expand,
    extract_axis_part,
    extract_part,
    insert_digit,
    insert_digit_index,
    merge_axis_parts,
    merge_parts,
    part_extractor,
    part_selector,
    replace_digit,
    replace_digit_index,
    selector_matrix,
)
from mdsarray.linalg import MatrixGF

F = build_field(4)


def test_expand_examples():
    assert expand(5, 2, 3) == (1, 0, 1)
    assert expand(0, 3, 4) == (0, 0, 0, 0)
    assert expand(7, 2, 3) == (1, 1, 1)


def test_expand_compose_roundtrip():
    for a in range(27):
        assert compose(expand(a, 3, 3), 3) == a


def test_expand_out_of_range():
    with pytest.raises(ValueError):
        expand(8, 2, 3)


def test_replace_digit():
    assert replace_digit((1, 0, 1), 1, 1) == (1, 1, 1)
    a = (1, 0, 1)
    assert replace_digit(a, 2, 1) == a  # fixed point
    assert replace_digit(replace_digit(a, 1, 1), 1, 0) == a  # involution


def test_insert_digit():
    assert insert_digit((1, 0), 2, 1) == (1, 1, 0)
    assert insert_digit((1, 0), 0, 1) == (1, 0, 1)


def test_int_variants_match_tuples():
    for a in range(8):
        for x in range(3):
            for u in range(2):
                assert replace_digit_index(a, x, u, 2) == compose(
                    replace_digit(expand(a, 2, 3), x, u), 2
                )
    for a in range(4):
        for x in range(3):
            for u in range(2):
                assert insert_digit_index(a, x, u, 2) == compose(
                    insert_digit(expand(a, 2, 2), x, u), 2
                )


def test_replace_after_insert():
    # replacing the inserted digit is the same as inserting the new value
    for a in range(4):
        da = expand(a, 2, 2)
        for x in range(3):
            for u in range(2):
                for v in range(2):
                    assert replace_digit(insert_digit(da, x, v), x, u) == insert_digit(
                        da, x, u
                    )


def test_selector_rows_example():
    v10 = selector_matrix(F, 1, 0, 2, 3)
    want = np.zeros((4, 8), dtype=np.uint16)
    for row, col in enumerate([0, 1, 4, 5]):
        want[row, col] = 1
    assert np.array_equal(v10.a, want)

    v01 = selector_matrix(F, 0, 1, 2, 3)
    want = np.zeros((4, 8), dtype=np.uint16)
    for row, col in enumerate([1, 3, 5, 7]):
        want[row, col] = 1
    assert np.array_equal(v01.a, want)


def test_selector_one_nonzero_per_row():
    for s, w in ((2, 3), (3, 3)):
        for x in range(w):
            for u in range(s):
                m = selector_matrix(F, x, u, s, w)
                assert (m.a.sum(axis=1) == 1).all()
                assert m.rank() == s ** (w - 1)


def test_selector_matches_digit_sets():
    # rows are exactly the basis vectors whose axis digit matches, ascending
    for x in range(3):
        for u in range(3):
            m = selector_matrix(F, x, u, 3, 3)
            cols = [c for c in range(27) if expand(c, 3, 3)[3 - 1 - x] == u]
            for row, col in enumerate(cols):
                assert m.a[row, col] == 1


def test_selector_range_errors():
    with pytest.raises(ValueError):
        selector_matrix(F, 3, 0, 2, 3)
    with pytest.raises(ValueError):
        selector_matrix(F, 0, 2, 2, 3)


def test_part_selector_example():
    d0 = part_selector(F, 0, 2, 2)
    assert np.array_equal(d0.a, np.hstack([np.eye(2, dtype=np.uint16), np.zeros((2, 2), np.uint16)]))


def test_part_extractor_alpha_one():
    for u in range(3):
        assert part_extractor(F, 1, u, 2, 3) == part_selector(F, u, 2, 3)


def test_part_selector_resolution():
    # sum over parts of D^T D is the identity
    total = MatrixGF.zeros(F, 6, 6)
    for u in range(3):
        d = part_selector(F, u, 2, 3)
        total = total + d.T @ d
    assert total == MatrixGF.identity(F, 6)


def test_extract_part_matches_matrix():
    rng = np.random.RandomState(0)
    vec = rng.randint(0, 4, 24).astype(np.uint16)
    for u in range(2):
        phi = part_extractor(F, 2, u, 6, 2)
        assert np.array_equal(phi.matvec(vec), extract_part(vec, 2, u, 12, 2))
    parts = [extract_part(vec, 2, u, 12, 2) for u in range(2)]
    assert np.array_equal(merge_parts(parts, 2, 12), vec)


def test_axis_part_roundtrip():
    rng = np.random.RandomState(1)
    vec = rng.randint(0, 4, 3 * 8).astype(np.uint16)  # alpha=3 slices of 2^3
    for axis in range(3):
        for u in range(2):
            phi = axis_part_extractor(F, 3, axis, u, 2, 3)
            assert np.array_equal(
                phi.matvec(vec), extract_axis_part(vec, 3, 8, 2, axis, u)
            )
        parts = [extract_axis_part(vec, 3, 8, 2, axis, u) for u in range(2)]
        assert np.array_equal(merge_axis_parts(parts, 3, 8, 2, axis), vec)
