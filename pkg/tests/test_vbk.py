import numpy as np
import pytest

from mdsarray.gf import build_field
from mdsarray.indexing import expand, selector_matrix
from mdsarray.vbk import (
    ConstructionError,
    ParameterError,
    VbkParams,
    _lambda_table,
    base_key_matrix,
    build_vbk,
    choose_constants,
    field_size_bound,
    goal_partition,
    parity_block,
    repair_selector,
    theta_matrix,
)


def test_params_validation():
    with pytest.raises(ParameterError):
        VbkParams(4, 2, 2)  # r = delta0 rejected
    with pytest.raises(ParameterError):
        VbkParams(6, 3, 5)
    p = VbkParams(6, 3, 2)
    assert (p.tau, p.N, p.r) == (3, 8, 3)


def test_field_bound():
    assert field_size_bound(16, 2) == 50
    assert field_size_bound(6, 2) == 20
    assert field_size_bound(8, 3) == 56
    with pytest.raises(ParameterError):
        build_vbk(6, 3, 2, q=16)


def test_constants_deterministic():
    params = VbkParams(6, 3, 2)
    f = build_field(32)
    a = choose_constants(params, f, 1, seed=5)
    b = choose_constants(params, f, 1, seed=5)
    assert a == b
    c = choose_constants(params, f, 1, seed=6)
    assert a != c


def test_constants_distinctness():
    params = VbkParams(16, 10, 2)
    f = build_field(64)
    consts = choose_constants(params, f, 4, seed=0)
    assert consts.epsilon not in (0, 1)
    seen = []
    for x in range(params.tau):
        th = theta_matrix(f, consts, 2, x)
        seen.extend(int(v) for v in th.a.ravel())
    # theta_0x appears twice per axis matrix (both diagonal slots)
    assert len(set(seen)) == 3 * params.tau
    lam = set(int(v) for v in _lambda_table(f, consts, params).ravel())
    assert not (set(consts.zeta) & lam)
    assert len(set(consts.zeta)) == 4


def test_constants_field_too_small():
    params = VbkParams(16, 10, 2)
    f = build_field(64)
    with pytest.raises(ConstructionError):
        # 60 zeta values cannot fit next to 24 lambda values in GF(64)
        choose_constants(params, f, 60, seed=0)


def test_parity_block_t0_diagonal(base63):
    for i in range(6):
        b = base63.blocks[(0, i)]
        assert (np.diag(b.a) == 1).all()


def test_parity_block_row_support(base63):
    params = VbkParams(6, 3, 2)
    for i in range(6):
        x, y = divmod(i, 2)
        for t in range(3):
            b = base63.blocks[(t, i)].a
            for a in range(8):
                ax = expand(a, 2, 3)[2 - x]
                nonzeros = int((b[a] != 0).sum())
                assert nonzeros == (2 if ax == y else 1)


def test_parity_block_index_errors(base63):
    params = VbkParams(6, 3, 2)
    f = base63.field
    lam = _lambda_table(f, base63.constants, params)
    with pytest.raises(ParameterError):
        parity_block(f, params, lam, base63.constants.epsilon, 3, 0)
    with pytest.raises(ParameterError):
        parity_block(f, params, lam, base63.constants.epsilon, 0, 6)


def test_select_product_closed_form(base63):
    # S A_{t,i} = lam^t V_{x,y} + sum_{u != y} eps_{u,y} lam^t V_{x,u}
    params = VbkParams(6, 3, 2)
    f = base63.field
    lam = _lambda_table(f, base63.constants, params)
    eps = base63.constants.epsilon
    for i in range(6):
        x, y = divmod(i, 2)
        s = base63.select[(i, 2)]
        for t in range(3):
            got = s @ base63.blocks[(t, i)]
            want = selector_matrix(f, x, y, 2, 3).scale(f.pow(int(lam[i, y]), t))
            for u in range(2):
                if u == y:
                    continue
                coef = f.mul(eps if u < y else 1, f.pow(int(lam[i, u]), t))
                want = want + selector_matrix(f, x, u, 2, 3).scale(coef)
            assert got == want


def test_repair_selector_examples():
    params = VbkParams(16, 10, 2)
    f = build_field(64)
    assert repair_selector(f, params, 0) == selector_matrix(f, 0, 0, 2, 8)
    assert repair_selector(f, params, 3) == selector_matrix(f, 1, 1, 2, 8)
    r = repair_selector(f, params, 5)
    assert r.rank() == params.N // 2


def test_key_matrix_examples():
    params = VbkParams(16, 10, 2)
    f = build_field(64)
    consts = choose_constants(params, f, 1, seed=0)
    k0 = base_key_matrix(f, consts, params, 0, 4, 0)
    assert k0 == repair_selector(f, params, 4).T  # zeta^0 = 1
    for t in range(3):
        want = repair_selector(f, params, 0).T.scale(f.pow(consts.zeta[0], t))
        assert base_key_matrix(f, consts, params, t, 0, 0) == want
    with pytest.raises(ParameterError):
        base_key_matrix(f, consts, params, 0, 0, 1)


def test_key_vanishes_under_sibling_select(base63):
    # same goal set, different node: select kills the key matrix
    for goal in base63.goal_sets:
        for i in goal:
            for j in goal:
                if i == j:
                    continue
                for t in range(3):
                    prod = base63.select[(j, 2)] @ base63.keys[(t, i, 0)]
                    assert prod.is_zero()


def test_goal_partition():
    assert goal_partition(16, 2) == tuple(
        (2 * s, 2 * s + 1) for s in range(8)
    )
    assert goal_partition(5, 2) == ((0, 1), (2, 3), (4,))
    flat = [i for s in goal_partition(9, 4) for i in s]
    assert flat == list(range(9))


def test_build_deterministic(base63):
    again = build_vbk(6, 3, 2, degrees=(2, 3), seed=0)
    assert all(
        base63.blocks[key] == again.blocks[key] for key in base63.blocks
    )
    assert again.constants == base63.constants


def test_mds_validation_runs(base63):
    from mdsarray.verify import check_mds

    assert check_mds(base63, mode="exhaustive").passed


def test_degrees_validation():
    with pytest.raises(ParameterError):
        build_vbk(6, 3, 2, degrees=(2, 5))  # 5 > r
    with pytest.raises(ParameterError):
        build_vbk(6, 3, 2, degrees=(3,))  # must start at delta0
