import itertools

import dataclasses

import numpy as np
import pytest

from mdsarray.indexing import axis_part_extractor
from mdsarray.linalg import MatrixGF
from mdsarray.transform import (
    DegreeError,
    DegreeSet,
    appended_block,
    build_part_schedule,
    final_subpacketization,
    lift_code,
    upgrade_all_nodes,
)
from mdsarray.vbk import build_vbk


def test_lvalues():
    assert DegreeSet.make((2, 3)).l == (3, 2, 0)
    assert DegreeSet.make((2, 3, 4, 6)).l == (6, 4, 3, 2, 0)
    assert DegreeSet.make((2, 4)).l == (2, 1, 0)


def test_degree_set_validation():
    with pytest.raises(DegreeError):
        DegreeSet.make((3, 2))
    with pytest.raises(DegreeError):
        DegreeSet.make((1, 2))
    with pytest.raises(DegreeError):
        DegreeSet.make((2, 2, 3))


def test_schedule_two_degrees():
    s = build_part_schedule(DegreeSet.make((2, 3)))
    assert s.sets[1] == ((2, 0), (2, 1))
    assert s.parts[(1, 0)] == ((2, 0),)
    assert s.parts[(1, 1)] == ((2, 1),)


def test_schedule_four_degrees_tables():
    s = build_part_schedule(DegreeSet.make((2, 3, 4, 6)))
    assert s.sets[1] == ((4, 0), (4, 1), (5, 0), (5, 1))
    assert s.sets[2] == ((3, 0), (3, 1), (5, 1))
    assert s.sets[3] == ((2, 0), (2, 1), (5, 0), (5, 1))
    assert s.parts[(1, 0)] == ((4, 0),)
    assert s.parts[(1, 1)] == ((4, 1),)
    assert s.parts[(1, 2)] == ((5, 0),)
    assert s.parts[(1, 3)] == ((5, 1),)
    assert s.parts[(2, 0)] == ((3, 0),)
    assert s.parts[(2, 1)] == ((3, 1),)
    assert s.parts[(2, 2)] == ((5, 1),)
    assert s.parts[(3, 0)] == ((2, 0), (2, 1))
    assert s.parts[(3, 1)] == ((5, 0), (5, 1))


def all_degree_sets(max_r):
    for size in range(2, max_r):
        for combo in itertools.combinations(range(2, max_r + 1), size):
            yield combo


def test_schedule_properties_exhaustive():
    # union, containment and cardinality properties over every degree set
    # drawn from [2:6]
    for degrees in all_degree_sets(6):
        ds = DegreeSet.make(degrees)
        sched = build_part_schedule(ds)
        d = ds.degrees
        l = ds.l
        d0 = d[0]
        for j in range(1, ds.m):
            # P3: cardinalities
            assert len(sched.sets[j]) == (d[j] - d[j - 1]) * l[j]
            for a in range(l[j]):
                assert len(sched.parts[(j, a)]) == d[j] - d[j - 1]
            # P1: the first j bands cover the tail instances exactly, and
            # their parts below l_j partition that window (disjointness is a
            # parts-level fact; the raw sets re-fold earlier entries)
            union = set()
            for jj in range(1, j + 1):
                union |= set(sched.sets[jj])
            want = {(a, u) for a in range(l[j], l[0]) for u in range(d0)}
            assert union == want
            part_union = set()
            part_total = 0
            for jj in range(1, j + 1):
                for a in range(l[j]):
                    part_union |= set(sched.parts[(jj, a)])
                    part_total += len(sched.parts[(jj, a)])
            assert part_union == want
            assert part_total == len(want)
        # P2: band j re-folds only lower-band parts from its own window
        for j in range(2, ds.m):
            for z in range(1, j):
                allowed = {
                    (b, u) for b in range(l[j], l[z]) for u in range(d0)
                }
                for jj in range(1, z + 1):
                    for a in range(l[j], l[z]):
                        allowed |= set(sched.parts[(jj, a)])
                assert set(sched.sets[j]) <= allowed


def test_band_terms_zero_band():
    ds = DegreeSet.make((2, 3))
    sched = build_part_schedule(ds)
    assert sched.band_terms(2) == []
    assert sched.band_terms(0) == [(0, 2, 0)]
    assert sched.band_terms(1) == [(0, 2, 1)]


def test_appended_block_single_key_form():
    # one lift of the (16,10) base with degrees {2,3}: instance a < 2 folds
    # part a of instance 2 through the single key matrix; instance 2 is clean
    base = build_vbk(16, 10, 2, degrees=(2, 3), q=64, seed=0, validate=False)
    ds = DegreeSet.make((2, 3))
    sched = build_part_schedule(ds)
    f = base.field
    L = base.L
    for i in (0, 1):
        phi0 = axis_part_extractor(f, 1, base.part_axis[i], 0, 2, 8)
        phi1 = axis_part_extractor(f, 1, base.part_axis[i], 1, 2, 8)
        for t in (0, 3):
            k = base.keys[(t, i, 0)]
            got0 = appended_block(base, ds, sched, base.keys, t, i, 0)
            want = MatrixGF.zeros(f, L, 3 * L)
            want.a[:, 2 * L :] = (k @ phi0).a
            assert got0 == want
            got1 = appended_block(base, ds, sched, base.keys, t, i, 1)
            want = MatrixGF.zeros(f, L, 3 * L)
            want.a[:, 2 * L :] = (k @ phi1).a
            assert got1 == want
            assert appended_block(base, ds, sched, base.keys, t, i, 2).is_zero()


def test_appended_block_four_degree_form():
    # first instance of the {2,3,4,6} lift folds four key terms, matching
    # the worked parity-check display
    base = build_vbk(16, 10, 2, degrees=(2, 3, 4, 6), q=64, seed=0, validate=False)
    ds = DegreeSet.make((2, 3, 4, 6))
    sched = build_part_schedule(ds)
    f = base.field
    L = base.L
    i, t = 0, 2
    phi = [axis_part_extractor(f, 1, base.part_axis[i], u, 2, 8) for u in range(2)]
    want = MatrixGF.zeros(f, L, 6 * L)
    # zeta_0 on f^(4)[0], zeta_1 on f^(3)[0], zeta_2 on f^(2)[0], zeta_3 on f^(2)[1]
    for v, b, u in ((0, 4, 0), (1, 3, 0), (2, 2, 0), (3, 2, 1)):
        want.a[:, b * L : (b + 1) * L] ^= (base.keys[(t, i, v)] @ phi[u]).a
    got = appended_block(base, ds, sched, base.keys, t, i, 0)
    assert got == want


def test_lift_plain_space_sharing(base63):
    ds = DegreeSet.make((2, 3))
    shared = lift_code(base63, ds, goal=())
    assert shared.L == 3 * base63.L
    for t in range(3):
        for i in range(6):
            blk = shared.blocks[(t, i)]
            for a in range(3):
                s = slice(a * 8, (a + 1) * 8)
                assert np.array_equal(blk.a[s, s], base63.blocks[(t, i)].a)
    from mdsarray.verify import check_mds

    assert check_mds(shared, mode="exhaustive").passed


def test_lift_goal_errors(base63):
    ds = DegreeSet.make((2, 3))
    with pytest.raises(DegreeError):
        lift_code(base63, ds, goal=(0, 2))  # spans two goal sets
    with pytest.raises(DegreeError):
        lift_code(base63, DegreeSet.make((2, 5)), goal=(0, 1))  # 5 > r
    with pytest.raises(DegreeError):
        lift_code(base63, DegreeSet.make((3, 3)), goal=(0, 1))


def test_lift_replaced_default(base63):
    ds = DegreeSet.make((2, 3))
    lifted = lift_code(base63, ds, goal=(0, 1))
    assert lifted.lift.replaced == (3, 4, 5)


def test_subpacketization_growth(base63, code63):
    assert code63.L == 216
    assert code63.L == 3 ** 3 * base63.L  # l_0^mu * N
    assert final_subpacketization(6, 2, (2, 3)) == 6 ** 3
    assert final_subpacketization(24, 2, (2, 3)) == 6 ** 12


def test_degenerate_no_rounds(base63):
    bare = dataclasses.replace(base63, goal_sets=(), _cache={})
    out = upgrade_all_nodes(bare, DegreeSet.make((2, 3)))
    assert out is bare


def test_goal_round_tracking(code63):
    assert code63.goal_round == {0: 0, 1: 0, 2: 1, 3: 1, 4: 2, 5: 2}
    assert code63.lift.goal_set == (4, 5)
    assert code63.parent.lift.goal_set == (2, 3)


def test_repair_matrix_shapes(code63):
    code63.validate_shapes()
    for i in range(6):
        for theta in (2, 3):
            assert code63.repair[(i, theta)].rank() == code63.L // theta


def test_lifted_keys_blkdiag(base63, code63):
    k0 = base63.keys[(0, 0, 0)]
    lifted = code63.keys[(0, 0, 0)]
    assert lifted.shape == (27 * 8, 27 * 4)
    assert np.array_equal(lifted.a[: 8, : 4], k0.a)
    assert not lifted.a[:8, 4:].any()


def test_partial_goal_set_lift(base63):
    # fewer goal nodes than the goal set holds is allowed; the lone goal
    # node gains every degree and the rest keep base-degree repair
    import numpy as np

    from mdsarray import codec
    from mdsarray.repair import make_plan, repair_node

    ds = DegreeSet.make((2, 3))
    lifted = lift_code(base63, ds, goal=(1,))
    rng = np.random.RandomState(12)
    data = [rng.randint(0, 32, lifted.L).astype(np.uint16) for _ in range(3)]
    word = codec.encode(lifted, data)
    for d in (4, 5):
        plan = make_plan(lifted, 1, tuple(j for j in range(6) if j != 1)[:d])
        frag, _ = repair_node(lifted, plan, word)
        assert np.array_equal(frag, word[1])
    plan = make_plan(lifted, 3, (0, 1, 2, 4))
    frag, _ = repair_node(lifted, plan, word)
    assert np.array_equal(frag, word[3])


def test_conditions_survive_first_round(base63):
    # after lifting the first goal set, the later sets still satisfy the
    # key-matrix conditions with block-diagonal keys
    from mdsarray.verify import check_c1, check_c2, check_c3

    ds = DegreeSet.make((2, 3))
    lifted = lift_code(base63, ds, goal=(0, 1))
    for goal in ((2, 3), (4, 5)):
        assert check_c1(lifted, goal).passed
        assert check_c2(lifted, goal, ds).passed
        assert check_c3(lifted, goal, ds, zs=(0,)).passed
