import itertools
import time

import pytest

from easyq import _kernels as K
from easyq import partitions as P
from easyq.category import (
    category_equal,
    closedness_violation,
    closure,
    compose,
    involute,
    members,
    product_enumerate,
    rotate,
    rotate_back,
    tensor,
)
from easyq.errors import KindMismatch, NothingToRotate, ShapeMismatch, SizeLimitExceeded
from easyq.partitions import Partition, cap, cup, identity


def test_compose_cup_after_cap_is_a_loop():
    r = compose(cup(), cap())
    assert not r.zero
    assert r.loops == 1
    assert r.partition == Partition(0, 0, ())


def test_compose_colour_mismatch_is_zero():
    assert compose(cup("bb"), cap("bw")).zero
    ok = compose(cup("bw"), cap("bw"))
    assert not ok.zero and ok.loops == 1


def test_compose_with_identity_is_neutral():
    for p in P.enumerate_partitions("nc-bullet", 2, 2):
        assert compose(p, identity(2, True)).partition == p
        assert compose(identity(2, True), p).partition == p


def test_compose_shape_and_kind_errors():
    with pytest.raises(ShapeMismatch):
        compose(cap(), cap())
    with pytest.raises(KindMismatch):
        compose(cup("bw"), cap())


def test_tensor_examples():
    assert tensor(identity(1), identity(1)) == Partition(2, 2, ((1, 3), (2, 4)))
    assert tensor(cap(), cap()) == Partition(0, 4, ((1, 2), (3, 4)))
    with pytest.raises(KindMismatch):
        tensor(cap(), cap("bw"))


def test_involute_examples():
    assert involute(cap()) == cup()
    fork = Partition(1, 2, ((1, 2, 3),), "bbw")
    assert involute(fork) == Partition(2, 1, ((1, 2, 3),), "bwb")


def test_rotate_examples():
    assert rotate(identity(1)) == cap()
    assert rotate(identity(1, True)) == cap("bw")
    assert rotate_back(cap("bw")) == identity(1, True)
    with pytest.raises(NothingToRotate):
        rotate(cap())


def _power(f, p, r):
    for _ in range(r):
        p = f(p)
    return p


@pytest.mark.parametrize("cat", ["p", "nc-bullet", "nc-bullet*nc", "p-bullet"])
def test_rotation_restores(cat):
    for k in range(1, 4):
        for p in P.enumerate_partitions(cat, k, k):
            assert _power(rotate_back, _power(rotate, p, k), k) == p


def _assoc_triples(cat, max_points):
    mem = members(cat, max_points)
    by_k = {}
    for p in mem:
        by_k.setdefault(p.k, []).append(p)
    for c in mem:
        for b in by_k.get(c.l, []):
            for a in by_k.get(b.l, []):
                if c.k + c.l + b.l + a.l <= max_points + 1:
                    yield a, b, c


@pytest.mark.parametrize("cat, bound", [("p", 4), ("nc-bullet", 4), ("p-bullet", 4), ("nc-bullet*nc", 3)])
def test_compose_is_associative(cat, bound):
    n = 0
    for a, b, c in _assoc_triples(cat, bound):
        n += 1
        bc = compose(b, c)
        ab = compose(a, b)
        left = None if ab.zero else compose(ab.partition, c)
        right = None if bc.zero else compose(a, bc.partition)
        lzero = left is None or left.zero
        rzero = right is None or right.zero
        assert lzero == rzero, (a, b, c)
        if not lzero:
            assert left.partition == right.partition
            lt = tuple(x + y for x, y in zip(ab.loops_by_tag, left.loops_by_tag))
            rt = tuple(x + y for x, y in zip(bc.loops_by_tag, right.loops_by_tag))
            assert lt == rt
    assert n > 100


@pytest.mark.parametrize("cat", ["nc", "nc-bullet", "nc-bullet*nc"])
def test_involution_reverses_composition(cat):
    for m in range(3):
        for b in P.enumerate_partitions(cat, 1, m):
            for a in P.enumerate_partitions(cat, m, 2):
                ab = compose(a, b)
                ba = compose(involute(b), involute(a))
                assert ab.zero == ba.zero
                if not ab.zero:
                    assert involute(ab.partition) == ba.partition
                    assert ab.loops_by_tag == ba.loops_by_tag


@pytest.mark.parametrize(
    "cat, bound",
    [
        ("p", 5),
        ("nc", 6),
        ("nc2", 6),
        ("nc12", 6),
        ("nc-even", 6),
        ("p-even", 5),
        ("nc-bullet", 5),
        ("nc-bullet-even", 6),
        ("p-bullet", 4),
        ("nc-bullet*nc", 4),
        ("nc-bullet-even*nc-even", 4),
    ],
)
def test_categories_are_closed(cat, bound):
    assert closedness_violation(cat, bound) is None


def test_closure_of_the_pair_is_nc2():
    assert closure([cap()], 4) == members("nc2", 4)
    assert closure([cap()], 6) == members("nc2", 6)


def test_closure_of_bulleted_even_generators():
    got = closure([cap("bw"), Partition(1, 3, ((1, 2, 3, 4),), "bwbw")], 6)
    assert got == members("nc-bullet-even", 6)


def test_closure_of_bulleted_generators():
    got = closure([cap("bw"), Partition(1, 2, ((1, 2, 3),), "bbw")], 5)
    assert got == members("nc-bullet", 5)


def test_closure_is_order_independent():
    gens = [cap(), Partition(0, 1, ((1,),)), Partition(0, 4, ((1, 2, 3, 4),))]
    base = closure(gens, 5)
    for perm in itertools.permutations(gens):
        assert closure(list(perm), 5) == base
    assert base == members("nc", 5)


def test_closure_guard():
    with pytest.raises(SizeLimitExceeded):
        closure([cap()], 9)


def test_category_equal_examples():
    assert category_equal("nc2", "nc12&nc-even", 8).equal
    r = category_equal("nc", "nc-even", 3)
    assert not r.equal and r.counterexample == Partition(0, 1, ((1,),)) and r.side == "left"
    r = category_equal("p", "nc", 4)
    assert not r.equal and r.counterexample == Partition(0, 4, ((1, 3), (2, 4)))


def test_orthogonal_is_generated_by_bistochastic_and_hyperoctahedral():
    # the category of the intersection is generated by the two smaller ones
    joint = closure([cap(), Partition(0, 1, ((1,),)), Partition(0, 4, ((1, 2, 3, 4),))], 6)
    assert category_equal(joint, "nc", 6).equal
    assert category_equal(members("nc12", 6) & members("nc-even", 6), "nc2", 6).equal


def test_product_enumerate_small():
    got = product_enumerate("nc-bullet", "nc", 0, 2)
    assert len(got) == 7
    assert all(p.tags is not None for p in got)
    with pytest.raises(SizeLimitExceeded):
        product_enumerate("nc", "nc", 6, 5)


@pytest.mark.parametrize("cat", ["nc", "p", "nc-bullet", "nc-bullet*nc", "nc-even*nc-even", "nc-bullet-even*nc"])
def test_kernel_compose_matches_reference(cat):
    for k, m, l in itertools.product(range(3), repeat=3):
        if k + 2 * m + l > 8:
            continue
        bs = P.enumerate_partitions(cat, k, m)
        as_ = P.enumerate_partitions(cat, m, l)
        if not bs or not as_:
            continue
        colored, tagged = bs[0].colors is not None, bs[0].tags is not None
        L, C, T, ok, l1, l2 = K.compose(K.encode(bs, k, m), K.encode(as_, m, l), k, m, l)
        got = K.decode(k, l, L, C, T, colored, tagged)
        r = 0
        for b in bs:
            for a in as_:
                ref = compose(a, b)
                assert bool(ok[r]) == (not ref.zero)
                if not ref.zero:
                    assert got[r] == ref.partition
                    assert (int(l1[r]), int(l2[r])) == ref.loops_by_tag
                r += 1


def test_closure_nc_bullet_six_points_timing():
    start = time.perf_counter()
    got = closure([cap("bw"), Partition(1, 2, ((1, 2, 3),), "bbw")], 6)
    assert got == members("nc-bullet", 6)
    assert len(got) == 7784
    assert time.perf_counter() - start < 90
