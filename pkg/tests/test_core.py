import random
from itertools import combinations

import pytest

from tradelab import (
    CandidatePair,
    ParameterError,
    Side,
    Trade,
    ValidationError,
    are_isomorphic,
    canonical_form,
    is_simple,
    is_steiner,
    minimal_trade,
    pair_index,
    replication,
    t_profile,
    trade_from_blocks,
    trade_sum,
    validate,
)

MIN2_T1 = [(0, 2, 4), (0, 3, 5), (1, 2, 5), (1, 3, 4)]
MIN2_T2 = [(0, 2, 5), (0, 3, 4), (1, 2, 4), (1, 3, 5)]


@pytest.fixture
def min2():
    return trade_from_blocks(2, MIN2_T1, MIN2_T2)


@pytest.fixture
def doubled(min2):
    return trade_sum(min2, min2)


def random_relabel(tr, rng, pool=40):
    images = rng.sample(range(pool), len(tr.foundation))
    return tr.relabel(dict(zip(tr.foundation, images)))


def test_t_profile_expands_pairs():
    side = Side.from_blocks([(0, 1, 3), (0, 2, 4)])
    assert t_profile(side, 2) == {(0, 1): 1, (0, 2): 1, (0, 3): 1, (0, 4): 1, (1, 3): 1, (2, 4): 1}


def test_t_profile_counts_multiplicity():
    side = Side.from_blocks([(0, 1, 2), (0, 1, 2)])
    assert t_profile(side, 1) == {(0,): 2, (1,): 2, (2,): 2}


def test_t_profile_of_minimal_side():
    # every pair from the four blocks, counted by hand
    pairs = [p for b in MIN2_T1 for p in combinations(b, 2)]
    assert len(pairs) == len(set(pairs)) == 12
    profile = t_profile(Side.from_blocks(MIN2_T1), 2)
    assert profile == {p: 1 for p in sorted(pairs)}
    assert list(profile) == sorted(profile)


def test_t_profile_rejects_large_t():
    with pytest.raises(ParameterError):
        t_profile(Side.from_blocks([(0, 1)]), 3)


def test_validate_minimal_one_trade():
    tr = trade_from_blocks(1, [(0, 2), (1, 3)], [(0, 3), (1, 2)])
    assert tr.volume == 2
    assert tr.foundation == (0, 1, 2, 3)


def test_validate_minimal_two_trade(min2):
    assert min2.volume == 4
    assert len(min2.foundation) == 6


def test_validate_reports_imbalance():
    with pytest.raises(ValidationError) as err:
        trade_from_blocks(2, [(0, 1, 2)], [(0, 1, 3)])
    assert ((1, 2), (1, 0)) in err.value.imbalances
    # the reported subset is the lexicographically first one
    assert err.value.subset == (0, 2)
    assert err.value.counts == (1, 0)


def test_validate_rejects_size_mismatch():
    with pytest.raises(ValidationError, match="sizes"):
        trade_from_blocks(1, [(0, 1), (2, 3)], [(0, 2)])


def test_validate_rejects_shared_block():
    with pytest.raises(ValidationError, match="both sides"):
        trade_from_blocks(1, [(0, 1), (2, 3)], [(0, 1), (2, 3)])


def test_validate_rejects_empty_pair():
    with pytest.raises(ValidationError, match="degenerate"):
        validate(CandidatePair(1, Side.from_blocks([], k=2), Side.from_blocks([], k=2)))


def test_trade_only_from_validate():
    with pytest.raises(TypeError):
        Trade(1, 2, None, None, 0, ())


def test_candidate_pair_checks_parameters():
    with pytest.raises(ParameterError):
        CandidatePair(2, Side.from_blocks([(0, 1)]), Side.from_blocks([(2, 3)]))
    with pytest.raises(ParameterError):
        CandidatePair(1, Side.from_blocks([(0, 1)]), Side.from_blocks([(0, 1, 2)]))
    with pytest.raises(ParameterError):
        Side.from_blocks([(0, 1), (0, 1, 2)])
    with pytest.raises(ParameterError):
        Side.from_blocks([(0, 0)])


def test_steiner_and_simple(min2, doubled):
    assert is_steiner(min2) and is_simple(min2)
    assert not is_steiner(doubled) and not is_simple(doubled)


def test_repeated_block_is_not_steiner():
    tr = trade_from_blocks(1, [(0, 1), (0, 1), (2, 3), (2, 3)], [(0, 2), (0, 3), (1, 2), (1, 3)])
    assert not is_steiner(tr)
    assert not is_simple(tr)


def test_replication(min2):
    assert replication(min2, 0) == 2
    assert replication(min2, 9) == 0
    for x in min2.foundation:
        assert replication(min2, x) == sum(x in b for b in min2.t2)


def test_replication_of_fixed_element():
    for t in (1, 2, 3):
        tr = minimal_trade(t, t + 2)
        fixed = tr.foundation[-1]
        assert replication(tr, fixed) == 2**t == tr.volume


def test_pair_index(min2):
    assert pair_index(min2, 0, 2) == 1
    assert pair_index(min2, 0, 1) == 0
    assert pair_index(min2, 0, 17) == 0


def test_pair_index_parameter_errors(min2):
    with pytest.raises(ParameterError):
        pair_index(min2, 0, 0)
    with pytest.raises(ParameterError):
        pair_index(minimal_trade(1, 2), 0, 1)


def test_canonical_form_idempotent():
    tr = trade_from_blocks(1, [(0, 2), (1, 3)], [(0, 3), (1, 2)])
    canon = canonical_form(tr)
    assert canon.foundation == (0, 1, 2, 3)
    assert canonical_form(canon) == canon


def test_canonical_form_relabel_invariant():
    a = trade_from_blocks(1, [(0, 2), (1, 3)], [(0, 3), (1, 2)])
    b = trade_from_blocks(1, [(10, 30), (20, 40)], [(10, 40), (20, 30)])
    assert canonical_form(a) == canonical_form(b)


def test_canonical_form_side_swap(min2):
    assert canonical_form(min2.swapped()) == canonical_form(min2)


def test_canonical_form_is_least_serialization():
    # brute force over all relabelings of a small asymmetric trade
    from itertools import permutations

    rng = random.Random(3)
    tr = trade_sum(minimal_trade(1, 2, [0, 1, 2, 3]), minimal_trade(1, 2, [0, 4, 2, 5]))
    keys = []
    for perm in permutations(range(len(tr.foundation))):
        mapping = dict(zip(tr.foundation, perm))
        for base in (tr, tr.swapped()):
            r = base.relabel(mapping)
            keys.append((list(r.t1), list(r.t2)))
    canon = canonical_form(random_relabel(tr, rng))
    assert (list(canon.t1), list(canon.t2)) == min(keys)


@pytest.mark.parametrize("seed", range(20))
def test_isomorphic_under_random_relabeling(seed):
    rng = random.Random(seed)
    t = rng.randint(1, 3)
    tr = minimal_trade(t, t + rng.randint(1, 2))
    other = trade_sum(tr, minimal_trade(t, tr.k, rng.sample(range(3, 14), tr.k + t + 1)))
    for x in (tr, other):
        if x is None:
            continue
        y = random_relabel(x, rng)
        assert are_isomorphic(x, y)
        assert canonical_form(y) == canonical_form(x)


def test_non_isomorphic(min2, doubled):
    assert not are_isomorphic(min2, minimal_trade(1, 2))
    assert not are_isomorphic(min2, doubled)


def test_label_checks():
    with pytest.raises(ParameterError):
        Side.from_blocks([(-1, 2)])
    with pytest.raises(ParameterError):
        Side.from_blocks([(0, 2**32)])
