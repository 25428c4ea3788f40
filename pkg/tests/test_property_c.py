import itertools

import pytest

from permpos.permutations import Permutation, compose, minimal_invariant_subsets, power
from permpos.property_c import (
    PermPair,
    check_prop35_condition1,
    check_prop35_condition2,
    has_property_c,
    has_property_c_bruteforce,
)

from conftest import FIVE_POINT_PAIR, random_perm


def enumerate_choices(pi1, pi2):
    """Definition checked by trying every choice vector (2^(n-1) per i)."""
    n = pi1.n
    for i in range(1, n + 1):
        others = [j for j in range(1, n + 1) if j != i]
        if not any(
            {(pi1 if h == 0 else pi2)(j) for j, h in zip(others, hs)} == set(others)
            for hs in itertools.product((0, 1), repeat=n - 1)
        ):
            return False
    return True


def hall_holds(pi1, pi2, i):
    """Every set of left vertices sees at least as many targets."""
    n = pi1.n
    left = [j for j in range(1, n + 1) if j != i]
    for size in range(1, len(left) + 1):
        for sub in itertools.combinations(left, size):
            targets = {t for j in sub for t in (pi1(j), pi2(j)) if t != i}
            if len(targets) < size:
                return False
    return True


def shift_pair(n, p, q):
    s = Permutation.shift(n)
    return PermPair(power(s, p), power(s, q))


def test_shift_and_fourth_power_at_four_is_trivial():
    # pi^4 is the identity on 4 points, so choosing it everywhere works
    pair = shift_pair(4, 1, 4)
    assert pair.pi2.is_identity()
    assert enumerate_choices(pair.pi1, pair.pi2)
    assert has_property_c(pair).holds


def test_consecutive_shift_powers_hold():
    for n in range(3, 10):
        for p in range(1, n):
            assert has_property_c_bruteforce(shift_pair(n, p, p + 1)).holds


@pytest.mark.parametrize("n,expected", [(5, True), (6, False), (7, True)])
def test_shift_and_fourth_power(n, expected):
    pair = shift_pair(n, 1, 4)
    assert has_property_c_bruteforce(pair).holds is expected
    assert has_property_c(pair).holds is expected


def test_five_point_pair_holds():
    pair = PermPair(*FIVE_POINT_PAIR)
    assert has_property_c_bruteforce(pair).holds
    assert has_property_c(pair).holds


def test_matching_agrees_with_enumeration(rng):
    for n in range(1, 8):
        for _ in range(40):
            pi1, pi2 = random_perm(rng, n), random_perm(rng, n)
            got = has_property_c_bruteforce(PermPair(pi1, pi2)).holds
            assert got == enumerate_choices(pi1, pi2), (pi1, pi2)


def test_failure_reports_smallest_index_and_hall_set(rng):
    checked = 0
    for n in range(2, 7):
        for _ in range(60):
            pi1, pi2 = random_perm(rng, n), random_perm(rng, n)
            r = has_property_c_bruteforce(PermPair(pi1, pi2)).first_failure
            if r is None:
                continue
            checked += 1
            i = r.failing_index
            assert all(hall_holds(pi1, pi2, k) for k in range(1, i))
            assert not hall_holds(pi1, pi2, i)
            assert i not in r.hall.left and i not in r.hall.targets
            for j in r.hall.left:
                assert {pi1(j), pi2(j)} - {i} <= r.hall.targets
            assert len(r.hall.targets) < len(r.hall.left)
    assert checked > 50


def test_property_implies_hall_everywhere(rng):
    for n in range(2, 7):
        for _ in range(30):
            pi1, pi2 = random_perm(rng, n), random_perm(rng, n)
            if has_property_c_bruteforce(PermPair(pi1, pi2)).holds:
                assert all(hall_holds(pi1, pi2, i) for i in range(1, n + 1))


def test_condition1_examples():
    s4, s3 = Permutation.shift(4), Permutation.shift(3)
    assert not check_prop35_condition1(PermPair(s4, power(s4, 3))).holds
    assert check_prop35_condition1(PermPair(s3, power(s3, 2))).holds
    assert not check_prop35_condition1(PermPair(Permutation.identity(2), Permutation((2, 1)))).holds


def test_condition2_examples():
    s3 = Permutation.shift(3)
    assert check_prop35_condition2(PermPair(s3, power(s3, 2))).holds
    # n = 6, {pi, pi^4}: condition (1) already fails since 2(q - p) = n
    pair = shift_pair(6, 1, 4)
    assert not check_prop35_condition1(pair).holds
    assert not has_property_c(pair).holds


def test_condition2_violation_has_valid_chain():
    pair = PermPair(Permutation((3, 5, 1, 4, 6, 2, 7)), Permutation((2, 3, 6, 7, 4, 5, 1)))
    assert len(pair.orbits) == 1
    assert check_prop35_condition1(pair).holds
    res = check_prop35_condition2(pair)
    assert not res.holds
    assert not has_property_c_bruteforce(pair).holds
    w = res.witness
    pi1, pi2 = pair.pi1, pair.pi2
    assert pi1(w["j2"]) == pi2(w["j1"]) == w["i"]
    chain = w["chain"]
    assert pi2(chain[0]) == pi1(w["j1"])
    for a, b in zip(chain, chain[1:]):
        assert pi2(b) == pi1(a)
    assert pi1(chain[-1]) == pi2(w["j2"])
    assert len(set(chain)) == len(chain)
    assert not set(chain) & {w["i"], w["j1"], w["j2"]}


def _single_orbit_pairs(n):
    perms = [Permutation(p) for p in itertools.permutations(range(1, n + 1))]
    for a in perms:
        for b in perms:
            if len(minimal_invariant_subsets(a, b)) == 1:
                yield PermPair(a, b)


def _conditions(pair):
    return check_prop35_condition1(pair).holds and check_prop35_condition2(pair).holds


@pytest.mark.parametrize("n", [3, 4, 5])
def test_conditions_match_bruteforce_exhaustive(n):
    for pair in _single_orbit_pairs(n):
        assert _conditions(pair) == has_property_c_bruteforce(pair).holds, pair


def test_two_point_orbit_is_the_documented_exception():
    # the conditions reject (id, swap) although the pair has property (C)
    pair = PermPair(Permutation.identity(2), Permutation((2, 1)))
    assert has_property_c_bruteforce(pair).holds
    assert has_property_c(pair).holds
    assert not _conditions(pair)


def test_conditions_match_bruteforce_random(rng):
    done = 0
    while done < 200:
        n = int(rng.integers(3, 9))
        pair = PermPair(random_perm(rng, n), random_perm(rng, n))
        if len(pair.orbits) != 1:
            continue
        done += 1
        assert _conditions(pair) == has_property_c_bruteforce(pair).holds, pair


def test_identity_pair_holds():
    for n in range(1, 7):
        ident = Permutation.identity(n)
        assert has_property_c(PermPair(ident, ident)).holds


def test_orbit_split_into_swap_and_fixed_point():
    report = has_property_c(PermPair(Permutation.identity(3), Permutation((2, 1, 3))))
    assert report.holds
    assert [r.method for r in report.per_orbit] == ["two-point", "singleton"]


def test_both_swaps_on_two_points_fail():
    report = has_property_c(PermPair(Permutation((2, 1, 3)), Permutation((2, 1, 3))))
    assert not report.holds


def test_shift8_first_and_seventh_power_fail():
    report = has_property_c(shift_pair(8, 1, 7))
    assert not report.holds


def test_failing_index_in_original_labels():
    # a 4-cycle and its inverse on {2, 3, 5, 6}; 1 and 4 are fixed
    pi1 = Permutation((1, 3, 5, 4, 6, 2))  # 2->3->5->6->2
    pi2 = pi1.inverse()
    report = has_property_c(PermPair(pi1, pi2))
    assert not report.holds
    bad = report.first_failure
    assert set(bad.orbit) == {2, 3, 5, 6}
    assert bad.failing_index in bad.orbit
    assert bad.hall.left <= set(bad.orbit)


def test_orbitwise_equals_whole_pair(rng):
    for _ in range(300):
        n = int(rng.integers(1, 9))
        pair = PermPair(random_perm(rng, n), random_perm(rng, n))
        whole = has_property_c_bruteforce(pair).holds
        report = has_property_c(pair)
        assert report.holds == all(r.holds for r in report.per_orbit)
        assert report.holds == whole


def test_conjugation_invariance(rng):
    for _ in range(200):
        n = int(rng.integers(2, 9))
        pi1, pi2, c = (random_perm(rng, n) for _ in range(3))
        conj = lambda p: compose(compose(c, p), c.inverse())
        a = has_property_c(PermPair(pi1, pi2)).holds
        b = has_property_c(PermPair(conj(pi1), conj(pi2))).holds
        assert a == b


def test_scales_to_large_n():
    n = 400
    pair = shift_pair(n, 3, 4)
    assert has_property_c_bruteforce(pair).holds
