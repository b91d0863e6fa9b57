import math
from fractions import Fraction as F
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotsym.angular import HalfInt
from rotsym.bipartite import Family, FidelityVector, NotPositive, SpinPair, ppt_transform
from rotsym.multipartite import (
    BinaryMask,
    MultiFidelity,
    Verdict,
    all_masks,
    analyze,
    apply_partial_transpose_family,
    classify,
    dense_sigma_x,
    extremal_separable_fidelities,
    multi_density,
    multi_fidelities_float,
    partial_transpose_mask,
    reduce,
    sigma_ppt_transform,
    sigma_report,
    theorem_applies,
)
from rotsym.multipartite import core

QUBITS = SpinPair.of("1/2", "1/2")


def frac(*xs):
    return tuple(F(x) for x in xs)


@st.composite
def spin_pairs(draw, max_two_ja=2, max_two_jb=4):
    ta = draw(st.integers(1, max_two_ja))
    tb = draw(st.integers(ta, max_two_jb))
    return SpinPair(HalfInt(ta), HalfInt(tb))


@st.composite
def multi_states(draw, max_k=3, max_two_ja=2, max_two_jb=4, max_weight=30):
    k = draw(st.integers(1, max_k))
    pairs = tuple(draw(spin_pairs(max_two_ja, max_two_jb)) for _ in range(k))
    size = math.prod(p.d_a for p in pairs)
    weights = draw(st.lists(st.integers(0, max_weight), min_size=size, max_size=size))
    if not any(weights):
        weights[draw(st.integers(0, size - 1))] = 1
    total = sum(weights)
    family = BinaryMask(tuple(draw(st.lists(st.integers(0, 1), min_size=k, max_size=k))))
    return MultiFidelity(pairs, family, tuple(F(w, total) for w in weights))


def masks_for(k):
    return st.lists(st.integers(0, 1), min_size=k, max_size=k).map(lambda b: BinaryMask(tuple(b)))


# --- masks ---

def test_mask_round_trip_and_xor():
    m = BinaryMask.parse("101")
    assert str(m) == "101"
    assert (m ^ BinaryMask.parse("011")) == BinaryMask.parse("110")
    assert m.drop(2) == BinaryMask.parse("11")
    with pytest.raises(ValueError):
        BinaryMask.parse("12")
    with pytest.raises(ValueError):
        m ^ BinaryMask.parse("1")


def test_mask_enumeration_order_flips_first_slot_fastest():
    assert [str(m) for m in all_masks(2)] == ["00", "10", "01", "11"]
    for k in range(1, 6):
        for index, m in enumerate(all_masks(k)):
            assert m.index == index
            assert BinaryMask.from_index(index, k) == m


# --- multi fidelities ---

def test_multi_fidelity_validation():
    with pytest.raises(ValueError):
        MultiFidelity((QUBITS,), "0", frac("1/2", "1/3"))
    with pytest.raises(ValueError):
        MultiFidelity((QUBITS, QUBITS), "0", frac(1, 0, 0, 0))
    with pytest.raises(ValueError):
        MultiFidelity((QUBITS,), "0", frac(1, 0, 0))
    with pytest.raises(TypeError):
        MultiFidelity((QUBITS,), "0", (0.5, 0.5))
    s = MultiFidelity.delta((QUBITS, SpinPair.of("1/2", 1)), (0, "3/2"))
    assert s[(0, "3/2")] == 1
    assert s.values == frac(0, 1, 0, 0)


def test_product_state_layout_is_row_major():
    f1 = FidelityVector(QUBITS, Family.WERNER, frac("1/3", "2/3"))
    f2 = FidelityVector(QUBITS, Family.ISOTROPIC, frac("1/4", "3/4"))
    s = MultiFidelity.product([f1, f2])
    assert s.family == BinaryMask.parse("01")
    assert s.values == frac("1/12", "1/4", "1/6", "1/2")


# --- sigma transform ---

def test_sigma_transform_examples():
    top = MultiFidelity.delta((QUBITS, QUBITS), (1, 1))
    assert sigma_ppt_transform(top, "11") == frac("1/4", "1/4", "1/4", "1/4")
    assert sigma_ppt_transform(top, "00") == top.values
    singlets = MultiFidelity.delta((QUBITS, QUBITS), (0, 0))
    assert sigma_ppt_transform(singlets, "10") == frac("-1/2", 0, "3/2", 0)
    with pytest.raises(ValueError):
        sigma_ppt_transform(singlets, "1")


def test_one_pair_transform_matches_bipartite():
    f = FidelityVector(SpinPair.of(1, 2), Family.WERNER, frac("1/5", "1/2", "3/10"))
    s = MultiFidelity((f.pair,), "0", f.values)
    assert sigma_ppt_transform(s, "1") == ppt_transform(f)


def test_apply_partial_transpose_family_examples():
    s = MultiFidelity((QUBITS,), "0", frac(0, 1))
    out = apply_partial_transpose_family(s, "1")
    assert out.family == BinaryMask.parse("1")
    assert out.values == frac("1/2", "1/2")
    assert apply_partial_transpose_family(s, "0") == s
    with pytest.raises(NotPositive) as err:
        apply_partial_transpose_family(MultiFidelity((QUBITS,), "0", frac(1, 0)), "1")
    assert err.value.values == frac("-1/2", "3/2")


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_double_partial_transpose_restores_state(data):
    s = data.draw(multi_states())
    nu = data.draw(masks_for(s.K))
    try:
        once = apply_partial_transpose_family(s, nu)
    except NotPositive as err:
        # a non-PPT intermediate is not a state; undo the raw transform instead
        assert _apply_raw(s, nu, err.values) == s.values
        return
    assert once.family == s.family ^ nu
    assert apply_partial_transpose_family(once, nu) == s


def _apply_raw(s, sigma, values):
    dense = dense_sigma_x(s.pairs, sigma)
    n = len(values)
    return tuple(sum((values[i] * dense[i][k] for i in range(n)), F(0)) for k in range(n))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_sigma_composition_is_xor(data):
    s = data.draw(multi_states())
    mu = data.draw(masks_for(s.K))
    nu = data.draw(masks_for(s.K))
    step = sigma_ppt_transform(s, mu)
    assert _apply_raw(s, nu, step) == sigma_ppt_transform(s, mu ^ nu)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_dense_sigma_x_is_involution_with_unit_rows(k):
    pairs_pool = [QUBITS, SpinPair.of("1/2", 2), SpinPair.of(1, 1), SpinPair.of(1, 2)]
    pairs = [pairs_pool[i % len(pairs_pool)] for i in range(k)]
    if k == 4:
        pairs = [QUBITS, SpinPair.of(1, 1), QUBITS, SpinPair.of("1/2", 1)]
    for sigma in all_masks(k):
        X = dense_sigma_x(pairs, sigma)
        n = len(X)
        assert all(sum(row) == 1 for row in X)
        for i in range(n):
            for l in range(n):
                assert sum(X[i][m] * X[m][l] for m in range(n)) == (i == l)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_factorized_matches_dense(data):
    s = data.draw(multi_states(max_k=3))
    sigma = data.draw(masks_for(s.K))
    assert sigma_ppt_transform(s, sigma) == _apply_raw(s, sigma, s.values)


def test_big_integer_path_matches_dense():
    # denominators large enough that the integer bound exceeds int64
    pairs = (SpinPair.of(1, "3/2"), SpinPair.of(1, 2), SpinPair.of("1/2", 4))
    size = math.prod(p.d_a for p in pairs)
    primes = [1000003, 1000033, 1000037, 1000039, 1000081, 1000099, 1000117, 1000121,
              1000133, 1000151, 1000159, 1000171, 1000183, 1000187, 1000193, 1000199, 1000211, 1000213]
    raw = [F(1, primes[i]) for i in range(size)]
    total = sum(raw)
    s = MultiFidelity(pairs, "010", tuple(v / total for v in raw))
    tensor, _, _, _ = core._engine(s, range(3))
    assert tensor.dtype == object
    for sigma in all_masks(3):
        assert sigma_ppt_transform(s, sigma) == _apply_raw(s, sigma, s.values)


@pytest.mark.parametrize("family", ["00", "01", "11"])
def test_sigma_transform_matches_dense_partial_transpose(family):
    pairs = (QUBITS, SpinPair.of("1/2", 1))
    s = MultiFidelity(pairs, family, frac("1/10", "2/10", "3/10", "4/10"))
    rho = multi_density(s)
    assert np.isclose(np.trace(rho), 1)
    for sigma in all_masks(2):
        pt = partial_transpose_mask(rho, pairs, sigma)
        flipped = BinaryMask.parse(family) ^ sigma
        measured = multi_fidelities_float(pt, pairs, flipped)
        expected = [float(v) for v in sigma_ppt_transform(s, sigma)]
        assert np.allclose(measured, expected, atol=1e-10)
        ppt = min(expected) >= 0
        assert ppt == (np.linalg.eigvalsh(pt).min() >= -1e-10)


# --- classification ---

def test_classify_examples():
    pairs = (QUBITS, QUBITS)
    assert classify(MultiFidelity.delta(pairs, (1, 1))) is Verdict.FULLY_SEPARABLE
    result = analyze(MultiFidelity.delta(pairs, (0, 0)))
    assert result.verdict is Verdict.ENTANGLED
    assert str(result.failing_mask) == "10"
    assert classify(MultiFidelity.uniform(pairs)) is Verdict.FULLY_SEPARABLE


def test_single_pair_classification():
    s = MultiFidelity((QUBITS,), "0", frac("2/5", "3/5"))
    assert classify(s) is Verdict.FULLY_SEPARABLE
    s = MultiFidelity((QUBITS,), "0", frac("3/5", "2/5"))
    assert classify(s) is Verdict.ENTANGLED
    s = MultiFidelity.delta((SpinPair.of(1, "3/2"),), ("5/2",))
    assert classify(s) is Verdict.UNDECIDED


def _biseparable_example():
    # singlet (x) singlet mixed with the top state: PPT on "11", not on "10"
    pairs = (QUBITS, QUBITS)
    for n in range(1, 20):
        a = F(n, 20)
        s = MultiFidelity(pairs, "00", (a, 0, 0, 1 - a))
        if analyze(s).verdict is Verdict.BISEPARABLE:
            return s
    return None


def test_biseparable_states_exist_and_match_definition():
    s = _biseparable_example()
    assert s is not None
    result = analyze(s)
    assert result.all_ones_ppt
    assert result.failing_mask is not None
    assert min(sigma_ppt_transform(s, result.failing_mask)) < 0
    assert min(sigma_ppt_transform(s, "11")) >= 0


def test_outside_theorem_npt_is_entangled():
    pair = SpinPair.of("3/2", "3/2")
    assert not theorem_applies([pair])
    s = MultiFidelity.delta((pair,), (0,))
    assert classify(s) is Verdict.ENTANGLED
    assert classify(MultiFidelity.delta((pair,), (3,))) is Verdict.UNDECIDED


@settings(max_examples=60, deadline=None)
@given(multi_states(max_k=3, max_weight=4))
def test_analyze_matches_brute_force(s):
    failing = [m for m in all_masks(s.K) if min(sigma_ppt_transform(s, m)) < 0]
    result = analyze(s)
    assert result.failing_mask == (failing[0] if failing else None)
    assert result.all_ones_ppt == (BinaryMask.ones(s.K) not in failing)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_classify_invariant_under_slot_permutation(data):
    s = data.draw(multi_states(max_k=3, max_weight=4))
    order = data.draw(st.permutations(list(range(s.K))))
    assert classify(s.permuted(order)) == classify(s)


@pytest.mark.parametrize("threads", [1, 2, 3, 4, 8])
def test_threads_do_not_change_decision(threads):
    rng = np.random.default_rng(20260101)
    pairs = tuple([QUBITS, SpinPair.of(1, 1), SpinPair.of("1/2", 1)] * 2)
    size = math.prod(p.d_a for p in pairs)
    for _ in range(5):
        weights = rng.integers(0, 5, size)
        weights[0] += 1
        s = MultiFidelity(pairs, "000000", tuple(F(int(w), int(weights.sum())) for w in weights))
        assert analyze(s, threads=threads) == analyze(s, threads=1)


def test_thread_count_from_environment(monkeypatch):
    monkeypatch.setenv("ROTSYM_THREADS", "3")
    assert core.thread_count() == 3
    monkeypatch.setenv("ROTSYM_THREADS", "zero")
    with pytest.raises(ValueError):
        core.thread_count()


def test_spin_zero_slot_is_inert():
    pairs = (SpinPair.of(0, 1), QUBITS)
    s = MultiFidelity(pairs, "00", frac("3/5", "2/5"))
    assert analyze(s).failing_mask == BinaryMask.parse("01")


def test_sigma_report_lists_every_mask():
    s = MultiFidelity.delta((QUBITS, QUBITS), (0, 0))
    report = sigma_report(s)
    assert [str(m) for m in report] == ["00", "10", "01", "11"]
    assert report[BinaryMask.parse("11")] == frac("1/4", "-3/4", "-3/4", "9/4")


# --- reductions ---

def test_reduce_examples():
    pairs = (QUBITS, QUBITS)
    s = MultiFidelity.delta(pairs, (0, 1))
    assert reduce(s, 2) == MultiFidelity((QUBITS,), "0", frac(1, 0))
    assert reduce(MultiFidelity.uniform(pairs), 1) == MultiFidelity.uniform((QUBITS,))
    with pytest.raises(ValueError):
        reduce(s, 3)
    with pytest.raises(ValueError):
        reduce(reduce(s, 1), 1)


def test_reduce_drops_family_bit():
    pairs = (QUBITS, SpinPair.of(1, 1), QUBITS)
    s = MultiFidelity.uniform(pairs, "101")
    r = reduce(s, 2)
    assert r.family == BinaryMask.parse("11")
    assert r.pairs == (QUBITS, QUBITS)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_reductions_commute(data):
    s = data.draw(multi_states(max_k=4, max_two_jb=2).filter(lambda x: x.K >= 3))
    i = data.draw(st.integers(1, s.K))
    j = data.draw(st.integers(1, s.K).filter(lambda v: v != i))
    first = reduce(reduce(s, j), i if i < j else i - 1)
    second = reduce(reduce(s, i), j if j < i else j - 1)
    assert first == second


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_reduction_keeps_sigma_ppt(data):
    s = data.draw(multi_states(max_k=3).filter(lambda x: x.K >= 2))
    sigma = data.draw(masks_for(s.K))
    slot = data.draw(st.integers(1, s.K))
    if min(sigma_ppt_transform(s, sigma)) >= 0:
        assert min(sigma_ppt_transform(reduce(s, slot), sigma.drop(slot))) >= 0


def test_extremal_separable_examples():
    assert extremal_separable_fidelities([QUBITS]).values == frac(0, 1)
    s = extremal_separable_fidelities([QUBITS, SpinPair.of("1/2", 1)])
    assert s[(1, "3/2")] == 1
    s = extremal_separable_fidelities([SpinPair.of(1, 1)] * 3)
    assert s[(2, 2, 2)] == 1
    assert classify(s) is Verdict.FULLY_SEPARABLE
