import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Rational as SR
from sympy.physics import wigner as sw

from rotsym.angular import (
    FactorialCapError,
    FactorialTable,
    HalfInt,
    NoClosedForm,
    SqrtRational,
    clebsch_gordan,
    closed_form_by_pattern,
    half,
    racah_w,
    sixj_closed_form,
    sixj_symmetric_forms,
    triangle,
    wigner_3j,
    wigner_6j,
    wigner_6j_oracle,
)
from rotsym.angular.closed_forms import PATTERNS

H = Fraction(1, 2)


def spins(two_max):
    return [HalfInt(t) for t in range(two_max + 1)]


def mvals(j):
    return j.magnetic_values()


def sympy_value(expr):
    """Exact sympy value -> SqrtRational (values are +-sqrt(rational))."""
    sq = SR(expr**2)
    sign = 0 if expr == 0 else (1 if expr > 0 else -1)
    return SqrtRational(sign, Fraction(int(sq.p), int(sq.q)))


def exact_sum(values):
    """Exact sum of SqrtRationals as {squarefree radical: rational coefficient}."""
    from sympy import factorint

    groups = {}
    for v in values:
        if not v:
            continue
        r = v.radicand
        # sqrt(n/d) = sqrt(n*d)/d
        n = r.numerator * r.denominator
        square, free = 1, 1
        for p, e in factorint(n).items():
            square *= p ** (e // 2)
            free *= p ** (e % 2)
        groups[free] = groups.get(free, 0) + v.sign * Fraction(square, r.denominator)
    return {k: c for k, c in groups.items() if c}


def sympy_6j(*args):
    try:
        return sw.wigner_6j(*(SR(x.two_j, 2) for x in args))
    except ValueError:
        return 0


# --- numbers ---------------------------------------------------------------


def test_halfint_parse_and_format():
    assert HalfInt.parse("3/2") == HalfInt(3)
    assert HalfInt.parse("-1/2") == HalfInt(-1)
    assert HalfInt.parse("2") == HalfInt(4)
    assert HalfInt.parse("1.5") == HalfInt(3)
    assert str(HalfInt(3)) == "3/2"
    assert str(HalfInt(-4)) == "-2"
    assert half(Fraction(5, 2)) == HalfInt(5)
    for bad in ("1/3", "0.25", "x", "1/0"):
        with pytest.raises(ValueError):
            HalfInt.parse(bad)


def test_sqrt_rational_arithmetic():
    a = SqrtRational(1, Fraction(1, 2))
    assert a * a == Fraction(1, 2)
    assert (a * a).to_rational() == Fraction(1, 2)
    assert not a.is_rational()
    with pytest.raises(ValueError):
        a.to_rational()
    assert SqrtRational(-1, Fraction(4, 9)).to_rational() == Fraction(-2, 3)
    assert SqrtRational(1, 0) == SqrtRational(0)
    assert SqrtRational(1, 0).sign == 0
    assert -a == SqrtRational(-1, Fraction(1, 2))
    with pytest.raises(ValueError):
        SqrtRational(1, -1)


@given(st.integers(-1, 1), st.fractions(min_value=0, max_value=1000))
def test_sqrt_rational_string_round_trip(sign, radicand):
    value = SqrtRational(sign, radicand)
    assert SqrtRational.parse(str(value)) == value


def test_factorial_cap_is_typed_error():
    table = FactorialTable(cap=10)
    assert table(10) == 3628800
    with pytest.raises(FactorialCapError):
        table(11)
    table.set_cap(12)
    assert table(12) == 479001600


# --- Clebsch-Gordan --------------------------------------------------------


def test_cg_examples():
    assert clebsch_gordan(H, H, H, H, 1, 1) == 1
    assert clebsch_gordan(H, H, H, -H, 0, 0) == SqrtRational(1, Fraction(1, 2))
    assert clebsch_gordan(H, H, H, H, 0, 0) == 0


def test_cg_parity_violation_is_input_error():
    with pytest.raises(ValueError):
        clebsch_gordan(H, 0, H, H, 1, H)
    with pytest.raises(ValueError):
        clebsch_gordan(1, 2, 1, 0, 1, 2)


def test_cg_matches_sympy():
    for j1, j2 in itertools.product(spins(4), repeat=2):
        for J in spins(8):
            for m1, m2 in itertools.product(mvals(j1), mvals(j2)):
                M = m1 + m2
                if abs(M.two_j) > J.two_j or (J.two_j - M.two_j) % 2:
                    continue
                ref = sw.clebsch_gordan(*(SR(x.two_j, 2) for x in (j1, j2, J, m1, m2, M)))
                assert clebsch_gordan(j1, m1, j2, m2, J, M) == sympy_value(ref)


def test_cg_condon_shortley_phase():
    for j1, j2 in itertools.product(spins(6), repeat=2):
        for two_J in range(abs(j1.two_j - j2.two_j), j1.two_j + j2.two_j + 1, 2):
            J = HalfInt(two_J)
            assert clebsch_gordan(j1, j1, j2, J - j1, J, J).sign == 1


def test_cg_normalization_and_orthogonality():
    for j1, j2 in itertools.product(spins(6), repeat=2):
        Js = [HalfInt(t) for t in range(abs(j1.two_j - j2.two_j), j1.two_j + j2.two_j + 1, 2)]
        states = [(J, M) for J in Js for M in mvals(J)]
        for (J, M), (Jp, Mp) in itertools.product(states, repeat=2):
            total = exact_sum(
                clebsch_gordan(j1, m1, j2, m2, J, M) * clebsch_gordan(j1, m1, j2, m2, Jp, Mp)
                for m1, m2 in itertools.product(mvals(j1), mvals(j2))
            )
            assert total == ({1: 1} if (J, M) == (Jp, Mp) else {})


# --- 3-j ---------------------------------------------------------------------


def test_3j_examples():
    # (j j 0; m -m 0) = (-1)^(j-m) / sqrt(2j+1)
    assert wigner_3j(H, H, 0, H, -H, 0) == SqrtRational(1, Fraction(1, 2))
    assert wigner_3j(1, 1, 1, 0, 0, 0) == 0
    assert wigner_3j(1, 1, 1, 1, 0, 0) == 0


def test_3j_matches_sympy_and_sign_symmetry():
    for j1, j2, j3 in itertools.product(spins(6), repeat=3):
        if (j1.two_j + j2.two_j + j3.two_j) % 2:
            continue
        for m1, m2 in itertools.product(mvals(j1), mvals(j2)):
            m3 = -(m1 + m2)
            if abs(m3.two_j) > j3.two_j:
                continue
            value = wigner_3j(j1, j2, j3, m1, m2, m3)
            flipped = wigner_3j(j1, j2, j3, -m1, -m2, -m3)
            exponent = (j1.two_j + j2.two_j + j3.two_j) // 2
            assert flipped == value * (-1) ** exponent
            if j1.two_j <= 4 and j2.two_j <= 4:
                ref = sw.wigner_3j(*(SR(x.two_j, 2) for x in (j1, j2, j3, m1, m2, m3)))
                assert value == sympy_value(ref)


# --- 6-j ---------------------------------------------------------------------


def test_6j_examples():
    assert wigner_6j(H, H, 0, H, H, 0) == Fraction(-1, 2)
    assert wigner_6j(H, H, 1, H, H, 1) == Fraction(1, 6)
    assert wigner_6j(1, 1, 2, 1, 1, 2) == Fraction(1, 30)
    assert wigner_6j(1, 1, 0, 1, 1, 1) == Fraction(-1, 3)
    assert wigner_6j(1, 1, 3, 1, 1, 1) == 0


def test_6j_zero_column_closed_form():
    # {a a 0; d d f} = (-1)^(a+d+f) / sqrt((2a+1)(2d+1))
    for a, d, f in itertools.product(spins(6), repeat=3):
        if not (abs(a.two_j - d.two_j) <= f.two_j <= a.two_j + d.two_j) or (a.two_j + d.two_j + f.two_j) % 2:
            continue
        sign = (-1) ** ((a.two_j + d.two_j + f.two_j) // 2)
        expected = SqrtRational(sign, Fraction(1, (a.two_j + 1) * (d.two_j + 1)))
        assert wigner_6j(a, a, 0, d, d, f) == expected


def test_6j_matches_sympy():
    for args in itertools.product(spins(4), repeat=6):
        if sum(x.two_j for x in args) > 14:
            continue
        assert wigner_6j(*args) == sympy_value(sympy_6j(*args))


def test_6j_symmetries_exact():
    # all 24 tetrahedral forms, spins <= 3, exercised through uncached evaluation
    from rotsym.angular.symbols import _sixj_canonical

    raw = _sixj_canonical.__wrapped__
    for args in itertools.product(range(0, 7), repeat=6):
        a, b, c, d, e, f = args
        if (a + b + c) % 2 or (a + e + f) % 2 or (d + b + f) % 2 or (d + e + c) % 2:
            continue
        if sum(args) > 16:
            continue
        ref = raw(args)
        # column swap and row exchange, one generator each
        assert raw((b, a, c, e, d, f)) == ref
        assert raw((d, e, c, a, b, f)) == ref


def test_6j_orthogonality():
    for a, b, c, d in itertools.product(spins(4), repeat=4):
        Js = range(max(abs(a.two_j - b.two_j), abs(c.two_j - d.two_j)), min(a.two_j + b.two_j, c.two_j + d.two_j) + 1, 2)
        Jps = range(abs(a.two_j - d.two_j), a.two_j + d.two_j + 1, 2)
        for Jp, Jpp in itertools.product(Jps, repeat=2):
            total = exact_sum(
                wigner_6j(a, b, HalfInt(J), c, d, HalfInt(Jp))
                * wigner_6j(a, b, HalfInt(J), c, d, HalfInt(Jpp))
                * ((J + 1) * (Jp + 1))
                for J in Js
            )
            # Jp must close triads (a d Jp) and (c b Jp) for the row to be normalized
            valid = triangle(c.two_j, b.two_j, Jp) and triangle(a.two_j, d.two_j, Jp) and len(Js) > 0
            if valid and triangle(c.two_j, b.two_j, Jpp):
                assert total == ({1: 1} if Jp == Jpp else {})


def test_6j_pair_form_demotes_to_rational():
    for ja in spins(4):
        for jb in spins(8):
            if jb.two_j < ja.two_j:
                continue
            Js = [HalfInt(t) for t in range(jb.two_j - ja.two_j, jb.two_j + ja.two_j + 1, 2)]
            for J, Jp in itertools.product(Js, repeat=2):
                assert wigner_6j(ja, jb, J, ja, jb, Jp).is_rational()


def test_symmetric_forms_count():
    forms = sixj_symmetric_forms((1, 2, 3, 4, 5, 6))
    assert len(set(forms)) == 24


# --- oracle, Racah W ------------------------------------------------------------


def test_oracle_examples():
    assert wigner_6j_oracle(H, H, 1, H, H, 1) == pytest.approx(1 / 6, abs=1e-14)
    assert wigner_6j_oracle(1, 1, 0, 1, 1, 1) == pytest.approx(-1 / 3, abs=1e-14)
    assert wigner_6j_oracle(1, 1, 3, 1, 1, 1) == 0.0
    # half-integer sum on the lower row
    assert wigner_6j_oracle(1, 1, 1, H, H, H) == pytest.approx(float(wigner_6j(1, 1, 1, H, H, H)), abs=1e-14)


def test_racah_w_examples():
    assert racah_w(H, H, H, H, 0, 0) == Fraction(-1, 2)
    assert racah_w(1, 1, 1, 1, 0, 1) == Fraction(-1, 3)
    assert racah_w(1, 1, 1, 1, 3, 1) == 0


# --- closed forms --------------------------------------------------------------


def test_closed_form_examples():
    assert sixj_closed_form(1, 1, 0, 1, 1, 0) == Fraction(1, 3)
    with pytest.raises(NoClosedForm):
        sixj_closed_form(3, 3, 3, 3, 3, 3)
    # j1 = j2 = 1, j = 1/2 violates a triad: exact zero on both paths
    assert closed_form_by_pattern("half_a", 1, 1, H) == 0 == wigner_6j(H, H, 1, 1, H, H)


@pytest.mark.parametrize("name", sorted(PATTERNS))
def test_closed_forms_agree_with_racah_sum(name):
    """Sweep every pattern over parameters up to 9/2: value and sign must agree."""
    checked = 0
    for t1, t2, t in itertools.product(range(0, 10), repeat=3):
        args = PATTERNS[name].shape(t1, t2, t)
        if min(args) < 0:
            continue
        exact = wigner_6j(*(HalfInt(x) for x in args))
        if not exact:
            continue
        value = closed_form_by_pattern(name, HalfInt(t1), HalfInt(t2), HalfInt(t))
        assert abs(value) == abs(exact), (name, args)
        assert value == exact, (name, args)
        checked += 1
    assert checked > 100


def test_closed_form_dispatch_through_symmetries():
    hits = 0
    for args in itertools.product(range(0, 8), repeat=6):
        if sum(args) > 18:
            continue
        spins6 = [HalfInt(x) for x in args]
        try:
            value = sixj_closed_form(*spins6)
        except NoClosedForm:
            continue
        assert value == wigner_6j(*spins6)
        hits += 1
    assert hits > 1000


def test_printed_one_b_formula_is_misprinted():
    """The factor (J-2j+1) in place of (J-2j1+1) breaks agreement, e.g. {0 1 1; 1/2 3/2 3/2}."""
    j1, j2, j = Fraction(1), Fraction(3, 2), Fraction(3, 2)
    J = j1 + j2 + j
    den = (2 * j1 - 1) * 2 * j1 * (2 * j1 + 1) * (2 * j2 - 1) * 2 * j2 * (2 * j2 + 1)
    printed = (J - 2 * j1) * (J - 2 * j + 1) * (J - 2 * j2) * (J - 2 * j2 + 1) / den
    exact = wigner_6j(0, 1, 1, H, Fraction(3, 2), Fraction(3, 2))
    assert exact.radicand != printed
    assert closed_form_by_pattern("one_b", j1, j2, j) == exact


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 8), min_size=6, max_size=6))
def test_oracle_agrees_on_random_symbols(args):
    spins6 = [HalfInt(x) for x in args]
    assert abs(wigner_6j_oracle(*spins6) - float(wigner_6j(*spins6))) < 1e-12


def test_oracle_matches_sympy_independently():
    for args in itertools.product(range(0, 5), repeat=6):
        spins6 = [HalfInt(x) for x in args]
        ref = float(sympy_6j(*spins6))
        assert abs(wigner_6j_oracle(*spins6) - ref) < 1e-12, args
