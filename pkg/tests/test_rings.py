"""Commutative polynomials, derivatives, evaluation, gcd and fractions."""

import random

import pytest
from hypothesis import given, strategies as st

from nclab.errors import DivisionByZero, UnassignedVariable
from nclab.fields import GF, QQ, NEG_INF
from nclab.rings import (
    CommPoly,
    RationalFunction,
    Variable,
    mono_cmp,
    parse_variable_name,
    poly_divexact,
    poly_divmod,
    poly_gcd,
)
from nclab.sample import random_commpoly, random_scalar

X = Variable.aux("t", 1)
Y = Variable.aux("t", 2)


def _x(field=QQ):
    return CommPoly.variable(X, field)


def _y(field=QQ):
    return CommPoly.variable(Y, field)


def _const(v, field=QQ):
    return CommPoly.constant(field.scalar(v))


class TestVariables:
    def test_order_entries_before_aux(self):
        e = Variable.entry(1, 2, 2)
        a = Variable.aux("lam", 1)
        assert e < a
        assert sorted([a, e]) == [e, a]

    def test_order_within_entries(self):
        assert Variable.entry(1, 1, 2) < Variable.entry(1, 2, 1)
        assert Variable.entry(1, 2, 2) < Variable.entry(2, 1, 1)

    def test_name_round_trip(self):
        for v in [Variable.entry(3, 1, 2), Variable.aux("lam", 7), Variable.aux("y", 1)]:
            assert parse_variable_name(str(v)) == v

    def test_bad_aux_name_rejected(self):
        with pytest.raises(ValueError):
            Variable.aux("lam2", 1)
        with pytest.raises(ValueError):
            Variable.aux("x", 0)


class TestArithmetic:
    def test_product_of_sum_and_difference(self):
        x, y = _x(), _y()
        assert (x + y) * (x - y) == x * x - y * y

    def test_cancellation_to_zero(self):
        x = _x()
        assert ((x + _const(1)) + (-x - _const(1))).is_zero

    def test_frobenius_in_char_2(self):
        f2 = GF(2)
        x, y = _x(f2), _y(f2)
        assert (x + y) ** 2 == x * x + y * y

    def test_degree_of_zero_is_sentinel(self):
        assert CommPoly.zero(QQ).total_degree() == NEG_INF
        assert NEG_INF < 0

    def test_mul_commutes_and_associates_randomized(self):
        rng = random.Random(987)
        vars6 = [Variable.aux("t", i) for i in range(1, 7)]
        for _ in range(60):
            a = random_commpoly(rng, vars6, QQ, max_degree=4, max_terms=3)
            b = random_commpoly(rng, vars6, QQ, max_degree=4, max_terms=3)
            c = random_commpoly(rng, vars6, QQ, max_degree=4, max_terms=3)
            assert a * b == b * a
            assert (a * b) * c == a * (b * c)


class TestDerivative:
    def test_power_rule(self):
        x, y = _x(), _y()
        assert (x * x * y).diff(X) == (x * y).scale(QQ.scalar(2))

    def test_absent_variable(self):
        y = _y()
        assert (y ** 3).diff(X).is_zero

    def test_char_2_square_has_zero_derivative(self):
        x = _x(GF(2))
        assert (x * x).diff(X).is_zero

    def test_leibniz_randomized(self):
        rng = random.Random(55)
        vars3 = [Variable.aux("t", i) for i in range(1, 4)]
        for _ in range(50):
            a = random_commpoly(rng, vars3, QQ)
            b = random_commpoly(rng, vars3, QQ)
            v = rng.choice(vars3)
            assert (a * b).diff(v) == a.diff(v) * b + b.diff(v) * a


class TestEvaluate:
    def test_simple_point(self):
        x, y = _x(), _y()
        assert (x * x + y).evaluate({X: QQ.scalar(2), Y: QQ.scalar(3)}) == QQ.scalar(7)

    def test_zero_poly(self):
        assert CommPoly.zero(QQ).evaluate({}) == QQ.zero

    def test_fractional_point(self):
        x, y = _x(), _y()
        pt = {X: QQ.scalar("1/2"), Y: QQ.scalar("2/3")}
        assert (x * y).evaluate(pt) == QQ.scalar("1/3")

    def test_unassigned_variable(self):
        with pytest.raises(UnassignedVariable):
            _x().evaluate({Y: QQ.one})

    def test_evaluation_is_ring_homomorphism(self):
        rng = random.Random(77)
        vars3 = [Variable.aux("t", i) for i in range(1, 4)]
        for _ in range(50):
            a = random_commpoly(rng, vars3, QQ)
            b = random_commpoly(rng, vars3, QQ)
            pt = {v: random_scalar(rng, QQ) for v in vars3}
            assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)
            assert (a + b).evaluate(pt) == a.evaluate(pt) + b.evaluate(pt)


class TestMonomialOrder:
    def test_graded_before_lex(self):
        x2 = ((X, 2),)
        xy = ((X, 1), (Y, 1))
        y = ((Y, 1),)
        assert mono_cmp(x2, y) == 1  # degree wins
        assert mono_cmp(x2, xy) == 1  # same degree: earlier variable wins
        assert mono_cmp(xy, xy) == 0

    def test_multiplicative(self):
        rng = random.Random(3)
        vars3 = [Variable.aux("t", i) for i in range(1, 4)]
        from nclab.rings import mono_mul

        for _ in range(200):
            def rand_mono():
                exps = {}
                for _ in range(rng.randint(0, 3)):
                    v = rng.choice(vars3)
                    exps[v] = exps.get(v, 0) + 1
                from nclab.rings import mono_from_dict

                return mono_from_dict(exps)

            m1, m2, t = rand_mono(), rand_mono(), rand_mono()
            c = mono_cmp(m1, m2)
            assert mono_cmp(mono_mul(m1, t), mono_mul(m2, t)) == c


class TestDivisionAndGcd:
    def test_exact_division(self):
        x, y = _x(), _y()
        q = poly_divexact(x * x * x - y * y * y, x - y)
        assert q == x * x + x * y + y * y

    def test_divmod_remainder(self):
        x, y = _x(), _y()
        q, r = poly_divmod(x * x + y, x)
        assert q == x
        assert r == y
        assert q * x + r == x * x + y

    def test_gcd_basic(self):
        x, y = _x(), _y()
        assert poly_gcd((x + y) * (x - y), (x + y) * (x + y)) == x + y
        assert poly_gcd(x * x, x.scale(QQ.scalar(2))) == x

    def test_gcd_coprime(self):
        x, y = _x(), _y()
        g = poly_gcd(x + _const(1), y + _const(1))
        assert g == CommPoly.one(QQ)

    def test_gcd_over_prime_field(self):
        f7 = GF(7)
        x, y = _x(f7), _y(f7)
        assert poly_gcd((x + y) * x, (x + y) * y) == x + y

    def test_gcd_divides_both_randomized(self):
        rng = random.Random(41)
        vars2 = [X, Y]
        for _ in range(25):
            a = random_commpoly(rng, vars2, QQ, max_degree=2, max_terms=2)
            b = random_commpoly(rng, vars2, QQ, max_degree=2, max_terms=2)
            c = random_commpoly(rng, vars2, QQ, max_degree=2, max_terms=2)
            if a.is_zero or b.is_zero or c.is_zero:
                continue
            g = poly_gcd(a * c, b * c)
            # the gcd divides both products, and the planted factor divides it
            _, r1 = poly_divmod(a * c, g)
            _, r2 = poly_divmod(b * c, g)
            assert r1.is_zero and r2.is_zero
            _, rc = poly_divmod(g, c)
            assert rc.is_zero


class TestRationalFunction:
    def test_inverse_cancellation(self):
        lam1 = CommPoly.variable(Variable.aux("lam", 1), QQ)
        lam2 = CommPoly.variable(Variable.aux("lam", 2), QQ)
        d = lam1 - lam2
        r = RationalFunction(CommPoly.one(QQ), d) * RationalFunction(d, CommPoly.one(QQ))
        assert r == RationalFunction.from_scalar(QQ.one)

    def test_sum_to_zero(self):
        lam1 = CommPoly.variable(Variable.aux("lam", 1), QQ)
        lam2 = CommPoly.variable(Variable.aux("lam", 2), QQ)
        a = RationalFunction(lam1, lam2)
        assert (a + (-a)).is_zero

    def test_zero_denominator(self):
        lam1 = CommPoly.variable(Variable.aux("lam", 1), QQ)
        with pytest.raises(DivisionByZero):
            RationalFunction(CommPoly.one(QQ), lam1 - lam1)
        with pytest.raises(DivisionByZero):
            RationalFunction.from_poly(lam1) / RationalFunction.from_scalar(QQ.zero)

    def test_scaled_inputs_are_equal_values(self):
        rng = random.Random(10)
        vars2 = [X, Y]
        for _ in range(25):
            a = random_commpoly(rng, vars2, QQ, max_degree=2, max_terms=2)
            b = random_commpoly(rng, vars2, QQ, max_degree=2, max_terms=2)
            c = random_commpoly(rng, vars2, QQ, max_degree=2, max_terms=2)
            if b.is_zero or c.is_zero:
                continue
            assert RationalFunction(a * c, b * c) == RationalFunction(a, b)

    def test_denominator_is_monic(self):
        x, y = _x(), _y()
        r = RationalFunction(y, x.scale(QQ.scalar(2)))
        _, lc = r.den.leading_term()
        assert lc == QQ.one

    def test_field_arithmetic_randomized(self):
        rng = random.Random(11)
        vars2 = [X, Y]

        def rand_rf():
            while True:
                den = random_commpoly(rng, vars2, QQ, max_degree=1, max_terms=2)
                if not den.is_zero:
                    break
            num = random_commpoly(rng, vars2, QQ, max_degree=1, max_terms=2)
            return RationalFunction(num, den)

        for _ in range(20):
            a, b, c = rand_rf(), rand_rf(), rand_rf()
            assert (a + b) * c == a * c + b * c
            assert a - a == RationalFunction.from_scalar(QQ.zero)
            if not b.is_zero:
                assert (a / b) * b == a


@given(st.integers(-20, 20), st.integers(-20, 20))
def test_constant_poly_matches_scalar_arithmetic(m, n):
    a, b = _const(m), _const(n)
    assert (a * b).constant_value() == QQ.scalar(m * n)
    assert (a + b).constant_value() == QQ.scalar(m + n)
