"""Centralizer bases, the single-generator test, pipeline and probe."""

import pytest

from oracles import fraction_kernel, free_commutator
from nclab.errors import NotCommuting, ScalarInput
from nclab.fields import GF, QQ
from nclab.freealg import FreePoly, commutator, parse_free
from nclab.genmat import BivariatePoly, GenericMatrix, pi_reduce
from nclab.quantize import StarContext, entry_pairing_tensor
from nclab.centralizer import (
    bergman_check,
    bergman_pipeline,
    centralizer_basis,
    commuting_matrix_probe,
    diagonal_generic_pair,
)


def _all_words(s, d):
    out = [()]
    layer = [()]
    for _ in range(d):
        layer = [w + (g,) for w in layer for g in range(1, s + 1)]
        out.extend(layer)
    return out


def oracle_centralizer_dim(f: FreePoly, m: int) -> int:
    """Exhaustive kernel dimension over all words of length <= m, by plain Gauss."""
    words = _all_words(f.s, m)
    raw_f = {w: c.value for w, c in f.terms.items()}
    images = []
    support = {}
    for w in words:
        c = free_commutator(raw_f, {w: 1})
        images.append(c)
        for rw in c:
            support.setdefault(rw, len(support))
    rows = [[0] * len(words) for _ in support]
    for j, c in enumerate(images):
        for rw, v in c.items():
            rows[support[rw]][j] = v
    return len(fraction_kernel(rows, len(words)))


class TestCentralizerBasis:
    def test_generator_in_two_variables(self):
        f = parse_free("x1", 2, QQ)
        cb = centralizer_basis(f, 3)
        assert cb.dims == [1, 2, 3, 4]
        powers = {parse_free(t, 2, QQ) for t in ["1", "x1", "x1^2", "x1^3"]}
        assert set(cb.top_basis()) == powers

    def test_square_has_the_same_centralizer(self):
        f = parse_free("x1^2", 2, QQ)
        cb = centralizer_basis(f, 3)
        assert cb.dims == [1, 2, 3, 4]
        powers = {parse_free(t, 2, QQ) for t in ["1", "x1", "x1^2", "x1^3"]}
        assert set(cb.top_basis()) == powers

    def test_product_word(self):
        f = parse_free("x1*x2", 2, QQ)
        cb = centralizer_basis(f, 2)
        assert cb.dims == [1, 1, 2]
        assert set(cb.top_basis()) == {
            parse_free("1", 2, QQ),
            parse_free("x1*x2", 2, QQ),
        }

    def test_dims_match_exhaustive_oracle(self):
        for text, d in [("x1", 3), ("x1^2", 3), ("x1*x2", 3), ("x1+x2", 3), ("x2*x1*x2", 4)]:
            f = parse_free(text, 2, QQ)
            cb = centralizer_basis(f, d)
            for m in range(d + 1):
                assert len(cb.bases[m]) == oracle_centralizer_dim(f, m)

    def test_scalar_input_rejected(self):
        with pytest.raises(ScalarInput):
            centralizer_basis(parse_free("3", 2, QQ), 2)
        with pytest.raises(ScalarInput):
            centralizer_basis(FreePoly.zero(2, QQ), 2)

    def test_every_basis_element_commutes(self):
        for text in ["x1", "x1^2", "x1*x2", "x1+x2", "x1^3+x1"]:
            f = parse_free(text, 2, QQ)
            cb = centralizer_basis(f, 4)
            for g in cb.top_basis():
                assert commutator(f, g).is_zero

    def test_basis_elements_pairwise_commute(self):
        for text in ["x1^2", "x1*x2", "x2*x1*x2"]:
            f = parse_free(text, 2, QQ)
            basis = centralizer_basis(f, 4).top_basis()
            for a in basis:
                for b in basis:
                    assert commutator(a, b).is_zero

    def test_dims_nondecreasing(self):
        f = parse_free("x2*x1*x2", 2, QQ)
        dims = centralizer_basis(f, 5).dims
        assert all(a <= b for a, b in zip(dims, dims[1:]))

    def test_kernels_are_nested_spans(self):
        from nclab import linalg
        from nclab.freealg import word_key

        f = parse_free("x1*x2", 2, QQ)
        cb = centralizer_basis(f, 4)
        for m in range(4):
            lower, upper = cb.bases[m], cb.bases[m + 1]
            support = sorted(
                {w for p in lower + upper for w in p.terms}, key=word_key
            )
            index = {w: i for i, w in enumerate(support)}

            def vec(p):
                v = [QQ.zero] * len(support)
                for w, c in p.terms.items():
                    v[index[w]] = c
                return v

            columns = [vec(p) for p in upper]
            for e in lower:
                assert linalg.solve_membership(columns, vec(e), QQ) is not None

    def test_degree_zero_bound(self):
        cb = centralizer_basis(parse_free("x1", 2, QQ), 0)
        assert cb.dims == [1]
        assert cb.top_basis() == [parse_free("1", 2, QQ)]


class TestBergmanCheck:
    def test_square(self):
        rep = bergman_check(parse_free("x1^2", 2, QQ), 4)
        assert rep.passed
        assert rep.generator == parse_free("x1", 2, QQ)

    def test_sum_of_generators(self):
        rep = bergman_check(parse_free("x1 + x2", 2, QQ), 3)
        assert rep.passed
        assert rep.generator == parse_free("x1 + x2", 2, QQ)

    def test_cubic_plus_linear(self):
        rep = bergman_check(parse_free("x1^3 + x1", 2, QQ), 4)
        assert rep.passed
        assert rep.generator == parse_free("x1", 2, QQ)

    def test_dims_formula_on_pass(self):
        for text, d in [("x1^2", 5), ("x1*x2", 5), ("x2*x1*x2", 5)]:
            rep = bergman_check(parse_free(text, 2, QQ), d)
            assert rep.passed
            assert rep.dims == rep.expected_dims

    def test_constant_shift_is_stripped(self):
        # centralizer elements may carry constants; the generator must not
        rep = bergman_check(parse_free("x1^2 + x1 + 1", 2, QQ), 4)
        assert rep.passed
        assert rep.generator.constant_term() == QQ.zero


class TestPipeline:
    def _ctx(self, s, nmax, order=2, field=QQ):
        return StarContext(entry_pairing_tensor(s, nmax, field), order)

    def test_commuting_pair(self):
        f = parse_free("x1", 2, QQ)
        g = parse_free("x1^2 + x1", 2, QQ)
        rep = bergman_pipeline(f, g, 2, 3, self._ctx(2, 2))
        assert rep.commute
        expected = BivariatePoly(QQ, {(2, 0): 1, (1, 0): 1, (0, 1): -1})  # u^2 + u - v
        for o in rep.outcomes:
            assert o.images_commute
            assert o.annihilator.found and o.annihilator.poly == expected
            assert o.star_c0_zero and o.star_c1_zero
        assert rep.stability.identical
        assert rep.trdeg_verdict == "1"

    def test_noncommuting_pair_stops(self):
        f = parse_free("x1", 2, QQ)
        g = parse_free("x2", 2, QQ)
        rep = bergman_pipeline(f, g, 2, 3, self._ctx(2, 2))
        assert not rep.commute
        assert rep.outcomes == []
        assert "do not commute" in rep.conclusion

    def test_equal_elements(self):
        f = parse_free("x1", 2, QQ)
        rep = bergman_pipeline(f, f, 2, 2, self._ctx(2, 2))
        expected = BivariatePoly(QQ, {(1, 0): 1, (0, 1): -1})
        assert all(o.annihilator.poly == expected for o in rep.outcomes)
        assert rep.trdeg_verdict == "1"

    def test_consistency_invariant_on_commuting_pairs(self):
        # pairs built from powers of x1 only touch generator-1 variables, so
        # every bracket of entries vanishes and the star commutator is 0
        pairs = [("x1", "x1^3"), ("x1^2", "x1^2 + 1"), ("x1^2 + x1", "x1")]
        for ftext, gtext in pairs:
            f, g = parse_free(ftext, 2, QQ), parse_free(gtext, 2, QQ)
            rep = bergman_pipeline(f, g, 2, 4, self._ctx(2, 2))
            for o in rep.outcomes:
                assert o.images_commute
                assert o.star_c0_zero and o.star_c1_zero
                assert o.annihilator.found


class TestProbe:
    def test_diagonal_generic_pair_shows_the_mechanism(self):
        f, g, tensor = diagonal_generic_pair(2, QQ)
        ctx = StarContext(tensor, 2)
        rep = commuting_matrix_probe(f, g, 3, ctx)
        (o,) = rep.outcomes
        assert not o.annihilator.found
        assert o.star_c0_zero
        assert not o.star_c1_zero
        assert o.star_linear_part == GenericMatrix.identity(2, QQ)
        assert ">=2" in rep.trdeg_verdict
        assert "contradiction" in rep.conclusion

    def test_pi_image_pair_stays_tame(self):
        f = pi_reduce(parse_free("x1", 1, QQ), 1)
        g = pi_reduce(parse_free("x1^2", 1, QQ), 1)
        ctx = StarContext(entry_pairing_tensor(1, 1, QQ), 2)
        rep = commuting_matrix_probe(f, g, 3, ctx)
        (o,) = rep.outcomes
        assert o.annihilator.poly == BivariatePoly(QQ, {(2, 0): 1, (0, 1): -1})
        assert o.star_c0_zero and o.star_c1_zero
        assert rep.trdeg_verdict == "1"

    def test_equal_matrices(self):
        f, _, tensor = diagonal_generic_pair(2, QQ)
        ctx = StarContext(tensor, 2)
        rep = commuting_matrix_probe(f, f, 2, ctx)
        (o,) = rep.outcomes
        assert o.annihilator.poly == BivariatePoly(QQ, {(1, 0): 1, (0, 1): -1})
        assert o.star_c1_zero

    def test_noncommuting_rejected(self):
        from nclab.genmat import make_generic

        x1, x2 = make_generic(2, 2, QQ)
        ctx = StarContext(entry_pairing_tensor(2, 2, QQ), 2)
        with pytest.raises(NotCommuting):
            commuting_matrix_probe(x1, x2, 2, ctx)

    def test_eq1_diagonal_reproduced_at_size_3(self):
        f, g, tensor = diagonal_generic_pair(3, QQ)
        ctx = StarContext(tensor, 2)
        rep = commuting_matrix_probe(f, g, 2, ctx)
        (o,) = rep.outcomes
        assert o.star_linear_part == GenericMatrix.identity(3, QQ)


class TestPrimeField:
    def test_centralizer_over_f7(self):
        f7 = GF(7)
        rep = bergman_check(parse_free("x1^2", 2, f7), 4)
        assert rep.passed
        assert rep.generator == parse_free("x1", 2, f7)

    def test_pipeline_over_f7(self):
        f7 = GF(7)
        f = parse_free("x1", 2, f7)
        g = parse_free("x1^2 + 1", 2, f7)
        ctx = StarContext(entry_pairing_tensor(2, 2, f7), 2)
        rep = bergman_pipeline(f, g, 2, 3, ctx)
        assert rep.trdeg_verdict == "1"
        assert rep.stability.identical
