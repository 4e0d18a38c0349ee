"""Constructions, the expression grammar, and explicit family builders."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from invlab.construct import (
    BlowupExpr,
    BlowupUniformExpr,
    C3Expr,
    DijoinExpr,
    JoinExpr,
    QnExpr,
    RevExpr,
    TTExpr,
    blow_up,
    c3,
    compose_blowup_family,
    dijoin,
    eval_expr,
    extend_family_to_c3_dijoin,
    graph_from_expr,
    k_join,
    parse_expr,
    pretty,
    qn,
    qn_family,
    transitive,
)
from invlab.digraph import (
    InversionFamily,
    apply_family,
    canonical_key,
    invert,
    is_acyclic,
    reverse,
)
from invlab.errors import ParseError, VerificationError


class TestBasicGraphs:
    def test_c3_is_a_cycle(self):
        assert c3().arc_count() == 3
        assert is_acyclic(c3()) is None

    def test_c3_vertex_transitive_two_subsets(self):
        for X in (0b011, 0b101, 0b110):
            assert is_acyclic(invert(c3(), X)) is not None

    def test_transitive_is_acyclic(self):
        for n in range(7):
            assert is_acyclic(transitive(n)) is not None

    def test_qn_structure(self):
        Q = qn(4)
        # consecutive arcs run backwards, the rest forwards
        assert Q.has_arc(1, 0) and Q.has_arc(2, 1) and Q.has_arc(3, 2)
        assert Q.has_arc(0, 2) and Q.has_arc(0, 3) and Q.has_arc(1, 3)

    def test_qn_family_size_and_effect(self):
        for n in range(1, 16):
            F = qn_family(n)
            assert F.k == (n - 1) // 2
            assert is_acyclic(apply_family(qn(n), F)) is not None


class TestDijoinAndJoin:
    def test_two_points_make_tt2(self):
        assert dijoin(transitive(1), transitive(1)) == transitive(2)

    def test_blowup_of_tt2_is_dijoin(self):
        A, B = c3(), transitive(2)
        assert blow_up(transitive(2), [A, B]) == dijoin(A, B)

    def test_kjoin_is_tt_blowup(self):
        parts = [c3(), transitive(2), c3()]
        assert k_join(parts) == blow_up(transitive(3), parts)

    def test_reverse_of_dijoin(self):
        rng = random.Random(4)
        for _ in range(20):
            from helpers import random_oriented

            L = random_oriented(rng, rng.randint(1, 4))
            R = random_oriented(rng, rng.randint(1, 4))
            lhs = reverse(dijoin(L, R))
            rhs = dijoin(reverse(R), reverse(L))
            assert canonical_key(lhs) == canonical_key(rhs)


class TestBlowUp:
    def test_arity_checked(self):
        with pytest.raises(ValueError):
            blow_up(c3(), [c3(), c3()])

    def test_sizes_and_arc_count(self):
        H = c3()
        parts = [c3(), transitive(2), transitive(1)]
        G = blow_up(H, parts)
        assert G.n == sum(p.n for p in parts)
        bundles = sum(
            parts[i].n * parts[j].n for i, j in H.arcs()
        )
        assert G.arc_count() == bundles + sum(p.arc_count() for p in parts)

    def test_single_vertex_parts_reproduce_host(self):
        H = qn(4)
        assert blow_up(H, [transitive(1)] * 4) == H


def exprs(max_leaves=4):
    base = st.one_of(
        st.just(C3Expr()),
        st.integers(0, 4).map(TTExpr),
        st.integers(1, 4).map(QnExpr),
    )

    def extend(children):
        return st.one_of(
            children.map(RevExpr),
            st.tuples(children, children).map(lambda t: DijoinExpr(*t)),
            st.lists(children, min_size=1, max_size=3).map(
                lambda ps: JoinExpr(tuple(ps))
            ),
            st.tuples(children, st.integers(1, 3)).map(
                lambda t: BlowupUniformExpr(TTExpr(t[1]), t[0], t[1])
            ),
            st.lists(children, min_size=2, max_size=2).map(
                lambda ps: BlowupExpr(TTExpr(2), tuple(ps))
            ),
        )

    return st.recursive(base, extend, max_leaves=max_leaves)


class TestGrammar:
    def test_dijoin_expression(self):
        G = graph_from_expr("dijoin(c3, tt(3))")
        assert G.n == 6
        assert G == dijoin(c3(), transitive(3))

    def test_join_equals_blowup_of_tt(self):
        assert graph_from_expr("join(c3, c3, c3)") == graph_from_expr(
            "blowup(tt(3); c3, c3, c3)"
        )

    def test_uniform_blowup(self):
        assert graph_from_expr("blowup_uniform(c3; c3, 3)") == blow_up(
            c3(), [c3()] * 3
        )

    def test_whitespace_insensitive(self):
        assert graph_from_expr(" dijoin( c3 ,tt( 2) ) ") == dijoin(
            c3(), transitive(2)
        )

    def test_syntax_error_offset(self):
        with pytest.raises(ParseError) as err:
            parse_expr("qn(")
        assert err.value.offset == 3

    def test_unknown_identifier(self):
        with pytest.raises(ParseError):
            parse_expr("c4")

    def test_arity_error_on_blowup(self):
        with pytest.raises(ValueError):
            eval_expr(parse_expr("blowup(tt(3); c3, c3)"))

    def test_trailing_garbage(self):
        with pytest.raises(ParseError):
            parse_expr("c3 c3")

    @given(exprs())
    @settings(max_examples=80, deadline=None)
    def test_pretty_print_parse_identity(self, e):
        assert parse_expr(pretty(e)) == e


def even_weight_triangle_family() -> InversionFamily:
    # vectors 110, 101, 000: all even weight, flips only the first arc
    return InversionFamily(3, (0b011, 0b001, 0b010))


class TestTriangleDijoinFamily:
    def test_valid_input_produces_verified_family(self):
        F = even_weight_triangle_family()
        out = extend_family_to_c3_dijoin(c3(), F)
        assert out.k == 3
        joined = dijoin(c3(), c3())
        assert is_acyclic(apply_family(joined, out)) is not None

    def test_even_length_rejected(self):
        F = InversionFamily(3, (0b011, 0b011))
        with pytest.raises(ValueError):
            extend_family_to_c3_dijoin(c3(), F)

    def test_odd_weight_vector_rejected(self):
        F = InversionFamily(3, (0b011, 0b001, 0b001))
        with pytest.raises(ValueError):
            extend_family_to_c3_dijoin(c3(), F)

    def test_non_decycling_rejected(self):
        # even-weight vectors that flip every arc keep the triangle cyclic
        F = InversionFamily(3, (0b011, 0b101, 0b110))
        with pytest.raises(ValueError):
            extend_family_to_c3_dijoin(c3(), F)


class TestComposeBlowupFamily:
    def dominating_base(self):
        D = dijoin(transitive(1), c3())
        shifted = tuple(s << 1 for s in even_weight_triangle_family().sets)
        return D, InversionFamily(4, shifted)

    def test_acyclic_parts_reduce_to_blown_base_family(self):
        T, FT = self.dominating_base()
        parts = [transitive(2)] * 4
        fam = compose_blowup_family(T, FT, parts, [0] * 4)
        assert fam.k == FT.k  # the per-part sets were all empty and dropped
        assert is_acyclic(apply_family(blow_up(T, parts), fam)) is not None

    def test_triangle_parts_give_order_plus_two(self):
        T, FT = self.dominating_base()
        parts = [c3()] * 4
        fam = compose_blowup_family(T, FT, parts, [0b011] * 4)
        assert fam.k == T.n + FT.k - 1
        assert is_acyclic(apply_family(blow_up(T, parts), fam)) is not None

    def test_bad_part_witness_rejected(self):
        T, FT = self.dominating_base()
        with pytest.raises(ValueError):
            compose_blowup_family(T, FT, [c3()] * 4, [0] * 4)

    def test_verification_failure_carries_cycle(self):
        # a base vertex inside the family's sets breaks the combination
        FT = even_weight_triangle_family()
        with pytest.raises(VerificationError) as err:
            compose_blowup_family(c3(), FT, [c3()] * 3, [0b011] * 3)
        assert err.value.cycle


class TestQnExamples:
    def test_q3_is_a_triangle(self):
        assert canonical_key(qn(3)) == canonical_key(c3())

    def test_q2_single_arc(self):
        assert qn(2).arc_count() == 1


class TestBlowUpValueSandwich:
    def test_three_vertex_hosts_with_triangle_parts(self):
        # with every part of value 1 the blow-up value sits between the
        # host order and host order plus the host's own value
        from invlab.solver import inv_exact
        from invlab.digraph import nonisomorphic_tournaments

        for T in nonisomorphic_tournaments(3):
            host_value = inv_exact(T).value
            blown = blow_up(T, [c3()] * 3)
            value = inv_exact(blown).value
            assert 3 <= value <= 3 + host_value
