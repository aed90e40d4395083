import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from cyclograph.codes import (
    CodeSet,
    associate_label,
    ball,
    ej_oracle_table,
    ej_theorem_check,
    ej_weight_bfs,
    ej_weight_oracle,
    gaussian_theorem_check,
    ideal_code_members,
    is_perfect_t_code,
    mannheim_oracle_table,
    mannheim_weight_bfs,
    mannheim_weight_oracle,
    mannheim_weights,
    normalize_nonnegative,
    principal_generator,
    rho_taxicab,
    rho_taxicab_scan,
    search_perfect_ideal_codes,
    shell_series,
    verify_ideal_code_conditions,
)
from cyclograph.core import from_rho, is_associate, make_context
from cyclograph.errors import InvalidParameterError, TheoremRangeError
from cyclograph.graphs import build_circulant, build_cyclotomic_graph, rotation_unit
from cyclograph.ideals import QuotientRing, intermediate_ideals, principal_ideal

EJ_91 = QuotientRing(principal_ideal(from_rho(1, 9)))
GAUSS = make_context(4)


def small_quotient(ms=(3, 4, 5, 8), max_order=400):
    def build(args):
        m, coeffs = args
        alpha = make_context(m).element(coeffs)
        assume(alpha and 3 <= alpha.norm <= max_order)
        return QuotientRing(principal_ideal(alpha))

    return st.sampled_from(ms).flatmap(
        lambda m: st.tuples(
            st.just(m),
            st.lists(st.integers(-5, 5), min_size=make_context(m).phi, max_size=make_context(m).phi),
        )
    ).map(build)


def brute_force_perfect(g, members, t):
    """Disjoint radius-t balls whose union is everything."""
    covered = np.zeros(g.n_vertices, dtype=np.int64)
    for c in members:
        covered[ball(g, int(c), t)] += 1
    return bool(np.all(covered == 1))


# --- weights -----------------------------------------------------------------


@given(small_quotient())
def test_mannheim_oracle_equals_bfs(q):
    assert np.array_equal(mannheim_oracle_table(q), mannheim_weights(q))


@given(small_quotient(ms=(3,)))
def test_ej_oracle_equals_bfs(q):
    table = ej_oracle_table(q)
    assert all(int(table[i]) == ej_weight_bfs(q, i) for i in range(q.order))


@given(small_quotient(), st.data())
def test_mannheim_axioms(q, data):
    idx = st.integers(0, q.order - 1)
    a, b = q.residue_at(data.draw(idx)), q.residue_at(data.draw(idx))
    w = lambda r: mannheim_weight_bfs(q, r)  # noqa: E731
    assert w(q.zero()) == 0
    assert (w(a) == 0) == (a == q.zero())
    assert w(-a) == w(a)
    assert w(a + b) <= w(a) + w(b)
    # bounded by the Manhattan weight of any representative
    assert w(a) <= sum(abs(int(c)) for c in q.reps[a.index])


def test_single_residue_oracles():
    r = from_rho(3, -2)
    assert mannheim_weight_oracle(EJ_91, r, 10) == mannheim_weight_bfs(EJ_91, r)
    assert ej_weight_oracle(EJ_91, r, 10) == ej_weight_bfs(EJ_91, r) == rho_taxicab(r)
    with pytest.raises(InvalidParameterError):
        ej_weight_oracle(EJ_91, from_rho(40, 40), 1)


@given(st.integers(-60, 60), st.integers(-60, 60))
def test_rho_taxicab_breakpoints_match_scan(c, d):
    assert rho_taxicab((c, d)) == rho_taxicab_scan((c, d))
    assert rho_taxicab((c, d)) == rho_taxicab((-c, -d))


def test_rho_taxicab_values():
    assert rho_taxicab(from_rho(1, 2)) == 3
    assert rho_taxicab(from_rho(1, -1)) == 1  # 1 - rho = -rho^2
    assert rho_taxicab(from_rho(2, 1)) == 3
    assert rho_taxicab(from_rho(0, 0)) == 0


# --- balls and perfection ----------------------------------------------------


@given(small_quotient(), st.data())
def test_perfect_test_matches_ball_oracle(q, data):
    g = build_cyclotomic_graph(q, data.draw(st.sampled_from(["full", "second"])))
    t = data.draw(st.integers(1, 3))
    members = data.draw(st.lists(st.integers(0, q.order - 1), min_size=1, max_size=12, unique=True))
    assert is_perfect_t_code(g, members, t).is_perfect == brute_force_perfect(g, members, t)


@given(small_quotient(max_order=300), st.integers(1, 2))
def test_ideal_codes_match_ball_oracle(q, t):
    g = build_cyclotomic_graph(q, "full")
    for d in intermediate_ideals(q):
        members = ideal_code_members(q, d)
        verdict = is_perfect_t_code(g, members, t)
        assert verdict.is_perfect == brute_force_perfect(g, members, t)
        if verdict.is_perfect:
            # ball/partition duality
            assert len(members) * len(ball(g, 0, t)) == q.order
        else:
            assert verdict.witness["type"] in ("overlap", "uncovered")


@given(small_quotient(max_order=300), st.integers(1, 2), st.data())
def test_perfection_is_automorphism_invariant(q, t, data):
    g = build_cyclotomic_graph(q, "full")
    perfect = [c for c in search_perfect_ideal_codes(q, t).perfect]
    for c in perfect:
        shift = data.draw(st.integers(0, q.order - 1))
        moved = q.add_indices(np.array(c.members), shift)
        assert is_perfect_t_code(g, moved, t).is_perfect
        turned = q.mul_indices(np.array(c.members), rotation_unit(q))
        assert is_perfect_t_code(g, turned, t).is_perfect


def test_known_perfect_codes_on_circulants():
    # {0, 5} is a perfect 2-code of the 10-cycle; {0, 4} is not
    g = build_circulant(10, [1, 9])
    assert is_perfect_t_code(g, [0, 5], 2).is_perfect
    v = is_perfect_t_code(g, [0, 4], 2)
    assert not v.is_perfect and v.witness["type"] == "overlap"
    v = is_perfect_t_code(g, [0], 1)
    assert v.witness["type"] == "uncovered" and v.witness["vertex"] not in (0, 1, 9)


def test_codeset_validation():
    g = build_circulant(10, [1, 9])
    with pytest.raises(InvalidParameterError):
        CodeSet(g, (0,), 0)
    with pytest.raises(InvalidParameterError):
        CodeSet(g, (), 1)
    with pytest.raises(InvalidParameterError):
        CodeSet(g, (10,), 1)


def test_shell_series_ej_and_gaussian():
    g = build_cyclotomic_graph(EJ_91, "full")
    assert shell_series(g, 6) == [1, 6, 12, 18, 24, 24, 6]
    q = QuotientRing(principal_ideal(GAUSS.element((7, 4))))
    s = shell_series(build_cyclotomic_graph(q, "full"), 5)
    assert s[1:6] == [4, 8, 12, 16, 20]
    with pytest.raises(InvalidParameterError):
        shell_series(g, 7)


# --- the 1 + 9 rho example, with the corrected divisor ------------------------


def test_ej_91_has_one_perfect_1_code():
    result = search_perfect_ideal_codes(EJ_91, 1)
    assert result.enumeration_complete and result.consistent
    (code,) = result.perfect
    assert code.ideal == principal_ideal(from_rho(1, 2))
    assert code.ideal.norm == 7 and len(code.members) == 13
    assert associate_label(code.ideal) == "1+2rho"
    # min EJ weight among nonzero members is 3 = 2t + 1
    assert min(ej_weight_bfs(EJ_91, i) for i in code.members if i) == 3


def test_ej_91_has_no_perfect_2_code():
    assert search_perfect_ideal_codes(EJ_91, 2).perfect == []


def test_ideal_code_conditions_relations():
    d = principal_ideal(from_rho(1, 2))
    full = verify_ideal_code_conditions(EJ_91, d, 1, "full")
    assert full.relation == "only-if" and full.consistent and full.verdict.is_perfect
    star = verify_ideal_code_conditions(EJ_91, d, 1, "second")
    assert star.relation == "iff" and star.consistent
    with pytest.raises(InvalidParameterError):
        verify_ideal_code_conditions(EJ_91, principal_ideal(from_rho(2, 1)), 1)


# --- generators and theorem checks --------------------------------------------


@given(st.sampled_from([3, 4]), st.integers(-12, 12), st.integers(-12, 12))
def test_principal_generator_recovers_associate(m, a, b):
    alpha = make_context(m).element((a, b))
    assume(alpha)
    gen = principal_generator(principal_ideal(alpha))
    assert is_associate(gen, alpha)


@given(st.sampled_from([3, 4]), st.integers(-12, 12), st.integers(-12, 12))
def test_normalize_nonnegative(m, a, b):
    alpha = make_context(m).element((a, b))
    assume(alpha)
    beta, (x, y) = normalize_nonnegative(alpha)
    assert x >= 0 and y >= 0 and is_associate(alpha, beta)


@pytest.mark.parametrize("a, b, t", [(7, 4, 1), (1, 8, 1), (5, 5, 1), (2, 10, 2), (13, 0, 2)])
def test_gaussian_theorem(a, b, t):
    rep = gaussian_theorem_check(GAUSS.element((a, b)), t)
    assert rep.agreement and not rep.missing and not rep.unexpected


@pytest.mark.parametrize("c, d, t", [(1, 9, 1), (4, 2, 1), (5, 3, 1), (3, 5, 1), (2, 11, 2)])
def test_ej_theorem(c, d, t):
    rep = ej_theorem_check(from_rho(c, d), t)
    assert rep.agreement
    assert all(rep.identities.values())


def test_ej_theorem_without_coprime_coordinates():
    # 4 + 2 rho = 2 (2 + rho): coordinates share the factor 2
    rep = ej_theorem_check(from_rho(4, 2), 1)
    assert rep.agreement and len(rep.observed) == 1


def test_theorem_range_errors():
    with pytest.raises(TheoremRangeError):
        gaussian_theorem_check(GAUSS.element((1, 1)), 1)
    with pytest.raises(TheoremRangeError):
        ej_theorem_check(from_rho(1, 9), 9)
