import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from cyclograph.core import field_norm, from_rho, make_context, torsion_units
from cyclograph.errors import UnitIdealError, ZeroIdealError
from cyclograph.ideals import (
    QuotientRing,
    ideal_from_generators,
    intermediate_ideals,
    principal_ideal,
    reduce_mod,
)

MS = [3, 4, 5, 8]


def nonzero_element(m, bound=5):
    phi = make_context(m).phi
    return (
        st.lists(st.integers(-bound, bound), min_size=phi, max_size=phi)
        .filter(lambda c: any(c))
        .map(lambda c: make_context(m).element(c))
    )


def small_quotient():
    def build(alpha):
        assume(2 <= alpha.norm <= 400)
        return QuotientRing(principal_ideal(alpha))

    return st.sampled_from(MS).flatmap(nonzero_element).map(build)


@given(st.sampled_from(MS).flatmap(nonzero_element))
def test_principal_norm_equals_field_norm(alpha):
    ideal = principal_ideal(alpha)
    assert ideal.norm == field_norm(alpha)
    assert ideal.contains(alpha)
    assert ideal.contains(alpha * alpha.ctx.zeta())


@given(st.sampled_from(MS).flatmap(nonzero_element), st.data())
def test_associates_generate_same_ideal(alpha, data):
    u = data.draw(st.sampled_from(torsion_units(alpha.ctx)))
    assert principal_ideal(alpha) == principal_ideal(u * alpha)


@given(st.sampled_from(MS).flatmap(lambda m: st.tuples(nonzero_element(m), nonzero_element(m))))
def test_sum_of_ideals_contains_both(pair):
    a, b = pair
    s = ideal_from_generators(a.ctx, [a, b])
    assert s.contains_ideal(principal_ideal(a)) and s.contains_ideal(principal_ideal(b))
    assert principal_ideal(a).norm % s.norm == 0
    # (a*b) sits inside (a)
    assert principal_ideal(a).contains_ideal(principal_ideal(a * b))


def test_zero_and_unit_ideals():
    ctx = make_context(4)
    with pytest.raises(ZeroIdealError):
        ideal_from_generators(ctx, [ctx.zero()])
    with pytest.raises(UnitIdealError):
        QuotientRing(principal_ideal(ctx.one() + ctx.zeta() * 0))


@given(small_quotient(), st.data())
def test_residue_ring_axioms(q, data):
    i = st.integers(0, q.order - 1)
    a, b, c = (q.residue_at(data.draw(i)) for _ in range(3))
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a + q.zero() == a and a + (-a) == q.zero()
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * q.one() == a


@given(small_quotient())
def test_reps_are_a_bijection(q):
    reps = np.asarray(q.reps, dtype=np.int64)
    assert reps.shape == (q.order, q.ctx.phi)
    assert np.array_equal(q.indices(reps), np.arange(q.order))
    assert q.index_of(q.ctx.zero()) == 0
    # different reps are in different cosets
    diffs = reps[1:] - reps[0]
    assert not np.any(q.ideal.contains_many(diffs))


@given(small_quotient(), st.data())
def test_vectorised_matches_scalar(q, data):
    idx = np.array(data.draw(st.lists(st.integers(0, q.order - 1), min_size=1, max_size=8)))
    jdx = np.array(data.draw(st.lists(st.integers(0, q.order - 1), min_size=len(idx), max_size=len(idx))))
    added = q.add_indices(idx, jdx)
    negated = q.neg_indices(idx)
    z = q.ctx.zeta()
    rotated = q.mul_indices(idx, z)
    for k in range(len(idx)):
        a, b = q.residue_at(int(idx[k])), q.residue_at(int(jdx[k]))
        assert int(added[k]) == (a + b).index
        assert int(negated[k]) == (-a).index
        assert int(rotated[k]) == q.residue(a.canonical_rep * z).index


def test_reduce_mod_and_contains():
    alpha = from_rho(1, 9)
    q = QuotientRing(principal_ideal(alpha))
    assert q.order == 91
    assert reduce_mod(q, alpha) == q.zero()
    assert reduce_mod(principal_ideal(alpha), alpha + 1) == q.one()


def test_intermediate_ideals_of_1_plus_9rho():
    q = QuotientRing(principal_ideal(from_rho(1, 9)))
    fam = intermediate_ideals(q)
    assert fam.complete
    assert [d.norm for d in fam] == [1, 7, 13, 91]
    assert principal_ideal(from_rho(1, 2)) in fam
    assert principal_ideal(from_rho(3, 1)) in fam


@given(small_quotient())
def test_intermediate_ideals_contain_a(q):
    fam = intermediate_ideals(q)
    assert fam[0].norm == 1 and fam[-1] == q.ideal
    for d in fam:
        assert d.contains_ideal(q.ideal)
        assert q.order % d.norm == 0
    keys = [d.key for d in fam]
    assert len(keys) == len(set(keys))


def test_intermediate_ideals_gaussian_prime_power():
    # (2) = (1+i)^2 in Z[i]: the ideals above it are (1), (1+i), (2)
    ctx = make_context(4)
    q = QuotientRing(principal_ideal(ctx.integer(2)))
    assert [d.norm for d in intermediate_ideals(q)] == [1, 2, 4]


def test_family_flags_non_pid():
    # Z[zeta_23] is not a PID; (47, zeta - 4) is a degree-one prime since 4 has order 23 mod 47
    ctx = make_context(23)
    prime = ideal_from_generators(ctx, [ctx.integer(47), ctx.zeta() - 4])
    assert prime.norm == 47
    fam = intermediate_ideals(QuotientRing(prime))
    assert not fam.complete and fam.principal_quotient_only
    assert [d.norm for d in fam] == [1, 47]
