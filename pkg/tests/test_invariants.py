import random
from fractions import Fraction

import pytest

from vertexfock.fock import (
    B,
    BETA,
    GAMMA,
    AlgebraDescriptor,
    State,
    basis,
    generator_state,
    vacuum,
    weight,
)
from vertexfock.invariants import (
    FiniteAbelianAction,
    TorusAction,
    commutant_basis,
    dim_table,
    dim_table_csv_rows,
    extend_action,
    gr_dim_table,
    heisenberg_current,
    heisenberg_pairing,
    invariant_basis,
    is_invariant_state,
    sl2_standard,
    span_check,
    trivial_action,
    validate_heisenberg,
)
from vertexfock.ope import circle, locality_bound, wick
from vertexfock.winfinity import realize_current

BG1 = AlgebraDescriptor("bg", 1)
BG2 = AlgebraDescriptor("bg", 2)
TORUS1 = TorusAction(((1,),))


def test_extend_action_examples():
    op = extend_action(((1,),), BG1)
    assert op(generator_state(BETA, 1)) == generator_state(BETA, 1)
    assert op(generator_state(GAMMA, 1)) == (-1) * generator_state(GAMMA, 1)
    assert op(vacuum()) == State()
    # off-diagonal: e moves index 2 to index 1 on vectors
    e = ((0, 1), (0, 0))
    ope = extend_action(e, BG2)
    assert ope(generator_state(BETA, 2)) == generator_state(BETA, 1)
    assert ope(generator_state(BETA, 1)) == State()
    assert ope(generator_state(GAMMA, 1)) == (-1) * generator_state(GAMMA, 2)


def test_extend_action_preserves_bidegree():
    op = extend_action(((0, 1), (1, 0)), BG2)
    s = State({((BETA, 1, -2), (GAMMA, 2, -1)): Fraction(1)})
    img = op(s)
    assert weight(img) == weight(s)
    assert all(len(m) == 2 for m in img.terms)


def test_invariant_basis_torus():
    iv = invariant_basis(TORUS1, BG1, 1, 2)
    assert iv == [State({((BETA, 1, -1), (GAMMA, 1, -1)): Fraction(1)})]
    for d in range(1, 5):
        assert invariant_basis(TORUS1, BG1, 0, d) == []


def _sl2_weight_multiplicity_oracle(alg, w, d):
    """Multiplicity of the trivial module = (h-weight 0 count) - (h-weight 2 count)."""

    def h_weight(mono):
        q = 0
        for sp, idx, _ in mono:
            s = 1 if sp in (BETA, B) else -1
            q += s * (1 if idx == 1 else -1)
        return q

    monos = basis(alg, w, d)
    m0 = sum(1 for m in monos if h_weight(m) == 0)
    m2 = sum(1 for m in monos if h_weight(m) == 2)
    return m0 - m2


def test_invariant_basis_sl2():
    act = sl2_standard()
    for (w, d) in [(1, 2), (2, 2), (2, 4), (3, 3)]:
        got = len(invariant_basis(act, BG2, w, d))
        assert got == _sl2_weight_multiplicity_oracle(BG2, w, d), (w, d)
    for s in invariant_basis(act, BG2, 2, 4):
        assert is_invariant_state(act, BG2, s)


def test_finite_abelian():
    # Z/2 acting by -1 on the single coordinate: invariants are even words
    act = FiniteAbelianAction(((2, (1,)),))
    assert len(invariant_basis(act, BG1, 1, 2)) == len(basis(BG1, 1, 2))
    assert invariant_basis(act, BG1, 1, 1) == []
    dt = dim_table(act, BG1, 3, 3)
    gt = gr_dim_table(act, BG1, 3, 3)
    assert dt == gt


def test_dim_tables_match():
    cases = [
        (trivial_action(), BG1),
        (TORUS1, BG1),
        (TorusAction(((1, -1),)), BG2),
        (sl2_standard(), BG2),
    ]
    for act, alg in cases:
        dt = dim_table(act, alg, 4, 4)
        gt = gr_dim_table(act, alg, 4, 4)
        assert dt == gt
    rows = dim_table_csv_rows(dt, gt)
    assert all(r[4] for r in rows)
    assert rows[0] == [0, 0, 1, 1, True]


def test_trivial_action_counts_everything():
    dt = dim_table(trivial_action(), BG1, 3, 3)
    for w in range(4):
        for d in range(4):
            assert dt[(w, d)] == len(basis(BG1, w, d))


def test_invariants_closed_under_circle_products():
    rng = random.Random(9)
    pool = []
    for w in range(0, 4):
        for d in range(0, 5):
            pool += invariant_basis(TORUS1, BG1, w, d)
    for _ in range(20):
        a, b = rng.choice(pool), rng.choice(pool)
        for n in range(-2, locality_bound(a, b)):
            r = circle(a, n, b)
            if r:
                assert is_invariant_state(TORUS1, BG1, r)


def test_span_check_success():
    gens = [realize_current(l, BG1) for l in (0, 1, 2)]
    rep = span_check(gens, TORUS1, BG1, 4, 4)
    assert rep.ok
    assert rep.dims[4] == (12, 12)


def test_span_check_deficiency():
    rep = span_check([realize_current(0, BG1)], TORUS1, BG1, 3, 3)
    assert not rep.ok
    assert rep.first_deficiency == (2, 2, 1, 2)
    obj = rep.to_json()
    assert obj["status"] == "deficient"
    assert obj["first_deficiency"]["weight"] == 2


def test_span_check_empty_generators():
    rep = span_check([], trivial_action(), BG1, 0, 1)
    assert rep.ok
    assert rep.dims[0] == (1, 1)


def test_span_check_rejects_noninvariant():
    with pytest.raises(ValueError):
        span_check([generator_state(BETA, 1)], TORUS1, BG1, 2, 2)


def test_heisenberg_current():
    A = ((1,),)
    j = heisenberg_current((1,), A, BG1)
    assert j == realize_current(0, BG1)
    assert circle(j, 1, j) == Fraction(-1) * vacuum()
    assert circle(j, 0, j) == State()
    assert heisenberg_current((0,), A, BG1) == State()
    assert validate_heisenberg(A, BG1)
    A2 = ((1, 1),)
    j2 = heisenberg_current((1,), A2, BG2)
    assert circle(j2, 1, j2) == Fraction(-2) * vacuum()
    assert heisenberg_pairing((1,), (1,), A2) == Fraction(-2)
    assert validate_heisenberg(((1, 0), (0, 1)), BG2)


def test_commutant_regression_dims():
    j = heisenberg_current((1,), ((1,),), BG1)
    dims = {w: len(commutant_basis([j], BG1, w, 6)) for w in range(5)}
    assert dims == {0: 1, 1: 0, 2: 1, 3: 2, 4: 2}  # frozen regression values


def test_commutant_annihilation_and_wick_closure():
    j = heisenberg_current((1,), ((1,),), BG1)
    found = []
    for w in range(0, 4):
        found += commutant_basis([j], BG1, w, 6)
    for s in found:
        for k in range(0, 5):
            assert circle(j, k, s) == State()
    # Wick products of commutant elements stay in the commutant
    for a in found:
        for b in found:
            p = wick(a, b)
            if p:
                for k in range(0, weight(p) + 1):
                    assert circle(j, k, p) == State()


def test_nonfaithful_torus_warns():
    with pytest.warns(UserWarning):
        TorusAction(((1, 1), (2, 2)))
