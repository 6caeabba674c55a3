from dataclasses import replace

import pytest

from hamfactor.classifier import Verdict
from hamfactor.exact import RatMatrix
from hamfactor.integrability import (IntegrityError, build_integrable, commutant, commutant_oracle,
                                     compare_commutant, pair_blocks, verify_system)
from hamfactor.jordan import (JordanSpec, complex_quad, complex_single, imaginary, real_pair,
                              real_single, realize, zero)
from hamfactor.sampling import random_specs


def test_commutant_examples():
    assert commutant(JordanSpec.of(real_single(1, 1, 1))).dim == 4
    assert commutant(JordanSpec.of(zero(2, 2))).dim == 8
    for s in range(2, 6):
        spec = JordanSpec.of(real_single(1, s))
        assert commutant(spec).dim == s == commutant_oracle(realize(spec)).dim


def test_commutant_basis_commutes():
    for spec in random_specs(20, seed=4, max_dim=8):
        b = realize(spec)
        fam = commutant(spec)
        for c in fam.matrices():
            assert c @ b == b @ c
        assert compare_commutant(spec, fam).agree


def test_commutant_toeplitz_cells():
    fam = commutant(JordanSpec.of(zero(2, 3)))
    g = fam.general
    # cell (2-block rows, 3-block cols) is flush right: column 3 of the pair block is free
    assert g[0, 2].is_zero() and not g[0, 3].is_zero() and g[0, 3] == g[1, 4]
    # cell (3-block rows, 2-block cols) is flush top
    assert not g[2, 0].is_zero() and g[4, 0].is_zero() and g[2, 0] == g[3, 1]


def test_pair_blocks():
    assert pair_blocks([1, 1], [2]) == [(1, 2), (1, None)]
    assert pair_blocks([3], [3]) == [(3, 3)]
    assert pair_blocks([2, 1], [1]) == [(2, 1), (1, None)]
    assert pair_blocks([], [2]) == [(None, 2)]


def _pair_cost(pairs):
    return sum(abs(a - b) for a, b in pairs if a is not None and b is not None)


def test_pair_blocks_tie_and_minimum():
    from itertools import permutations
    for plus, minus in (([1, 1], [2]), ([2, 1], [1]), ([3, 1], [2, 2]), ([1, 2, 3], [3, 1])):
        best = min(_pair_cost(list(zip(p, minus))) for p in permutations(plus))
        assert _pair_cost(pair_blocks(plus, minus)) <= best or len(plus) != len(minus)


@pytest.mark.parametrize("spec, p, q, verdict", [
    (JordanSpec.of(zero(2)), 1, 1, Verdict.PROPER_BIG_ISOTROPIC),
    (JordanSpec.of(zero(2, 2)), 1, 3, Verdict.POISSON),
    (JordanSpec.of(real_pair(1, [1], [1])), 1, 1, Verdict.SYMPLECTIC),
    (JordanSpec.of(real_pair(1, [2], [2])), 2, 2, Verdict.SYMPLECTIC),
    (JordanSpec.of(zero(3)), 1, 2, Verdict.POISSON),
    (JordanSpec.of(zero(4, 4)), 3, 5, Verdict.POISSON),
    (JordanSpec.of(imaginary(1, 1)), 1, 1, Verdict.SYMPLECTIC),
    (JordanSpec.of(complex_quad(1, 2, [2], [1])), 4, 2, Verdict.PRESYMPLECTIC),
    (JordanSpec.of(real_single(2, 3)), 3, 0, Verdict.TRIVIAL),
])
def test_named_systems(spec, p, q, verdict):
    s = build_integrable(spec)
    assert (s.p, s.q) == (p, q)
    assert s.structure.verdict == verdict
    assert s.transcript.passed


def test_zero2_integral():
    s = build_integrable(JordanSpec.of(zero(2)))
    assert s.vector_fields[0] == RatMatrix.shift(2)
    assert s.quadratic_integrals == (RatMatrix.from_rows([[0, 0], [0, 1]]),)


def test_zero22_casimirs():
    s = build_integrable(JordanSpec.of(zero(2, 2)))
    assert [tuple(li.covector.entries) for li in s.linear_integrals] == [(0, 1, 0, 0), (0, 0, 0, 1)]
    # witnesses are +-e3 and +-e1
    ws = sorted(tuple(abs(x) for x in li.witness.entries) for li in s.linear_integrals)
    assert ws == [(0, 0, 1, 0), (1, 0, 0, 0)]


def test_hyperbolic_integral():
    s = build_integrable(JordanSpec.of(real_pair(1, [1], [1])))
    assert s.d0 == RatMatrix.from_rows([[0, 1], [1, 0]])
    assert s.quadratic_integrals == (s.d0,)       # F = u1 u2 in the 1/2 convention


def test_zero_dynamics():
    s = build_integrable(JordanSpec.of(zero(1, 1, 1)))
    assert s.p == 1 and s.q == 2 and s.vector_fields[0].is_zero()
    assert s.transcript.passed


def test_random_systems_pass():
    for spec in random_specs(40, seed=21, max_dim=9):
        s = build_integrable(spec)
        assert s.p + s.q == spec.m and s.transcript.passed


def test_mixed_spectrum():
    spec = JordanSpec.build([zero(1, 2, 3), real_pair(1, [2], [1, 1]), imaginary(2, 2),
                             complex_single(1, 1, 1)])
    s = build_integrable(spec)
    assert s.structure.verdict == Verdict.PROPER_BIG_ISOTROPIC


def test_tamper_field_breaks_commutation():
    s = build_integrable(JordanSpec.of(real_pair(1, [2], [2])))
    cs = list(s.vector_fields)
    cs[1] = cs[1] + RatMatrix.unit(4, 1, 0)     # E12 would stay in the commutant
    t = verify_system(replace(s, vector_fields=tuple(cs)))
    assert not t.get("commutation").passed


def test_tamper_integral_breaks_annihilation():
    s = build_integrable(JordanSpec.of(zero(2, 2)))
    qs = list(s.quadratic_integrals)
    qs[0] = qs[0] + RatMatrix.unit(4, 0, 0)
    t = verify_system(replace(s, quadratic_integrals=tuple(qs)))
    assert not t.get("quadratic_annihilation").passed


def test_tamper_rescaled_field_caught_by_witness():
    s = build_integrable(JordanSpec.of(real_pair(1, [1, 3], [2])))
    k = s.field_labels.index("B on block")
    cs = list(s.vector_fields)
    cs[k] = cs[k] + RatMatrix.unit(s.m, 0, 0)
    t = verify_system(replace(s, vector_fields=tuple(cs)))
    assert t.get("commutation").passed
    assert not t.get("witness_consistency").passed


def test_integrity_error_carries_transcript():
    s = build_integrable(JordanSpec.of(zero(2)), verify=False)
    bad = replace(s, vector_fields=(RatMatrix.identity(2),))
    t = verify_system(bad)
    err = IntegrityError(t)
    assert err.transcript is t and "first_field" in str(err)


def test_transcript_seeded():
    spec = JordanSpec.of(zero(3, 3))
    a = build_integrable(spec, seed=5).transcript
    b = build_integrable(spec, seed=5).transcript
    assert a == b
