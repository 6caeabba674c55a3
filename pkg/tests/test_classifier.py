import random
from collections import Counter
from fractions import Fraction
from itertools import combinations_with_replacement

import pytest

from hamfactor.classifier import (ContractError, Verdict, classify, conserved_report,
                                  invertible_choice)
from hamfactor.dsolver import solve_family
from hamfactor.exact import RatMatrix, is_invertible, rank, substitute
from hamfactor.jordan import JordanSpec, complex_quad, imaginary, real_pair, real_single, realize, zero
from hamfactor.sampling import random_rational, random_specs


def _d(spec, **values):
    fam = solve_family(spec)
    return substitute(fam.general, {p: values.get(p.split(".")[1].replace("_", ""), 0)
                                    for p in fam.params})


def test_poisson4_poisson(poisson4_spec):
    b = realize(poisson4_spec)
    sc = classify(b, _d(poisson4_spec, d14=1))
    assert sc.verdict == Verdict.POISSON
    assert sc.structure_matrix == RatMatrix.from_rows(
        [[0, 0, -1, 0], [0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0]])


def test_poisson4_casimirs(poisson4_spec):
    b = realize(poisson4_spec)
    report = conserved_report(b, _d(poisson4_spec, d14=1))
    supports = sorted(next(i for i in range(4) if c.vector[i, 0]) for c in report.casimirs)
    assert supports == [1, 3]          # coordinates 2 and 4
    for c in report.casimirs:
        assert (b @ c.witness).is_zero()
        assert (c.vector.T @ b).is_zero()
    assert report.isotropic_fields == ()


def test_not_symplectic_presymplectic(not_symplectic_spec):
    b = realize(not_symplectic_spec)
    d = _d(not_symplectic_spec, d14=1)
    sc = classify(b, d)
    assert sc.verdict == Verdict.PRESYMPLECTIC
    assert sc.structure_matrix == RatMatrix.from_rows(
        [[0, 0, 0, -1], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0]])
    fields = {tuple(f.field.entries) for f in conserved_report(b, d).isotropic_fields}
    assert (0, 0, -1, 0) in fields and (0, 1, 0, 0) in fields and len(fields) == 2


def test_isotropic_fields_general_d24(not_symplectic_spec):
    b = realize(not_symplectic_spec)
    d = _d(not_symplectic_spec, d14=2, d24=3)
    for f in conserved_report(b, d).isotropic_fields:
        assert (d @ f.xi).is_zero()
        assert f.field == b @ f.xi
    # xi_2 = (-d24/d14, 1, 0, 0) is in ker D
    xi2 = RatMatrix.column([Fraction(-3, 2), 1, 0, 0])
    assert (d @ xi2).is_zero()


def test_proper_big_isotropic():
    b = RatMatrix.shift(2)
    sc = classify(b, RatMatrix.from_rows([[0, 0], [0, 1]]))
    assert sc.verdict == Verdict.PROPER_BIG_ISOTROPIC
    assert sc.kernel_witness == RatMatrix.column([1, 0])
    assert sc.null_pairing


def test_trivial_and_symplectic():
    b = realize(JordanSpec.of(zero(2)))
    assert classify(b, RatMatrix.zeros(2)).verdict == Verdict.TRIVIAL
    b = realize(JordanSpec.of(real_pair(1, [1], [1])))
    sc = classify(b, RatMatrix.from_rows([[0, 1], [1, 0]]))
    assert sc.verdict == Verdict.SYMPLECTIC and sc.structure_matrix.is_skew()
    report = conserved_report(b, RatMatrix.from_rows([[0, 1], [1, 0]]))
    assert report.casimirs == () and report.isotropic_fields == ()


def test_dirac():
    spec = JordanSpec.build([zero(1), real_pair(1, [1], [2])])
    b = realize(spec)
    d = _d(spec, d11=1)
    assert classify(b, d).verdict == Verdict.DIRAC


def test_contract_violations():
    b = RatMatrix.shift(2)
    with pytest.raises(ContractError, match="not symmetric"):
        classify(b, RatMatrix.from_rows([[0, 1], [0, 0]]))
    with pytest.raises(ContractError, match="not skew"):
        classify(b, RatMatrix.from_rows([[1, 0], [0, 0]]))
    with pytest.raises(ContractError):
        classify(b, RatMatrix.identity(3))


def test_verdict_invariants_random():
    rng = random.Random(8)
    for spec in random_specs(40, seed=12, max_dim=8):
        b = realize(spec)
        fam = solve_family(spec)
        asg = {p: random_rational(rng) for p in fam.params}
        d = substitute(fam.general, asg) if fam.params else RatMatrix.zeros(spec.m)
        sc = classify(b, d)
        if sc.verdict == Verdict.SYMPLECTIC:
            assert spec.m % 2 == 0 and is_invertible(b) and is_invertible(d)
        if sc.verdict in (Verdict.SYMPLECTIC, Verdict.PRESYMPLECTIC, Verdict.POISSON):
            assert sc.structure_matrix.is_skew()
        if sc.verdict == Verdict.PROPER_BIG_ISOTROPIC:
            w = sc.kernel_witness
            assert not w.is_zero() and (b @ w).is_zero() and (d @ w).is_zero()
        report = conserved_report(b, d)
        for c in report.casimirs:
            assert (c.vector.T @ b).is_zero() and c.vector == d @ c.witness
        for f in report.isotropic_fields:
            assert (d @ f.xi).is_zero() and not f.field.is_zero()


def _dichotomy(sizes):
    counts = Counter(sizes)
    return all(n % 2 == 0 for s, n in counts.items() if s % 2 == 0)


def test_invertible_choice_examples():
    for sizes in ([3], [2, 2], [1, 3], [1, 1]):
        spec = JordanSpec.of(zero(*sizes))
        asg, d = invertible_choice(spec, solve_family(spec))
        assert asg is not None and is_invertible(d)
    spec = JordanSpec.of(zero(2))
    asg, obstruction = invertible_choice(spec, solve_family(spec))
    assert asg is None and obstruction.column == 1


@pytest.mark.parametrize("k", [1, 2, 3])
def test_invertible_choice_dichotomy(k):
    for sizes in combinations_with_replacement(range(1, 6), k):
        spec = JordanSpec.of(zero(*sizes))
        fam = solve_family(spec)
        asg, out = invertible_choice(spec, fam)
        assert (asg is not None) == _dichotomy(sizes), sizes
        if asg is None:
            assert out.minors_vanish
            # the head columns span ker B and stay dependent for any member
            rng = random.Random(sum(sizes))
            d = substitute(fam.general, {p: random_rational(rng) for p in fam.params})
            assert rank(d) < spec.m


def test_invertible_choice_beyond_zero():
    for spec in (JordanSpec.of(real_pair(2, [1, 2], [2, 1])), JordanSpec.of(imaginary(1, 2, 3)),
                 JordanSpec.of(complex_quad(1, 1, [2], [2]))):
        asg, d = invertible_choice(spec, solve_family(spec))
        assert is_invertible(d)
    for spec in (JordanSpec.of(real_pair(1, [1], [2])), JordanSpec.of(real_single(1, 1))):
        asg, out = invertible_choice(spec, solve_family(spec))
        assert asg is None and out.reason
