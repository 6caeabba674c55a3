import random
from fractions import Fraction

import pytest

from hamfactor.dsolver import (build_complex_block, build_imaginary_block, build_real_pair_block,
                               build_zero_block, check_pair, compare_with_oracle, cross_pattern,
                               oracle_family, solve_family)
from hamfactor.exact import ParamMatrix, RatMatrix, substitute
from hamfactor.jordan import (JordanSpec, complex_quad, imaginary, real_pair, real_single, realize,
                              zero)
from hamfactor.sampling import random_point, random_rational, random_specs

from conftest import display


def _block(p: ParamMatrix, r0, r1, c0, c1) -> ParamMatrix:
    ent = [p[i, j] for i in range(r0, r1) for j in range(c0, c1)]
    return ParamMatrix(r1 - r0, c1 - c0, ent)


def test_zero_block_d4():
    expected = display([["0", "0", "0", "0"],
                        ["0", "0", "0", "d24"],
                        ["0", "0", "-d24", "0"],
                        ["0", "d24", "0", "d44"]], {"d24": "g1.d_2_4", "d44": "g1.d_4_4"})
    assert build_zero_block([4]) == expected


def test_zero_block_d5():
    expected = display([["0", "0", "0", "0", "d15"],
                        ["0", "0", "0", "-d15", "0"],
                        ["0", "0", "d15", "0", "d35"],
                        ["0", "-d15", "0", "-d35", "0"],
                        ["d15", "0", "d35", "0", "d55"]],
                       {"d15": "g1.d_1_5", "d35": "g1.d_3_5", "d55": "g1.d_5_5"})
    assert build_zero_block([5]) == expected


def test_cross_block_d45():
    fam = build_zero_block([4, 5])
    names = {f"d{k}5": f"g1.d_{k}_9" for k in range(1, 5)}
    expected = display([["0", "0", "0", "0", "d15"],
                        ["0", "0", "0", "-d15", "d25"],
                        ["0", "0", "d15", "-d25", "d35"],
                        ["0", "-d15", "d25", "-d35", "d45"]], names)
    assert _block(fam, 0, 4, 4, 9) == expected
    assert _block(fam, 4, 9, 0, 4) == expected.T


def test_poisson4_family(poisson4_spec):
    fam = solve_family(poisson4_spec)
    names = {"d14": "g1.d_1_4", "d22": "g1.d_2_2", "d24": "g1.d_2_4", "d44": "g1.d_4_4"}
    expected = display([["0", "0", "0", "d14"],
                        ["0", "d22", "-d14", "d24"],
                        ["0", "-d14", "0", "0"],
                        ["d14", "d24", "0", "d44"]], names)
    assert fam.general == expected
    assert fam.dim == 4


def test_not_symplectic_family(not_symplectic_spec):
    fam = solve_family(not_symplectic_spec)
    expected = display([["0", "0", "0", "d14"],
                        ["0", "0", "0", "d24"],
                        ["0", "0", "0", "0"],
                        ["d14", "d24", "0", "0"]], {"d14": "g1.d_1_4", "d24": "g1.d_2_4"})
    assert fam.general == expected
    assert build_real_pair_block(1, [1, 1], [2]) == expected


def test_real_pair_small():
    assert solve_family(JordanSpec.of(real_pair(1, [1]))).dim == 0
    fam = solve_family(JordanSpec.of(real_pair(1, [1], [1])))
    assert fam.general == display([["0", "d"], ["d", "0"]], {"d": "g1.d_1_2"})


def _rot_display(cells, names):
    """Expand a grid of 2x2 cell codes: "0", "a" (a I2), "b" (B(b i)), with optional minus."""
    n = len(cells)
    rows = [["0"] * (2 * n) for _ in range(2 * n)]
    for i, row in enumerate(cells):
        for j, code in enumerate(row):
            if code == "0":
                continue
            neg = code.startswith("-")
            sym = code.lstrip("-")
            s, t = ("-" if neg else ""), ("" if neg else "-")
            if sym.startswith("al"):
                rows[2 * i][2 * j] = rows[2 * i + 1][2 * j + 1] = s + sym
            else:
                rows[2 * i][2 * j + 1] = s + sym
                rows[2 * i + 1][2 * j] = t + sym
    return display(rows, names)


def test_imaginary_d8():
    names = {"be3": "g1.beta_1_4", "al2": "g1.alpha_2_4", "be1": "g1.beta_3_4", "al0": "g1.alpha_4_4"}
    expected = _rot_display([["0", "0", "0", "be3"],
                             ["0", "0", "-be3", "al2"],
                             ["0", "be3", "-al2", "be1"],
                             ["-be3", "al2", "-be1", "al0"]], names)
    assert build_imaginary_block(1, [4]) == expected


def test_imaginary_d10():
    names = {"al4": "g1.alpha_1_5", "be3": "g1.beta_2_5", "al2": "g1.alpha_3_5",
             "be1": "g1.beta_4_5", "al0": "g1.alpha_5_5"}
    expected = _rot_display([["0", "0", "0", "0", "al4"],
                             ["0", "0", "0", "-al4", "be3"],
                             ["0", "0", "al4", "-be3", "al2"],
                             ["0", "-al4", "be3", "-al2", "be1"],
                             ["al4", "-be3", "al2", "-be1", "al0"]], names)
    assert build_imaginary_block(1, [5]) == expected


def test_imaginary_single_cell():
    fam = solve_family(JordanSpec.of(imaginary(1, 1)))
    assert fam.dim == 1
    assert fam.matrices()[0] == RatMatrix.identity(2)


# dimensions frozen from oracle_family runs (vectorized kernel, independent of the closed form)
ORACLE_DIMS = [
    (JordanSpec.of(zero(3)), 2),
    (JordanSpec.of(complex_quad(1, 1, [1], [1])), 2),
    (JordanSpec.of(complex_quad(1, 1, [1])), 0),
    (JordanSpec.of(complex_quad(1, 2, [2], [2])), 4),
    (JordanSpec.build([real_single(1, 1), real_single(2, 1)]), 0),
]


@pytest.mark.parametrize("spec, dim", ORACLE_DIMS)
def test_frozen_oracle_dims(spec, dim):
    assert solve_family(spec).dim == dim
    assert oracle_family(realize(spec)).dim == dim


def test_oracle_examples(poisson4_spec):
    assert oracle_family(RatMatrix.zeros(2)).dim == 3
    assert oracle_family(RatMatrix.from_rows([[1, 0], [0, -1]])).dim == 1
    assert compare_with_oracle(poisson4_spec).agree
    assert solve_family(JordanSpec.of(zero(1, 1, 1))).dim == 6


def test_complex_builder_rejects():
    with pytest.raises(ValueError):
        build_complex_block(0, 1, [1], [1])
    with pytest.raises(ValueError):
        build_imaginary_block(0, [1])


def test_cross_pattern_counts():
    for a in range(1, 6):
        for b in range(1, 6):
            ts = {t for _, _, t, _ in cross_pattern(a, b)}
            assert ts == set(range(1, min(a, b) + 1))


@pytest.mark.parametrize("s", range(1, 8))
def test_param_count_formulas(s):
    assert len(build_zero_block([s]).params) == (s + 1) // 2
    for t in range(1, 6):
        cross = _block(build_zero_block(sorted([s, t])), 0, min(s, t), min(s, t), s + t)
        assert len(cross.params) == min(s, t)


def test_oracle_sweep_small():
    for spec in random_specs(40, seed=9, max_dim=7):
        assert compare_with_oracle(spec).agree, [b.describe() for b in spec.blocks]


def test_soundness_and_conservation():
    rng = random.Random(4)
    for spec in random_specs(30, seed=10, max_dim=8):
        b = realize(spec)
        fam = solve_family(spec)
        for d in fam.matrices():
            assert not check_pair(b, d)
            u = random_point(rng, spec.m)
            assert (u.T @ d @ b @ u).is_zero()
        for _ in range(10):
            asg = {p: random_rational(rng) for p in fam.params}
            d = substitute(fam.general, asg) if fam.params else RatMatrix.zeros(spec.m)
            assert d.is_symmetric() and (d @ b + b.T @ d).is_zero()


def test_check_pair_reports_entries():
    b = RatMatrix.shift(2)
    bad = RatMatrix.from_rows([[1, 0], [0, 0]])
    assert check_pair(b, bad) == ["DB not skew at (1,2)"]
    assert check_pair(b, RatMatrix.from_rows([[0, 1], [0, 0]]))[0].startswith("D not symmetric")


def test_zero_matrix_full_family():
    for m in range(1, 5):
        assert oracle_family(RatMatrix.zeros(m)).dim == m * (m + 1) // 2
        assert solve_family(JordanSpec.of(zero(*[1] * m))).dim == m * (m + 1) // 2


def test_basis_matches_general():
    fam = solve_family(JordanSpec.of(zero(2, 3)))
    for name, mat in fam.basis:
        one = {p: Fraction(int(p == name)) for p in fam.params}
        assert substitute(fam.general, one) == mat
