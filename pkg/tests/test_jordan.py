import random

import pytest

from hamfactor.dsolver import oracle_family, solve_family
from hamfactor.exact import RatMatrix, ShapeError, kernel_basis
from hamfactor.integrability import commutant_oracle
from hamfactor.jordan import (Conjugation, JordanSpec, SpecError, complex_quad, complex_single,
                              conjugate, imaginary, pushforward_D, real_pair, real_single, realize,
                              spec_from_json, spec_to_json, zero)
from hamfactor.sampling import random_invertible, random_specs

from conftest import G, T_POISSON4

SCHEMA_EXAMPLE = {"version": 1, "blocks": [
    {"kind": "zero", "sizes": [1, 1, 3]},
    {"kind": "real_pair", "lambda": "3/2", "sizes_plus": [1, 2], "sizes_minus": [2]},
    {"kind": "imaginary", "b": "1", "sizes": [2]},
    {"kind": "complex_quad", "a": "1", "b": "2", "sizes_plus": [1], "sizes_minus": [1]},
    {"kind": "real_single", "lambda": "5", "sizes": [2]},
    {"kind": "complex_single", "a": "1", "b": "1", "sizes": [1]}]}


def test_realize_examples():
    assert realize(JordanSpec.of(zero(2))) == RatMatrix.from_rows([[0, 1], [0, 0]])
    assert realize(JordanSpec.of(imaginary(1, 1))) == RatMatrix.from_rows([[0, 1], [-1, 0]])
    expected = RatMatrix.from_rows([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 1], [0, 0, 0, -1]])
    assert realize(JordanSpec.of(real_pair(1, [1, 1], [2]))) == expected


def test_complex_partner_cell():
    b = realize(JordanSpec.of(complex_quad(1, 2, [1], [1])))
    assert b == RatMatrix.from_rows([[1, 2, 0, 0], [-2, 1, 0, 0], [0, 0, -1, 2], [0, 0, -2, -1]])


def test_canonical_order_and_permutation():
    spec = JordanSpec.build([real_single(5, 2), zero(3, 1)])
    assert [b.kind for b in spec.blocks] == ["zero", "real_single"]
    assert spec.blocks[0].sizes == (1, 3)
    assert spec.permutation == (1, 0)


@pytest.mark.parametrize("blocks, fragment", [
    ([], "no blocks"),
    ([zero()], "no Jordan blocks"),
    ([zero(0)], "size < 1"),
    ([real_pair(-1, [1], [1])], "lambda > 0"),
    ([imaginary(0, 1)], "b > 0"),
    ([real_pair(1, [1]), real_single(-1, 1)], "already claimed"),
    ([zero(1), zero(2)], "already claimed"),
])
def test_validation_errors(blocks, fragment):
    with pytest.raises(SpecError, match=fragment):
        JordanSpec.build(blocks)


def test_json_round_trip():
    spec, mat, conj = spec_from_json(SCHEMA_EXAMPLE)
    assert mat is None and conj is None
    assert spec.m == 5 + 5 + 4 + 4 + 2 + 2
    again, _, _ = spec_from_json(spec_to_json(spec))
    assert again == spec


@pytest.mark.parametrize("doc", [
    {"version": 2, "blocks": [{"kind": "zero", "sizes": [1]}]},
    {"version": 1, "blocks": [{"kind": "zero", "sizes": [1], "colour": "red"}]},
    {"version": 1, "blocks": [{"kind": "real_pair", "lambda": 1.5, "sizes_plus": [1]}]},
    {"version": 1, "blocks": [{"kind": "zero", "sizes": [1]}], "extra": 1},
])
def test_json_rejects(doc):
    with pytest.raises(SpecError):
        spec_from_json(doc)


def test_matrix_with_witness():
    doc = {"version": 1, "blocks": [{"kind": "zero", "sizes": [2, 2]}],
           "matrix": [[str(x) for x in r] for r in G.tolist()],
           "t": [[str(x) for x in r] for r in T_POISSON4.tolist()]}
    spec, mat, conj = spec_from_json(doc)
    assert mat == G and conj.t == T_POISSON4
    doc["matrix"] = [["1", "0", "0", "0"]] + doc["matrix"][1:]
    with pytest.raises(SpecError):
        spec_from_json(doc)


def test_conjugate_examples():
    b = realize(JordanSpec.of(zero(2, 2)))
    assert conjugate(b, Conjugation.identity(4)) == b
    c = Conjugation.of(T_POISSON4)
    assert conjugate(G, c) == b
    assert conjugate(conjugate(G, c), c.inverted()) == G
    with pytest.raises(ShapeError):
        conjugate(RatMatrix.identity(3), c)
    with pytest.raises(SpecError):
        Conjugation.of(RatMatrix.zeros(2))


def test_pushforward_back_to_g_frame():
    c = Conjugation.of(T_POISSON4)
    fam = solve_family(JordanSpec.of(zero(2, 2)))
    assert pushforward_D(fam.general, Conjugation.identity(4)) == fam.general
    for d in fam.matrices():
        back = pushforward_D(d, c.inverted())
        assert back.is_symmetric()
        assert (back @ G).is_skew()


def test_pushforward_keeps_symmetry():
    rng = random.Random(3)
    d = RatMatrix.from_rows([[1, 2, 0], [2, 0, 5], [0, 5, -1]])
    for _ in range(5):
        t = random_invertible(rng, 3)
        assert pushforward_D(d, Conjugation.of(t)).is_symmetric()


def test_conjugacy_invariance_of_dimensions():
    rng = random.Random(11)
    for spec in random_specs(12, seed=5, max_dim=6):
        b = realize(spec)
        c = Conjugation.of(random_invertible(rng, spec.m))
        moved = c.t @ b @ c.t_inv            # T^-1 moved T = b
        assert conjugate(moved, c) == b
        assert oracle_family(moved).dim == oracle_family(b).dim
        assert commutant_oracle(moved).dim == commutant_oracle(b).dim


def _charpoly(m: RatMatrix):
    """Faddeev-LeVerrier coefficients, highest degree first."""
    n = m.rows
    coeffs = [1]
    mk = RatMatrix.zeros(n)
    ident = RatMatrix.identity(n)
    for k in range(1, n + 1):
        mk = m @ (mk + ident.scale(coeffs[-1]))
        trace = sum(mk[i, i] for i in range(n))
        coeffs.append(-trace / k)
    return coeffs


def _polymul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _expected_charpoly(spec):
    poly = [1]
    for blk in spec.blocks:
        from hamfactor.jordan import group_blocks
        for sign, s, _ in group_blocks(blk):
            if blk.cell == 1:
                lam = 0 if blk.kind == "zero" else (blk.lam if sign != "-" else -blk.lam)
                factor = [1, -lam]
            else:
                a = 0 if blk.kind == "imaginary" else (blk.a if sign != "-" else -blk.a)
                factor = [1, -2 * a, a * a + blk.b * blk.b]
            for _ in range(s):
                poly = _polymul(poly, factor)
    return poly


def test_charpoly_factors():
    for spec in random_specs(30, seed=2, max_dim=6):
        assert _charpoly(realize(spec)) == _expected_charpoly(spec)


def test_realize_deterministic():
    spec, _, _ = spec_from_json(SCHEMA_EXAMPLE)
    assert realize(spec) == realize(spec)
    assert kernel_basis(realize(JordanSpec.of(complex_single(1, 1, 2)))) == []
