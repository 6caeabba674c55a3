import re
from fractions import Fraction

import pytest

from hamfactor.exact import LinForm, ParamMatrix, RatMatrix
from hamfactor.jordan import JordanSpec, real_pair, zero

G = RatMatrix.from_rows([[0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]])
T_POISSON4 = RatMatrix.from_rows([[0, 0, 1, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 1, 0, 0]])


def display(rows, names=None):
    """ParamMatrix from rows of strings such as "-d15" or "0"; ``names`` renames symbols."""
    names = names or {}
    ent = []
    for row in rows:
        for cell in row:
            m = re.fullmatch(r"(-?)(\w*)", cell.strip())
            sign, sym = m.group(1), m.group(2)
            if sym == "0":
                ent.append(LinForm())
            elif sym.isdigit():
                ent.append(LinForm(Fraction(int(sym)) * (-1 if sign else 1)))
            else:
                ent.append(LinForm.param(names.get(sym, sym), -1 if sign else 1))
    return ParamMatrix(len(rows), len(rows[0]), ent)


@pytest.fixture
def poisson4_spec():
    return JordanSpec.of(zero(2, 2))


@pytest.fixture
def not_symplectic_spec():
    return JordanSpec.of(real_pair(1, [1, 1], [2]))
