"""Exact rational and parametric linear algebra.

Scalars are :class:`fractions.Fraction`. Matrices are immutable; every
operation returns a new value. Elimination is fraction-free: rows are scaled
to primitive integer vectors and combined by cross-multiplication, so no
intermediate fraction ever appears during kernel, rank or solve.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

Rational = Fraction


class ShapeError(ValueError):
    """Operand dimensions do not agree."""


class UnknownParameterError(KeyError):
    """An assignment names a parameter the matrix does not have."""


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (also accepts ints and Fractions)."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    s = text.strip()
    if not s or any(c in s for c in ".eE") or s.count("/") > 1:
        raise ValueError(f"not a rational: {text!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# --------------------------------------------------------------------------
# Dense rational matrices


class RatMatrix:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        ent = tuple(Fraction(x) for x in entries)
        if len(ent) != rows * cols:
            raise ShapeError(f"{len(ent)} entries for a {rows}x{cols} matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", ent)

    def __setattr__(self, name, value):
        raise AttributeError("RatMatrix is immutable")

    # construction -------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RatMatrix":
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if n else 0
        if any(len(r) != m for r in rows):
            raise ShapeError("ragged rows")
        return cls(n, m, (x for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "RatMatrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def column(cls, values: Sequence) -> "RatMatrix":
        return cls(len(values), 1, values)

    @classmethod
    def unit(cls, n: int, i: int, j: int, cols: int | None = None) -> "RatMatrix":
        """Matrix with a single 1 at 0-based position (i, j)."""
        cols = n if cols is None else cols
        ent = [0] * (n * cols)
        ent[i * cols + j] = 1
        return cls(n, cols, ent)

    @classmethod
    def shift(cls, n: int, k: int = 1) -> "RatMatrix":
        """Ones on the k-th superdiagonal."""
        return cls(n, n, (1 if j - i == k else 0 for i in range(n) for j in range(n)))

    # access -------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return self.entries[j::self.cols]

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "RatMatrix":
        return RatMatrix(r1 - r0, c1 - c0,
                         (self[i, j] for i in range(r0, r1) for j in range(c0, c1)))

    # algebra ------------------------------------------------------------
    @property
    def T(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows,
                         (self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        _same_shape(self, other)
        return RatMatrix(self.rows, self.cols, (a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        _same_shape(self, other)
        return RatMatrix(self.rows, self.cols, (a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, (-a for a in self.entries))

    def scale(self, c) -> "RatMatrix":
        c = Fraction(c)
        return RatMatrix(self.rows, self.cols, (c * a for a in self.entries))

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        return mat_mul(self, other)

    def __pow__(self, k: int) -> "RatMatrix":
        if self.rows != self.cols or k < 0:
            raise ShapeError("power of a non-square matrix or negative exponent")
        out = RatMatrix.identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out

    def __eq__(self, other) -> bool:
        return (isinstance(other, RatMatrix) and self.shape == other.shape
                and self.entries == other.entries)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in self.row(i)) for i in range(self.rows))
        return f"RatMatrix({self.rows}x{self.cols}: [{body}])"

    # predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and self == self.T

    def is_skew(self) -> bool:
        return self.is_square() and (self + self.T).is_zero()


def _same_shape(a, b) -> None:
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch {a.shape} vs {b.shape}")


def block_diag(blocks: Sequence[RatMatrix]) -> RatMatrix:
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    ent = [Fraction(0)] * (n * m)
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                ent[(r0 + i) * m + c0 + j] = b[i, j]
        r0 += b.rows
        c0 += b.cols
    return RatMatrix(n, m, ent)


def hstack(mats: Sequence[RatMatrix]) -> RatMatrix:
    rows = mats[0].rows
    if any(x.rows != rows for x in mats):
        raise ShapeError("hstack row mismatch")
    return RatMatrix.from_rows([sum((list(x.row(i)) for x in mats), []) for i in range(rows)])


def vstack(mats: Sequence[RatMatrix]) -> RatMatrix:
    cols = mats[0].cols
    if any(x.cols != cols for x in mats):
        raise ShapeError("vstack column mismatch")
    return RatMatrix(sum(x.rows for x in mats), cols, (e for x in mats for e in x.entries))


def vec(m: RatMatrix) -> RatMatrix:
    """Row-major flattening into a column vector."""
    return RatMatrix.column(m.entries)


# --------------------------------------------------------------------------
# Affine-linear forms and parametric matrices


class LinForm:
    """``constant + sum(coef * param)`` with exact coefficients."""

    __slots__ = ("constant", "terms")

    def __init__(self, constant=0, terms: Mapping[str, object] | None = None):
        t = {}
        for k, v in (terms or {}).items():
            v = Fraction(v)
            if v:
                t[k] = v
        object.__setattr__(self, "constant", Fraction(constant))
        object.__setattr__(self, "terms", t)

    def __setattr__(self, name, value):
        raise AttributeError("LinForm is immutable")

    @classmethod
    def param(cls, name: str, coef=1) -> "LinForm":
        return cls(0, {name: coef})

    def __add__(self, other) -> "LinForm":
        other = _as_form(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return LinForm(self.constant + other.constant, t)

    __radd__ = __add__

    def __neg__(self) -> "LinForm":
        return LinForm(-self.constant, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> "LinForm":
        return self + (-_as_form(other))

    def __rsub__(self, other) -> "LinForm":
        return _as_form(other) - self

    def __mul__(self, c) -> "LinForm":
        if isinstance(c, LinForm):
            if c.terms and self.terms:
                raise TypeError("product of two parametric forms is not affine")
            if c.terms:
                return c * self.constant
            c = c.constant
        c = Fraction(c)
        return LinForm(self.constant * c, {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        other = _as_form(other)
        return self.constant == other.constant and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.constant, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.constant and not self.terms

    def params(self) -> set[str]:
        return set(self.terms)

    def evaluate(self, assignment: Mapping[str, Fraction]) -> "LinForm":
        """Substitute the assigned names; unassigned names stay symbolic."""
        const = self.constant
        rest = {}
        for k, v in self.terms.items():
            if k in assignment:
                const += v * Fraction(assignment[k])
            else:
                rest[k] = v
        return LinForm(const, rest)

    def __call__(self, assignment: Mapping[str, Fraction]) -> Fraction:
        out = self.evaluate(assignment)
        if out.terms:
            raise UnknownParameterError(f"unassigned parameters {sorted(out.terms)}")
        return out.constant

    def __repr__(self) -> str:
        parts = [format_rational(self.constant)] if self.constant or not self.terms else []
        parts += [f"{format_rational(v)}*{k}" for k, v in sorted(self.terms.items())]
        return " + ".join(parts)


def _as_form(x) -> LinForm:
    return x if isinstance(x, LinForm) else LinForm(x)


ZERO_FORM = LinForm()


class ParamMatrix:
    """Matrix of :class:`LinForm` entries with an ordered parameter list."""

    __slots__ = ("rows", "cols", "entries", "params")

    def __init__(self, rows: int, cols: int, entries: Iterable, params: Sequence[str] | None = None):
        ent = tuple(_as_form(x) for x in entries)
        if len(ent) != rows * cols:
            raise ShapeError(f"{len(ent)} entries for a {rows}x{cols} matrix")
        seen = set().union(*(e.params() for e in ent)) if ent else set()
        if params is None:
            params = sorted(seen)
        params = tuple(params)
        if set(params) != seen or len(set(params)) != len(params):
            raise ValueError(f"parameter list {params} does not match entries {sorted(seen)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", ent)
        object.__setattr__(self, "params", params)

    def __setattr__(self, name, value):
        raise AttributeError("ParamMatrix is immutable")

    @classmethod
    def from_rat(cls, m: RatMatrix) -> "ParamMatrix":
        return cls(m.rows, m.cols, m.entries, ())

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> LinForm:
        i, j = ij
        return self.entries[i * self.cols + j]

    def col_forms(self, j: int) -> tuple[LinForm, ...]:
        return self.entries[j::self.cols]

    @property
    def T(self) -> "ParamMatrix":
        return ParamMatrix(self.cols, self.rows,
                           (self[i, j] for j in range(self.cols) for i in range(self.rows)),
                           self.params)

    def __add__(self, other: "ParamMatrix") -> "ParamMatrix":
        _same_shape(self, other)
        other = other if isinstance(other, ParamMatrix) else ParamMatrix.from_rat(other)
        params = list(self.params) + [p for p in other.params if p not in self.params]
        ent = [a + b for a, b in zip(self.entries, other.entries)]
        return ParamMatrix(self.rows, self.cols, ent, _used(params, ent))

    def __neg__(self) -> "ParamMatrix":
        return ParamMatrix(self.rows, self.cols, (-a for a in self.entries), self.params)

    def __sub__(self, other) -> "ParamMatrix":
        other = other if isinstance(other, ParamMatrix) else ParamMatrix.from_rat(other)
        return self + (-other)

    def __matmul__(self, other: RatMatrix) -> "ParamMatrix":
        return mat_mul(self, other)

    def rmul(self, left: RatMatrix) -> "ParamMatrix":
        """``left @ self`` for a rational ``left``."""
        return mat_mul(self.T, left.T).T

    def __eq__(self, other) -> bool:
        return (isinstance(other, ParamMatrix) and self.shape == other.shape
                and self.entries == other.entries)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and self == self.T

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def __repr__(self) -> str:
        return f"ParamMatrix({self.rows}x{self.cols}, params={list(self.params)})"


def _used(params: Sequence[str], entries: Sequence[LinForm]) -> list[str]:
    seen = set().union(*(e.params() for e in entries)) if entries else set()
    return [p for p in params if p in seen]


def param_block_diag(blocks: Sequence[ParamMatrix | RatMatrix]) -> ParamMatrix:
    blocks = [b if isinstance(b, ParamMatrix) else ParamMatrix.from_rat(b) for b in blocks]
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    ent: list[LinForm] = [ZERO_FORM] * (n * m)
    params: list[str] = []
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                ent[(r0 + i) * m + c0 + j] = b[i, j]
        params += [p for p in b.params if p not in params]
        r0 += b.rows
        c0 += b.cols
    return ParamMatrix(n, m, ent, params)


# --------------------------------------------------------------------------
# Operations


def mat_mul(a, b: RatMatrix):
    """Exact product; ``a`` may be parametric, ``b`` must be rational."""
    if isinstance(b, ParamMatrix):
        if isinstance(a, ParamMatrix):
            raise TypeError("at most one operand may be parametric")
        return b.rmul(a)
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    n, k, m = a.rows, a.cols, b.cols
    bcols = [b.col(j) for j in range(m)]
    if isinstance(a, ParamMatrix):
        out = []
        for i in range(n):
            arow = a.entries[i * k:(i + 1) * k]
            for j in range(m):
                acc_c = Fraction(0)
                acc_t: dict[str, Fraction] = {}
                for x, y in zip(arow, bcols[j]):
                    if not y:
                        continue
                    acc_c += x.constant * y
                    for name, v in x.terms.items():
                        acc_t[name] = acc_t.get(name, 0) + v * y
                out.append(LinForm(acc_c, acc_t))
        return ParamMatrix(n, m, out, _used(a.params, out))
    ent = []
    for i in range(n):
        arow = a.entries[i * k:(i + 1) * k]
        nz = [(t, x) for t, x in enumerate(arow) if x]
        for j in range(m):
            col = bcols[j]
            ent.append(sum((x * col[t] for t, x in nz), Fraction(0)))
    return RatMatrix(n, m, ent)


def substitute(p: ParamMatrix, assignment: Mapping[str, object]):
    """Evaluate ``p``; a full assignment gives a RatMatrix, a partial one a ParamMatrix."""
    unknown = [k for k in assignment if k not in p.params]
    if unknown:
        raise UnknownParameterError(f"unknown parameters {unknown}")
    asg = {k: Fraction(v) for k, v in assignment.items()}
    ent = [e.evaluate(asg) for e in p.entries]
    rest = [q for q in p.params if q not in asg]
    if not rest:
        return RatMatrix(p.rows, p.cols, (e.constant for e in ent))
    return ParamMatrix(p.rows, p.cols, ent, _used(rest, ent))


def constant_part(p: ParamMatrix) -> RatMatrix:
    return RatMatrix(p.rows, p.cols, (e.constant for e in p.entries))


# --------------------------------------------------------------------------
# Fraction-free sparse elimination


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        row = {k: v // g for k, v in row.items()}
    return row


def _int_rows(rows: Iterable[Sequence[Fraction]]) -> list[dict[int, int]]:
    out = []
    for r in rows:
        den = 1
        for x in r:
            if x:
                den = den * x.denominator // gcd(den, x.denominator)
        d = {j: int(x * den) for j, x in enumerate(r) if x}
        out.append(_primitive(d))
    return out


def _combine(row: dict[int, int], piv: dict[int, int], col: int) -> dict[int, int]:
    """Eliminate ``col`` from ``row`` using ``piv``: piv[col]*row - row[col]*piv."""
    a = piv[col]
    b = row[col]
    g = gcd(a, b)
    a //= g
    b //= g
    out = {k: a * v for k, v in row.items()}
    for k, v in piv.items():
        nv = out.get(k, 0) - b * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return _primitive(out)


def _echelon(rows: list[dict[int, int]], pivot_limit: int | None = None):
    """Fully reduced echelon form. Returns (pivots{col: row}, inconsistent).

    Pivots are only chosen among columns < ``pivot_limit``; a row that reduces
    to entries solely at or beyond the limit marks the system inconsistent.
    """
    pivots: dict[int, dict[int, int]] = {}
    inconsistent = False
    for row in rows:
        if not row:
            continue
        for pc in sorted(set(row) & pivots.keys()):
            if pc in row:
                row = _combine(row, pivots[pc], pc)
        if not row:
            continue
        cands = [c for c in row if pivot_limit is None or c < pivot_limit]
        if not cands:
            inconsistent = True
            continue
        pc = min(cands)
        if row[pc] < 0:
            row = {k: -v for k, v in row.items()}
        for oc, orow in list(pivots.items()):
            if pc in orow:
                pivots[oc] = _combine(orow, row, pc)
        pivots[pc] = row
    return pivots, inconsistent


def rank(m: RatMatrix) -> int:
    pivots, _ = _echelon(_int_rows(m.row(i) for i in range(m.rows)))
    return len(pivots)


def kernel_basis(m: RatMatrix) -> list[RatMatrix]:
    """Basis of the right null space as column vectors (free-variable order)."""
    pivots, _ = _echelon(_int_rows(m.row(i) for i in range(m.rows)))
    free = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * m.cols
        x[f] = Fraction(1)
        for pc, row in pivots.items():
            if f in row:
                x[pc] = Fraction(-row[f], row[pc])
        basis.append(RatMatrix.column(x))
    return basis


def solve_linear(a: RatMatrix, b: RatMatrix) -> RatMatrix | None:
    """Some X with a @ X == b, or None when no solution exists."""
    if a.rows != b.rows:
        raise ShapeError(f"row mismatch {a.shape} vs {b.shape}")
    n = a.cols
    aug = [list(a.row(i)) + list(b.row(i)) for i in range(a.rows)]
    pivots, inconsistent = _echelon(_int_rows(aug), pivot_limit=n)
    if inconsistent:
        return None
    x = [[Fraction(0)] * b.cols for _ in range(n)]
    for pc, row in pivots.items():
        for j in range(b.cols):
            v = row.get(n + j)
            if v:
                x[pc][j] = Fraction(v, row[pc])
    return RatMatrix.from_rows(x) if n else RatMatrix(0, b.cols, [])


def inverse(a: RatMatrix) -> RatMatrix | None:
    if not a.is_square():
        raise ShapeError("inverse of a non-square matrix")
    if rank(a) < a.rows:
        return None
    return solve_linear(a, RatMatrix.identity(a.rows))


def is_invertible(a: RatMatrix) -> bool:
    return a.is_square() and rank(a) == a.rows


def columns_to_matrix(vectors: Sequence[RatMatrix], n: int) -> RatMatrix:
    if not vectors:
        return RatMatrix(n, 0, [])
    return hstack(list(vectors))
