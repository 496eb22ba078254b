"""Formal deformation quantization for constant antisymmetric Poisson tensors.

The star product implemented here is the Moyal product

    a * b = sum_r  h^r / (2^r r!) *
            sum    T(i1,j1)...T(ir,jr) (d_{i1}..d_{ir} a)(d_{j1}..d_{jr} b)

truncated at a fixed order N.  For constant tensors this is associative at
every order, the degree-0 coefficient of a*b is the commutative product ab,
and the h-coefficient of the star commutator is exactly the Poisson bracket.
In characteristic p the coefficients divide by r! and 2^r, so contexts
require N < p (and N = 0 when p = 2).
"""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import product as iter_product

from .errors import (
    BadTensorFile,
    CharacteristicTooSmall,
    FieldMismatch,
    ShapeMismatch,
    UnknownVariable,
)
from .fields import Field, Scalar
from .genmat import GenericMatrix
from .rings import CommPoly, Variable, parse_variable_name


class PoissonTensor:
    """Constant antisymmetric tensor on an ordered variable list."""

    __slots__ = ("variables", "entries", "field")

    def __init__(self, variables, entries, field: Field):
        variables = tuple(variables)
        index = {v: k for k, v in enumerate(variables)}
        if len(index) != len(variables):
            raise BadTensorFile("duplicate variables in tensor")
        clean = {}
        for (i, j), c in entries.items():
            if not (0 <= i < len(variables) and 0 <= j < len(variables)):
                raise BadTensorFile(f"entry index ({i},{j}) out of range")
            if i >= j:
                raise BadTensorFile("entries must list the upper triangle only (i < j)")
            if not isinstance(c, Scalar):
                c = field.scalar(c)
            elif c.field != field:
                raise FieldMismatch("tensor entry over a different field")
            if (i, j) in clean:
                raise BadTensorFile(f"duplicate entry ({i},{j})")
            if c:
                clean[(i, j)] = c
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "entries", clean)
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("PoissonTensor is immutable")

    def check_variables(self, polys):
        allowed = set(self.variables)
        for p in polys:
            extra = p.variables() - allowed
            if extra:
                name = sorted(extra, key=lambda v: v.sort_key())[0]
                raise UnknownVariable(f"{name} is not a tensor variable")

    def ordered_pairs(self):
        """All ordered (vi, vj, weight) with nonzero weight, both orientations."""
        out = []
        for (i, j), c in sorted(self.entries.items()):
            out.append((self.variables[i], self.variables[j], c))
            out.append((self.variables[j], self.variables[i], -c))
        return out

    def __eq__(self, other):
        return (
            isinstance(other, PoissonTensor)
            and self.variables == other.variables
            and self.entries == other.entries
            and self.field == other.field
        )

    def to_dict(self):
        return {
            "variables": [str(v) for v in self.variables],
            "entries": [[i, j, str(c)] for (i, j), c in sorted(self.entries.items())],
        }

    @staticmethod
    def from_dict(obj, field: Field) -> PoissonTensor:
        try:
            variables = [parse_variable_name(t) for t in obj["variables"]]
            entries = {(int(i), int(j)): field.scalar(str(c)) for i, j, c in obj["entries"]}
        except (KeyError, TypeError, ValueError) as exc:
            raise BadTensorFile(f"malformed tensor object: {exc}") from exc
        return PoissonTensor(variables, entries, field)

    @staticmethod
    def load(path, field: Field) -> PoissonTensor:
        with open(path, "r", encoding="utf-8") as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise BadTensorFile(f"not valid JSON: {exc}") from exc
        return PoissonTensor.from_dict(obj, field)


def pairing_tensor(first_vars, second_vars, field: Field) -> PoissonTensor:
    """{a_k, b_k} = 1 for the paired lists, every other bracket zero."""
    first_vars, second_vars = list(first_vars), list(second_vars)
    if len(first_vars) != len(second_vars):
        raise BadTensorFile("pairing needs two variable lists of equal length")
    variables = first_vars + second_vars
    m = len(first_vars)
    entries = {(k, m + k): field.one for k in range(m)}
    return PoissonTensor(variables, entries, field)


def entry_pairing_tensor(s: int, n: int, field: Field) -> PoissonTensor:
    """The default "pairing" tensor on matrix-entry variables.

    Pairs the entries of consecutive generators: {x<2k-1>[i,j], x<2k>[i,j]} = 1.
    """
    first, second = [], []
    for l in range(1, s + 1, 2):
        if l + 1 > s:
            break
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                first.append(Variable.entry(l, i, j))
                second.append(Variable.entry(l + 1, i, j))
    if not first:
        # single-generator universe: all brackets vanish
        variables = [Variable.entry(1, i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
        return PoissonTensor(variables, {}, field)
    return pairing_tensor(first, second, field)


def poisson_bracket(a: CommPoly, b: CommPoly, tensor: PoissonTensor) -> CommPoly:
    """{a, b} for the constant tensor: sum T(i,j) (da/dv_i)(db/dv_j)."""
    tensor.check_variables([a, b])
    acc = CommPoly.zero(a.field)
    for (i, j), c in tensor.entries.items():
        vi, vj = tensor.variables[i], tensor.variables[j]
        term = a.diff(vi) * b.diff(vj) - a.diff(vj) * b.diff(vi)
        acc = acc + term.scale(c)
    return acc


class StarContext:
    """A Poisson tensor plus a truncation order for the star product."""

    __slots__ = ("tensor", "order", "field", "_weights")

    def __init__(self, tensor: PoissonTensor, order: int):
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        p = tensor.field.p
        if p and (order >= p or (p == 2 and order >= 1)):
            raise CharacteristicTooSmall(
                f"order {order} star product needs 2^r * r! invertible for r <= {order}, "
                f"impossible in characteristic {p}"
            )
        object.__setattr__(self, "tensor", tensor)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "field", tensor.field)
        weights = []
        for r in range(order + 1):
            denom = 2**r
            for k in range(1, r + 1):
                denom *= k
            weights.append(self.field.scalar(Fraction(1, denom)))
        object.__setattr__(self, "_weights", tuple(weights))

    def __setattr__(self, name, value):
        raise AttributeError("StarContext is immutable")

    def bilinear_map(self, r: int, a: CommPoly, b: CommPoly) -> CommPoly:
        """B_r(a, b); B_0 is the commutative product."""
        if r == 0:
            return a * b
        pairs = self.tensor.ordered_pairs()
        acc = CommPoly.zero(self.field)
        for combo in iter_product(pairs, repeat=r):
            da, db = a, b
            weight = self.field.one
            dead = False
            for vi, vj, w in combo:
                weight = weight * w
                da = da.diff(vi)
                if da.is_zero:
                    dead = True
                    break
            if dead:
                continue
            for _, vj, _w in combo:
                db = db.diff(vj)
                if db.is_zero:
                    dead = True
                    break
            if dead:
                continue
            acc = acc + (da * db).scale(weight)
        return acc.scale(self._weights[r])


class FormalSeries:
    """Truncated power series in h with CommPoly coefficients."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != order + 1:
            raise ValueError("need exactly order+1 coefficients")
        field = coeffs[0].field
        for c in coeffs:
            if c.field != field:
                raise FieldMismatch("series coefficients over different fields")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("FormalSeries is immutable")

    @property
    def field(self) -> Field:
        return self.coeffs[0].field

    @staticmethod
    def from_poly(p: CommPoly, order: int) -> FormalSeries:
        zero = CommPoly.zero(p.field)
        return FormalSeries(order, [p] + [zero] * order)

    @staticmethod
    def zero(field: Field, order: int) -> FormalSeries:
        return FormalSeries(order, [CommPoly.zero(field)] * (order + 1))

    @staticmethod
    def one(field: Field, order: int) -> FormalSeries:
        return FormalSeries.from_poly(CommPoly.one(field), order)

    def coefficient(self, r: int) -> CommPoly:
        return self.coeffs[r]

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coeffs)

    def _check(self, other) -> FormalSeries:
        if not isinstance(other, FormalSeries):
            raise TypeError(f"expected FormalSeries, got {other!r}")
        if other.order != self.order:
            raise ShapeMismatch("series with different truncation orders")
        if other.field != self.field:
            raise FieldMismatch("series over different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FormalSeries(self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        other = self._check(other)
        return FormalSeries(self.order, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return FormalSeries(self.order, [-c for c in self.coeffs])

    def __eq__(self, other):
        return (
            isinstance(other, FormalSeries)
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __str__(self):
        parts = []
        for r, c in enumerate(self.coeffs):
            if c.is_zero:
                continue
            h = "" if r == 0 else ("h" if r == 1 else f"h^{r}")
            parts.append(f"({c})" + (f"*{h}" if h else ""))
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"FormalSeries({self})"


def star_mul(a: FormalSeries, b: FormalSeries, ctx: StarContext) -> FormalSeries:
    """Star product of two series, truncated at the context order."""
    a._check(b)
    if a.order != ctx.order:
        raise ShapeMismatch("series order differs from context order")
    ctx.tensor.check_variables([c for c in a.coeffs] + [c for c in b.coeffs])
    zero = CommPoly.zero(ctx.field)
    out = [zero] * (ctx.order + 1)
    for m, am in enumerate(a.coeffs):
        if am.is_zero:
            continue
        for k, bk in enumerate(b.coeffs):
            if bk.is_zero or m + k > ctx.order:
                continue
            for j in range(ctx.order - m - k + 1):
                term = ctx.bilinear_map(j, am, bk)
                if not term.is_zero:
                    out[m + k + j] = out[m + k + j] + term
    return FormalSeries(ctx.order, out)


def star_commutator(a: FormalSeries, b: FormalSeries, ctx: StarContext) -> FormalSeries:
    return star_mul(a, b, ctx) - star_mul(b, a, ctx)


class CorrespondenceReport:
    """Comparison of the h-coefficient of a star commutator with the bracket."""

    __slots__ = ("holds", "star_linear_part", "bracket")

    def __init__(self, holds, star_linear_part, bracket):
        object.__setattr__(self, "holds", holds)
        object.__setattr__(self, "star_linear_part", star_linear_part)
        object.__setattr__(self, "bracket", bracket)

    def __setattr__(self, name, value):
        raise AttributeError("report is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, CorrespondenceReport)
            and self.holds == other.holds
            and self.star_linear_part == other.star_linear_part
            and self.bracket == other.bracket
        )


def verify_correspondence(a: CommPoly, b: CommPoly, ctx: StarContext) -> CorrespondenceReport:
    """Check that the h-coefficient of [a, b]_* equals {a, b} exactly."""
    if ctx.order < 2:
        raise ValueError("correspondence check needs truncation order >= 2")
    sa = FormalSeries.from_poly(a, ctx.order)
    sb = FormalSeries.from_poly(b, ctx.order)
    comm = star_commutator(sa, sb, ctx)
    bracket = poisson_bracket(a, b, ctx.tensor)
    linear = comm.coefficient(1)
    return CorrespondenceReport(linear == bracket, linear, bracket)


class SeriesMatrix:
    """Square matrix of formal series (equivalently, a series of matrices)."""

    __slots__ = ("n", "order", "entries")

    def __init__(self, entries):
        entries = tuple(tuple(r) for r in entries)
        n = len(entries)
        if n == 0 or any(len(r) != n for r in entries):
            raise ShapeMismatch("matrix must be square and nonempty")
        order = entries[0][0].order
        for r in entries:
            for e in r:
                if e.order != order:
                    raise ShapeMismatch("entries with different truncation orders")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("SeriesMatrix is immutable")

    @property
    def field(self) -> Field:
        return self.entries[0][0].field

    @staticmethod
    def identity(n: int, field: Field, order: int) -> SeriesMatrix:
        one = FormalSeries.one(field, order)
        zero = FormalSeries.zero(field, order)
        return SeriesMatrix([[one if i == j else zero for j in range(n)] for i in range(n)])

    def coefficient(self, r: int) -> GenericMatrix:
        return GenericMatrix([[e.coefficient(r) for e in row] for row in self.entries])

    def entry(self, i: int, j: int) -> FormalSeries:
        return self.entries[i - 1][j - 1]

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for row in self.entries for e in row)

    def _check(self, other) -> SeriesMatrix:
        if not isinstance(other, SeriesMatrix):
            raise TypeError(f"expected SeriesMatrix, got {other!r}")
        if other.n != self.n:
            raise ShapeMismatch(f"sizes {self.n} vs {other.n}")
        if other.order != self.order:
            raise ShapeMismatch("different truncation orders")
        return other

    def __add__(self, other):
        other = self._check(other)
        return SeriesMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)]
        )

    def __sub__(self, other):
        other = self._check(other)
        return SeriesMatrix(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)]
        )

    def __eq__(self, other):
        return (
            isinstance(other, SeriesMatrix)
            and self.n == other.n
            and self.entries == other.entries
        )

    def __str__(self):
        return "[" + "; ".join(", ".join(str(e) for e in r) for r in self.entries) + "]"


def matrix_star(a: SeriesMatrix, b: SeriesMatrix, ctx: StarContext, op: str = "mul") -> SeriesMatrix:
    """Row-column product where every entry product is the star product."""
    if op == "commutator":
        return matrix_star(a, b, ctx) - matrix_star(b, a, ctx)
    if op != "mul":
        raise ValueError(f"unknown op {op!r}")
    a._check(b)
    n = a.n
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = FormalSeries.zero(ctx.field, ctx.order)
            for k in range(n):
                acc = acc + star_mul(a.entries[i][k], b.entries[k][j], ctx)
            row.append(acc)
        out.append(row)
    return SeriesMatrix(out)


def quantize_lift(a: GenericMatrix, ctx: StarContext) -> SeriesMatrix:
    """Canonical lift: degree-0 coefficient a, all higher coefficients zero."""
    ctx.tensor.check_variables([e for row in a.rows for e in row])
    return SeriesMatrix(
        [[FormalSeries.from_poly(e, ctx.order) for e in row] for row in a.rows]
    )
