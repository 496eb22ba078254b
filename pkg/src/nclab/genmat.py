"""Generic matrices: reduction from the free algebra, identities, annihilators.

``make_generic(s, n, field)`` builds the matrices whose (i,j) entry is the
indeterminate ``x<l>[i,j]``; the subalgebra they generate is the universal
image of the free algebra satisfying all n x n matrix identities, and
``pi_reduce`` is the evaluation homomorphism onto it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from . import linalg
from .errors import (
    CharacteristicTooSmall,
    FieldMismatch,
    InvalidSize,
    NotCommuting,
    ShapeMismatch,
)
from .fields import Field, Scalar
from .freealg import FreePoly
from .rings import CommPoly, Variable, mono_cmp, mono_mul


class GenericMatrix:
    """Square matrix over the polynomial ring; dense grid, sparse entries."""

    __slots__ = ("n", "field", "rows", "origin")

    def __init__(self, rows, origin=None):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ShapeMismatch("matrix must be square and nonempty")
        field = rows[0][0].field
        for r in rows:
            for e in r:
                if not isinstance(e, CommPoly):
                    raise TypeError("entries must be CommPoly")
                if e.field != field:
                    raise FieldMismatch("entries over different fields")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "origin", origin)

    def __setattr__(self, name, value):
        raise AttributeError("GenericMatrix is immutable")

    # -- constructors ----------------------------------------------------------

    @staticmethod
    def identity(n: int, field: Field) -> GenericMatrix:
        one, zero = CommPoly.one(field), CommPoly.zero(field)
        return GenericMatrix([[one if i == j else zero for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(n: int, field: Field) -> GenericMatrix:
        zero = CommPoly.zero(field)
        return GenericMatrix([[zero] * n for _ in range(n)])

    @staticmethod
    def diagonal(entries) -> GenericMatrix:
        entries = list(entries)
        field = entries[0].field
        zero = CommPoly.zero(field)
        n = len(entries)
        return GenericMatrix(
            [[entries[i] if i == j else zero for j in range(n)] for i in range(n)]
        )

    @staticmethod
    def unit(n: int, i: int, j: int, field: Field) -> GenericMatrix:
        """Matrix unit E_ij (1-based)."""
        zero, one = CommPoly.zero(field), CommPoly.one(field)
        return GenericMatrix(
            [[one if (r, c) == (i - 1, j - 1) else zero for c in range(n)] for r in range(n)]
        )

    def identity_like(self) -> GenericMatrix:
        return GenericMatrix.identity(self.n, self.field)

    # -- access ------------------------------------------------------------------

    def entry(self, i: int, j: int) -> CommPoly:
        """1-based entry access."""
        return self.rows[i - 1][j - 1]

    def diagonal_entries(self):
        return [self.rows[i][i] for i in range(self.n)]

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for r in self.rows for e in r)

    def is_diagonal(self) -> bool:
        return all(
            self.rows[i][j].is_zero for i in range(self.n) for j in range(self.n) if i != j
        )

    def variables(self) -> set:
        out = set()
        for r in self.rows:
            for e in r:
                out |= e.variables()
        return out

    # -- ring operations -----------------------------------------------------------

    def _check(self, other) -> GenericMatrix:
        if not isinstance(other, GenericMatrix):
            raise TypeError(f"expected GenericMatrix, got {other!r}")
        if other.n != self.n:
            raise ShapeMismatch(f"sizes {self.n} vs {other.n}")
        if other.field != self.field:
            raise FieldMismatch("matrices over different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        return GenericMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        )

    def __sub__(self, other):
        other = self._check(other)
        return GenericMatrix(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        )

    def __neg__(self):
        return GenericMatrix([[-e for e in r] for r in self.rows])

    def __mul__(self, other):
        other = self._check(other)
        n = self.n
        cols = list(zip(*other.rows))
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = {}
                for k in range(n):
                    left, right = self.rows[i][k].terms, cols[j][k].terms
                    if not left or not right:
                        continue
                    for m1, c1 in left.items():
                        for m2, c2 in right.items():
                            m = mono_mul(m1, m2)
                            c = c1 * c2
                            s = acc.get(m)
                            acc[m] = c if s is None else s + c
                row.append(CommPoly(self.field, acc))
            out.append(row)
        return GenericMatrix(out)

    def scale(self, c: Scalar) -> GenericMatrix:
        return GenericMatrix([[e.scale(c) for e in r] for r in self.rows])

    def scale_poly(self, p: CommPoly) -> GenericMatrix:
        return GenericMatrix([[e * p for e in r] for r in self.rows])

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative matrix power")
        out = self.identity_like()
        for _ in range(k):
            out = out * self
        return out

    def trace(self) -> CommPoly:
        acc = CommPoly.zero(self.field)
        for i in range(self.n):
            acc = acc + self.rows[i][i]
        return acc

    def __eq__(self, other):
        return (
            isinstance(other, GenericMatrix)
            and self.n == other.n
            and self.field == other.field
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.n, self.field, self.rows))

    def __str__(self):
        return "[" + "; ".join(", ".join(str(e) for e in r) for r in self.rows) + "]"

    def __repr__(self):
        return f"GenericMatrix({self})"


def commute(a: GenericMatrix, b: GenericMatrix) -> bool:
    return (a * b - b * a).is_zero


def make_generic(s: int, n: int, field: Field):
    """The s generic matrices of size n; all s*n^2 entry variables distinct."""
    if s < 1:
        raise InvalidSize("need at least one generator")
    if n < 1:
        raise InvalidSize("matrix size must be at least 1")
    out = []
    for l in range(1, s + 1):
        rows = [
            [CommPoly.variable(Variable.entry(l, i, j), field) for j in range(1, n + 1)]
            for i in range(1, n + 1)
        ]
        out.append(GenericMatrix(rows, origin=l))
    return out


def pi_reduce(f: FreePoly, n: int) -> GenericMatrix:
    """Evaluation homomorphism onto the generic matrices of size n."""
    if n < 1:
        raise InvalidSize("matrix size must be at least 1")
    return f.evaluate_in_matrices(make_generic(f.s, n, f.field))


def trace_and_charpoly(a: GenericMatrix):
    """Trace and characteristic polynomial coefficients c_0..c_n of det(tI - A).

    Uses the trace recurrence, which divides by 1..n; in characteristic p this
    needs n < p.
    """
    n, field = a.n, a.field
    if 0 < field.p <= n:
        raise CharacteristicTooSmall(
            f"characteristic {field.p} too small for size {n} (divides by 1..{n})"
        )
    coeffs = [None] * (n + 1)
    coeffs[n] = CommPoly.one(field)
    m = a
    trace = a.trace()
    for k in range(1, n + 1):
        ck = m.trace().scale(field.scalar(k).inverse()).scale(-field.one)
        coeffs[n - k] = ck
        if k < n:
            m = a * (m + GenericMatrix.identity(n, field).scale_poly(ck))
    return trace, coeffs


def _parity_sign(perm) -> int:
    inversions = sum(
        1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j]
    )
    return -1 if inversions % 2 else 1


def standard_identity(k: int, mats) -> GenericMatrix:
    """S_k(M_1,...,M_k): the alternating sum over all k! permutation products."""
    mats = list(mats)
    if k < 1 or len(mats) != k:
        raise ShapeMismatch(f"need exactly {k} matrices")
    first = mats[0]
    for m in mats:
        first._check(m)
    n, field = first.n, first.field
    acc = [[{} for _ in range(n)] for _ in range(n)]
    for perm in permutations(range(k)):
        prod = mats[perm[0]]
        for idx in perm[1:]:
            prod = prod * mats[idx]
        negative = _parity_sign(perm) < 0
        for i in range(n):
            bucket_row = acc[i]
            prod_row = prod.rows[i]
            for j in range(n):
                bucket = bucket_row[j]
                for m, c in prod_row[j].terms.items():
                    s = bucket.get(m)
                    term = -c if negative else c
                    bucket[m] = term if s is None else s + term
    return GenericMatrix([[CommPoly(field, acc[i][j]) for j in range(n)] for i in range(n)])


# ---------------------------------------------------------------------------
# Bivariate annihilating polynomials of commuting pairs
# ---------------------------------------------------------------------------


class BivariatePoly:
    """Polynomial in two commuting slots u, v: finite map (a, b) -> scalar."""

    __slots__ = ("field", "terms")

    def __init__(self, field: Field, terms=None):
        object.__setattr__(self, "field", field)
        clean = {}
        for (ea, eb), c in (terms or {}).items():
            if not isinstance(c, Scalar):
                c = field.scalar(c)
            if c:
                clean[(ea, eb)] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("BivariatePoly is immutable")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(a + b for a, b in self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (t[0][0] + t[0][1], t[0][0]), reverse=True)

    def evaluate_at_matrices(self, f: GenericMatrix, g: GenericMatrix) -> GenericMatrix:
        acc = GenericMatrix.zeros(f.n, f.field)
        powers_f = {0: f.identity_like()}
        powers_g = {0: f.identity_like()}
        for (ea, eb), c in self.terms.items():
            for e, base, powers in ((ea, f, powers_f), (eb, g, powers_g)):
                while e not in powers:
                    top = max(powers)
                    powers[top + 1] = powers[top] * base
            acc = acc + (powers_f[ea] * powers_g[eb]).scale(c)
        return acc

    def __eq__(self, other):
        return (
            isinstance(other, BivariatePoly)
            and self.field == other.field
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.field, frozenset(self.terms.items())))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (ea, eb), c in self.sorted_terms():
            negative = c.field.p == 0 and c.value < 0
            mag = -c if negative else c
            body = "*".join(
                ([] if ea == 0 else [f"u^{ea}" if ea > 1 else "u"])
                + ([] if eb == 0 else [f"v^{eb}" if eb > 1 else "v"])
            )
            if not body:
                chunk = str(mag)
            elif mag == self.field.one:
                chunk = body
            else:
                chunk = f"{mag}*{body}"
            if not parts:
                parts.append(f"-{chunk}" if negative else chunk)
            else:
                parts.append(f"- {chunk}" if negative else f"+ {chunk}")
        return " ".join(parts)

    def __repr__(self):
        return f"BivariatePoly({self})"


@dataclass
class AnnihilatorResult:
    """Outcome of the minimal-annihilator search for one commuting pair."""

    found: bool
    poly: BivariatePoly | None
    total_degree: int | None
    n: int
    searched_bound: int

    def verify(self, f: GenericMatrix, g: GenericMatrix) -> bool:
        if not self.found:
            return True
        return self.poly.evaluate_at_matrices(f, g).is_zero


def _monomial_layers(dmax: int):
    """Exponent pairs grouped by total degree, each layer in ascending u-power."""
    return [[(a, t - a) for a in range(t + 1)] for t in range(dmax + 1)]


def find_annihilator(f: GenericMatrix, g: GenericMatrix, dmax: int) -> AnnihilatorResult:
    """Minimal-total-degree P with P(f, g) = 0, by exact kernel search.

    The monomials f^a g^b (a+b <= D) are flattened into coefficient vectors
    and D grows from 0 until the span first becomes linearly dependent, which
    gives minimality; the kernel element is canonicalized by reduced echelon
    form and scaled so its graded-lex leading coefficient is 1.
    """
    f._check(g)
    if not commute(f, g):
        raise NotCommuting("inputs do not commute; the monomials f^a g^b are ambiguous")
    field = f.field
    powers_f = {0: f.identity_like()}
    powers_g = {0: f.identity_like()}

    def power(powers, base, e):
        while e not in powers:
            top = max(powers)
            powers[top + 1] = powers[top] * base
        return powers[e]

    layers = _monomial_layers(dmax)
    monomials = []  # ascending graded order
    columns = []  # sparse dict (i, j, mono) -> Scalar per monomial
    for d, layer in enumerate(layers):
        for a, b in layer:
            mat = power(powers_f, f, a) * power(powers_g, g, b)
            col = {}
            for i in range(mat.n):
                for j in range(mat.n):
                    for mono, c in mat.rows[i][j].terms.items():
                        col[(i, j, mono)] = c
            monomials.append((a, b))
            columns.append(col)
        support = sorted({k for col in columns for k in col}, key=_support_key)
        index = {k: r for r, k in enumerate(support)}
        rows = [[field.zero] * len(columns) for _ in support]
        for cidx, col in enumerate(columns):
            for k, c in col.items():
                rows[index[k]][cidx] = c
        kernel = linalg.kernel_basis(rows, len(columns), field)
        if kernel:
            poly = _canonical_kernel_poly(kernel, monomials, field)
            result = AnnihilatorResult(True, poly, poly.total_degree(), f.n, dmax)
            assert result.verify(f, g), "annihilator failed re-evaluation"
            return result
    return AnnihilatorResult(False, None, None, f.n, dmax)


def _support_key(key):
    i, j, mono = key
    from functools import cmp_to_key

    return (i, j, cmp_to_key(mono_cmp)(mono))


def _canonical_kernel_poly(kernel, monomials, field: Field) -> BivariatePoly:
    # Echelonize with columns in *descending* graded order so each basis
    # vector's pivot is its graded-lex leading monomial, then take the first.
    ncols = len(monomials)
    reversed_vectors = [list(reversed(vec)) for vec in kernel]
    echelon = linalg.canonical_span_basis(reversed_vectors, field)
    lead = echelon[0]
    coeffs = list(reversed(lead))
    return BivariatePoly(field, {monomials[i]: coeffs[i] for i in range(ncols) if coeffs[i]})


@dataclass
class StabilityReport:
    """Annihilators of one commuting free pair across several matrix sizes."""

    f_text: str
    g_text: str
    sizes: list
    dmax: int
    results: list  # AnnihilatorResult per size
    all_found: bool
    identical: bool

    @property
    def common_poly(self):
        for r in self.results:
            if r.found:
                return r.poly
        return None


def annihilator_stability(f: FreePoly, g: FreePoly, sizes, dmax: int) -> StabilityReport:
    """Run the annihilator search on the size-n images for each n in sizes."""
    from .freealg import commutator, pretty

    if not commutator(f, g).is_zero:
        raise NotCommuting("inputs do not commute in the free algebra")
    sizes = sorted(set(sizes))
    results = []
    for n in sizes:
        results.append(find_annihilator(pi_reduce(f, n), pi_reduce(g, n), dmax))
    found = [r for r in results if r.found]
    all_found = len(found) == len(results)
    identical = all_found and all(r.poly == found[0].poly for r in found)
    return StabilityReport(pretty(f), pretty(g), sizes, dmax, results, all_found, identical)
