"""Exact cohomology: basis enumeration, integer matrices, ranks and torsion.

Differentials of all complexes used here have integer entries, so dimension
profiles over a field reduce to exact ranks of integer matrices.  Over the
rationals ranks come from fraction-free sparse elimination with gcd
stripping; over a prime field from modular elimination; over the integers
the Smith normal form provides free ranks and torsion, with unimodular
certificates checked by exact determinants.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .coeff import CoefficientSystem, Integers, PrimeField, Rationals
from .errors import BudgetError, CoefficientError, ModelError
from .model import CoverModel, enumeration_budget

# ---------------------------------------------------------------------------
# complex descriptors: ordered bases plus face rules


class ComplexSpec:
    """A cochain complex presented by ordered bases and face incidences."""

    label = ""

    def basis(self, n: int) -> tuple:
        raise NotImplementedError

    def row_entries(self, n: int, row_label) -> list:
        """Pairs (column label, integer coefficient) describing d_n pulled
        back to one degree-(n+1) basis element."""
        raise NotImplementedError


class LocalComplexSpec(ComplexSpec):
    """Functions on diagonal neighborhoods with the alternating differential."""

    label = "local"

    def __init__(self, model: CoverModel, budget: Optional[int] = None):
        self.model = model
        self.budget = budget

    def basis(self, n: int) -> tuple:
        return self.model.diagonal_neighborhood(n, budget=self.budget).tuples

    def row_entries(self, n: int, row_label) -> list:
        domain = self.model.diagonal_neighborhood(n, budget=self.budget)
        out = {}
        sign = 1
        for i in range(len(row_label)):
            face = row_label[:i] + row_label[i + 1:]
            if face in domain:
                out[face] = out.get(face, 0) + sign
            sign = -sign
        return list(out.items())


class CechComplexSpec(ComplexSpec):
    """One coefficient copy per nerve simplex, alternating index deletion."""

    label = "cech"

    def __init__(self, model: CoverModel):
        self.model = model
        self.nerve = model.nerve()

    def basis(self, n: int) -> tuple:
        return self.nerve.of_dimension(n)

    def row_entries(self, n: int, row_label) -> list:
        out = []
        sign = 1
        for k in range(len(row_label)):
            out.append((row_label[:k] + row_label[k + 1:], sign))
            sign = -sign
        return out


class SimplicialComplexSpec(ComplexSpec):
    """Simplicial cochains of an ordered complex."""

    label = "simplicial"

    def __init__(self, simplices: Sequence[tuple], order_key=None):
        key = order_key or (lambda s: s)
        self.simplices = tuple(sorted((tuple(s) for s in simplices), key=lambda s: (len(s), key(s))))
        self._faces = {s for s in self.simplices}

    def basis(self, n: int) -> tuple:
        return tuple(s for s in self.simplices if len(s) == n + 1)

    def row_entries(self, n: int, row_label) -> list:
        out = []
        sign = 1
        for k in range(len(row_label)):
            face = row_label[:k] + row_label[k + 1:]
            if face in self._faces:
                out.append((face, sign))
            sign = -sign
        return out


class TotalComplexSpec(ComplexSpec):
    """Total complex of the page bicomplex.

    Degree-n basis elements are triples (p, index tuple, point tuple) with
    the point tuple of arity n - p + 1 drawn from the intersection named by
    the index tuple.  The differential combines index insertion with the
    alternating point-tuple differential weighted by (-1)^p.
    """

    label = "total"

    def __init__(self, model: CoverModel, budget: Optional[int] = None):
        self.model = model
        self.nerve = model.nerve()
        self.budget = budget
        self._inter = {}
        for s in self.nerve.simplices:
            self._inter[s] = set(model.intersection(s))

    def basis(self, n: int) -> tuple:
        limit = enumeration_budget(self.budget)
        out = []
        total = 0
        for p in range(min(n, self.nerve.dimension) + 1):
            q = n - p
            for idx in self.nerve.of_dimension(p):
                power = self.model.intersection_power(idx, q + 1)
                total += len(power)
                if total > limit:
                    raise BudgetError(total, limit, f"total-complex basis in degree {n}")
                for t in power.tuples:
                    out.append((p, idx, t))
        return tuple(out)

    def row_entries(self, n: int, row_label) -> list:
        p, idx, t = row_label
        out = {}
        # index-deletion part: contributions from (p - 1, n + 1 - p)
        if p >= 1:
            sign = 1
            for k in range(len(idx)):
                face = idx[:k] + idx[k + 1:]
                key = (p - 1, face, t)
                out[key] = out.get(key, 0) + sign
                sign = -sign
        # point-deletion part: contributions from (p, n - p), sign (-1)^p
        if len(t) >= 2:
            base = -1 if p % 2 else 1
            sign = base
            for i in range(len(t)):
                key = (p, idx, t[:i] + t[i + 1:])
                out[key] = out.get(key, 0) + sign
                sign = -sign
        return [(k, v) for k, v in out.items() if v]


class AugmentedRowSpec(ComplexSpec):
    """Row at a fixed level q, prefixed by the local cochains it restricts.

    Degree 0 is the local degree-q space; degree p >= 1 holds the families
    indexed by (p-1)-dimensional nerve simplices.  Exactness of this complex
    is the row-contraction statement in matrix form.
    """

    label = "augmented-row"

    def __init__(self, model: CoverModel, q: int, budget: Optional[int] = None):
        self.model = model
        self.q = q
        self.nerve = model.nerve()
        self.budget = budget

    def basis(self, n: int) -> tuple:
        if n == 0:
            return self.model.diagonal_neighborhood(self.q, budget=self.budget).tuples
        out = []
        for idx in self.nerve.of_dimension(n - 1):
            power = self.model.intersection_power(idx, self.q + 1)
            out.extend((idx, t) for t in power.tuples)
        return tuple(out)

    def row_entries(self, n: int, row_label) -> list:
        if n == 0:
            idx, t = row_label
            return [(t, 1)]  # restriction of the local cochain
        idx, t = row_label
        inter_cache = {}
        out = []
        sign = 1
        for k in range(len(idx)):
            face = idx[:k] + idx[k + 1:]
            members = inter_cache.get(face)
            if members is None:
                members = set(self.model.intersection(face))
                inter_cache[face] = members
            if all(c in members for c in t):
                out.append(((face, t), sign))
            sign = -sign
        return out


class AugmentedColumnSpec(ComplexSpec):
    """Column at a fixed nerve simplex, prefixed by the coefficient copy.

    Degree 0 is one coefficient copy (the constants); degree k >= 1 holds
    functions on arity-k tuples of the intersection.  Exactness is the cone
    contraction in matrix form.
    """

    label = "augmented-column"

    def __init__(self, model: CoverModel, indices: tuple):
        self.model = model
        self.indices = tuple(indices)
        self.members = model.sort_points(model.intersection(self.indices))
        if not self.members:
            raise ModelError(f"intersection of {self.indices} is empty")

    def basis(self, n: int) -> tuple:
        if n == 0:
            return (self.indices,)
        return self.model.intersection_power(self.indices, n).tuples

    def row_entries(self, n: int, row_label) -> list:
        if n == 0:
            return [(self.indices, 1)]  # constants embed
        out = {}
        sign = 1
        for i in range(len(row_label)):
            face = row_label[:i] + row_label[i + 1:]
            out[face] = out.get(face, 0) + sign
            sign = -sign
        return [(k, v) for k, v in out.items() if v]


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class BoundaryMatrix:
    """Sparse integer matrix of a differential, with frozen basis labels."""

    row_labels: tuple
    col_labels: tuple
    rows: tuple  # tuple of dicts column index -> integer

    @property
    def shape(self) -> tuple:
        return (len(self.row_labels), len(self.col_labels))

    def dense(self) -> list:
        out = [[0] * len(self.col_labels) for _ in self.row_labels]
        for r, row in enumerate(self.rows):
            for c, v in row.items():
                out[r][c] = v
        return out


def assemble_matrix(spec: ComplexSpec, n: int) -> BoundaryMatrix:
    """Matrix of d_n with rows indexed by the degree-(n+1) basis."""
    cols = spec.basis(n)
    rows = spec.basis(n + 1)
    col_index = {label: k for k, label in enumerate(cols)}
    data = []
    for label in rows:
        entry = {}
        for col_label, coef in spec.row_entries(n, label):
            c = col_index.get(col_label)
            if c is None:
                raise ModelError(f"face {col_label!r} missing from degree-{n} basis")
            entry[c] = entry.get(c, 0) + coef
        data.append({c: v for c, v in entry.items() if v})
    return BoundaryMatrix(row_labels=tuple(rows), col_labels=tuple(cols), rows=tuple(data))


# ---------------------------------------------------------------------------
# exact ranks


def rank_int(rows: Sequence[dict]) -> int:
    """Rank over the rationals of a sparse integer matrix.

    Fraction-free row elimination; rows are rescaled by gcd stripping, which
    leaves the rank unchanged.
    """
    work = [dict(r) for r in rows if r]
    rank = 0
    while work:
        col = min(min(r) for r in work)
        holders = [r for r in work if col in r]
        pivot = min(holders, key=lambda r: (len(r), abs(r[col])))
        work.remove(pivot)
        rank += 1
        pv = pivot[col]
        nxt = []
        for r in work:
            a = r.pop(col, None)
            if a is None:
                nxt.append(r)
                continue
            out = {c: pv * v for c, v in r.items()}
            for c, v in pivot.items():
                if c == col:
                    continue
                nv = out.get(c, 0) - a * v
                if nv:
                    out[c] = nv
                elif c in out:
                    del out[c]
            if out:
                g = 0
                for v in out.values():
                    g = gcd(g, abs(v))
                    if g == 1:
                        break
                if g > 1:
                    out = {c: v // g for c, v in out.items()}
                nxt.append(out)
        work = nxt
    return rank


def rank_mod_p(rows: Sequence[dict], p: int) -> int:
    """Rank over the field with p elements of a sparse integer matrix."""
    work = []
    for r in rows:
        rr = {c: v % p for c, v in r.items() if v % p}
        if rr:
            work.append(rr)
    rank = 0
    while work:
        col = min(min(r) for r in work)
        holders = [r for r in work if col in r]
        pivot = min(holders, key=len)
        work.remove(pivot)
        rank += 1
        inv = pow(pivot[col], p - 2, p)
        pivot = {c: (v * inv) % p for c, v in pivot.items()}
        nxt = []
        for r in work:
            a = r.pop(col, None)
            if a is None:
                nxt.append(r)
                continue
            for c, v in pivot.items():
                if c == col:
                    continue
                nv = (r.get(c, 0) - a * v) % p
                if nv:
                    r[c] = nv
                elif c in r:
                    del r[c]
            if r:
                nxt.append(r)
        work = nxt
    return rank


def matrix_rank(mat: BoundaryMatrix, system: CoefficientSystem) -> int:
    if isinstance(system, (Rationals, Integers)):
        return rank_int(mat.rows)
    if isinstance(system, PrimeField):
        return rank_mod_p(mat.rows, system.p)
    raise CoefficientError(f"no exact rank over {system.name}")


# ---------------------------------------------------------------------------
# dense field elimination, kernels, quotient ranks


class FieldOps:
    def zero(self): raise NotImplementedError
    def one(self): raise NotImplementedError
    def add(self, a, b): raise NotImplementedError
    def sub(self, a, b): raise NotImplementedError
    def mul(self, a, b): raise NotImplementedError
    def inv(self, a): raise NotImplementedError
    def of_int(self, n): raise NotImplementedError
    def is_zero(self, a): raise NotImplementedError


class RationalOps(FieldOps):
    def zero(self): return Fraction(0)
    def one(self): return Fraction(1)
    def add(self, a, b): return a + b
    def sub(self, a, b): return a - b
    def mul(self, a, b): return a * b
    def inv(self, a): return Fraction(1) / a
    def of_int(self, n): return Fraction(n)
    def is_zero(self, a): return a == 0


class PrimeFieldOps(FieldOps):
    def __init__(self, p: int):
        self.p = p
    def zero(self): return 0
    def one(self): return 1
    def add(self, a, b): return (a + b) % self.p
    def sub(self, a, b): return (a - b) % self.p
    def mul(self, a, b): return (a * b) % self.p
    def inv(self, a): return pow(a % self.p, self.p - 2, self.p)
    def of_int(self, n): return n % self.p
    def is_zero(self, a): return a % self.p == 0


def field_ops_for(system: CoefficientSystem) -> FieldOps:
    if isinstance(system, Rationals):
        return RationalOps()
    if isinstance(system, PrimeField):
        return PrimeFieldOps(system.p)
    raise CoefficientError(f"{system.name} is not a supported field")


def dense_rref(rows: list, ops: FieldOps) -> tuple:
    """Reduced row echelon form in place; returns (rows, pivot column list)."""
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        sel = None
        for i in range(r, len(rows)):
            if not ops.is_zero(rows[i][c]):
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = ops.inv(rows[r][c])
        rows[r] = [ops.mul(inv, v) for v in rows[r]]
        for i in range(len(rows)):
            if i != r and not ops.is_zero(rows[i][c]):
                factor = rows[i][c]
                rows[i] = [ops.sub(v, ops.mul(factor, w)) for v, w in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def kernel_basis(mat: BoundaryMatrix, system: CoefficientSystem) -> list:
    """Basis vectors (length = #columns) of the nullspace over a field."""
    ops = field_ops_for(system)
    ncols = len(mat.col_labels)
    dense = [[ops.of_int(row.get(c, 0)) for c in range(ncols)] for row in mat.rows]
    dense, pivots = dense_rref(dense, ops)
    pivot_set = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free_cols:
        vec = [ops.zero()] * ncols
        vec[f] = ops.one()
        for r, c in enumerate(pivots):
            vec[c] = ops.sub(ops.zero(), dense[r][f])
        basis.append(vec)
    return basis


def dense_rank(vectors: list, ops: FieldOps) -> int:
    rows = [list(v) for v in vectors if any(not ops.is_zero(x) for x in v)]
    _, pivots = dense_rref(rows, ops)
    return len(pivots)


def rank_in_quotient(vectors: list, subspace: list, system: CoefficientSystem) -> int:
    """Dimension of span(vectors) inside the quotient by span(subspace)."""
    ops = field_ops_for(system)
    base = dense_rank(subspace, ops)
    joint = dense_rank(list(subspace) + list(vectors), ops)
    return joint - base


# ---------------------------------------------------------------------------
# Smith normal form with certificates


@dataclass(frozen=True)
class SmithDecomposition:
    invariants: tuple        # nonzero diagonal entries, each dividing the next
    left: tuple              # U, unimodular, rows x rows
    right: tuple             # V, unimodular, cols x cols
    shape: tuple

    @property
    def rank(self) -> int:
        return len(self.invariants)

    def torsion(self) -> tuple:
        return tuple(d for d in self.invariants if abs(d) != 1)


def _identity(n: int) -> list:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def bareiss_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [list(row) for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> SmithDecomposition:
    """Diagonalize an integer matrix as U * M * V with unimodular U, V.

    Pivots are chosen with smallest absolute value; a divisibility repair
    folds offending rows into the pivot row, so the diagonal entries form a
    divisor chain.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    d = []
    for row in matrix:
        if len(row) != cols:
            raise ModelError("ragged integer matrix")
        fixed = []
        for v in row:
            if isinstance(v, bool) or not isinstance(v, int):
                raise CoefficientError(f"Smith normal form needs integer entries, got {v!r}")
            fixed.append(v)
        d.append(fixed)
    u = _identity(rows)
    v = _identity(cols)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, factor):  # row_dst += factor * row_src
        d[dst] = [a + factor * b for a, b in zip(d[dst], d[src])]
        u[dst] = [a + factor * b for a, b in zip(u[dst], u[src])]

    def add_col(src, dst, factor):  # col_dst += factor * col_src
        for row in d:
            row[dst] += factor * row[src]
        for row in v:
            row[dst] += factor * row[src]

    def negate_row(i):
        d[i] = [-a for a in d[i]]
        u[i] = [-a for a in u[i]]

    t = 0
    limit = min(rows, cols)
    while t < limit:
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if d[i][j] != 0 and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            # clear the pivot column
            dirty = False
            for i in range(t + 1, rows):
                if d[i][t] != 0:
                    qt = d[i][t] // d[t][t]
                    add_row(t, i, -qt)
                    if d[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            if dirty:
                continue
            # clear the pivot row
            for j in range(t + 1, cols):
                if d[t][j] != 0:
                    qt = d[t][j] // d[t][t]
                    add_col(t, j, -qt)
                    if d[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
                        break
            if dirty:
                continue
            # divisibility repair: fold a bad row in and restart the pivot
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if d[i][j] % d[t][t] != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if d[t][t] < 0:
            negate_row(t)
        t += 1

    invariants = tuple(d[i][i] for i in range(limit) if d[i][i] != 0)
    return SmithDecomposition(invariants=invariants, left=tuple(map(tuple, u)),
                              right=tuple(map(tuple, v)), shape=(rows, cols))


def check_smith_certificate(matrix: Sequence[Sequence[int]], dec: SmithDecomposition) -> bool:
    """Re-multiply U * M * V and confirm diagonality, chain and unimodularity."""
    rows, cols = dec.shape
    if rows != len(matrix) or (rows and cols != len(matrix[0])):
        return False
    if abs(bareiss_determinant(dec.left)) != 1:
        return False
    if abs(bareiss_determinant(dec.right)) != 1:
        return False
    # product U * M
    um = [[sum(dec.left[i][k] * matrix[k][j] for k in range(rows)) for j in range(cols)]
          for i in range(rows)]
    prod = [[sum(um[i][k] * dec.right[k][j] for k in range(cols)) for j in range(cols)]
            for i in range(rows)]
    seen = []
    for i in range(rows):
        for j in range(cols):
            if i == j and prod[i][j] != 0:
                seen.append(prod[i][j])
            elif i != j and prod[i][j] != 0:
                return False
    if tuple(seen) != dec.invariants:
        return False
    for a, b in zip(seen, seen[1:]):
        if b % a != 0:
            return False
    return all(a > 0 for a in seen)


# ---------------------------------------------------------------------------
# profiles


def field_cohomology(spec: ComplexSpec, system: CoefficientSystem, max_degree: int) -> list:
    """Dimensions of the cohomology of the described complex, degrees 0..max."""
    if not system.is_field:
        raise CoefficientError(f"{system.name} is not a field; use the integer path")
    dims = [len(spec.basis(n)) for n in range(max_degree + 2)]
    ranks = [matrix_rank(assemble_matrix(spec, n), system) for n in range(max_degree + 1)]
    out = []
    for n in range(max_degree + 1):
        below = ranks[n - 1] if n >= 1 else 0
        out.append(dims[n] - ranks[n] - below)
    return out


def integer_cohomology(spec: ComplexSpec, max_degree: int) -> list:
    """Free rank and torsion factors per degree, from Smith normal forms."""
    dims = [len(spec.basis(n)) for n in range(max_degree + 2)]
    decs = []
    for n in range(max_degree + 1):
        mat = assemble_matrix(spec, n)
        dec = smith_normal_form(mat.dense())
        if not check_smith_certificate(mat.dense(), dec):
            raise ModelError(f"Smith certificate failed in degree {n}")
        decs.append(dec)
    out = []
    for n in range(max_degree + 1):
        rank_here = decs[n].rank
        rank_below = decs[n - 1].rank if n >= 1 else 0
        torsion = decs[n - 1].torsion() if n >= 1 else ()
        out.append((dims[n] - rank_here - rank_below, tuple(torsion)))
    return out


def cohomology_profile(spec: ComplexSpec, system: CoefficientSystem, max_degree: int):
    """Field dimensions, or (free rank, torsion) pairs over the integers."""
    if system.is_field:
        return field_cohomology(spec, system, max_degree)
    if isinstance(system, Integers):
        return integer_cohomology(spec, max_degree)
    raise CoefficientError(f"no cohomology profile over {system.name}")
