"""Basis enumeration and exact rational linear algebra.

Bases are enumerated once per (context, cap) as deterministic lists of
canonical nonzero classes grouped by degree.  Operator matrices record
which columns produced terms escaping the codomain cap ("leaky"); homology
is only reported in degrees whose adjacent matrices are complete.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .graphs import (CO, CONTRA, GRAPHS, HGC, HGCHOM, Cap, DecoratedGraph,
                     GraphError, GraphSum, canonicalize)
from .spaces import UNIT


class CapRefusal(GraphError):
    """Raised when an enumeration or homology request is unserviceable."""


GUARD_LIMIT = 8_000_000  # raw candidates before enumeration refuses


# ---------------------------------------------------------------------------
# basis enumeration
# ---------------------------------------------------------------------------

@dataclass
class BasisEnumeration:
    context: tuple  # (flavor, variance, n, arity)
    cap: Cap
    graphs: list = field(default_factory=list)
    index: dict = field(default_factory=dict)
    by_degree: dict = field(default_factory=dict)

    def finalize(self):
        self.graphs.sort(key=lambda g: (g.degree(),) + g.sort_key())
        self.index = {g: i for i, g in enumerate(self.graphs)}
        self.by_degree = {}
        for g in self.graphs:
            self.by_degree.setdefault(g.degree(), []).append(g)
        return self

    def __len__(self):
        return len(self.graphs)

    def degrees(self):
        return sorted(self.by_degree)


def _edge_pool(nv, n):
    """Unordered endpoint pairs; parity decides tadpoles vs multi-edges."""
    pairs = []
    for a in range(nv):
        for b in range(a, nv):
            if a == b and n % 2:
                continue  # tadpoles vanish for odd n
            pairs.append((a, b))
    return pairs


def _edge_multisets(pool, max_edges, allow_repeats):
    """Nondecreasing index sequences into the pool."""
    def rec(start, budget, acc):
        yield tuple(acc)
        for i in range(start, len(pool)):
            if budget == 0:
                return
            acc.append(pool[i])
            yield from rec(i if allow_repeats else i + 1, budget - 1, acc)
            acc.pop()
    yield from rec(0, max_edges, [])


def _min_under_relabeling(edges, r, k):
    """Keep one labeled representative per internal-relabeling orbit."""
    if k <= 1:
        return True
    ref = tuple(sorted(edges))
    ids = list(range(r, r + k))
    for perm in itertools.permutations(ids):
        if perm == tuple(ids):
            continue
        m = dict(zip(ids, perm))
        cand = tuple(sorted(tuple(sorted((m.get(a, a), m.get(b, b))))
                            for a, b in edges))
        if cand < ref:
            return False
    return True


def _components_ok(flavor, r, k, edges):
    nv = r + k
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    if flavor == GRAPHS:
        for v in range(r, nv):
            if all(find(v) != find(e) for e in range(r)):
                return False
        return True
    root = find(0) if nv else None
    return all(find(v) == root for v in range(nv))


def _decoration_patterns(nv, first_vertex, names, budget):
    """Multisets of (vertex, decoration) pairs of size <= budget."""
    slots = [(v, nm) for v in range(first_vertex, nv) for nm in names]
    for size in range(budget + 1):
        yield from itertools.combinations_with_replacement(slots, size)


def enumerate_basis(context, cap, spaces, guard=GUARD_LIMIT):
    """All canonical nonzero classes within the cap, exactly once."""
    flavor, variance, n, r = context
    if flavor == GRAPHS:
        vspace, hspace = spaces[0], None
    elif flavor == HGC:
        vspace = hspace = spaces[0]
    else:
        vspace, hspace = spaces[1], spaces[0]
    vnames = [(nm, vspace.degree(nm)) for nm in vspace.basis()]
    hnames = [(UNIT, 0)] + [(nm, hspace.degree(nm)) for nm in hspace.basis()] \
        if hspace else []

    out = BasisEnumeration(context, cap)
    seen = set()
    candidates = 0
    kmin = 0 if flavor == GRAPHS else 1
    for k in range(kmin, cap.internals + 1):
        nv = r + k
        pool = _edge_pool(nv, n)
        for edges in _edge_multisets(pool, cap.edges, allow_repeats=bool(n % 2)):
            if not _min_under_relabeling(edges, r, k):
                continue
            if not _components_ok(flavor, r, k, edges):
                continue
            hair_budget = min(cap.hairs, cap.edges - len(edges)) \
                if flavor != GRAPHS else 0
            if hair_budget < 0:
                continue
            hair_iter = (_decoration_patterns(nv, r, hnames, hair_budget)
                         if flavor != GRAPHS else [()])
            for hairs in hair_iter:
                for decs in _decoration_patterns(nv, 0 if flavor == GRAPHS else r,
                                                 vnames, cap.dec):
                    candidates += 1
                    if candidates > guard:
                        raise CapRefusal(
                            "cap %r generates more than %d raw candidates; "
                            "shrink the cap" % (cap, guard))
                    dec = [[] for _ in range(nv)]
                    for v, d in decs:
                        dec[v].append(d)
                    g = DecoratedGraph(flavor, variance, n, r, k, edges,
                                       list(hairs), dec)
                    if not g.is_valid_basis_graph():
                        continue
                    canon = canonicalize(g)
                    if canon is None:
                        continue
                    cg = canon[0]
                    if cg not in seen:
                        seen.add(cg)
                        out.graphs.append(cg)
    return out.finalize()


# ---------------------------------------------------------------------------
# sparse matrices
# ---------------------------------------------------------------------------

@dataclass
class SparseMatrix:
    rows: int
    cols: int
    entries: dict = field(default_factory=dict)  # (i, j) -> Fraction
    leaky_cols: set = field(default_factory=set)

    @property
    def leaky(self):
        return bool(self.leaky_cols)

    def add(self, i, j, c):
        c = self.entries.get((i, j), Fraction(0)) + c
        if c:
            self.entries[(i, j)] = c
        else:
            self.entries.pop((i, j), None)

    def is_zero(self):
        return not self.entries

    def matmul(self, other):
        """self @ other, sparse."""
        if self.cols != other.rows:
            raise GraphError("matrix shapes do not compose")
        by_row = {}
        for (i, j), c in other.entries.items():
            by_row.setdefault(i, []).append((j, c))
        out = SparseMatrix(self.rows, other.cols)
        out.leaky_cols = set(other.leaky_cols)
        for (i, j), c in self.entries.items():
            for j2, c2 in by_row.get(j, ()):
                out.add(i, j2, c * c2)
        if self.leaky:
            out.leaky_cols |= set(range(other.cols))
        return out

    def dense(self):
        m = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), c in self.entries.items():
            m[i][j] = c
        return m

    def export_text(self, header):
        import json as _json
        lines = [_json.dumps(header, sort_keys=True)]
        for (i, j) in sorted(self.entries):
            c = self.entries[(i, j)]
            lines.append("%d %d %d/%d" % (i, j, c.numerator, c.denominator))
        return "\n".join(lines) + "\n"


def operator_matrix(op, dom, cod):
    """Column j = op(dom[j]) expanded in cod; terms escaping the codomain
    cap flag the column as leaky.  Terms inside the cap but missing from the
    codomain basis are a real inconsistency and raise."""
    m = SparseMatrix(len(cod), len(dom))
    for j, g in enumerate(dom.graphs):
        val = op(g)
        for h, c in val.terms.items():
            i = cod.index.get(h)
            if i is None:
                if cod.cap.admits(h):
                    raise GraphError(
                        "operator image %r is inside the cap but missing "
                        "from the codomain basis" % (h,))
                m.leaky_cols.add(j)
                continue
            m.add(i, j, c)
    return m


# ---------------------------------------------------------------------------
# exact rank and kernels
# ---------------------------------------------------------------------------

def _integer_rows(mat):
    out = []
    for row in mat:
        denom = 1
        for x in row:
            q = Fraction(x)
            denom = denom * q.denominator // gcd(denom, q.denominator)
        out.append([int(Fraction(x) * denom) for x in row])
    return out


def rank(mat):
    """Fraction-free Bareiss elimination over the integers."""
    if not mat or not mat[0]:
        return 0
    a = _integer_rows(mat)
    nrows, ncols = len(a), len(a[0])
    prev = 1
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nrows):
            for j in range(col + 1, ncols):
                a[i][j] = (a[r][col] * a[i][j] - a[i][col] * a[r][j]) // prev
            a[i][col] = 0
        prev = a[r][col]
        r += 1
        if r == nrows:
            break
    return r


def kernel_basis(mat, ncols=None):
    """Basis of the right kernel, via reduced row echelon form."""
    if not mat:
        return [[Fraction(1) if i == j else Fraction(0) for i in range(ncols or 0)]
                for j in range(ncols or 0)]
    m = [[Fraction(x) for x in row] for row in mat]
    nrows, nc = len(m), len(m[0])
    pivots = []
    r = 0
    for col in range(nc):
        piv = next((i for i in range(r, nrows) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * nc
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -m[i][fc]
        basis.append(vec)
    return basis


# ---------------------------------------------------------------------------
# truncated homology
# ---------------------------------------------------------------------------

@dataclass
class HomologyReport:
    cap: Cap
    dims: dict = field(default_factory=dict)  # degree -> (dim, exact_at_cap)

    def to_json(self):
        return {str(d): {"dim": dim, "exact_at_cap": flag}
                for d, (dim, flag) in sorted(self.dims.items())}


def truncated_homology(op, basis, degree_window):
    """Per-degree dim ker - dim im of a degree +1 operator on a basis
    enumeration; degrees are flagged exact only where both adjacent
    operator matrices are non-leaky.  Refuses when nothing in the window
    is exact."""
    lo, hi = degree_window
    degs = sorted(d for d in basis.by_degree if lo <= d <= hi)
    sub = {}
    for d in set(degs) | {d - 1 for d in degs} | {d + 1 for d in degs}:
        b = BasisEnumeration(basis.context, basis.cap)
        b.graphs = list(basis.by_degree.get(d, []))
        sub[d] = b.finalize()

    mats = {}
    for d in degs:
        for dd in (d - 1, d):
            if dd not in mats:
                mats[dd] = operator_matrix(op, sub[dd], sub[dd + 1])
    # d^2 = 0 on the window, non-leaky part
    for d in degs:
        prod = mats[d].matmul(mats[d - 1])
        clean = {key: v for key, v in prod.entries.items()
                 if key[1] not in prod.leaky_cols}
        if clean:
            raise GraphError("operator does not square to zero at degree %d" % d)

    report = HomologyReport(basis.cap)
    for d in degs:
        m_in, m_out = mats[d - 1], mats[d]
        dim = len(sub[d])
        h = dim - rank(m_out.dense()) - rank(m_in.dense())
        exact = not m_in.leaky and not m_out.leaky
        report.dims[d] = (h, exact)
    if degs and not any(flag for _, flag in report.dims.values()):
        raise CapRefusal(
            "every degree in the window %r has leaky boundary matrices; "
            "enlarge the cap or shrink the window" % (degree_window,))
    return report
