"""Operations on the graphs-side complexes.

The differential contracts edges between distinct internal vertices; the
sign convention brings the contracted edge to the front of the edge order
and the two merged vertices to the front of the vertex order, after which
the contraction carries sign +1 and the remaining order is inherited.  The
cooperadic coaction contracts full subgraphs sitting on the first s external
vertices.  The twist differentials detach univalent internal pendants; they
are the duals of the hair-attachment actions of the hairy complexes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .graphs import (CO, CONTRA, GRAPHS, HGC, Builder, DecoratedGraph,
                     GraphError, GraphSum)
from . import conventions


def _as_sum(x):
    return x if isinstance(x, GraphSum) else GraphSum(
        x.flavor, x.variance, x.n, x.r).add_raw(x, 1)


# ---------------------------------------------------------------------------
# product
# ---------------------------------------------------------------------------

def glue_product(a, b):
    """Glue two sums along their shared numbered vertices (bilinear)."""
    a, b = _as_sum(a), _as_sum(b)
    if a.context() != b.context():
        raise GraphError("product factors live in different contexts")
    if a.flavor != GRAPHS:
        raise GraphError("the glue product is a graphs-side operation")
    out = GraphSum.zero_like(a)
    for ga, ca in a.terms.items():
        for gb, cb in b.terms.items():
            bld = Builder(ga.flavor, ga.variance, ga.n, ga.r)
            bld.import_graph(ga)
            bld.import_graph(gb)
            fin = bld.finish()
            if fin is None:
                continue
            g, sign = fin
            out.add_raw(g, ca * cb * sign)
    return out


def unit_graph(variance, n, r):
    """Edgeless undecorated graph: the unit of the glue product."""
    return DecoratedGraph(GRAPHS, variance, n, r, 0, [], [], [()] * r)


# ---------------------------------------------------------------------------
# edge contraction
# ---------------------------------------------------------------------------

_contract_cache = {}


def _contract_edge(g, ei):
    a, b = g.edges[ei]
    bld = Builder(g.flavor, g.variance, g.n, g.r)
    sign = 1
    if g.n % 2:
        # bring the two endpoints to the front of the vertex order
        iverts = list(g.internals())
        ia, ib = iverts.index(a), iverts.index(b)
        moves = ia + ib - (1 if ia < ib else 0)
        if moves % 2:
            sign = -sign
    else:
        # bring the contracted edge to the front of the edge order
        if ei % 2:
            sign = -sign
    vmap = {v: v for v in range(g.r)}
    vmap[a] = bld.new_internal()
    vmap[b] = vmap[a]
    for v in g.internals():
        if v not in (a, b):
            vmap[v] = bld.new_internal()
    for j, (x, y) in enumerate(g.edges):
        if j != ei:
            bld.add_edge(vmap[x], vmap[y])
    for v, d in g.hairs:
        bld.add_hair(vmap[v], d)
    for v, mono in enumerate(g.dec):
        for d in mono:
            bld.add_dec(vmap[v], d)
    bld.sign = sign
    return bld.finish_canonical()


def d_contract_graph(g):
    cached = _contract_cache.get(g)
    if cached is not None:
        return cached
    terms = []
    for ei, (a, b) in enumerate(g.edges):
        if a == b or not (g.is_internal(a) and g.is_internal(b)):
            continue
        fin = _contract_edge(g, ei)
        if fin is not None:
            terms.append((fin[0], fin[1]))
    if conventions.SABOTAGE == "flip-contract-sign":
        terms = [(h, -s) for h, s in terms]
    _contract_cache[g] = terms
    return terms


def d_contract(x):
    """Sum of contractions of edges between distinct internal vertices."""
    x = _as_sum(x)
    if x.flavor != GRAPHS or x.variance != CO:
        raise GraphError("d_contract acts on covariant graphs-side sums")
    out = GraphSum.zero_like(x)
    for g, c in x.terms.items():
        for h, s in d_contract_graph(g):
            out.add_canonical(h, c * s)
    return out


# ---------------------------------------------------------------------------
# cooperadic coaction
# ---------------------------------------------------------------------------

@dataclass
class CoactionResult:
    """Formal sum of (module graph) x (cooperad factor) pairs."""

    arity: int
    s: int
    terms: dict = field(default_factory=dict)  # (module, enc) -> Fraction

    def add(self, gm, ge, coeff):
        key = (gm, ge)
        c = self.terms.get(key, Fraction(0)) + coeff
        if c:
            self.terms[key] = c
        else:
            self.terms.pop(key, None)

    def pairs(self):
        return sorted(self.terms.items(),
                      key=lambda t: (t[0][0].sort_key(), t[0][1].sort_key()))

    def map_module(self, op):
        """Apply a linear map to the module factor: (op x id) . Delta."""
        out = CoactionResult(self.arity, self.s)
        for (gm, ge), c in self.terms.items():
            for h, c2 in op(gm).terms.items():
                out.add(h, ge, c * c2)
        return out

    def __eq__(self, other):
        return (self.arity, self.s, self.terms) == (other.arity, other.s, other.terms)


def coaction(x, s):
    """Contract subgraphs on the externals 1..s into a new first vertex.

    A subgraph is the s chosen externals together with any subset of the
    non-tadpole edges among them; chosen edges become the cooperad factor,
    unchosen ones turn into tadpoles at the merged vertex.
    """
    x = _as_sum(x)
    if not 1 <= s <= x.r:
        raise GraphError("coaction arity %d out of range 1..%d" % (s, x.r))
    out = CoactionResult(x.r, s)
    for g, c in x.terms.items():
        _coaction_graph(g, s, c, out)
    return out


def _coaction_graph(g, s, coeff, out):
    ep = (g.n - 1) % 2
    candidates = [i for i, (a, b) in enumerate(g.edges)
                  if a < s and b < s and a != b]
    dec_odd = sum(1 for mono in g.dec for _, d in mono if d % 2)
    for size in range(len(candidates) + 1):
        for chosen in itertools.combinations(candidates, size):
            chosen_set = set(chosen)
            sign = 1
            if ep:
                # move chosen edges to the end of the word, keeping order
                for c in chosen:
                    after = sum(1 for j in range(c + 1, len(g.edges))
                                if j not in chosen_set)
                    if (after + dec_odd) % 2:
                        sign = -sign
            bld = Builder(g.flavor, g.variance, g.n, g.r - s + 1)
            vmap = {v: 0 for v in range(s)}
            for v in range(s, g.r):
                vmap[v] = v - s + 1
            for v in g.internals():
                vmap[v] = bld.new_internal()
            for j, (a, b) in enumerate(g.edges):
                if j not in chosen_set:
                    bld.add_edge(vmap[a], vmap[b])
            for v, mono in enumerate(g.dec):
                for d in mono:
                    bld.add_dec(vmap[v], d)
            fin = bld.finish_canonical()
            if fin is None:
                continue
            gm, sm = fin
            enc = DecoratedGraph(GRAPHS, g.variance, g.n, s, 0,
                                 [g.edges[c] for c in chosen], [], [()] * s)
            from .graphs import canonicalize
            ce = canonicalize(enc)
            if ce is None:
                continue
            ge, se = ce
            out.add(gm, ge, coeff * sign * sm * se)


# ---------------------------------------------------------------------------
# Arnold normal form for the cooperad factor
# ---------------------------------------------------------------------------

def _find_bad_pair(g):
    """Two edges sharing their larger endpoint: the leading monomial of a
    three-term relation.  Returns (p, q) positions or None."""
    best = None
    for p in range(len(g.edges)):
        for q in range(p + 1, len(g.edges)):
            if g.edges[p][1] == g.edges[q][1]:
                key = tuple(sorted((g.edges[p], g.edges[q])))
                if best is None or key > best[0]:
                    best = (key, p, q)
    return None if best is None else (best[1], best[2])


def _substitute(g, p, q, pair):
    """Replace the directed edges at word positions p, q."""
    edges = list(g.edges)
    sign = 1
    for pos, (ta, he) in zip((p, q), pair):
        a, b = ta, he
        if a > b:
            a, b = b, a
            if g.n % 2:
                sign = -sign
        edges[pos] = (a, b)
    out = GraphSum(g.flavor, g.variance, g.n, g.r)
    out.add_raw(DecoratedGraph(g.flavor, g.variance, g.n, g.r, g.k,
                               edges, g.hairs, g.dec), sign)
    return out


def arnold_reduce(x):
    """Normal form modulo the square and three-term relations of the
    configuration-space cohomology; idempotent."""
    x = _as_sum(x)
    if any(g.k for g in x.terms):
        raise GraphError("cooperad factors carry no internal vertices")
    cur = GraphSum.zero_like(x)
    for g, c in x.terms.items():
        if len(set(g.edges)) != len(g.edges):
            continue  # omega^2 = 0 (already zero by orientation for even n)
        cur.add_canonical(g, c)
    for _ in range(10000):
        bad = None
        for g in sorted(cur.terms, key=lambda h: h.sort_key()):
            pos = _find_bad_pair(g)
            if pos is not None:
                bad = (g, pos)
                break
        if bad is None:
            return cur
        g, (p, q) = bad
        coeff = cur.terms.pop(g)
        a = min(g.edges[p][0], g.edges[q][0])
        b = max(g.edges[p][0], g.edges[q][0])
        c = g.edges[p][1]
        # w_ab w_bc + w_bc w_ca + w_ca w_ab = 0 substituted at (p, q);
        # the bad monomial is the middle term.
        t1 = _substitute(g, p, q, ((a, b), (b, c)))
        t2 = _substitute(g, p, q, ((b, c), (c, a)))
        t3 = _substitute(g, p, q, ((c, a), (a, b)))
        bad_coeff = t2.terms.get(g)
        if not bad_coeff:
            raise GraphError("rewriting lost track of the leading term")
        rest = (t1 + t2 + t3)
        rest.add_canonical(g, -bad_coeff)
        for h, ch in rest.terms.items():
            if len(set(h.edges)) != len(h.edges):
                continue
            cur.add_canonical(h, -coeff * ch / bad_coeff)
    raise GraphError("Arnold rewriting did not terminate")


def arnold_basis_dimension(n, s, weight):
    """Dimension of the weight piece on s points: rank check helper."""
    from .linalg import rank  # local import to avoid a cycle
    graphs = {}
    pairs = [(i, j) for i in range(s) for j in range(i + 1, s)]
    for combo in itertools.combinations_with_replacement(pairs, weight):
        g = DecoratedGraph(GRAPHS, CO, n, s, 0, list(combo), [], [()] * s)
        red = arnold_reduce(_as_sum(g))
        if red.is_zero():
            continue
        graphs[tuple(combo)] = red
    basis = sorted({h for red in graphs.values() for h in red.terms},
                   key=lambda h: h.sort_key())
    index = {h: i for i, h in enumerate(basis)}
    rows = []
    for red in graphs.values():
        row = [Fraction(0)] * len(basis)
        for h, c in red.terms.items():
            row[index[h]] = c
        rows.append(row)
    return rank(rows)


# ---------------------------------------------------------------------------
# reduced quotient and twist differentials
# ---------------------------------------------------------------------------

def in_reduced_quotient(g):
    """Offending graphs span the ideal: a component with no numbered vertex
    or an internal vertex of valence < 3 (decorations counted)."""
    if not g.is_valid_basis_graph():
        return False
    return all(g.valence(v) >= 3 for v in g.internals())


def reduce_quotient(x):
    x = _as_sum(x)
    if x.flavor != GRAPHS:
        raise GraphError("the reduced quotient is a graphs-side construction")
    out = GraphSum.zero_like(x)
    out.terms = {g: c for g, c in x.terms.items() if in_reduced_quotient(g)}
    return out


def _pendants(g):
    """(vertex entry index unused) -> list of (pendant, neighbour, edge index)
    over univalent internal vertices with at most one decoration."""
    count = [0] * (g.r + g.k)
    last_edge = [-1] * (g.r + g.k)
    for i, (a, b) in enumerate(g.edges):
        count[a] += 1
        count[b] += 1
        last_edge[a] = i
        last_edge[b] = i
    for v, _ in g.hairs:
        count[v] += 1
    out = []
    for p in g.internals():
        if count[p] != 1 or last_edge[p] < 0:
            continue
        a, b = g.edges[last_edge[p]]
        out.append((p, a if b == p else b, last_edge[p]))
    return out


def _detachment_candidates(g, space, at_externals_only):
    """Canonical classes obtainable by deleting one univalent internal
    pendant (transferring a single-generator decoration to its neighbour).
    Coefficients are recovered from the contravariant action afterwards."""
    gens = set(space.basis()) if space is not None else set()
    out = set()
    for p, v, ei in _pendants(g):
        mono = g.dec[p]
        if at_externals_only and (v >= g.r or mono):
            continue
        if len(mono) > 1 or (mono and mono[0][0] not in gens):
            continue
        bld = Builder(g.flavor, g.variance, g.n, g.r)
        imp = bld.import_graph(g)
        bld.remove(imp.edge_handles[ei])
        bld.remove(bld.find_vertex_entry(imp.vmap[p]))
        for entry, _ in imp.slot_handles.get(imp.vmap[p], []):
            if mono:
                bld.relocate_dec(entry, imp.vmap[v])
        fin = bld.finish_canonical()
        if fin is not None:
            out.add(fin[0])
    return out


def _flip_variance(g):
    variance = CONTRA if g.variance == CO else CO
    return DecoratedGraph(g.flavor, variance, g.n, g.r, g.k, g.edges,
                          g.hairs, g.dec)


def _transpose_action(x, space, action, at_externals_only=False):
    """Transpose of a contravariant degree +1 attachment action.

    The pairing weighs a class by its automorphism order (with a parity
    sign per internal vertex), which is exactly the weight under which the
    edge-contraction differential is the transpose of vertex splitting:
    the twisted covariant differential is then the transpose of the twisted
    contravariant one, and squares to zero because the latter does."""
    from .graphs import automorphism_count
    x = _as_sum(x)
    if x.flavor != GRAPHS or x.variance != CO:
        raise GraphError("twist differentials act on covariant graphs-side sums")
    eps = -1 if x.n % 2 else 1
    out = GraphSum.zero_like(x)
    for g, c in x.terms.items():
        gstar = _flip_variance(g)
        wg = automorphism_count(g)
        for delta in _detachment_candidates(g, space, at_externals_only):
            dstar = GraphSum(GRAPHS, CONTRA, g.n, g.r).add_raw(
                _flip_variance(delta), 1)
            coeff = action(dstar).terms.get(gstar)
            if coeff:
                scale = Fraction(wg, automorphism_count(delta))
                out.add_canonical(delta, c * coeff * eps * scale)
    return out


def d_twist_standard(x, space):
    """Dual form of the action of the standard Maurer-Cartan twist on dual
    graphs-side sums: the transpose of attaching its pendant vertices."""
    from .hgc import act_on_graphs, standard_twist_sum
    z0 = standard_twist_sum(space, _as_sum(x).n)
    return _transpose_action(x, space, lambda d: act_on_graphs(z0, d))


def _attach_external_pendants(dstar):
    """Attach one undecorated pendant at each numbered vertex, weight -1:
    the contravariant form of the one-vertex cooperad twist."""
    from .hgc import attach_terms, ATTACH_ALL
    from .spaces import UNIT
    out = GraphSum.zero_like(dstar)
    for g, c in dstar.terms.items():
        probe = DecoratedGraph(HGC, CONTRA, g.n, 0, 1, [],
                               [(0, (UNIT, 0))], [()])
        out = out + attach_terms([probe], [g], dstar.context(),
                                 policy=ATTACH_ALL, consume_all_slots=False,
                                 unit_targets="external", coeff=-c)
    return out


def d_twist_pendant(x):
    """Extra differential from the cooperad coaction: the transpose of
    attaching an undecorated pendant at a numbered vertex, with weight -1."""
    return _transpose_action(x, None, _attach_external_pendants,
                             at_externals_only=True)


def d_full(x, space):
    """Contraction plus both twists, then the reduced-quotient projection."""
    x = _as_sum(x)
    total = d_contract(x) + d_twist_standard(x, space) + d_twist_pendant(x)
    return reduce_quotient(total)
