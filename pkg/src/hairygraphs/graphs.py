"""Decorated oriented graphs with exact sign bookkeeping.

A graph value is a basis vector of one of three families of complexes:

* ``graphs`` -- numbered external vertices, unnumbered internal vertices,
  every vertex may carry a monomial of decorations (covariant: elements of
  the space; contravariant: dual-basis elements).
* ``hgc`` -- no numbered vertices; unnumbered internal vertices decorated by
  dual-basis monomials, plus "hairs": valence-1 legs decorated by a
  generator or the unit symbol "1".
* ``hgchom`` -- as ``hgc`` but hairs are decorated over one space and
  internal vertices over another.

Orientation conventions (ambient integer parameter n >= 2):

* even n: the set of edges (hair legs included) is ordered; reordering by a
  permutation multiplies the vector by its sign.
* odd n: the set of internal vertices is ordered and every edge carries a
  direction; reversing a direction or reordering vertices changes the sign.

Decorations are graded: permuting decoration monomials past each other picks
up Koszul signs.  All of this is tracked through a single graded word per
graph: internal vertices (parity n mod 2), edge and hair entities (parity
n-1 mod 2), then decoration factors grouped by location (parity = degree
mod 2).  Operations construct a claimed word; the sign of sorting it into
the reference order is computed in one place (:meth:`Builder.finish`).

A graph class is *ZeroClass* when some automorphism reverses the
orientation; such classes are the zero vector and are dropped everywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

GRAPHS = "graphs"
HGC = "hgc"
HGCHOM = "hgchom"

CO = "co"
CONTRA = "contra"

UNIT_DEC = ("1", 0)


class GraphError(ValueError):
    """Raised for structurally invalid graphs or mismatched contexts."""


@dataclass(frozen=True)
class Cap:
    """Size truncation: internal vertices, non-hair edges, decoration budget
    (total vertex-decoration factors), and hair count (defaults to edges)."""

    internals: int
    edges: int
    dec: int = 2
    hairs: int = -1

    def __post_init__(self):
        if self.hairs < 0:
            object.__setattr__(self, "hairs", self.edges)
        if self.internals < 0 or self.edges < 0 or self.dec < 0:
            raise GraphError("cap components must be non-negative")

    def admits(self, g):
        return (g.k <= self.internals
                and len(g.edges) + len(g.hairs) <= self.edges
                and len(g.hairs) <= self.hairs
                and sum(len(m) for m in g.dec) <= self.dec)

    def to_json(self):
        return {"internals": self.internals, "edges": self.edges,
                "dec": self.dec, "hairs": self.hairs}

    @classmethod
    def from_json(cls, doc):
        return cls(int(doc["internals"]), int(doc["edges"]),
                   int(doc.get("dec", 2)), int(doc.get("hairs", -1)))


class DecoratedGraph:
    """Immutable decorated graph in normal form.

    Vertices are 0..r+k-1 with externals first.  ``edges`` is a tuple of
    endpoint pairs (a, b) with a <= b; its list order is the edge order for
    even n.  ``hairs`` is a tuple of (vertex, (name, degree)); hair legs are
    directed vertex-to-end for odd n.  ``dec[v]`` is the sorted decoration
    monomial at vertex v.
    """

    __slots__ = ("flavor", "variance", "n", "r", "k", "edges", "hairs",
                 "dec", "_hash")

    def __init__(self, flavor, variance, n, r, k, edges, hairs, dec):
        self.flavor = flavor
        self.variance = variance
        self.n = n
        self.r = r
        self.k = k
        self.edges = tuple((int(a), int(b)) for a, b in edges)
        self.hairs = tuple((int(v), (str(nm), int(d))) for v, (nm, d) in hairs)
        self.dec = tuple(tuple((str(nm), int(d)) for nm, d in mono) for mono in dec)
        self._hash = hash((self.flavor, self.variance, self.n, self.r, self.k,
                           self.edges, self.hairs, self.dec))
        self._check()

    def _check(self):
        nv = self.r + self.k
        if len(self.dec) != nv:
            raise GraphError("decoration table has %d slots for %d vertices"
                             % (len(self.dec), nv))
        for a, b in self.edges:
            if not (0 <= a < nv and 0 <= b < nv):
                raise GraphError("edge endpoint out of range")
            if a > b:
                raise GraphError("edges must be stored with a <= b")
        for v, _ in self.hairs:
            if not (0 <= v < nv):
                raise GraphError("hair vertex out of range")
        if self.flavor in (HGC, HGCHOM):
            if self.r != 0:
                raise GraphError("hairy graphs have no numbered vertices")
        elif self.hairs:
            raise GraphError("graphs-side values carry no hairs")
        if self.n < 2:
            raise GraphError("ambient parameter must be >= 2")

    # -- structure ----------------------------------------------------------

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return (isinstance(other, DecoratedGraph) and self._hash == other._hash
                and self.flavor == other.flavor and self.variance == other.variance
                and self.n == other.n and self.r == other.r and self.k == other.k
                and self.edges == other.edges and self.hairs == other.hairs
                and self.dec == other.dec)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return (self.k, len(self.edges), len(self.hairs), self.edges,
                self.hairs, self.dec)

    def __repr__(self):
        bits = ["%s/%s n=%d r=%d k=%d" % (self.flavor, self.variance, self.n,
                                          self.r, self.k)]
        if self.edges:
            bits.append("E=" + ",".join("%d-%d" % e for e in self.edges))
        if self.hairs:
            bits.append("H=" + ",".join("%d:%s" % (v, d[0]) for v, d in self.hairs))
        if any(self.dec):
            bits.append("D=" + ";".join("%d:%s" % (v, "".join(nm for nm, _ in m))
                                        for v, m in enumerate(self.dec) if m))
        return "<G %s>" % " ".join(bits)

    def internals(self):
        return range(self.r, self.r + self.k)

    def is_internal(self, v):
        return v >= self.r

    def valence(self, v, count_dec=True):
        """Edge endpoints (tadpoles twice) + hairs + decoration factors."""
        val = 0
        for a, b in self.edges:
            val += (a == v) + (b == v)
        for w, _ in self.hairs:
            val += (w == v)
        if count_dec:
            val += len(self.dec[v])
        return val

    def degree(self):
        """Cohomological degree under the convention certified by the
        d^2 = 0 and Maurer-Cartan test suites."""
        n = self.n
        e = len(self.edges) + len(self.hairs)
        raw = (n - 1) * e - n * self.k
        dvert = sum(d for mono in self.dec for _, d in mono)
        dhair = sum(d for _, (_, d) in self.hairs)
        if self.flavor == GRAPHS and self.variance == CO:
            return raw + dvert
        return -raw + dvert - dhair

    def dec_total(self):
        return sum(len(m) for m in self.dec)

    def adjacency(self):
        adj = {v: set() for v in range(self.r + self.k)}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def connected_components(self):
        """Components of the vertex set under non-hair edges."""
        adj = self.adjacency()
        seen, comps = set(), []
        for v in range(self.r + self.k):
            if v in seen:
                continue
            comp, stack = set(), [v]
            while stack:
                w = stack.pop()
                if w in comp:
                    continue
                comp.add(w)
                stack.extend(adj[w] - comp)
            seen |= comp
            comps.append(comp)
        return comps

    def is_connected(self):
        return len(self.connected_components()) <= 1

    def is_forest(self):
        """No cycles among non-hair edges (multi-edges and tadpoles count)."""
        comps = self.connected_components()
        return len(self.edges) == (self.r + self.k) - len(comps)

    def is_valid_basis_graph(self):
        """Structural membership in the spanning set of its complex.

        Hairy basis graphs are connected with at least one hair; graphs-side
        basis graphs have a numbered vertex in every component."""
        if self.flavor == GRAPHS:
            return all(any(v < self.r for v in comp)
                       for comp in self.connected_components())
        return self.k > 0 and bool(self.hairs) and self.is_connected()


def normalize_monomial(mono):
    """Sort a decoration monomial, returning (sorted, koszul sign) or None
    when a repeated odd factor forces the monomial to vanish."""
    mono = list(mono)
    sign = 1
    # insertion sort, accumulating Koszul transposition signs
    for i in range(1, len(mono)):
        j = i
        while j > 0 and mono[j - 1] > mono[j]:
            if mono[j - 1][1] % 2 and mono[j][1] % 2:
                sign = -sign
            mono[j - 1], mono[j] = mono[j], mono[j - 1]
            j -= 1
    for i in range(1, len(mono)):
        if mono[i] == mono[i - 1] and mono[i][1] % 2:
            return None
    return tuple(mono), sign


# ---------------------------------------------------------------------------
# graded word machinery
# ---------------------------------------------------------------------------

K_MARKER, K_VERT, K_EDGE, K_HAIR, K_DEC = 0, 1, 2, 3, 4


class Builder:
    """Accumulates a graph construction together with its orientation sign.

    Entities are appended in *claimed* order; :meth:`finish` computes the
    parity-weighted sign of stably sorting the claimed word into the
    reference order and returns the normal-form graph.  Removals multiply
    the running sign by the cost of first moving the entity to the end of
    the word.
    """

    def __init__(self, flavor, variance, n, r=0):
        self.flavor, self.variance, self.n, self.r = flavor, variance, n, r
        self.vp = n % 2
        self.ep = (n - 1) % 2
        self.sign = 1
        self.word = []  # entries: [kind, payload, parity, alive, rank]
        self.next_vertex = r

    # -- entity creation ---------------------------------------------------

    def _push(self, kind, payload, parity, rank=None):
        entry = [kind, payload, parity, True,
                 len(self.word) if rank is None else rank]
        self.word.append(entry)
        return entry

    def add_marker(self):
        """Formal odd suspension marker; stripped (front of word) at finish."""
        return self._push(K_MARKER, None, 1)

    def new_internal(self):
        vid = self.next_vertex
        self.next_vertex += 1
        self._push(K_VERT, vid, self.vp)
        return vid

    def add_edge(self, a, b):
        return self._push(K_EDGE, (a, b), self.ep)

    def add_hair_leg(self, v):
        return self._push(K_HAIR, v, self.ep)

    def add_hair_dec(self, leg, dec):
        return self._push(K_DEC, ("hair", leg, dec), dec[1] % 2)

    def add_hair(self, v, dec):
        """Leg plus its decoration, claimed adjacently.  Only safe when no
        vertex decorations follow; imports use the reference order instead."""
        leg = self.add_hair_leg(v)
        slot = self.add_hair_dec(leg, dec)
        return leg, slot

    def add_dec(self, v, dec):
        return self._push(K_DEC, ("vert", v, dec), dec[1] % 2)

    def import_graph(self, g, marker=False):
        """Append a graph's word in its reference order (vertices, edges,
        hair legs, vertex decorations, hair decorations); returns handles
        for later surgery."""
        if marker:
            self.add_marker()
        vmap = {v: v for v in range(g.r)}
        for v in g.internals():
            vmap[v] = self.new_internal()
        edge_handles = []
        for a, b in g.edges:
            edge_handles.append(self.add_edge(vmap[a], vmap[b]))
        legs = [self.add_hair_leg(vmap[v]) for v, _ in g.hairs]
        slot_handles = {}
        for v, mono in enumerate(g.dec):
            for dec in mono:
                slot_handles.setdefault(vmap[v], []).append(
                    (self.add_dec(vmap[v], dec), dec))
        hair_handles = []
        for leg, (v, dec) in zip(legs, g.hairs):
            hair_handles.append((leg, self.add_hair_dec(leg, dec)))
        return Imported(self, g, vmap, edge_handles, hair_handles, slot_handles)

    # -- surgery -------------------------------------------------------------

    def remove(self, entry):
        """Remove an entity: Koszul cost of moving it past everything
        claimed after it, then deleting it."""
        if not entry[3]:
            raise GraphError("entity removed twice")
        if entry[2]:
            idx = next(i for i, e in enumerate(self.word) if e is entry)
            after = sum(1 for e in self.word[idx + 1:] if e[3] and e[2])
            if after % 2:
                self.sign = -self.sign
        entry[3] = False

    def relocate_dec(self, entry, vertex):
        """Transfer a vertex-decoration factor to another vertex in place;
        the grouping sign is picked up at finish time."""
        if not entry[3] or entry[0] != K_DEC or entry[1][0] != "vert":
            raise GraphError("can only relocate a live vertex decoration")
        entry[1] = ("vert", vertex, entry[1][2])

    def _claim_index(self, entry):
        for i, e in enumerate(self.word):
            if e is entry:
                return i
        raise GraphError("entity does not belong to this builder")

    def attach_hair(self, imported_hair, target_vertex, slot=None):
        """Convert a hair leg into a normal edge to ``target_vertex``.

        A paired attachment transports the hair decoration to the matched
        dual slot (Koszul cost of the claimed word between them) and
        annihilates the pair through <dual, generator> = 1.  The leg moves
        past the claimed tail of the word and re-enters as an edge, which
        costs one edge parity.  Certified by the Leibniz, Jacobi, and
        Maurer-Cartan suites at both parities of n."""
        leg, dslot = imported_hair
        v = leg[1]
        deg = dslot[1][2][1]
        if slot is not None:
            i, j = self._claim_index(dslot), self._claim_index(slot)
            lo, hi = (i, j) if i < j else (j, i)
            between = sum(1 for e in self.word[lo + 1:hi] if e[3] and e[2])
            if deg % 2 and (between + 1) % 2:
                self.sign = -self.sign
            dslot[3] = False
            slot[3] = False
        else:
            dslot[3] = False
        idx = self._claim_index(leg)
        after = sum(1 for e in self.word[idx + 1:] if e[3] and e[2])
        if self.ep and after % 2:
            self.sign = -self.sign
        leg[3] = False
        if self.ep:
            self.sign = -self.sign
        return self.add_edge(v, target_vertex)

    def merge_vertices(self, keep, absorb):
        """Redirect all structure at ``absorb`` onto ``keep``.

        The absorbed vertex entity must be removed by the caller with the
        appropriate convention (contraction handles this itself)."""
        for e in self.word:
            if not e[3]:
                continue
            if e[0] == K_EDGE:
                a, b = e[1]
                e[1] = (keep if a == absorb else a, keep if b == absorb else b)
            elif e[0] == K_HAIR and e[1] == absorb:
                e[1] = keep
            elif e[0] == K_DEC and e[1][0] == "vert" and e[1][1] == absorb:
                e[1] = ("vert", keep, e[1][2])

    def find_vertex_entry(self, vid):
        for e in self.word:
            if e[3] and e[0] == K_VERT and e[1] == vid:
                return e
        raise GraphError("no live vertex entity %d" % vid)

    # -- finish ---------------------------------------------------------------

    def finish(self):
        """Return (normal-form graph, sign) or None for a vanishing value."""
        alive = [e for e in self.word if e[3]]
        # compact vertex ids: claimed creation order is the reference order
        vids = [e[1] for e in alive if e[0] == K_VERT]
        vmap = {v: self.r + i for i, v in enumerate(vids)}
        for v in range(self.r):
            vmap[v] = v
        k = len(vids)

        hair_rank = {}
        for e in alive:
            if e[0] == K_HAIR:
                hair_rank[id(e)] = len(hair_rank)

        # stable-sort sign of the claimed word into reference order
        keys = []
        for e in alive:
            if e[0] == K_DEC:
                loc, ref = e[1][0], e[1][1]
                if loc == "vert":
                    srt = (K_DEC, (0, vmap[e[1][1]]), e[4])
                else:
                    srt = (K_DEC, (1, hair_rank[id(ref)]), e[4])
            else:
                srt = (e[0], e[4])
            keys.append((srt, e[2]))
        sign = self.sign
        for i in range(len(keys)):
            ki, pi = keys[i]
            if not pi:
                continue
            for j in range(i + 1, len(keys)):
                kj, pj = keys[j]
                if pj and ki > kj:
                    sign = -sign

        # assemble everything in sorted-key order
        order = sorted(range(len(alive)), key=lambda i: keys[i][0])
        nverts = self.r + k
        edges = []
        dec = [[] for _ in range(nverts)]
        hair_list = [None] * len(hair_rank)
        for i in order:
            e = alive[i]
            if e[0] == K_EDGE:
                a, b = vmap[e[1][0]], vmap[e[1][1]]
                if a > b:
                    a, b = b, a
                    if self.n % 2:
                        sign = -sign
                edges.append((a, b))
            elif e[0] == K_DEC:
                if e[1][0] == "vert":
                    dec[vmap[e[1][1]]].append(e[1][2])
                else:
                    hair_list[hair_rank[id(e[1][1])]] = (vmap[e[1][1][1]],
                                                         e[1][2])
        for i in range(len(hair_list)):
            if hair_list[i] is None:
                raise GraphError("hair without decoration")
        mono_out = []
        for mono in dec:
            norm = normalize_monomial(mono)
            if norm is None:
                return None
            mono_out.append(norm[0])
            sign *= norm[1]
        g = DecoratedGraph(self.flavor, self.variance, self.n, self.r, k,
                           edges, hair_list, mono_out)
        return g, sign

    def finish_canonical(self):
        """finish() followed by canonicalization; None for vanishing values."""
        fin = self.finish()
        if fin is None:
            return None
        g, sign = fin
        canon = canonicalize(g)
        if canon is None:
            return None
        cg, s2 = canon
        return cg, sign * s2


class Imported:
    """Handles into a Builder for one imported graph."""

    __slots__ = ("builder", "graph", "vmap", "edge_handles", "hair_handles",
                 "slot_handles")

    def __init__(self, builder, graph, vmap, edge_handles, hair_handles,
                 slot_handles):
        self.builder = builder
        self.graph = graph
        self.vmap = vmap
        self.edge_handles = edge_handles
        self.hair_handles = hair_handles
        self.slot_handles = slot_handles  # new vid -> [(entry, dec)]

    def vertices(self):
        return [self.vmap[v] for v in range(self.graph.r + self.graph.k)]

    def internal_vertices(self):
        return [self.vmap[v] for v in self.graph.internals()]


# ---------------------------------------------------------------------------
# canonicalization
# ---------------------------------------------------------------------------

_canon_cache = {}


def clear_caches():
    _canon_cache.clear()


def _initial_colors(g):
    nv = g.r + g.k
    deg_at = [[] for _ in range(nv)]
    tad = [0] * nv
    ext_adj = [[] for _ in range(nv)]
    for a, b in g.edges:
        if a == b:
            tad[a] += 1
        else:
            for x, y in ((a, b), (b, a)):
                if y < g.r:
                    ext_adj[x].append(y)
    hair_at = [[] for _ in range(nv)]
    for v, dec in g.hairs:
        hair_at[v].append(dec)
    colors = {}
    for v in g.internals():
        colors[v] = (g.dec[v], tuple(sorted(hair_at[v])), tad[v],
                     tuple(sorted(ext_adj[v])), g.valence(v))
    return colors


def _refine_colors(g, colors):
    adj = {}
    for a, b in g.edges:
        if a != b:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
    for _ in range(g.k):
        new = {}
        for v in g.internals():
            nb = tuple(sorted(colors[w] for w in adj.get(v, ()) if w >= g.r))
            new[v] = (colors[v], nb)
        # compress to comparable ranks
        ranks = {c: i for i, c in enumerate(sorted(set(new.values())))}
        new = {v: ranks[c] for v, c in new.items()}
        if len(set(new.values())) == len(set(colors.values())):
            colors = new
            break
        colors = new
    return colors


def _candidate_relabelings(g):
    """Color-respecting assignments of new labels to internal vertices.

    Classes are ordered by an isomorphism-invariant key, so the search space
    is identical for any relabeled copy of the same graph."""
    if g.k == 0:
        yield {}
        return
    colors = _initial_colors(g)
    refined = _refine_colors(g, colors)
    # order classes by invariant (initial color sorted key, refined rank)
    cls = {}
    for v in g.internals():
        cls.setdefault((colors[v], refined[v]), []).append(v)
    blocks = [cls[key] for key in sorted(cls.keys())]
    offsets = []
    base = 0
    for b in blocks:
        offsets.append(base)
        base += len(b)
    for perms in itertools.product(*(itertools.permutations(b) for b in blocks)):
        mapping = {}
        for block_i, perm in enumerate(perms):
            for j, v in enumerate(perm):
                mapping[v] = g.r + offsets[block_i] + j
        yield mapping


def _relabel(g, mapping):
    """Apply an internal relabeling; returns (encoding, graph fields, sign)."""
    n = g.n
    sign = 1
    vp, ep = n % 2, (n - 1) % 2

    # vertex word permutation: old label order -> new label order
    if vp:
        perm = [mapping[v] for v in g.internals()]
        for i in range(len(perm)):
            for j in range(i + 1, len(perm)):
                if perm[i] > perm[j]:
                    sign = -sign
    # vertex decoration blocks follow their vertices (Koszul on block degree)
    par = [sum(d for _, d in g.dec[v]) % 2 for v in g.internals()]
    perm = [mapping[v] for v in g.internals()]
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j] and par[i] and par[j]:
                sign = -sign

    def mapv(v):
        return mapping.get(v, v)

    edges = []
    for pos, (a, b) in enumerate(g.edges):
        a, b = mapv(a), mapv(b)
        if a > b:
            a, b = b, a
            if vp:
                sign = -sign
        edges.append((a, b, pos))
    edges.sort(key=lambda t: t[:2])
    if ep:
        posperm = [t[2] for t in edges]
        for i in range(len(posperm)):
            for j in range(i + 1, len(posperm)):
                if posperm[i] > posperm[j]:
                    sign = -sign

    hairs = [(mapv(v), dec, pos) for pos, (v, dec) in enumerate(g.hairs)]
    hairs.sort(key=lambda t: t[:2])
    posperm = [t[2] for t in hairs]
    hpar = [g.hairs[p][1][1] % 2 for p in posperm]
    for i in range(len(posperm)):
        for j in range(i + 1, len(posperm)):
            if posperm[i] > posperm[j]:
                if ep:
                    sign = -sign
                if hpar[i] and hpar[j]:
                    sign = -sign

    dec = [None] * (g.r + g.k)
    for v in range(g.r + g.k):
        dec[mapv(v)] = g.dec[v]
    enc = (tuple(t[:2] for t in edges), tuple(t[:2] for t in hairs), tuple(dec))
    return enc, sign


def automorphism_count(g):
    """Order of the automorphism group of a canonical nonzero class.

    Counts internal relabelings preserving the structure, times the local
    symmetries invisible to relabelings: tadpole flips, permutations of
    parallel edges, of repeated decoration factors, and of repeated hairs.
    """
    from collections import Counter
    from math import factorial
    base_enc, _ = _relabel(g, {v: v for v in g.internals()})
    labels = sum(1 for mapping in _candidate_relabelings(g)
                 if _relabel(g, mapping)[0] == base_enc)
    w = labels
    for mono in g.dec:
        for c in Counter(mono).values():
            w *= factorial(c)
    for (a, b), c in Counter(g.edges).items():
        w *= factorial(c) * (2 ** c if a == b else 1)
    for c in Counter(g.hairs).values():
        w *= factorial(c)
    return w


def canonicalize(g):
    """Canonical representative of the isomorphism class of ``g``.

    Returns (canonical graph, sign) with ``g = sign * canonical``, or None
    when the class carries an orientation-reversing automorphism.
    """
    sentinel = object()
    cached = _canon_cache.get(g, sentinel)
    if cached is not sentinel:
        return cached
    result = _canonicalize_uncached(g)
    _canon_cache[g] = result
    return result


def _canonicalize_uncached(g):
    n = g.n
    # quick orientation kills
    if n % 2:
        if any(a == b for a, b in g.edges):
            return None  # reversing a tadpole is a sign -1 automorphism
    else:
        seen = set()
        for e in g.edges:
            if e in seen:
                return None  # swapping parallel edges is a sign -1 automorphism
            seen.add(e)
    seen = set()
    for h in g.hairs:
        if h in seen and ((n - 1) + h[1][1]) % 2:
            return None  # swapping identical hairs reverses the orientation
        seen.add(h)

    best_enc = None
    best_sign = 0
    for mapping in _candidate_relabelings(g):
        enc, sign = _relabel(g, mapping)
        if best_enc is None or enc < best_enc:
            best_enc, best_sign = enc, sign
        elif enc == best_enc and sign != best_sign:
            return None  # automorphism acts by -1: the class vanishes
    edges, hairs, dec = best_enc
    best_graph = DecoratedGraph(g.flavor, g.variance, g.n, g.r, g.k,
                                edges, hairs, dec)
    return best_graph, best_sign


# ---------------------------------------------------------------------------
# formal sums
# ---------------------------------------------------------------------------

class GraphSum:
    """Finite rational linear combination of canonical graphs.

    The context (flavor, variance, n, r) is fixed per sum; all arithmetic
    canonicalizes incoming terms and drops zero classes and coefficients.
    """

    __slots__ = ("flavor", "variance", "n", "r", "terms")

    def __init__(self, flavor, variance, n, r=0, terms=None):
        self.flavor, self.variance, self.n, self.r = flavor, variance, n, r
        self.terms = {}
        if terms:
            for g, c in (terms.items() if isinstance(terms, dict) else terms):
                self.add_raw(g, c)

    @classmethod
    def zero_like(cls, other):
        return cls(other.flavor, other.variance, other.n, other.r)

    def context(self):
        return (self.flavor, self.variance, self.n, self.r)

    def _check_ctx(self, g):
        if (g.flavor, g.variance, g.n, g.r) != self.context():
            raise GraphError("graph context %r does not match sum context %r"
                             % ((g.flavor, g.variance, g.n, g.r), self.context()))

    def add_raw(self, g, coeff):
        """Canonicalize ``g`` and accumulate ``coeff`` times its class."""
        coeff = Fraction(coeff)
        if not coeff:
            return self
        self._check_ctx(g)
        canon = canonicalize(g)
        if canon is None:
            return self
        cg, sign = canon
        c = self.terms.get(cg, Fraction(0)) + coeff * sign
        if c:
            self.terms[cg] = c
        else:
            self.terms.pop(cg, None)
        return self

    def add_canonical(self, cg, coeff):
        c = self.terms.get(cg, Fraction(0)) + coeff
        if c:
            self.terms[cg] = c
        else:
            self.terms.pop(cg, None)
        return self

    # -- vector space operations --------------------------------------------

    def __add__(self, other):
        if self.context() != other.context():
            raise GraphError("cannot add sums in different contexts")
        out = GraphSum.zero_like(self)
        out.terms = dict(self.terms)
        for g, c in other.terms.items():
            out.add_canonical(g, c)
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        out = GraphSum.zero_like(self)
        if c:
            out.terms = {g: v * c for g, v in self.terms.items()}
        return out

    def __eq__(self, other):
        return (isinstance(other, GraphSum) and self.context() == other.context()
                and self.terms == other.terms)

    def __ne__(self, other):
        return not self == other

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda t: t[0].sort_key()))

    def __repr__(self):
        if not self.terms:
            return "<GraphSum 0>"
        return "<GraphSum %d terms: %s>" % (
            len(self.terms),
            " + ".join("(%s)*%r" % (c, g) for g, c in
                       sorted(self.terms.items(), key=lambda t: t[0].sort_key())[:4]))

    def restrict(self, cap):
        out = GraphSum.zero_like(self)
        out.terms = {g: c for g, c in self.terms.items() if cap.admits(g)}
        return out

    def escapes(self, cap):
        return any(not cap.admits(g) for g in self.terms)

    def map_linear(self, op):
        """Apply a graph-wise linear operation and resum."""
        out = None
        for g, c in self.terms.items():
            val = op(g)
            if out is None:
                out = GraphSum.zero_like(val)
            for h, c2 in val.terms.items():
                out.add_canonical(h, c * c2)
        if out is None:
            raise GraphError("cannot infer output context of an empty sum")
        return out

    def degrees(self):
        return sorted({g.degree() for g in self.terms})

    def is_homogeneous(self, d=None):
        degs = self.degrees()
        if not degs:
            return True
        if d is None:
            return len(degs) == 1
        return degs == [d]


def single(flavor, variance, n, r, k, edges, hairs, dec, coeff=1):
    """Convenience: one canonicalized term as a GraphSum."""
    g = DecoratedGraph(flavor, variance, n, r, k, edges, hairs, dec)
    return GraphSum(flavor, variance, n, r).add_raw(g, coeff)
