"""Hairy graph Lie algebras: splitting differential, bracket, Maurer-Cartan
elements and the action on dual graphs-side sums.

The splitting differential distributes the half-edges, hairs, and decoration
factors of a vertex onto the two ends of a new edge, one term per unordered
distribution.  The Lie-admissible product attaches a nonempty set of hairs
of the first graph onto the second: hairs carrying a generator consume a
matching dual decoration slot, unit hairs land on any vertex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .graphs import (CO, CONTRA, GRAPHS, HGC, HGCHOM, Builder, Cap,
                     DecoratedGraph, GraphError, GraphSum)
from .spaces import UNIT
from . import conventions


def _as_sum(x):
    return x if isinstance(x, GraphSum) else GraphSum(
        x.flavor, x.variance, x.n, x.r).add_raw(x, 1)


# ---------------------------------------------------------------------------
# splitting differential
# ---------------------------------------------------------------------------

_split_cache = {}


def _vertex_items(g, v):
    """Half-edges, hairs and decoration factors incident to ``v``."""
    items = []
    for i, (a, b) in enumerate(g.edges):
        if a == v:
            items.append(("tail", i))
        if b == v:
            items.append(("head", i))
    for j, (w, _) in enumerate(g.hairs):
        if w == v:
            items.append(("hair", j))
    for t in range(len(g.dec[v])):
        items.append(("dec", t))
    return items


def _split_vertex(g, v, side_b):
    """One distribution: items in ``side_b`` move to the new vertex.

    The differential deposits its new material on the left: the new vertex
    enters at the front of the vertex order and the new edge at the front
    of the word, directed old-to-new.  This matches the transpose of the
    contraction convention (contracted edge first, endpoints first) and is
    certified by the d^2, Leibniz, and Maurer-Cartan suites."""
    bld = Builder(g.flavor, g.variance, g.n, g.r)
    vmap = {w: w for w in range(g.r)}
    vb = bld.new_internal()
    for w in g.internals():
        vmap[w] = bld.new_internal()
    va = vmap[v]
    bld.add_edge(va, vb)

    for i, (a, b) in enumerate(g.edges):
        if a == v:
            ta = vb if ("tail", i) in side_b else va
        else:
            ta = vmap[a]
        if b == v:
            he = vb if ("head", i) in side_b else va
        else:
            he = vmap[b]
        bld.add_edge(ta, he)
    legs = []
    for j, (w, d) in enumerate(g.hairs):
        if w != v:
            legs.append((bld.add_hair_leg(vmap[w]), d))
        else:
            legs.append((bld.add_hair_leg(
                vb if ("hair", j) in side_b else va), d))
    for w, mono in enumerate(g.dec):
        for t, d in enumerate(mono):
            if w != v:
                bld.add_dec(vmap[w], d)
            else:
                bld.add_dec(vb if ("dec", t) in side_b else va, d)
    for leg, d in legs:
        bld.add_hair_dec(leg, d)
    return bld.finish_canonical()


def d_split_graph(g):
    cached = _split_cache.get(g)
    if cached is not None:
        return cached
    terms = []
    for v in g.internals():
        items = _vertex_items(g, v)
        if not items:
            fin = _split_vertex(g, v, frozenset())
            if fin is not None:
                terms.append(fin)
            continue
        first, rest = items[0], items[1:]
        for size in range(len(rest) + 1):
            for combo in itertools.combinations(rest, size):
                side_b = frozenset((w, i) for w, i in combo)
                fin = _split_vertex(g, v, side_b)
                if fin is not None:
                    terms.append(fin)
    if conventions.SABOTAGE == "flip-split-sign":
        terms = [(h, -s) for h, s in terms]
    _split_cache[g] = terms
    return terms


def d_split(x):
    """Split each internal vertex in all (unordered) ways."""
    x = _as_sum(x)
    if x.flavor not in (HGC, HGCHOM):
        raise GraphError("d_split acts on hairy sums")
    out = GraphSum.zero_like(x)
    for g, c in x.terms.items():
        for h, s in d_split_graph(g):
            out.add_canonical(h, c * s)
    return out


# ---------------------------------------------------------------------------
# attachment engine
# ---------------------------------------------------------------------------

ATTACH_ALL = "all"            # every hair must attach
ATTACH_NONUNIT = "nonunit"    # generator hairs must attach, unit hairs may stay
ATTACH_OPTIONAL = "optional"  # every hair may stay


def _hair_options(g, src_idx, policy, targets, unit_vertices):
    """Per-hair candidate moves; None encodes "remains a hair"."""
    options = []
    for j, (_, dec) in enumerate(g.hairs):
        opts = []
        if dec[0] == UNIT:
            for t_idx, tg in targets:
                opts.extend(("vert", t_idx, v) for v in unit_vertices[t_idx])
            if policy in (ATTACH_NONUNIT, ATTACH_OPTIONAL):
                opts.append(None)
        else:
            for t_idx, tg in targets:
                for v in range(tg.r + tg.k):
                    for slotpos, (nm, d) in enumerate(tg.dec[v]):
                        if nm == dec[0]:
                            opts.append(("slot", t_idx, v, slotpos))
            if policy == ATTACH_OPTIONAL:
                opts.append(None)
        options.append(((src_idx, j), opts))
    return options


def attach_terms(sources, targets, out_ctx, *, policy, consume_all_slots,
                 require_nonempty=False, markers_on="none", coeff=1,
                 unit_targets="any"):
    """Sum over attachments of the sources' hairs onto the targets.

    ``sources`` and ``targets`` are lists of graphs.  Returns a GraphSum in
    ``out_ctx`` = (flavor, variance, n, r).  Invalid results (disconnected
    hairy graphs, graphs-side components without a numbered vertex) are
    dropped: they are zero in the receiving complex.
    """
    flavor, variance, n, r = out_ctx
    out = GraphSum(flavor, variance, n, r)

    unit_vertices = {}
    tlist = list(enumerate(targets))
    for t_idx, tg in tlist:
        if unit_targets == "external":
            unit_vertices[t_idx] = list(range(tg.r))
        elif tg.flavor == GRAPHS:
            unit_vertices[t_idx] = list(range(tg.r + tg.k))
        else:
            unit_vertices[t_idx] = list(tg.internals())

    slots_total = sum(len(m) for tg in targets for m in tg.dec) \
        if consume_all_slots else None

    all_options = []
    for s_idx, sg in enumerate(sources):
        all_options.extend(_hair_options(sg, s_idx, policy, tlist, unit_vertices))

    keys = [k for k, _ in all_options]
    pools = [opts for _, opts in all_options]
    for choice in itertools.product(*pools):
        used_slots = set()
        n_attached = 0
        ok = True
        for mv in choice:
            if mv is None:
                continue
            n_attached += 1
            if mv[0] == "slot":
                slot_key = mv[1:]
                if slot_key in used_slots:
                    ok = False
                    break
                used_slots.add(slot_key)
        if not ok:
            continue
        if require_nonempty and n_attached == 0:
            continue
        if consume_all_slots and len(used_slots) != slots_total:
            continue
        term = _build_attachment(sources, targets, out_ctx, keys, choice,
                                 markers_on)
        if term is None:
            continue
        g, sign = term
        if not g.is_valid_basis_graph():
            continue
        out.add_raw(g, coeff * sign)
    return out


def _build_attachment(sources, targets, out_ctx, keys, choice, markers_on):
    flavor, variance, n, r = out_ctx
    bld = Builder(flavor, variance, n, r)
    src_imp, tgt_imp = [], []
    if markers_on == "targets":
        for sg in sources:
            src_imp.append(bld.import_graph(sg))
        for tg in targets:
            tgt_imp.append(bld.import_graph(tg, marker=True))
    else:
        for sg in sources:
            src_imp.append(bld.import_graph(sg, marker=(markers_on == "sources")))
        for tg in targets:
            tgt_imp.append(bld.import_graph(tg))
    for (s_idx, j), mv in zip(keys, choice):
        if mv is None:
            continue
        imp = src_imp[s_idx]
        if mv[0] == "vert":
            _, t_idx, v = mv
            bld.attach_hair(imp.hair_handles[j], tgt_imp[t_idx].vmap[v])
        else:
            _, t_idx, v, slotpos = mv
            timp = tgt_imp[t_idx]
            entry, _ = timp.slot_handles[timp.vmap[v]][slotpos]
            bld.attach_hair(imp.hair_handles[j], timp.vmap[v], entry)
    return bld.finish()


# ---------------------------------------------------------------------------
# Lie structure
# ---------------------------------------------------------------------------

def star(x, y):
    """Lie-admissible product: nonempty partial matchings of the first
    factor's hairs onto the second factor."""
    x, y = _as_sum(x), _as_sum(y)
    if x.context() != y.context():
        raise GraphError("star factors live in different contexts")
    out = GraphSum.zero_like(x)
    for gx, cx in x.terms.items():
        for gy, cy in y.terms.items():
            t = attach_terms([gx], [gy], x.context(), policy=ATTACH_OPTIONAL,
                             consume_all_slots=False, require_nonempty=True,
                             coeff=cx * cy)
            out = out + t
    if conventions.SABOTAGE == "flip-star-sign":
        out = out.scale(-1)
    return out


def bracket(x, y):
    """[x, y] = x*y - (-1)^{|x||y|} y*x, bilinear over homogeneous terms."""
    x, y = _as_sum(x), _as_sum(y)
    out = GraphSum.zero_like(x)
    for gx, cx in x.terms.items():
        for gy, cy in y.terms.items():
            sx = attach_terms([gx], [gy], x.context(), policy=ATTACH_OPTIONAL,
                              consume_all_slots=False, require_nonempty=True,
                              coeff=cx * cy)
            sgn = -1 if (gx.degree() * gy.degree()) % 2 else 1
            sy = attach_terms([gy], [gx], x.context(), policy=ATTACH_OPTIONAL,
                              consume_all_slots=False, require_nonempty=True,
                              coeff=-sgn * cx * cy)
            out = out + sx + sy
    if conventions.SABOTAGE == "flip-star-sign":
        out = out.scale(-1)
    return out


def twisted_d(x, z):
    """Differential twisted by a degree-1 element: d_split + [z, -]."""
    return d_split(x) + bracket(z, x)


# ---------------------------------------------------------------------------
# Maurer-Cartan elements
# ---------------------------------------------------------------------------

@dataclass
class MCElement:
    """Degree-1 element together with the truncation it was certified at."""

    element: GraphSum
    space_tag: str
    certified_cap: Cap | None = None

    def __post_init__(self):
        if not self.element.is_homogeneous(1):
            raise GraphError("Maurer-Cartan elements are homogeneous of degree 1")


def mc_check(z, cap, background=None):
    """Residual d_split(z) + [bg, z] + (1/2)[z, z] restricted to the cap.

    Returns (passed, residual sum).  ``background`` twists the differential
    by an already-certified element, which is how elements of the twisted
    algebras are certified.
    """
    z = z.element if isinstance(z, MCElement) else _as_sum(z)
    if not z.is_homogeneous(1):
        raise GraphError("Maurer-Cartan candidates must be homogeneous of degree 1")
    residual = d_split(z) + bracket(z, z).scale(Fraction(1, 2))
    if background is not None:
        bg = background.element if isinstance(background, MCElement) else background
        residual = residual + bracket(bg, z)
    residual = residual.restrict(cap)
    return residual.is_zero(), residual


def standard_twist_sum(space, n, flavor=HGC):
    """Unit-hair pendant plus the dual-basis pendant sum, as a plain sum.
    Each dual-basis term carries the sign of transposing the generator past
    its dual."""
    s = GraphSum(flavor, CONTRA, n, 0)
    s.add_raw(DecoratedGraph(flavor, CONTRA, n, 0, 1, [], [(0, (UNIT, 0))],
                             [()]), 1)
    for name in space.basis():
        d = space.degree(name)
        g = DecoratedGraph(flavor, CONTRA, n, 0, 1, [], [(0, (name, d))],
                           [((name, d),)])
        s.add_raw(g, (-1) ** d)
    return s


def standard_mc_element(space, n, cap=None, flavor=HGC):
    """The standard twist, certified as a Maurer-Cartan element; it relates
    the sharp complexes to the reduced ones."""
    s = standard_twist_sum(space, n, flavor)
    cap = cap or Cap(3, 6)
    mc = MCElement(s, "%s,n=%d" % (space.name, n), cap)
    ok, res = mc_check(mc, cap)
    if not ok:
        raise GraphError("standard twist failed its Maurer-Cartan check: %r" % res)
    return mc


def algebra_mc_element(space, n, cap=None, max_arity=8):
    """Twist encoding the unital algebra structure: one pendant vertex per
    structure constant, decorated by the dual of the inputs and haired by
    the output.  Certified against the standard-twisted differential."""
    if not space.has_products:
        raise GraphError("space %r declares no algebra structure" % space.name)
    s = GraphSum(HGC, CONTRA, n, 0)
    basis = space.basis()
    arity = 2
    while arity <= max_arity:
        some_nonzero = False
        for combo in itertools.combinations_with_replacement(basis, arity):
            table = space.product_lookup(combo)
            if not table:
                continue
            some_nonzero = True
            mono = [(nm, space.degree(nm)) for nm in combo]
            for outname, coeff in table.items():
                hair = (outname, space.degree(outname) if outname != UNIT else 0)
                g = DecoratedGraph(HGC, CONTRA, n, 0, 1, [], [(0, hair)],
                                   [tuple(mono)])
                s.add_raw(g, coeff)
        if not some_nonzero:
            break
        arity += 1
    else:
        raise GraphError("product tower of %r does not terminate below arity %d"
                         % (space.name, max_arity))
    cap = cap or Cap(3, 6)
    z0 = standard_mc_element(space, n, cap)
    mc = MCElement(s, "%s,n=%d,mu" % (space.name, n), cap)
    ok, res = mc_check(mc, cap, background=z0)
    if not ok:
        raise GraphError("algebra twist failed its Maurer-Cartan check: %r" % res)
    return mc


# ---------------------------------------------------------------------------
# action on dual graphs-side sums
# ---------------------------------------------------------------------------

def act_on_graphs(x, gamma):
    """Attach every hair of the hairy element onto the dual graphs-side sum:
    generator hairs consume matching dual slots, unit hairs go anywhere."""
    x, gamma = _as_sum(x), _as_sum(gamma)
    if gamma.flavor != GRAPHS or gamma.variance != CONTRA:
        raise GraphError("the action lands on contravariant graphs-side sums")
    if x.n != gamma.n:
        raise GraphError("ambient parameters disagree")
    out = GraphSum.zero_like(gamma)
    for gx, cx in x.terms.items():
        for gg, cg in gamma.terms.items():
            out = out + attach_terms([gx], [gg], gamma.context(),
                                     policy=ATTACH_ALL,
                                     consume_all_slots=False,
                                     coeff=cx * cg)
    return out


# ---------------------------------------------------------------------------
# the valence-3 subalgebra
# ---------------------------------------------------------------------------

def is_in_reduced(x):
    x = _as_sum(x)
    return all(all(g.valence(v) >= 3 for v in g.internals()) for g in x.terms)


def project_valence3(x):
    """Drop terms with an internal vertex of valence < 3 (decorations and
    hairs both count toward the valence)."""
    x = _as_sum(x)
    out = GraphSum.zero_like(x)
    out.terms = {g: c for g, c in x.terms.items()
                 if all(g.valence(v) >= 3 for v in g.internals())}
    return out
