"""JSON round-tripping for graphs, sums, and Maurer-Cartan elements.

Vertex naming in documents: externals "e1".."er" (fixed numbering),
internals "i1".."ik".  Orientation blocks:

* even n: ``{"edge_order": [...]}`` -- a permutation of the edge array; the
  orientation is "edges in that order, then hairs in listed order".
* odd n: ``{"vertex_order": ["i2", ...], "directions": [["i1","e1"], ...]}``
  -- internal vertices in orientation order and one directed pair per edge.

Emission is deterministic and always writes the identity orientation of the
canonical representative, so ``emit(parse(d)) == d`` on canonical documents.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .graphs import (CO, CONTRA, GRAPHS, HGC, HGCHOM, Cap, DecoratedGraph,
                     GraphError, GraphSum, canonicalize, normalize_monomial)
from .spaces import UNIT, format_fraction, parse_fraction

FLAVOR_TAGS = {GRAPHS: "graphs#", HGC: "hgc#", HGCHOM: "hgc-hom#"}
TAG_FLAVORS = {v: k for k, v in FLAVOR_TAGS.items()}


class ParseError(GraphError):
    pass


def _vertex_spaces(flavor, spaces):
    """(vertex-decoration space, hair-decoration space or None)."""
    if flavor == GRAPHS:
        return spaces[0], None
    if flavor == HGC:
        return spaces[0], spaces[0]
    return spaces[1], spaces[0]


def _resolve(space, name):
    if name == UNIT:
        return (UNIT, 0)
    return (name, space.degree(name))


def _vertex_id(name, r, k, vertex_rank):
    if not isinstance(name, str) or len(name) < 2 or name[0] not in "ei":
        raise ParseError("bad vertex name %r" % (name,))
    try:
        idx = int(name[1:]) - 1
    except ValueError:
        raise ParseError("bad vertex name %r" % (name,))
    if name[0] == "e":
        if not 0 <= idx < r:
            raise ParseError("external vertex %r out of range" % name)
        return idx
    if not 0 <= idx < k:
        raise ParseError("internal vertex %r out of range" % name)
    return r + vertex_rank[idx]


def parse_graph(doc, spaces):
    """Parse one graph document; returns (DecoratedGraph, Fraction coeff).

    The returned coefficient folds in the document's "coeff" entry and the
    sign of normalizing the document's orientation data.
    """
    if isinstance(doc, str):
        doc = json.loads(doc)
    try:
        flavor = TAG_FLAVORS[doc.get("flavor", "graphs#")]
    except KeyError:
        raise ParseError("unknown flavor tag %r" % doc.get("flavor"))
    variance = doc.get("variance", CO if flavor == GRAPHS else CONTRA)
    if variance not in (CO, CONTRA):
        raise ParseError("unknown variance %r" % variance)
    n = int(doc["n"])
    r = int(doc.get("arity", 0)) if flavor == GRAPHS else 0
    k = int(doc.get("internal", 0))
    coeff = parse_fraction(doc.get("coeff", "1"))
    sign = 1

    orientation = doc.get("orientation", {}) or {}
    vertex_rank = list(range(k))
    if n % 2:
        order = orientation.get("vertex_order")
        if order is not None:
            if sorted(order) != ["i%d" % (i + 1) for i in range(k)]:
                raise ParseError("vertex_order must list every internal vertex once")
            vertex_rank = [0] * k
            for rank, name in enumerate(order):
                vertex_rank[int(name[1:]) - 1] = rank

    raw_edges = doc.get("edges", [])
    if n % 2:
        directions = orientation.get("directions")
        if directions is not None:
            if len(directions) != len(raw_edges):
                raise ParseError("directions must cover every edge exactly once")
            raw_edges = directions
    edges = []
    for a, b in raw_edges:
        va = _vertex_id(a, r, k, vertex_rank)
        vb = _vertex_id(b, r, k, vertex_rank)
        if va > vb:
            va, vb = vb, va
            if n % 2:
                sign = -sign
        edges.append((va, vb))
    order = orientation.get("edge_order")
    if order is not None and n % 2 == 0:
        if sorted(order) != list(range(len(edges))):
            raise ParseError("edge_order must be a permutation of the edges")
        edges = [edges[i] for i in order]

    vspace, hspace = _vertex_spaces(flavor, spaces)
    hairs = []
    for v, name in doc.get("hairs", []):
        if hspace is None:
            raise ParseError("graphs-side values carry no hairs")
        hairs.append((_vertex_id(v, r, k, vertex_rank), _resolve(hspace, name)))

    dec = [[] for _ in range(r + k)]
    for vname, names in (doc.get("decorations", {}) or {}).items():
        v = _vertex_id(vname, r, k, vertex_rank)
        for name in names:
            if name == UNIT:
                raise ParseError("the unit decorates hairs only")
            dec[v].append(_resolve(vspace, name))
    monos = []
    for mono in dec:
        norm = normalize_monomial(mono)
        if norm is None:
            return None, Fraction(0)
        monos.append(norm[0])
        sign *= norm[1]

    g = DecoratedGraph(flavor, variance, n, r, k, edges, hairs, monos)
    return g, coeff * sign


def emit_graph(g, coeff=1):
    """Deterministic document for a normal-form graph."""
    def vname(v):
        return "e%d" % (v + 1) if v < g.r else "i%d" % (v - g.r + 1)

    doc = {
        "flavor": FLAVOR_TAGS[g.flavor],
        "variance": g.variance,
        "n": g.n,
        "internal": g.k,
        "edges": [[vname(a), vname(b)] for a, b in g.edges],
        "coeff": format_fraction(coeff),
    }
    if g.flavor == GRAPHS:
        doc["arity"] = g.r
    if g.hairs:
        doc["hairs"] = [[vname(v), d[0]] for v, d in g.hairs]
    decorations = {vname(v): [nm for nm, _ in mono]
                   for v, mono in enumerate(g.dec) if mono}
    if decorations:
        doc["decorations"] = decorations
    if g.n % 2:
        doc["orientation"] = {
            "vertex_order": ["i%d" % (i + 1) for i in range(g.k)],
            "directions": [[vname(a), vname(b)] for a, b in g.edges],
        }
    else:
        doc["orientation"] = {"edge_order": list(range(len(g.edges)))}
    return doc


def emit_sum(s, spaces=None, extra=None):
    doc = {
        "context": {
            "flavor": FLAVOR_TAGS[s.flavor],
            "variance": s.variance,
            "n": s.n,
            "arity": s.r,
        },
        "terms": [emit_graph(g, c) for g, c in s],
    }
    if spaces:
        doc["context"]["spaces"] = [sp.name for sp in spaces]
    if extra:
        doc.update(extra)
    return doc


def parse_sum(doc, spaces):
    if isinstance(doc, str):
        doc = json.loads(doc)
    ctx = doc.get("context", {})
    flavor = TAG_FLAVORS[ctx.get("flavor", "graphs#")]
    variance = ctx.get("variance", CO if flavor == GRAPHS else CONTRA)
    n = int(ctx["n"])
    r = int(ctx.get("arity", 0))
    out = GraphSum(flavor, variance, n, r)
    for term in doc.get("terms", []):
        g, coeff = parse_graph(term, spaces)
        if g is None:
            continue
        if (g.flavor, g.variance, g.n, g.r) != out.context():
            raise ParseError("term context disagrees with the sum context")
        out.add_raw(g, coeff)
    return out


def emit_mc(mc, spaces=None):
    doc = emit_sum(mc.element, spaces)
    doc["certified_cap"] = mc.certified_cap.to_json()
    doc["space_tag"] = mc.space_tag
    return doc


def parse_mc(doc, spaces):
    from .hgc import MCElement
    if isinstance(doc, str):
        doc = json.loads(doc)
    element = parse_sum(doc, spaces)
    cap = Cap.from_json(doc["certified_cap"]) if "certified_cap" in doc else None
    return MCElement(element, doc.get("space_tag", ""), cap)


def dumps(doc):
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
