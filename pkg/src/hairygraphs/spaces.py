"""Graded vector spaces over Q with dual bases and optional algebra structure.

A space is given by a finite list of named generators with integer degrees.
The unit symbol "1" is always adjoined implicitly as a degree-0 element that
is *not* a generator: it decorates hairs but never pairs against the dual
space.  An optional table of structure constants turns the unital extension
Q.1 + U into a graded-commutative associative algebra.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

UNIT = "1"


class SpaceError(ValueError):
    """Raised for malformed space specifications or mismatched lookups."""


def koszul_sign(degrees, sigma):
    """Sign eps(sigma) with eps(sigma) * x_{sigma(1)}...x_{sigma(n)} = x_1...x_n
    in the free graded-commutative algebra on homogeneous x_i of the given
    degrees.  ``sigma`` is a 0-indexed permutation: position i holds sigma(i).
    """
    if len(degrees) != len(sigma):
        raise SpaceError("permutation length %d != degree list length %d"
                         % (len(sigma), len(degrees)))
    if sorted(sigma) != list(range(len(sigma))):
        raise SpaceError("not a permutation: %r" % (sigma,))
    sign = 1
    for i in range(len(sigma)):
        for j in range(i + 1, len(sigma)):
            if sigma[i] > sigma[j] and degrees[sigma[i]] % 2 and degrees[sigma[j]] % 2:
                sign = -sign
    return sign


def perm_parity_sign(sigma):
    """Plain permutation sign (all slots treated as odd)."""
    sign = 1
    for i in range(len(sigma)):
        for j in range(i + 1, len(sigma)):
            if sigma[i] > sigma[j]:
                sign = -sign
    return sign


def parse_fraction(text):
    """Parse a coefficient string "p" or "p/q" into an exact Fraction."""
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip()
    if "." in s:
        raise SpaceError("decimal coefficients are not accepted: %r" % s)
    return Fraction(s)


def format_fraction(q):
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


@dataclass(frozen=True)
class DualElement:
    """A dual-basis vector u*, named after the generator it pairs with."""
    space: str
    generator: str


@dataclass
class GradedSpaceSpec:
    """Finite graded space: ordered generators, degrees, optional products.

    ``products`` maps a frozen multiset of generator names (as a sorted
    tuple) to a dict {output_name: Fraction} where output_name is a
    generator or the unit "1".  Entries are user-declared; an absent
    multiset of size two means the product is zero.  Larger products are
    folded from binary ones (associativity is validated at load time).
    """

    name: str
    generators: list = field(default_factory=list)  # [(name, degree)]
    products: dict = field(default_factory=dict)

    def __post_init__(self):
        names = [g for g, _ in self.generators]
        if len(set(names)) != len(names):
            raise SpaceError("duplicate generator names in %r" % self.name)
        if UNIT in names:
            raise SpaceError('"1" is reserved for the implicit unit')
        self._degree = dict(self.generators)
        if self.products:
            self._validate_products()

    # -- basic queries ---------------------------------------------------

    def degree(self, name):
        if name == UNIT:
            return 0
        try:
            return self._degree[name]
        except KeyError:
            raise SpaceError("unknown generator %r in space %r" % (name, self.name))

    def basis(self):
        return [g for g, _ in self.generators]

    @property
    def dim(self):
        return len(self.generators)

    def dual(self, name):
        self.degree(name)
        if name == UNIT:
            raise SpaceError("the unit has no dual-basis partner")
        return DualElement(self.name, name)

    # -- pairing ----------------------------------------------------------

    def pair(self, dual, elem):
        """<u_i*, u_j> = delta_ij; the unit pairs to zero against all of U*."""
        if not isinstance(dual, DualElement) or dual.space != self.name:
            raise SpaceError("dual element does not belong to space %r" % self.name)
        self.degree(dual.generator)
        if elem == UNIT:
            return Fraction(0)
        self.degree(elem)
        return Fraction(1) if elem == dual.generator else Fraction(0)

    # -- products ---------------------------------------------------------

    @property
    def has_products(self):
        return bool(self.products)

    def _binary(self, a, b):
        """Declared binary product of two generators; absent entry = 0."""
        return self.products.get(tuple(sorted((a, b))), {})

    def product_lookup(self, inputs):
        """Product of a multiset of generators-or-unit in the unital algebra.

        Returns {output_name: Fraction} with output "1" for the unit
        component.  Units act as the identity; the empty multiset gives the
        unit itself.
        """
        if not self.products:
            raise SpaceError("space %r declares no algebra structure" % self.name)
        factors = [x for x in inputs if x != UNIT]
        for x in factors:
            self.degree(x)
        if not factors:
            return {UNIT: Fraction(1)}
        if len(factors) == 1:
            return {factors[0]: Fraction(1)}
        # Fold left; associativity was validated at load time.
        acc = {factors[0]: Fraction(1)}
        for x in factors[1:]:
            nxt = {}
            for out, c in acc.items():
                if out == UNIT:
                    nxt[x] = nxt.get(x, Fraction(0)) + c
                    continue
                for out2, c2 in self._binary(out, x).items():
                    nxt[out2] = nxt.get(out2, Fraction(0)) + c * c2
            acc = {k: v for k, v in nxt.items() if v}
        return acc

    def _validate_products(self):
        for key, table in self.products.items():
            din = sum(self._degree.get(x, None) if x in self._degree
                      else self._raise_unknown(x) for x in key)
            for out, coeff in table.items():
                if coeff == 0:
                    continue
                dout = 0 if out == UNIT else self.degree(out)
                if din != dout:
                    raise SpaceError(
                        "product %s -> %s violates grading (%d != %d)"
                        % ("*".join(key), out, din, dout))
            # graded commutativity forces squares of odd generators to vanish
            if len(key) == 2 and key[0] == key[1] and self._degree[key[0]] % 2:
                if any(c != 0 for c in table.values()):
                    raise SpaceError(
                        "odd generator %r cannot have a nonzero square" % key[0])
        # associativity on all generator triples, via binary folding
        basis = self.basis()
        for a in basis:
            for b in basis:
                for c in basis:
                    left = self._mul_combo(self._binary(a, b), c)
                    right = self._mul_combo(self._binary(b, c), a)
                    # graded commutativity: a(bc) = +/- (bc)a, but both are
                    # computed through the same symmetric binary table, so
                    # plain equality is the correct check here.
                    if left != right:
                        raise SpaceError(
                            "products are not associative at (%s,%s,%s)" % (a, b, c))

    def _mul_combo(self, combo, gen):
        out = {}
        for name, c in combo.items():
            if name == UNIT:
                out[gen] = out.get(gen, Fraction(0)) + c
                continue
            for name2, c2 in self._binary(name, gen).items():
                out[name2] = out.get(name2, Fraction(0)) + c * c2
        return {k: v for k, v in out.items() if v}

    def _raise_unknown(self, x):
        raise SpaceError("unknown generator %r in product table of %r" % (x, self.name))

    # -- serialization ------------------------------------------------------

    def to_json(self):
        doc = {
            "name": self.name,
            "generators": [{"name": g, "degree": d} for g, d in self.generators],
        }
        if self.products:
            entries = []
            for key, table in sorted(self.products.items()):
                for out, coeff in sorted(table.items()):
                    entries.append({"inputs": list(key), "output": out,
                                    "coeff": format_fraction(coeff)})
            doc["products"] = entries
        return doc

    @classmethod
    def from_json(cls, doc):
        if not isinstance(doc, dict):
            raise SpaceError("space spec must be a JSON object")
        try:
            name = doc["name"]
            gens = [(g["name"], int(g["degree"])) for g in doc.get("generators", [])]
        except (KeyError, TypeError) as exc:
            raise SpaceError("malformed space spec: %s" % exc)
        products = {}
        for entry in doc.get("products", []) or []:
            inputs = tuple(sorted(entry["inputs"]))
            out = entry["output"]
            coeff = parse_fraction(entry.get("coeff", "1"))
            if out == "0":
                out, coeff = UNIT, Fraction(0)  # explicit zero declaration
            table = products.setdefault(inputs, {})
            if coeff:
                table[out] = table.get(out, Fraction(0)) + coeff
        products = {k: {o: c for o, c in t.items() if c} for k, t in products.items()}
        return cls(name=name, generators=gens, products=products)


def load_space(path):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpaceError("invalid JSON in %s: %s" % (path, exc))
    return GradedSpaceSpec.from_json(doc)
