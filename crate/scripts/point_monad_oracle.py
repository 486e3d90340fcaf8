"""Brute-force counts of relative monads and their algebras over a point root.

The root picks the single object of a delooped monoid M. A relative monad is
then a unit eta in M and an extension map dag: M -> M; an algebra on the
object is a map alpha: M -> M. Composition is diagrammatic (f;g = mul[f][g]).
Every candidate is filtered by the laws written out directly:

    monad:   eta;dag(f) = f    dag(eta) = 1    dag(f;dag(g)) = dag(f);dag(g)
    algebra: eta;alpha(h) = h  alpha(f;alpha(h)) = dag(f);alpha(h)

The second half does the same for a point root into small categories with
several objects, where the carrier of the monad and of each algebra is also
chosen: a monad at root object x is a carrier object t, a unit eta: x -> t
and dag: E(x, t) -> E(t, t); an algebra is a carrier c and
alpha: E(x, c) -> E(t, c), with the same laws.

Run from the repository root to regenerate the committed oracle file:

    python3 scripts/point_monad_oracle.py > crates/core/corpus/oracles/point_monads.json
"""

import itertools
import json
import sys

MONOIDS = {
    # Z/2 = {e, s}
    "bz2": {"elements": ["e", "s"], "mul": [[0, 1], [1, 0]]},
    # {1, a, z}: a;a = z, z absorbing
    "bm3": {"elements": ["1", "a", "z"], "mul": [[0, 1, 2], [1, 2, 2], [2, 2, 2]]},
    # {1, e}: e;e = e
    "idem2": {"elements": ["1", "e"], "mul": [[0, 1], [1, 1]]},
    # {1, a, b}: x;y = x for x != 1 (left zeros)
    "lz3": {"elements": ["1", "a", "b"], "mul": [[0, 1, 2], [1, 1, 1], [2, 2, 2]]},
    # all maps {0,1} -> {0,1}: identity, swap, constant 0, constant 1; f;g = g after f
    "t2": {
        "elements": ["id", "sw", "c0", "c1"],
        "mul": [[0, 1, 2, 3], [1, 0, 2, 3], [2, 3, 2, 3], [3, 2, 2, 3]],
    },
    # Z/3
    "bz3": {"elements": ["0", "1", "2"], "mul": [[(i + j) % 3 for j in range(3)] for i in range(3)]},
}


def monads(mul):
    n = len(mul)
    out = []
    for eta in range(n):
        for dag in itertools.product(range(n), repeat=n):
            if any(mul[eta][dag[f]] != f for f in range(n)):
                continue
            if dag[eta] != 0:
                continue
            if any(dag[mul[f][dag[g]]] != mul[dag[f]][dag[g]] for f in range(n) for g in range(n)):
                continue
            out.append((eta, dag))
    return out


def algebras(mul, eta, dag):
    n = len(mul)
    count = 0
    for alpha in itertools.product(range(n), repeat=n):
        if any(mul[eta][alpha[h]] != h for h in range(n)):
            continue
        if any(alpha[mul[f][alpha[h]]] != mul[dag[f]][alpha[h]] for f in range(n) for h in range(n)):
            continue
        count += 1
    return count


# Categories as (objects, morphisms as (name, dom, cod), identities, composites).
# Composites are listed for non-identity pairs only.
CATEGORIES = {
    "interval": (
        ["0", "1"],
        [("1_0", "0", "0"), ("1_1", "1", "1"), ("i", "0", "1")],
        {"0": "1_0", "1": "1_1"},
        {},
    ),
    "indisc2": (
        ["a", "b"],
        [("1_a", "a", "a"), ("ab", "a", "b"), ("ba", "b", "a"), ("1_b", "b", "b")],
        {"a": "1_a", "b": "1_b"},
        {("ab", "ba"): "1_a", ("ba", "ab"): "1_b"},
    ),
    "split": (
        ["A", "B"],
        [("1_A", "A", "A"), ("e", "A", "A"), ("q", "A", "B"), ("s", "B", "A"), ("1_B", "B", "B")],
        {"A": "1_A", "B": "1_B"},
        {("e", "e"): "e", ("e", "q"): "q", ("q", "s"): "e", ("s", "e"): "s", ("s", "q"): "1_B"},
    ),
    "arrow_into_involution": (
        ["0", "1"],
        [("1_0", "0", "0"), ("m", "0", "1"), ("1_1", "1", "1"), ("s", "1", "1")],
        {"0": "1_0", "1": "1_1"},
        {("m", "s"): "m", ("s", "s"): "1_1"},
    ),
}


class Cat:
    def __init__(self, objects, morphisms, identities, composites):
        self.objects = objects
        self.dom = {f: d for f, d, _ in morphisms}
        self.cod = {f: c for f, _, c in morphisms}
        self.ids = identities
        ident = set(identities.values())
        self.comp = {}
        for f, _, _ in morphisms:
            for g, _, _ in morphisms:
                if self.cod[f] != self.dom[g]:
                    continue
                if f in ident:
                    self.comp[f, g] = g
                elif g in ident:
                    self.comp[f, g] = f
                else:
                    self.comp[f, g] = composites[f, g]
        for (f, g), h in self.comp.items():
            assert self.dom[h] == self.dom[f] and self.cod[h] == self.cod[g]
            for k in morphisms:
                if self.cod[g] == self.dom[k[0]]:
                    assert self.comp[h, k[0]] == self.comp[f, self.comp[g, k[0]]]

    def hom(self, x, y):
        return [f for f in self.dom if self.dom[f] == x and self.cod[f] == y]


def functions(domain, codomain):
    for values in itertools.product(codomain, repeat=len(domain)):
        yield dict(zip(domain, values))


def point_monads(c, x):
    out = []
    for t in c.objects:
        xt, tt = c.hom(x, t), c.hom(t, t)
        for eta in xt:
            for dag in functions(xt, tt):
                if any(c.comp[eta, dag[f]] != f for f in xt):
                    continue
                if dag[eta] != c.ids[t]:
                    continue
                if any(dag[c.comp[f, dag[g]]] != c.comp[dag[f], dag[g]] for f in xt for g in xt):
                    continue
                out.append((t, eta, dag))
    return out


def point_algebras(c, x, t, eta, dag):
    count = 0
    for carrier in c.objects:
        xc, tc = c.hom(x, carrier), c.hom(t, carrier)
        for alpha in functions(xc, tc):
            if any(c.comp[eta, alpha[h]] != h for h in xc):
                continue
            if any(
                alpha[c.comp[f, alpha[h]]] != c.comp[dag[f], alpha[h]]
                for f in c.hom(x, t)
                for h in xc
            ):
                continue
            count += 1
    return count


def main():
    monoids = {}
    categories = {}
    report = {"monoids": monoids, "categories": categories}
    for name, shape in CATEGORIES.items():
        c = Cat(*shape)
        roots = {}
        for x in c.objects:
            found = point_monads(c, x)
            roots[x] = {
                "monads": len(found),
                "carriers": [t for t, _, _ in found],
                "algebras": [point_algebras(c, x, *m) for m in found],
            }
        categories[name] = roots
    for name, m in MONOIDS.items():
        mul = m["mul"]
        found = monads(mul)
        monoids[name] = {
            "elements": m["elements"],
            "mul": mul,
            "monads": len(found),
            "units": [m["elements"][eta] for eta, _ in found],
            "algebras": [algebras(mul, eta, dag) for eta, dag in found],
        }
    json.dump(report, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
