"""Kontsevich-Manin relations spanning the kernel of QS_{k,n} -> H_{2k}.

Each relation comes from a stratum sigma of dimension k+1, a vertex v of
valence >= 4, four flags A,B,C,D at v and a pairing choice.  Writing T
for the remaining flags at v, the relation is

    sum_{U1 + U2 = T} (AB U1 | CD U2)  -  sum_{U1 + U2 = T} (AX U1 | BY U2)

with (X, Y) = (C, D) for pairing 1 and (D, C) for pairing 2; every term
is produced by splitting v.  Only two of the three flag pairings are
emitted per 4-subset since the third is their difference.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import chain, combinations
from typing import Iterable, Sequence

from .trees import DomainError, MarkedTree, _structure, enumerate_strata, split_vertex

Side = tuple


def _subsets(items: Sequence) -> Iterable[tuple]:
    return chain.from_iterable(
        combinations(items, r) for r in range(len(items) + 1)
    )


@dataclass(eq=False)
class KMRelation:
    """One relation, kept with its provenance for reporting and replay."""

    sigma: MarkedTree
    vertex: int
    flags: tuple[Side, Side, Side, Side]
    pairing: int
    terms: dict[MarkedTree, int]

    def row(self, index: dict[MarkedTree, int]) -> dict[int, int]:
        return {index[t]: c for t, c in self.terms.items()}

    def to_obj(self, index: dict[MarkedTree, int]) -> dict:
        return {
            "sigma": self.sigma.to_obj(),
            "vertex": self.vertex,
            "flags": [list(f) for f in self.flags],
            "pairing": self.pairing,
            "terms": sorted([index[t], c] for t, c in self.terms.items()),
        }


def expand_relation(
    sigma: MarkedTree, vertex: int, a, b, c, d, pairing: int
) -> KMRelation:
    """Expand one relation over all bipartitions of the leftover flags."""
    a, b, c, d = (tuple(sorted(f)) for f in (a, b, c, d))
    here = _structure(sigma).flags[vertex]
    quad = (a, b, c, d)
    if len(set(quad)) != 4:
        raise DomainError("flags A, B, C, D must be distinct")
    if any(f not in here for f in quad):
        raise DomainError(f"flags must all be incident to vertex {vertex}")
    if pairing not in (1, 2):
        raise DomainError(f"pairing must be 1 or 2, got {pairing}")
    rest = tuple(f for f in here if f not in quad)
    minus = (a, c, b, d) if pairing == 1 else (a, d, b, c)
    terms: dict[MarkedTree, int] = {}
    for (x1, x2, y1, y2), sign in (((a, b, c, d), 1), (minus, -1)):
        for u1 in _subsets(rest):
            u2 = tuple(f for f in rest if f not in u1)
            t = split_vertex(sigma, vertex, (x1, x2) + u1, (y1, y2) + u2)
            terms[t] = terms.get(t, 0) + sign
    terms = {t: v for t, v in terms.items() if v}
    return KMRelation(sigma, vertex, quad, pairing, terms)


def generate_relations(n: int, k: int) -> list[KMRelation]:
    """All emitted relations for S_{k,n}, in deterministic order."""
    if not 0 <= k <= n - 4:
        raise DomainError(f"relations require 0 <= k <= n-4, got n={n}, k={k}")
    out = []
    for sigma in enumerate_strata(n, k + 1):
        for v, fl in enumerate(_structure(sigma).flags):
            if len(fl) < 4:
                continue
            for quad in combinations(fl, 4):
                for pairing in (1, 2):
                    out.append(expand_relation(sigma, v, *quad, pairing))
    return out


def relations_jsonl(n: int, k: int) -> Iterable[str]:
    """One relation per line, terms referring to enumeration-order tree ids."""
    index = {t: i for i, t in enumerate(enumerate_strata(n, k))}
    for rel in generate_relations(n, k):
        yield json.dumps(rel.to_obj(index), separators=(",", ":"), sort_keys=True)
