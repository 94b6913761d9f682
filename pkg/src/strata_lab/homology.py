"""Betti numbers, graded dimensions, class tests and S_n-characters.

Everything reduces to ranks and reduced forms of the relation matrix.
The graded piece spanned by the level >= r strata is handled through its
permutation presentation: the span of their images in the quotient is
isomorphic to Q(S^{>=r}) modulo (rowspace of relations) intersected with
the level >= r coordinate subspace, and the trace of a permutation on
that presentation is read off its reduced form, free column by free
column.  Every reported number is certified at two independent primes.
"""

from __future__ import annotations

from functools import lru_cache

from .characters import Character, partitions_of, representative
from .exact_linalg import (
    ModEchelon,
    QuotientBasis,
    SparseIntMatrix,
    block_kernel_rows,
    certified_value,
    lift_symmetric,
    prime_stream,
    quotient_basis,
    rank_bareiss,
    unique_rows,
)
from .relations import generate_relations
from .trees import (
    DomainError,
    MarkedTree,
    apply_permutation,
    decompose_two_vertex,
    enumerate_strata,
    filtration_level,
)


@lru_cache(maxsize=None)
def _index(n: int, k: int) -> dict[MarkedTree, int]:
    return {t: i for i, t in enumerate(enumerate_strata(n, k))}


@lru_cache(maxsize=None)
def _relation_rows(n: int, k: int) -> tuple[dict[int, int], ...]:
    """Deduplicated sparse rows of the relation matrix for (n, k)."""
    if k == n - 3:
        return ()
    idx = _index(n, k)
    return tuple(unique_rows(r.row(idx) for r in generate_relations(n, k)))


def relation_matrix(n: int, k: int) -> SparseIntMatrix:
    rows = [dict(r) for r in _relation_rows(n, k)]
    return SparseIntMatrix(len(rows), len(_index(n, k)), rows)


@lru_cache(maxsize=None)
def _echelon(n: int, k: int, p: int) -> ModEchelon:
    ech = ModEchelon(p)
    ech.add_rows([dict(r) for r in _relation_rows(n, k)])
    return ech


@lru_cache(maxsize=None)
def _quotient_basis(n: int, k: int, p: int) -> QuotientBasis:
    return quotient_basis(
        (), len(_index(n, k)), p, echelon=_echelon(n, k, p).clone()
    )


@lru_cache(maxsize=None)
def betti(n: int, k: int, seed: int = 0) -> int:
    """dim H_{2k} of the n-marked space: |S_{k,n}| minus the relation rank."""
    if n < 3 or not 0 <= k <= n - 3:
        raise DomainError(f"no homology group for (n, k) = ({n}, {k})")
    n_trees = len(enumerate_strata(n, k))
    ranks: list[int] = []
    for i, rank in enumerate(_certified_ranks(n, k, seed)):
        ranks.append(rank)
        best = max(ranks)
        if ranks.count(best) >= 2:
            return n_trees - best
        if i > 10:
            raise RuntimeError(f"rank certification failed for ({n}, {k})")


def _certified_ranks(n, k, seed):
    for p in prime_stream(seed):
        yield _echelon(n, k, p).rank


@lru_cache(maxsize=None)
def _level_ids(n: int, k: int, r: int) -> tuple[int, ...]:
    """Ids of the strata whose valence partition has at least r parts."""
    return tuple(
        i for i, t in enumerate(enumerate_strata(n, k)) if filtration_level(t) >= r
    )


def _span_dim(n: int, k: int, ids: tuple[int, ...], p: int) -> int:
    if not ids:
        return 0
    if len(ids) == len(_index(n, k)):
        # the whole basis spans the whole quotient
        return len(ids) - _echelon(n, k, p).rank
    ech = _echelon(n, k, p).clone()
    base = ech.rank
    ech.add_rows(({i: 1} for i in ids), presorted=True)
    return ech.rank - base


def graded_dims(n: int, k: int, seed: int = 0) -> list[int]:
    """Dimensions of the graded pieces for r = 1 .. min(k, n-2-k)."""
    if n < 3 or not 0 <= k <= n - 3:
        raise DomainError(f"no homology group for (n, k) = ({n}, {k})")
    if k == 0:
        return []
    rmax = min(k, n - 2 - k)

    def compute(p: int) -> tuple[int, ...]:
        sdims = [_span_dim(n, k, _level_ids(n, k, r), p) for r in range(1, rmax + 2)]
        return tuple(sdims[i] - sdims[i + 1] for i in range(rmax))

    dims = list(certified_value(compute, seed, what=f"graded dims ({n},{k})"))
    assert sum(dims) == betti(n, k, seed)
    return dims


@lru_cache(maxsize=None)
def _inner_ids(n: int, k: int, b: int) -> tuple[int, ...]:
    """Ids of level >= 3 strata plus level-2 strata with inner level >= b."""
    out = []
    for i, t in enumerate(enumerate_strata(n, k)):
        lvl = filtration_level(t)
        if lvl >= 3:
            out.append(i)
        elif lvl == 2:
            mid = decompose_two_vertex(t)[4]
            if len(mid) >= b:
                out.append(i)
    return tuple(out)


def inner_graded_dims(n: int, k: int, seed: int = 0) -> list[int]:
    """Dimensions of the inner graded pieces of the level-2 part, b = 0..n-k-4."""
    if not 2 <= k <= n - 4:
        raise DomainError(f"inner filtration needs 2 <= k <= n-4, got ({n}, {k})")
    bmax = n - k - 4

    def compute(p: int) -> tuple[int, ...]:
        sdims = [_span_dim(n, k, _inner_ids(n, k, b), p) for b in range(bmax + 2)]
        return tuple(sdims[b] - sdims[b + 1] for b in range(bmax + 1))

    dims = list(certified_value(compute, seed, what=f"inner dims ({n},{k})"))
    assert sum(dims) == graded_dims(n, k, seed)[1]
    return dims


def class_equal(t1: MarkedTree, t2: MarkedTree, seed: int = 0,
                exact: bool = False) -> bool:
    """Whether two strata have the same homology class.

    Probabilistic-exact via two-prime membership of e_{t1} - e_{t2} in the
    relation row space; ``exact=True`` reruns with fraction-free integer
    elimination (audit mode, small n only).
    """
    if (t1.n, t1.k) != (t2.n, t2.k):
        raise DomainError("classes live in different homology groups")
    if t1 == t2:
        return True
    n, k = t1.n, t1.k
    idx = _index(n, k)
    diff = {idx[t1]: 1, idx[t2]: -1}

    def compute(p: int) -> bool:
        return not any(_quotient_basis(n, k, p).quotient_reduce(diff))

    verdict = certified_value(compute, seed, what="class membership")
    if exact:
        rows = [dict(r) for r in _relation_rows(n, k)]
        M = SparseIntMatrix(len(rows), len(idx), rows)
        M2 = SparseIntMatrix(len(rows) + 1, len(idx), [dict(r) for r in rows] + [diff])
        assert (rank_bareiss(M) == rank_bareiss(M2)) == verdict
    return verdict


def graded_class_equal(t1: MarkedTree, t2: MarkedTree, seed: int = 0) -> bool:
    """Whether two level-2 strata of the same inner level have the same
    class in their inner graded piece.

    Tests membership of e_{t1} - e_{t2} in the span of the relations
    together with the level >= 3 strata and the level-2 strata of inner
    level >= b+1.  This is the equality the two-term rewriting relation
    lives at; it is strictly weaker than class_equal.
    """
    if (t1.n, t1.k) != (t2.n, t2.k):
        raise DomainError("classes live in different homology groups")
    n, k = t1.n, t1.k
    b1 = len(decompose_two_vertex(t1)[4])
    b2 = len(decompose_two_vertex(t2)[4])
    if b1 != b2:
        raise DomainError(f"inner levels differ: {b1} vs {b2}")
    if t1 == t2:
        return True
    idx = _index(n, k)
    diff = {idx[t1]: 1, idx[t2]: -1}
    ids = _inner_ids(n, k, b1 + 1)

    def compute(p: int) -> bool:
        ech = _echelon(n, k, p).clone()
        ech.add_rows(({i: 1} for i in ids), presorted=True)
        return ech.add_row(dict(diff)) is None

    return certified_value(compute, seed, what="graded class membership")


class _Presentation:
    """Permutation presentation of an invariant span: trees, index, reduced form."""

    def __init__(self, trees: tuple[MarkedTree, ...], qb: QuotientBasis):
        self.trees = trees
        self.index = {t: i for i, t in enumerate(trees)}
        self.qb = qb

    def trace(self, g: tuple[int, ...]) -> int:
        """Trace of the permutation action, as an exact integer."""
        qb = self.qb
        total = 0
        rows = qb._rows
        for pos, f in enumerate(qb.free_cols):
            u = self.index[apply_permutation(self.trees[f], g)]
            if u == f:
                total += 1
            elif u in rows:
                total -= qb.coeff(u, f)
        return lift_symmetric(total, qb.prime)


@lru_cache(maxsize=None)
def _homology_presentation(n: int, k: int, p: int) -> _Presentation:
    return _Presentation(enumerate_strata(n, k), _quotient_basis(n, k, p))


@lru_cache(maxsize=None)
def _graded_presentation(n: int, k: int, r: int, p: int) -> _Presentation | None:
    """Presentation of the span of the level >= r strata inside the quotient."""
    ids = _level_ids(n, k, r)
    if not ids:
        return None
    strata = enumerate_strata(n, k)
    sub = tuple(strata[i] for i in ids)
    if len(ids) == len(strata):
        return _homology_presentation(n, k, p)
    local = {tree_id: j for j, tree_id in enumerate(ids)}
    kernel = block_kernel_rows(
        [dict(r) for r in _relation_rows(n, k)], frozenset(ids), p
    )
    rows = [{local[c]: v for c, v in row.items()} for row in kernel]
    return _Presentation(sub, quotient_basis(rows, len(ids), p))


def character_homology(n: int, k: int, seed: int = 0) -> Character:
    """Character of the S_n-action on H_{2k}, one trace per cycle type."""
    if n < 3 or not 0 <= k <= n - 3:
        raise DomainError(f"no homology group for (n, k) = ({n}, {k})")

    def compute(p: int) -> tuple[int, ...]:
        pres = _homology_presentation(n, k, p)
        return tuple(pres.trace(representative(t)) for t in partitions_of(n))

    vals = certified_value(compute, seed, what=f"character ({n},{k})")
    return Character(n, dict(zip(partitions_of(n), vals)))


def character_graded(n: int, k: int, r: int, seed: int = 0) -> Character:
    """Character of the graded piece at level r (trace on the invariant span
    of level >= r minus the trace on level >= r+1)."""
    if not 1 <= r <= min(k, n - 2 - k):
        raise DomainError(f"no graded piece for (n, k, r) = ({n}, {k}, {r})")

    def compute(p: int) -> tuple[int, ...]:
        top = _graded_presentation(n, k, r, p)
        above = _graded_presentation(n, k, r + 1, p)
        out = []
        for t in partitions_of(n):
            g = representative(t)
            val = top.trace(g) - (above.trace(g) if above else 0)
            out.append(val)
        return tuple(out)

    vals = certified_value(compute, seed, what=f"graded character ({n},{k},{r})")
    return Character(n, dict(zip(partitions_of(n), vals)))
