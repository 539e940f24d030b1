"""Stallings foldings: membership in finitely generated subgroups of F_k.

We build the wedge of loops spelling the generators, fold it, and read words
from the base vertex. To recover an expression in the generators, every edge
carries a provenance word p(e) in the generators. The invariant, for an edge
u --x--> v, is

    expand(p(e)) = T(u) . x . T(v)^-1

for some (never stored) vertex labels T with T(base) = expand(base_word).
Reading a loop at the base and multiplying provenances thus expands to
T(base) w T(base)^-1. Folding two edges lets us compute a word D with
expand(D) = T(survivor) T(loser)^-1, which re-gauges the edges at the vertex
being merged away.
"""
import functools
import logging
from collections import defaultdict
from networkx.utils import UnionFind
from free_group import Word, invert_letters, _free_reduce
from errors import RankMismatch, NotInjective
from utils import Fix

LOGGER = logging.getLogger(__name__)

def _gmul(*parts):
    """Reduced product of provenance words (tuples of (gen, sign))."""
    return _free_reduce(tuple(letter for part in parts for letter in part))

class SubgroupGraph:
    """The folded (core) graph of the subgroup generated by @gens.

    Edges are stored positively oriented: edges[eid] = [src, label, dst, prov].
    """
    def __init__(self, gens, rank):
        """Builds, folds and prunes the graph for the Words @gens."""
        for gen in gens:
            if gen.rank != rank:
                raise RankMismatch(f"Generator {gen} is not of rank {rank}.")
        self.rank_k = rank
        self.gens = tuple(gens)
        self.base = 0
        self.base_word = ()
        self.edges = dict()
        self.incident = defaultdict(set)
        self.incident[self.base] = set()
        self.vertices_by_root = UnionFind()
        self._next_vertex = 1
        self._next_edge = 0
        for i, gen in enumerate(self.gens, start=1):
            self._add_loop(i, gen)
        self._fold()
        Fix(self._prune_once)
        self._index()

    def _new_vertex(self):
        vertex = self._next_vertex
        self._next_vertex += 1
        self.incident[vertex] = set()
        return vertex

    def _add_edge(self, src, label, dst, prov):
        eid = self._next_edge
        self._next_edge += 1
        self.edges[eid] = [src, label, dst, prov]
        self.incident[src].add(eid)
        self.incident[dst].add(eid)

    def _remove_edge(self, eid):
        src, _, dst, _ = self.edges.pop(eid)
        self.incident[src].discard(eid)
        self.incident[dst].discard(eid)

    def _add_loop(self, gen_index, gen):
        """Adds the closed path at base spelling generator number @gen_index."""
        letters = gen.letters
        if not letters:
            return
        path = [self.base]
        path.extend(self._new_vertex() for _ in range(len(letters) - 1))
        path.append(self.base)
        for j, (label, sign) in enumerate(letters):
            prov = ((gen_index, 1),) if j == len(letters) - 1 else ()
            if sign == 1:
                self._add_edge(path[j], label, path[j + 1], prov)
            else:
                self._add_edge(path[j + 1], label, path[j], invert_letters(prov))

    def _conflict_at(self, vertex):
        """Returns (e1, e2, direction) for two same-label edges, or None."""
        seen = dict()
        for eid in sorted(self.incident[vertex]):
            src, label, dst, _ = self.edges[eid]
            keys = []
            if src == vertex:
                keys.append((label, 1))
            if dst == vertex:
                keys.append((label, -1))
            for key in keys:
                if key in seen and seen[key] != eid:
                    return seen[key], eid, key[1]
                seen[key] = eid
        return None

    def _fold(self):
        """Identifies same-label edges until the graph is folded."""
        stack = sorted(self.incident)
        while stack:
            vertex = self.vertices_by_root[stack.pop()]
            if vertex not in self.incident:
                continue
            conflict = self._conflict_at(vertex)
            if conflict is None:
                continue
            touched = self._fold_pair(*conflict)
            stack.append(vertex)
            stack.extend(touched)

    def _fold_pair(self, eid1, eid2, direction):
        """Folds two edges sharing a label (and a source if @direction=1).

        Returns the vertices whose neighbourhoods changed.
        """
        src1, _, dst1, prov1 = self.edges[eid1]
        src2, _, dst2, prov2 = self.edges[eid2]
        if direction == 1:
            end1, end2 = dst1, dst2
            # expand(D) = T(end1) T(end2)^-1
            delta = _gmul(invert_letters(prov1), prov2)
        else:
            end1, end2 = src1, src2
            delta = _gmul(prov1, invert_letters(prov2))
        self._remove_edge(eid2)
        if end1 == end2:
            return [end1]
        self.vertices_by_root.union(end1, end2)
        survivor = self.vertices_by_root[end1]
        if survivor not in (end1, end2):
            # UnionFind may pick an older root of either class; both ends are
            # already roots here, so this cannot happen.
            raise AssertionError("Folded vertices must be class roots.")
        if survivor == end1:
            loser = end2
        else:
            loser, delta = end1, invert_letters(delta)
        LOGGER.debug("Folding vertex %d into %d.", loser, survivor)
        self._merge(survivor, loser, delta)
        return [survivor] + [end for eid in self.incident[survivor]
                             for end in (self.edges[eid][0], self.edges[eid][2])]

    def _merge(self, survivor, loser, delta):
        """Moves edges of @loser onto @survivor, re-gauging by @delta."""
        delta_inv = invert_letters(delta)
        for eid in self.incident.pop(loser):
            edge = self.edges[eid]
            if edge[0] == loser:
                edge[0] = survivor
                edge[3] = _gmul(delta, edge[3])
            if edge[2] == loser:
                edge[2] = survivor
                edge[3] = _gmul(edge[3], delta_inv)
            self.incident[survivor].add(eid)
        if loser == self.base:
            self.base = survivor
            self.base_word = _gmul(delta, self.base_word)

    def _prune_once(self):
        """Removes one hanging (degree-1, non-base) vertex; False if none."""
        for vertex in sorted(self.incident):
            if vertex == self.base:
                continue
            edges = self.incident[vertex]
            degree = sum((self.edges[eid][0] == vertex) + (self.edges[eid][2] == vertex)
                         for eid in edges)
            if degree <= 1:
                for eid in list(edges):
                    self._remove_edge(eid)
                del self.incident[vertex]
                return True
        return False

    def _index(self):
        """Builds the out/in lookup tables used for reading words."""
        self.outgoing = defaultdict(dict)
        self.ingoing = defaultdict(dict)
        for eid, (src, label, dst, _) in self.edges.items():
            assert label not in self.outgoing[src], "graph must be folded"
            assert label not in self.ingoing[dst], "graph must be folded"
            self.outgoing[src][label] = eid
            self.ingoing[dst][label] = eid

    def vertices(self):
        """The vertices of the core graph."""
        return sorted(self.incident)

    def rank(self):
        """Rank of the subgroup: E - V + 1 of the (connected) core graph."""
        return len(self.edges) - len(self.incident) + 1

    def read(self, word):
        """Returns the provenance expression for @word, or None if not in H."""
        if word.rank != self.rank_k:
            raise RankMismatch(f"Word rank {word.rank} vs {self.rank_k}.")
        vertex, parts = self.base, []
        for label, sign in word.letters:
            if sign == 1:
                eid = self.outgoing[vertex].get(label)
                if eid is None:
                    return None
                parts.append(self.edges[eid][3])
                vertex = self.edges[eid][2]
            else:
                eid = self.ingoing[vertex].get(label)
                if eid is None:
                    return None
                parts.append(invert_letters(self.edges[eid][3]))
                vertex = self.edges[eid][0]
        if vertex != self.base:
            return None
        return _gmul(invert_letters(self.base_word), *parts, self.base_word)

def expand(expression, gens):
    """Multiplies out an expression (tuple of (gen, sign)) in @gens."""
    rank = gens[0].rank if gens else 0
    letters = []
    for index, sign in expression:
        gen = gens[index - 1].letters
        letters.extend(gen if sign == 1 else invert_letters(gen))
    return Word(tuple(letters), rank)

@functools.lru_cache(maxsize=1024)
def _graph_for(gens, rank):
    return SubgroupGraph(gens, rank)

def subgroup_graph(gens):
    """The (cached) folded core graph of <gens>."""
    gens = tuple(gens)
    rank = gens[0].rank if gens else 0
    return _graph_for(gens, rank)

def membership(gens, word):
    """An expression in @gens expanding to @word, or None if word not in <gens>.

    The expression is a tuple of (generator number, sign), freely reduced.
    """
    gens = tuple(gens)
    if not gens:
        return () if word.is_identity() else None
    for gen in gens:
        if gen.rank != word.rank:
            raise RankMismatch("All words must share one rank.")
    return subgroup_graph(gens).read(word)

def subgroup_rank(gens):
    """Rank of the subgroup generated by @gens."""
    gens = tuple(gens)
    if not gens:
        return 0
    return subgroup_graph(gens).rank()

@functools.lru_cache(maxsize=1024)
def endo_rank(phi):
    """Returns (rank of <w_1..w_k>, injective?); cached per Endo value.

    For an endomorphism of F_k, rank k means phi maps onto a free group of
    rank k, hence (F_k being Hopfian) phi is injective.
    """
    rank = subgroup_rank(phi.images)
    return rank, rank == phi.rank

def require_injective(phi):
    """Raises NotInjective unless @phi is injective."""
    rank, injective = endo_rank(phi)
    if not injective:
        raise NotInjective(f"{phi} has image of rank {rank} < {phi.rank}.")

def preimage(phi, word):
    """The phi-preimage of @word when word lies in phi(F_k), else None."""
    expression = membership(phi.images, word)
    if expression is None:
        return None
    return Word(expression, phi.rank)
