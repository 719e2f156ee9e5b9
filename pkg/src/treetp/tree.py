"""Labelled trees on vertices 1..n: paths, pendant vertices, vertex signing."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .exactmat import IndexList


class TreeError(ValueError):
    pass


@dataclass(frozen=True)
class LabelledTree:
    n: int
    edges: frozenset[frozenset[int]]
    _adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise TreeError("tree needs at least one vertex")
        adj: list[list[int]] = [[] for _ in range(self.n + 1)]
        for e in self.edges:
            u, v = sorted(e)
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))
        if len(self.edges) != self.n - 1:
            raise TreeError(f"{len(self.edges)} edges on {self.n} vertices; a tree needs {self.n - 1}")
        if len(self._reach(1)) != self.n:
            raise TreeError("graph is disconnected")

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], n: int | None = None) -> LabelledTree:
        pairs = [(int(u), int(v)) for u, v in edges]
        if n is None:
            n = max((max(p) for p in pairs), default=1)
        seen: set[frozenset[int]] = set()
        for u, v in pairs:
            for w in (u, v):
                if not 1 <= w <= n:
                    raise TreeError(f"vertex {w} outside 1..{n}")
            if u == v:
                raise TreeError(f"self-loop at {u}")
            e = frozenset((u, v))
            if e in seen:
                raise TreeError(f"duplicate edge {u} {v}")
            seen.add(e)
        # union-find so the error names the offending edge
        parent = list(range(n + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in pairs:
            ru, rv = find(u), find(v)
            if ru == rv:
                raise TreeError(f"cycle detected at edge {u} {v}")
            parent[ru] = rv
        if len({find(v) for v in range(1, n + 1)}) != 1:
            raise TreeError("graph is disconnected")
        return cls(n, frozenset(seen))

    @classmethod
    def path(cls, n: int) -> LabelledTree:
        """Naturally labelled path 1-2-...-n."""
        return cls.from_edges([(i, i + 1) for i in range(1, n)], n=n)

    @classmethod
    def star(cls, n: int, center: int = 1) -> LabelledTree:
        return cls.from_edges([(center, v) for v in range(1, n + 1) if v != center], n=n)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(tuple(sorted(e)) for e in self.edges)

    def _reach(self, root: int) -> dict[int, int]:
        parent = {root: 0}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in self._adj[u]:
                if w not in parent:
                    parent[w] = u
                    queue.append(w)
        return parent

    def is_natural_path(self) -> bool:
        return self.edges == frozenset(frozenset((i, i + 1)) for i in range(1, self.n))

    def delete_vertex(self, p: int) -> LabelledTree:
        """Remove pendant vertex p; labels above p shift down by one."""
        if self.degree(p) != 1:
            raise TreeError(f"vertex {p} is not pendant")

        def relabel(v):
            return v - 1 if v > p else v

        return LabelledTree.from_edges(
            [(relabel(u), relabel(v)) for u, v in self.sorted_edges() if p not in (u, v)],
            n=self.n - 1,
        )


def parse_tree(text: str, n: int | None = None) -> LabelledTree:
    """Parse one edge ``u v`` per line; blank lines and ``#`` comments ignored."""
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 2:
            raise TreeError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            edges.append((int(toks[0]), int(toks[1])))
        except ValueError:
            raise TreeError(f"line {lineno}: non-integer vertex in {raw!r}") from None
    if not edges:
        raise TreeError("no edges")
    return LabelledTree.from_edges(edges, n=n)


def format_tree(T: LabelledTree) -> str:
    return "".join(f"{u} {v}\n" for u, v in T.sorted_edges())


def pendant_vertices(T: LabelledTree) -> list[int]:
    if T.n < 2:
        raise TreeError("pendant vertices undefined for a single vertex")
    return [v for v in range(1, T.n + 1) if T.degree(v) == 1]


def path_between(T: LabelledTree, u: int, v: int) -> IndexList:
    """The unique tree path from u to v, starting at u."""
    if u == v:
        raise TreeError("path endpoints must differ")
    for w in (u, v):
        if not 1 <= w <= T.n:
            raise TreeError(f"vertex {w} outside 1..{T.n}")
    parent = T._reach(u)
    out = [v]
    while out[-1] != u:
        out.append(parent[out[-1]])
    return IndexList(reversed(out))


def enumerate_paths(T: LabelledTree) -> list[IndexList]:
    """One path per pair u < v, oriented from u to v."""
    if T.n < 2:
        raise TreeError("no paths in a single-vertex tree")
    out = []
    for u in range(1, T.n + 1):
        parent = T._reach(u)
        for v in range(u + 1, T.n + 1):
            p = [v]
            while p[-1] != u:
                p.append(parent[p[-1]])
            out.append(IndexList(reversed(p)))
    return out


def signing(T: LabelledTree) -> tuple[int, ...]:
    """Proper +/-1 two-colouring with vertex 1 positive.

    Returned as a tuple indexed 0..n-1 for vertices 1..n.
    """
    sigma = {1: 1}
    order = deque([1])
    while order:
        u = order.popleft()
        for w in T.neighbors(u):
            if w not in sigma:
                sigma[w] = -sigma[u]
                order.append(w)
    return tuple(sigma[v] for v in range(1, T.n + 1))
