"""Bitset-backed simple graphs and the constructions shared by every module.

Vertices are dense 0-indexed integers.  The adjacency of vertex ``v`` is a
Python int used as a bitset (bit ``u`` set iff ``uv`` is an edge), which keeps
the popcount-heavy kernels (partition refinement, embedding, enumeration)
fast without native extensions.  Graphs are immutable value objects: every
construction returns a fresh instance, so instances are safe to share across
worker processes.

Canonical forms are exact: equal keys iff isomorphic.  They are computed per
connected component with an individualization-refinement search, so the hard
cap applies to component size rather than total order.
"""

from __future__ import annotations

__all__ = [
    "Graph",
    "GraphError",
    "CanonicalKey",
    "EXACT_CANON_CAP",
    "from_edge_list",
    "join",
    "blow_up",
    "disjoint_union",
    "edit_distance_labeled",
    "canonical_key",
    "canonical_labeling",
    "is_isomorphic",
    "iso_hash",
    "bipartition",
    "complete_multipartite_parts",
    "to_edge_list_text",
    "from_edge_list_text",
    "to_graph6",
    "from_graph6",
]

# Exact canonicalization cap, per connected component.  Everything the
# exhaustive searches produce has components at most m+1 <= 13 vertices, and
# every forbidden pattern fits; larger components must go through
# iso_hash() + explicit isomorphism checks.
EXACT_CANON_CAP = 16


class GraphError(ValueError):
    """Invalid graph construction or operation argument."""


def _bits(x: int):
    """Yield the indices of set bits, ascending."""
    while x:
        b = x & -x
        yield b.bit_length() - 1
        x ^= b


class Graph:
    """Immutable simple undirected graph on vertices 0..n-1."""

    __slots__ = ("n", "adj", "m")

    def __init__(self, n: int, adj, m: int | None = None):
        self.n = n
        self.adj = tuple(adj)
        if len(self.adj) != n:
            raise GraphError(f"adjacency has {len(self.adj)} rows for n={n}")
        self.m = (
            sum(a.bit_count() for a in self.adj) // 2 if m is None else m
        )

    # -- queries -------------------------------------------------------

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [a.bit_count() for a in self.adj]

    def max_degree(self) -> int:
        return max((a.bit_count() for a in self.adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int):
        return _bits(self.adj[v])

    def edges(self) -> list[tuple[int, int]]:
        """All edges (u, v) with u < v, ascending lexicographic order."""
        out = []
        for u in range(self.n):
            row = self.adj[u] >> (u + 1)
            v = u + 1
            while row:
                b = row & -row
                out.append((u, v + b.bit_length() - 1))
                row ^= b
        return out

    def components(self) -> list[int]:
        """Vertex bitmasks of the connected components, by lowest vertex."""
        unseen = (1 << self.n) - 1
        comps = []
        while unseen:
            frontier = unseen & -unseen
            comp = 0
            while frontier:
                comp |= frontier
                nxt = 0
                for v in _bits(frontier):
                    nxt |= self.adj[v]
                frontier = nxt & ~comp
            comps.append(comp)
            unseen &= ~comp
        return comps

    # -- derived graphs -------------------------------------------------

    def induced(self, mask: int) -> "Graph":
        """Subgraph induced by the vertices in ``mask``, relabeled densely."""
        verts = list(_bits(mask))
        pos = {v: i for i, v in enumerate(verts)}
        adj = []
        for v in verts:
            row = 0
            for u in _bits(self.adj[v] & mask):
                row |= 1 << pos[u]
            adj.append(row)
        return Graph(len(verts), adj)

    def relabel(self, perm) -> "Graph":
        """Image under the permutation ``perm`` (perm[old] = new)."""
        adj = [0] * self.n
        for v in range(self.n):
            row = 0
            for u in _bits(self.adj[v]):
                row |= 1 << perm[u]
            adj[perm[v]] = row
        return Graph(self.n, adj, self.m)

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(
            self.n, [(full ^ self.adj[v]) & ~(1 << v) for v in range(self.n)]
        )

    def with_vertices(self, n: int) -> "Graph":
        """Same graph padded with isolated vertices up to order ``n``."""
        if n < self.n:
            raise GraphError(f"cannot shrink graph of order {self.n} to {n}")
        if n == self.n:
            return self
        return Graph(n, self.adj + (0,) * (n - self.n), self.m)

    def grow_edge(self, u: int, v: int) -> "Graph":
        """Add edge uv, extending the vertex set if an endpoint is new."""
        if u == v:
            raise GraphError(f"loop edge ({u},{v})")
        n = max(self.n, u + 1, v + 1)
        adj = list(self.adj) + [0] * (n - self.n)
        if adj[u] >> v & 1:
            return Graph(n, adj, self.m)
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        return Graph(n, adj, self.m + 1)

    def remove_edge(self, u: int, v: int) -> "Graph":
        if not self.has_edge(u, v):
            raise GraphError(f"edge ({u},{v}) not present")
        adj = list(self.adj)
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
        return Graph(self.n, adj, self.m - 1)

    def drop_isolates(self) -> "Graph":
        mask = 0
        for v in range(self.n):
            if self.adj[v]:
                mask |= 1 << v
        return self.induced(mask)

    # -- value semantics -------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.adj == other.adj
        )

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


CanonicalKey = bytes


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------


def from_edge_list(n: int, edges) -> Graph:
    """Graph on ``n`` vertices with the given edges; duplicates collapse."""
    if n < 0:
        raise GraphError(f"negative vertex count {n}")
    adj = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u},{v}) out of range for n={n}")
        if u == v:
            raise GraphError(f"loop edge ({u},{v}) rejected")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(n, adj)


def join(g: Graph, h: Graph) -> Graph:
    """Join: disjoint copies of g and h plus all edges between them."""
    n = g.n + h.n
    gmask = (1 << g.n) - 1
    hmask = ((1 << h.n) - 1) << g.n
    adj = [g.adj[v] | hmask for v in range(g.n)]
    adj += [(h.adj[v] << g.n) | gmask for v in range(h.n)]
    return Graph(n, adj, g.m + h.m + g.n * h.n)


def disjoint_union(g: Graph, h: Graph) -> Graph:
    adj = list(g.adj) + [h.adj[v] << g.n for v in range(h.n)]
    return Graph(g.n + h.n, adj, g.m + h.m)


def blow_up(g: Graph, t: int) -> Graph:
    """Replace each vertex by an independent t-set, each edge by a K_{t,t}."""
    if t < 1:
        raise GraphError(f"blow-up factor must be positive, got {t}")
    tmask = (1 << t) - 1
    rows = []
    for v in range(g.n):
        row = 0
        for u in _bits(g.adj[v]):
            row |= tmask << (u * t)
        rows.extend([row] * t)
    return Graph(g.n * t, rows, t * t * g.m)


def edit_distance_labeled(g: Graph, h: Graph) -> int:
    """Edge symmetric difference under the identity labeling.

    The smaller graph is implicitly extended by isolated vertices.
    """
    n = max(g.n, h.n)
    ga = g.adj + (0,) * (n - g.n)
    ha = h.adj + (0,) * (n - h.n)
    return sum((ga[v] ^ ha[v]).bit_count() for v in range(n)) // 2


# ---------------------------------------------------------------------------
# canonical forms
# ---------------------------------------------------------------------------

_CANON_CACHE: dict[tuple, tuple] = {}
_CANON_CACHE_CAP = 300_000


def _refine(adj, cells):
    """Coarsest equitable refinement of an ordered partition.

    Cells are lists of vertices.  Splitting order depends only on cell
    positions and neighbor counts, never on vertex labels, so the refined
    ordered partition is isomorphism-invariant.
    """
    cells = [list(c) for c in cells]
    queue = [sum(1 << v for v in c) for c in cells]
    qi = 0
    while qi < len(queue):
        splitter = queue[qi]
        qi += 1
        newcells = []
        for c in cells:
            if len(c) == 1:
                newcells.append(c)
                continue
            groups: dict[int, list[int]] = {}
            for v in c:
                groups.setdefault((adj[v] & splitter).bit_count(), []).append(v)
            if len(groups) == 1:
                newcells.append(c)
            else:
                for k in sorted(groups):
                    part = groups[k]
                    newcells.append(part)
                    queue.append(sum(1 << v for v in part))
        cells = newcells
    return cells


def _prefix_fixing_orbit_hit(v, explored, autos, fixed, n):
    """True iff v is equivalent to an explored sibling under a known
    automorphism fixing the individualized prefix pointwise."""
    gens = [g for g in autos if all(g[w] == w for w in fixed)]
    if not gens:
        return False
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for w in range(n):
            rw, rg = find(w), find(g[w])
            if rw != rg:
                parent[rw] = rg
    rv = find(v)
    return any(find(w) == rv for w in explored)


def _canon_search(adj, n):
    """Minimal adjacency certificate and a labeling achieving it.

    Individualization-refinement with orbit pruning from automorphisms
    discovered at equal-certificate leaves; exact for any input, practical
    up to EXACT_CANON_CAP vertices.
    """
    if n <= 1:
        return 0, tuple(range(n))

    best_cert = None
    best_perm = None
    autos: list[tuple[int, ...]] = []

    def leaf(cells):
        nonlocal best_cert, best_perm
        perm = tuple(c[0] for c in cells)
        cert = 0
        for p in range(n):
            row = adj[perm[p]]
            for q in range(p + 1, n):
                cert = cert << 1 | (row >> perm[q] & 1)
        if best_cert is None or cert < best_cert:
            best_cert, best_perm = cert, perm
        elif cert == best_cert and perm != best_perm:
            phi = [0] * n
            for p in range(n):
                phi[best_perm[p]] = perm[p]
            autos.append(tuple(phi))

    def dfs(cells, fixed):
        idx = -1
        for i, c in enumerate(cells):
            if len(c) > 1:
                idx = i
                break
        if idx < 0:
            leaf(cells)
            return
        cell = cells[idx]
        explored: list[int] = []
        for v in cell:
            if explored and _prefix_fixing_orbit_hit(v, explored, autos, fixed, n):
                continue
            explored.append(v)
            rest = [w for w in cell if w != v]
            dfs(_refine(adj, cells[:idx] + [[v], rest] + cells[idx + 1 :]), fixed + (v,))

    dfs(_refine(adj, [list(range(n))]), ())
    return best_cert, best_perm


def _canon_component(g: Graph):
    key = (g.n, g.adj)
    hit = _CANON_CACHE.get(key)
    if hit is not None:
        return hit
    res = _canon_search(g.adj, g.n)
    if len(_CANON_CACHE) >= _CANON_CACHE_CAP:
        _CANON_CACHE.clear()
    _CANON_CACHE[key] = res
    return res


def _component_certs(g: Graph, exact_cap: int):
    out = []
    for mask in g.components():
        sub = g.induced(mask)
        if sub.n > exact_cap:
            raise GraphError(
                f"component of order {sub.n} exceeds the exact canonical cap "
                f"{exact_cap}; use iso_hash() with an explicit isomorphism "
                "check instead"
            )
        cert, perm = _canon_component(sub)
        verts = list(_bits(mask))
        out.append((sub.n, cert, verts, perm))
    return out


def canonical_key(g: Graph, exact_cap: int = EXACT_CANON_CAP) -> CanonicalKey:
    """Label-invariant key: equal keys iff isomorphic graphs.

    Computed per component, so the exact cap restricts component order, not
    total order.  Raises GraphError above the cap.
    """
    parts = sorted((cn, cert) for cn, cert, _, _ in _component_certs(g, exact_cap))
    out = bytearray(g.n.to_bytes(4, "big"))
    for cn, cert in parts:
        out += cn.to_bytes(2, "big")
        out += cert.to_bytes(max(1, (cn * (cn - 1) // 2 + 7) // 8), "big")
    return bytes(out)


def canonical_labeling(g: Graph, exact_cap: int = EXACT_CANON_CAP) -> tuple[int, ...]:
    """A labeling (position -> original vertex) realizing the canonical form.

    Components are laid out in sorted certificate order; the labeled image
    is identical for isomorphic inputs.
    """
    comps = _component_certs(g, exact_cap)
    comps.sort(key=lambda t: (t[0], t[1], min(t[2]) if t[2] else -1))
    order: list[int] = []
    for _, _, verts, perm in comps:
        order.extend(verts[p] for p in perm)
    return tuple(order)


def is_isomorphic(g: Graph, h: Graph, exact_cap: int = EXACT_CANON_CAP) -> bool:
    if g.n != h.n or g.m != h.m:
        return False
    if sorted(g.degrees()) != sorted(h.degrees()):
        return False
    return canonical_key(g, exact_cap) == canonical_key(h, exact_cap)


def iso_hash(g: Graph) -> bytes:
    """Cheap isomorphism-invariant hash (collisions possible).

    Intended for bucketing graphs beyond the exact canonical cap; buckets
    must be separated with an explicit isomorphism test.
    """
    import hashlib

    colors = [a.bit_count() for a in g.adj]
    for _ in range(3):
        colors = [
            hash((colors[v], tuple(sorted(colors[u] for u in _bits(g.adj[v])))))
            for v in range(g.n)
        ]
    blob = repr((g.n, g.m, sorted(colors))).encode()
    return hashlib.blake2b(blob, digest_size=16).digest()


# ---------------------------------------------------------------------------
# structure tests used across modules
# ---------------------------------------------------------------------------


def bipartition(g: Graph):
    """Per-component 2-coloring: list of (side0, side1) vertex lists,
    or None if some component has an odd cycle."""
    color = [-1] * g.n
    out = []
    for comp in g.components():
        root = (comp & -comp).bit_length() - 1
        color[root] = 0
        sides = ([root], [])
        frontier = [root]
        while frontier:
            nxt = []
            for v in frontier:
                for u in _bits(g.adj[v]):
                    if color[u] < 0:
                        color[u] = 1 - color[v]
                        sides[color[u]].append(u)
                        nxt.append(u)
                    elif color[u] == color[v]:
                        return None
            frontier = nxt
        out.append(sides)
    return out


def complete_multipartite_parts(g: Graph):
    """Sorted part sizes if g is complete multipartite, else None.

    A graph is complete multipartite iff its complement is a disjoint
    union of cliques.
    """
    comp = g.complement()
    sizes = []
    for mask in comp.components():
        k = mask.bit_count()
        for v in _bits(mask):
            if (comp.adj[v] & mask).bit_count() != k - 1:
                return None
        sizes.append(k)
    return sorted(sizes)


# ---------------------------------------------------------------------------
# text formats
# ---------------------------------------------------------------------------


def to_edge_list_text(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines += [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def from_edge_list_text(text: str) -> Graph:
    rows = [ln for ln in text.splitlines() if ln.strip()]
    if not rows:
        raise GraphError("empty edge-list input")
    try:
        n, m = map(int, rows[0].split())
    except ValueError as exc:
        raise GraphError(f"bad header line {rows[0]!r}") from exc
    edges = []
    for ln in rows[1:]:
        u, v = map(int, ln.split())
        edges.append((u, v))
    g = from_edge_list(n, edges)
    if g.m != m:
        raise GraphError(f"header claims {m} edges, found {g.m}")
    return g


def to_graph6(g: Graph) -> str:
    """Standard graph6 line (no trailing newline)."""
    n = g.n
    if n <= 62:
        head = [n + 63]
    elif n <= 258047:
        head = [126, (n >> 12 & 63) + 63, (n >> 6 & 63) + 63, (n & 63) + 63]
    else:
        raise GraphError(f"graph6 writer supports n <= 258047, got {n}")
    bits = []
    for v in range(1, n):
        col = g.adj[v]
        bits.extend((col >> u) & 1 for u in range(v))
    while len(bits) % 6:
        bits.append(0)
    body = [
        (bits[i] << 5 | bits[i + 1] << 4 | bits[i + 2] << 3
         | bits[i + 3] << 2 | bits[i + 4] << 1 | bits[i + 5]) + 63
        for i in range(0, len(bits), 6)
    ]
    return bytes(head + body).decode("ascii")


def from_graph6(line: str) -> Graph:
    s = line.strip()
    if s.startswith(">>graph6<<"):
        s = s[10:]
    data = [ord(c) - 63 for c in s]
    if any(d < 0 or d > 63 for d in data):
        raise GraphError(f"invalid graph6 characters in {line!r}")
    if not data:
        raise GraphError("empty graph6 input")
    if data[0] == 63:  # '~'
        if len(data) < 4:
            raise GraphError("truncated graph6 order")
        n = data[1] << 12 | data[2] << 6 | data[3]
        data = data[4:]
    else:
        n = data[0]
        data = data[1:]
    need = n * (n - 1) // 2
    bits = []
    for d in data:
        bits.extend((d >> k) & 1 for k in range(5, -1, -1))
    if len(bits) < need:
        raise GraphError("graph6 body too short")
    adj = [0] * n
    i = 0
    for v in range(1, n):
        for u in range(v):
            if bits[i]:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
            i += 1
    return Graph(n, adj)
