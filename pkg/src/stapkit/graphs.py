"""Bridge finding and connectivity on small multigraphs given as edge lists."""

from __future__ import annotations


def bridges(vertices, edges) -> set[int]:
    """Indices of bridge edges; parallel edges are never bridges."""
    adj = {v: [] for v in vertices}
    for i, (a, b) in enumerate(edges):
        if a == b:
            continue
        adj[a].append((b, i))
        adj[b].append((a, i))
    disc, low = {}, {}
    out = set()
    clock = 0
    for s in adj:
        if s in disc:
            continue
        disc[s] = low[s] = clock
        clock += 1
        stack = [(s, -1, iter(adj[s]))]
        while stack:
            v, via, it = stack[-1]
            advanced = False
            for w, i in it:
                if i == via:
                    continue
                if w in disc:
                    low[v] = min(low[v], disc[w])
                else:
                    disc[w] = low[w] = clock
                    clock += 1
                    stack.append((w, i, iter(adj[w])))
                    advanced = True
                    break
            if advanced:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[v])
                if low[v] > disc[p]:
                    out.add(via)
    return out


def is_connected(vertices, edges) -> bool:
    vertices = list(vertices)
    if not vertices:
        return True
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    root = find(vertices[0])
    return all(find(v) == root for v in vertices)


def two_edge_connected(vertices, edges) -> bool:
    return is_connected(vertices, edges) and not bridges(vertices, edges)


def induced_edges(inst, keep) -> list[tuple[str, str]]:
    """Tree edges plus the links with both endpoints in ``keep``."""
    keep = set(keep)
    out = [tuple(e) for e in inst.tree_edges]
    out += [(ln.u, ln.v) for ln in inst.links if ln.u in keep and ln.v in keep]
    return out
