"""Compiled inner loops (numba) for the samplers and tree statistics."""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def subarray_min_sum(values):
    """Sum of min(values[i..j]) over all 0 <= i < j < len(values).

    Monotonic stack: values[m] is the minimum of every window whose left end
    lies after the previous strictly smaller entry and whose right end lies
    before the next smaller-or-equal entry.  Length-one windows are removed
    at the end.
    """
    L = values.shape[0]
    left = np.empty(L, np.int64)
    right = np.empty(L, np.int64)
    stack = np.empty(L, np.int64)
    top = 0
    for i in range(L):
        while top > 0 and values[stack[top - 1]] > values[i]:
            top -= 1
        left[i] = stack[top - 1] if top > 0 else -1
        stack[top] = i
        top += 1
    top = 0
    for i in range(L - 1, -1, -1):
        while top > 0 and values[stack[top - 1]] >= values[i]:
            top -= 1
        right[i] = stack[top - 1] if top > 0 else L
        stack[top] = i
        top += 1
    total = 0.0
    single = 0.0
    for i in range(L):
        total += values[i] * ((i - left[i]) * (right[i] - i))
        single += values[i]
    return total - single


@njit(cache=True, nogil=True)
def subarray_min_sum_rows(paths):
    out = np.empty(paths.shape[0])
    for r in range(paths.shape[0]):
        out[r] = subarray_min_sum(paths[r])
    return out


@njit(cache=True, nogil=True)
def snake_heads(steps, displacements, wiggles, heads):
    """Head positions along a contour and the time average of the snake.

    ``steps`` is a Dyck path of +-1 entries (length 2n), ``displacements``
    holds one Gaussian increment per edge in order of discovery and
    ``heads`` (length 2n+1) receives the position of the vertex visited at
    each contour time.

    The returned average runs along the linearly interpolated contour: on
    each step the head moves along one edge as a Brownian path from parent
    to child, whose time integral is parent + displacement/2 plus an
    independent bridge term, supplied in ``wiggles``.  Every edge is walked
    twice with the same path, so the average is a mean over edges.
    """
    m = steps.shape[0]
    along = np.empty(m // 2 + 1)
    along[0] = 0.0
    depth = 0
    edge = 0
    heads[0] = 0.0
    acc = 0.0
    for i in range(m):
        if steps[i] > 0:
            depth += 1
            along[depth] = along[depth - 1] + displacements[edge]
            acc += along[depth - 1] + 0.5 * displacements[edge] + wiggles[edge]
            edge += 1
        else:
            depth -= 1
        heads[i + 1] = along[depth]
    return acc / edge


@njit(cache=True, nogil=True)
def snake_mean_rows(steps, displacements, wiggles):
    rows, m = steps.shape
    out = np.empty(rows)
    heads = np.empty(m + 1)
    for r in range(rows):
        out[r] = snake_heads(steps[r], displacements[r], wiggles[r], heads)
    return out


@njit(cache=True, nogil=True)
def prufer_decode(seq, n, parent, order):
    """Linear-time Prufer decoding.

    Fills ``parent`` (root n-1 gets -1) and ``order``, the removal order of
    the non-root vertices, which lists every vertex before its parent.
    """
    degree = np.ones(n, np.int64)
    for x in seq:
        degree[x] += 1
    ptr = 0
    while degree[ptr] != 1:
        ptr += 1
    leaf = ptr
    for idx in range(n - 2):
        x = seq[idx]
        parent[leaf] = x
        order[idx] = leaf
        degree[x] -= 1
        if degree[x] == 1 and x < ptr:
            leaf = x
        else:
            ptr += 1
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
    # two vertices remain: leaf and n-1
    parent[leaf] = n - 1
    order[n - 2] = leaf
    parent[n - 1] = -1


@njit(cache=True, nogil=True)
def edge_split_sum(parent, order, n):
    """sum over edges of s (n - s), s the size of the child side."""
    size = np.ones(n, np.int64)
    total = 0
    for idx in range(order.shape[0]):
        v = order[idx]
        s = size[v]
        total += s * (n - s)
        size[parent[v]] += s
    return total


@njit(cache=True, nogil=True)
def wiener_prufer_rows(seqs, n):
    rows = seqs.shape[0]
    out = np.empty(rows, np.int64)
    parent = np.empty(n, np.int64)
    order = np.empty(n - 1, np.int64)
    for r in range(rows):
        prufer_decode(seqs[r], n, parent, order)
        out[r] = edge_split_sum(parent, order, n)
    return out


@njit(cache=True, nogil=True)
def all_pairs_bfs_sum(indptr, indices, n):
    """sum over ordered pairs (u, v) of the BFS distance d(u, v)."""
    dist = np.empty(n, np.int64)
    queue = np.empty(n, np.int64)
    total = 0
    for src in range(n):
        for i in range(n):
            dist[i] = -1
        dist[src] = 0
        head = 0
        tail = 1
        queue[0] = src
        while head < tail:
            u = queue[head]
            head += 1
            total += dist[u]
            for j in range(indptr[u], indptr[u + 1]):
                w = indices[j]
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue[tail] = w
                    tail += 1
    return total
