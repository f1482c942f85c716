"""Sublevel cubical persistence for 2D intensity grids.

A channel grid of shape (H, W) is modeled as a cubical complex in which the
pixels are the top-dimensional cells (squares) and every lower cell takes the
minimum value over the squares it touches. The complex lives on a doubled
coordinate grid of shape (2H+1, 2W+1): cells at (odd, odd) positions are
squares, (even, even) are vertices, the rest are edges.

Two persistence computations are provided:

* :func:`compute_persistence` — production path; union-find over the
  vertex/edge graph for dimension 0 and over the dual (complement) graph for
  dimension 1. Runs in near-linear time after a sort.
* :func:`oracle_persistence` — textbook column-by-column boundary matrix
  reduction over Z/2 with no optimizations. Cubic-time; intended for
  verification on small grids only.

Both emit the full pairing, including zero-persistence pairs (birth == death);
downstream consumers drop those.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit

__all__ = [
    "CubicalFiltration",
    "PersistenceDiagram",
    "build_filtration",
    "compute_persistence",
    "oracle_persistence",
]


@dataclass(frozen=True)
class CubicalFiltration:
    """Filtration values on the doubled-coordinate cubical grid.

    ``values`` has shape (2*height+1, 2*width+1), row-major, with pixel
    intensities at the (odd, odd) positions and the min-over-incident-squares
    rule everywhere else.
    """

    width: int
    height: int
    values: np.ndarray

    @property
    def squares(self) -> np.ndarray:
        return self.values[1::2, 1::2]

    @property
    def vertices(self) -> np.ndarray:
        return self.values[0::2, 0::2]


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of persistence pairs as an (n, 3) float64 array.

    Columns are (dimension, birth, death); death is +inf for the essential
    class that never dies. Rows are stored in canonical order
    (dimension, birth, death ascending) so equal diagrams compare equal
    elementwise.
    """

    pairs: np.ndarray

    def in_dimension(self, dim: int) -> np.ndarray:
        """Return the (k, 2) birth/death rows of one homology dimension."""
        sel = self.pairs[:, 0] == dim
        return self.pairs[sel, 1:]

    def persistent(self, dim: int) -> np.ndarray:
        """Birth/death rows with strictly positive persistence (birth < death)."""
        rows = self.in_dimension(dim)
        return rows[rows[:, 0] < rows[:, 1]]

    def essential_count(self, dim: int) -> int:
        rows = self.in_dimension(dim)
        return int(np.sum(np.isinf(rows[:, 1])))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PersistenceDiagram):
            return NotImplemented
        return self.pairs.shape == other.pairs.shape and bool(
            np.array_equal(self.pairs, other.pairs)
        )


def _canonical(rows: np.ndarray) -> np.ndarray:
    if rows.size == 0:
        return rows.reshape(0, 3)
    order = np.lexsort((rows[:, 2], rows[:, 1], rows[:, 0]))
    return np.ascontiguousarray(rows[order])


def build_filtration(channel: np.ndarray) -> CubicalFiltration:
    """Build the sublevel cubical filtration of a 2D channel grid.

    Square cells carry the pixel intensities; every edge and vertex carries
    the minimum over the squares incident to it.
    """
    ch = np.asarray(channel, dtype=np.float64)
    if ch.ndim != 2 or ch.shape[0] < 1 or ch.shape[1] < 1:
        raise ValueError(f"channel grid must be 2D and non-empty, got shape {ch.shape}")
    if not np.all(np.isfinite(ch)):
        raise ValueError("channel grid contains non-finite values")
    h, w = ch.shape
    pad = np.full((h + 2, w + 2), np.inf)
    pad[1:-1, 1:-1] = ch

    values = np.empty((2 * h + 1, 2 * w + 1))
    values[1::2, 1::2] = ch
    # vertical edge cells sit between horizontally adjacent squares
    values[1::2, 0::2] = np.minimum(pad[1:-1, :-1], pad[1:-1, 1:])
    # horizontal edge cells sit between vertically adjacent squares
    values[0::2, 1::2] = np.minimum(pad[:-1, 1:-1], pad[1:, 1:-1])
    values[0::2, 0::2] = np.minimum(
        np.minimum(pad[:-1, :-1], pad[:-1, 1:]),
        np.minimum(pad[1:, :-1], pad[1:, 1:]),
    )
    return CubicalFiltration(width=w, height=h, values=values)


@njit(cache=True, nogil=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True, nogil=True)
def _merge_ascending(birth0, weight, eu, ev, order, out_b, out_d):
    # Elder rule over the vertex/edge graph in ascending value order: when an
    # edge joins two components, the one with the larger birth dies.
    parent = np.arange(birth0.size)
    birth = birth0.copy()
    m = 0
    for k in range(order.size):
        e = order[k]
        ru = _find(parent, eu[e])
        rv = _find(parent, ev[e])
        if ru == rv:
            continue
        if birth[ru] > birth[rv] or (birth[ru] == birth[rv] and ru > rv):
            dying, surv = ru, rv
        else:
            dying, surv = rv, ru
        out_b[m] = birth[dying]
        out_d[m] = weight[e]
        m += 1
        parent[dying] = surv
    return m


@njit(cache=True, nogil=True)
def _merge_descending(max0, weight, eu, ev, order, out_b, out_d):
    # Dual sweep in descending value order: components of the complement merge
    # as cells leave; the component with the smaller maximum dies, yielding a
    # dimension-1 pair (edge value, dying component's max).
    parent = np.arange(max0.size)
    comp_max = max0.copy()
    m = 0
    for k in range(order.size):
        e = order[k]
        ru = _find(parent, eu[e])
        rv = _find(parent, ev[e])
        if ru == rv:
            continue
        if comp_max[ru] < comp_max[rv] or (comp_max[ru] == comp_max[rv] and ru > rv):
            dying, surv = ru, rv
        else:
            dying, surv = rv, ru
        out_b[m] = weight[e]
        out_d[m] = comp_max[dying]
        m += 1
        parent[dying] = surv
    return m


def compute_persistence(filtration: CubicalFiltration) -> PersistenceDiagram:
    """Persistence pairs of a sublevel cubical filtration, dimensions 0 and 1.

    Emits every pair produced by the reduction, zero-persistence pairs
    included, plus the single essential dimension-0 class. The output multiset
    equals :func:`oracle_persistence` on the same filtration.
    """
    h, w = filtration.height, filtration.width
    v = filtration.values
    squares = np.ascontiguousarray(v[1::2, 1::2], dtype=np.float64)
    verts = np.ascontiguousarray(v[0::2, 0::2], dtype=np.float64).ravel()
    hedges = np.ascontiguousarray(v[0::2, 1::2], dtype=np.float64)  # (h+1, w)
    vedges = np.ascontiguousarray(v[1::2, 0::2], dtype=np.float64)  # (h, w+1)

    # dimension 0: vertices joined by edge cells, processed upward
    n_vert = (h + 1) * (w + 1)
    vid = np.arange(n_vert, dtype=np.int64).reshape(h + 1, w + 1)
    e_u = np.concatenate([vid[:, :-1].ravel(), vid[:-1, :].ravel()])
    e_v = np.concatenate([vid[:, 1:].ravel(), vid[1:, :].ravel()])
    e_w = np.concatenate([hedges.ravel(), vedges.ravel()])
    order0 = np.argsort(e_w, kind="stable")
    b0 = np.empty(n_vert - 1)
    d0 = np.empty(n_vert - 1)
    m0 = _merge_ascending(verts, e_w, e_u, e_v, order0, b0, d0)

    # dimension 1: pixels plus an outside node, joined by the same edge cells
    # viewed dually, processed downward
    n_pix = h * w
    omega = n_pix
    pid = np.arange(n_pix, dtype=np.int64).reshape(h, w)
    node_max = np.concatenate([squares.ravel(), [np.inf]])
    du = [
        pid[:, :-1].ravel(),  # interior vertical edge cells
        pid[:-1, :].ravel(),  # interior horizontal edge cells
        pid[0, :],  # top boundary
        pid[-1, :],  # bottom boundary
        pid[:, 0],  # left boundary
        pid[:, -1],  # right boundary
    ]
    dv = [
        pid[:, 1:].ravel(),
        pid[1:, :].ravel(),
        np.full(w, omega, dtype=np.int64),
        np.full(w, omega, dtype=np.int64),
        np.full(h, omega, dtype=np.int64),
        np.full(h, omega, dtype=np.int64),
    ]
    dw = [
        vedges[:, 1:-1].ravel(),
        hedges[1:-1, :].ravel(),
        hedges[0, :],
        hedges[-1, :],
        vedges[:, 0],
        vedges[:, -1],
    ]
    d_u = np.concatenate(du)
    d_v = np.concatenate(dv)
    d_w = np.ascontiguousarray(np.concatenate(dw))
    order1 = np.argsort(-d_w, kind="stable")
    b1 = np.empty(n_pix)
    d1 = np.empty(n_pix)
    m1 = _merge_descending(node_max, d_w, d_u, d_v, order1, b1, d1)

    rows = np.empty((m0 + 1 + m1, 3))
    rows[:m0, 0] = 0.0
    rows[:m0, 1] = b0[:m0]
    rows[:m0, 2] = d0[:m0]
    rows[m0] = (0.0, verts.min(), np.inf)
    rows[m0 + 1 :, 0] = 1.0
    rows[m0 + 1 :, 1] = b1[:m1]
    rows[m0 + 1 :, 2] = d1[:m1]
    return PersistenceDiagram(pairs=_canonical(rows))


def oracle_persistence(filtration: CubicalFiltration) -> PersistenceDiagram:
    """Reference persistence via plain Z/2 boundary matrix reduction.

    Cells are sorted by (value, dimension, linear index) and columns are
    reduced left to right with no clearing or other shortcuts. Cubic time:
    use only on grids small enough for that.
    """
    vals = filtration.values.ravel()
    n_rows, n_cols = filtration.values.shape
    ncells = vals.size
    dims = (np.arange(n_rows)[:, None] % 2 + np.arange(n_cols)[None, :] % 2).ravel()

    order = sorted(range(ncells), key=lambda i: (vals[i], dims[i], i))
    rank = {cell: r for r, cell in enumerate(order)}

    columns: list[set[int]] = []
    for cell in order:
        a, b = divmod(cell, n_cols)
        if a % 2 == 1 and b % 2 == 1:
            faces = ((a - 1, b), (a + 1, b), (a, b - 1), (a, b + 1))
        elif a % 2 == 1:
            faces = ((a - 1, b), (a + 1, b))
        elif b % 2 == 1:
            faces = ((a, b - 1), (a, b + 1))
        else:
            faces = ()
        columns.append({rank[fa * n_cols + fb] for fa, fb in faces})

    pivot: dict[int, int] = {}
    for j in range(ncells):
        col = columns[j]
        while col:
            low = max(col)
            other = pivot.get(low)
            if other is None:
                pivot[low] = j
                break
            col ^= columns[other]

    out = []
    for low, j in pivot.items():
        birth_cell = order[low]
        death_cell = order[j]
        out.append((dims[birth_cell], vals[birth_cell], vals[death_cell]))
    for j in range(ncells):
        if not columns[j] and j not in pivot:
            cell = order[j]
            out.append((dims[cell], vals[cell], np.inf))
    return PersistenceDiagram(pairs=_canonical(np.array(out, dtype=np.float64)))
