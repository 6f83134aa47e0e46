"""Random repair of 2-colourings on 3-colourable graphs.

Instances are graphs with a known 3-class witness partition (every edge
crosses classes, so every triangle takes one vertex from each class).  The
repair walk 2-colours the vertices and, while any triangle is
monochromatic, flips a uniformly chosen vertex of the lexicographically
smallest such triangle.  Tracking two witness classes and a pairing of the
two colours gives a scalar potential that moves by +-1 with probability
1/3 each, the shape the two-absorbing-barrier guarantee wants.

Adjacency is kept as per-vertex bitmasks (Python ints), which makes the
triangle search a short chain of AND operations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from driftlab.errors import FormatError
from driftlab.rng import RngStream
from driftlab.trajectory import Trajectory


@dataclass
class ColorableGraph:
    """Graph plus witness 3-partition: classes[v] in {0,1,2}, edges cross-class.

    Edges are canonical (u < v, strictly increasing, no duplicates); the
    constructor enforces all of it, so a constructed instance is always a
    legal 3-colourable input.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    classes: tuple[int, ...]
    _adj: list[int] = field(init=False, repr=False)

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("need at least three vertices")
        if len(self.classes) != self.n:
            raise ValueError("classes must assign every vertex")
        if any(c not in (0, 1, 2) for c in self.classes):
            raise ValueError("witness classes must be 0, 1, or 2")
        seen = set()
        adj = [0] * self.n
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range")
            if u >= v:
                raise ValueError(f"edge ({u},{v}) must be ordered u < v")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u},{v})")
            if self.classes[u] == self.classes[v]:
                raise ValueError(f"edge ({u},{v}) joins one witness class")
            seen.add((u, v))
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self._adj = adj


def generate_3colorable(stream: RngStream, n: int, edge_prob: float) -> ColorableGraph:
    """Random dense instance: classes v mod 3, cross-class edges kept iid.

    Every unordered cross-class pair becomes an edge with probability
    edge_prob, examined in lexicographic order.
    """
    if n < 3:
        raise ValueError("need at least three vertices")
    if not 0.0 <= edge_prob <= 1.0:
        raise ValueError(f"edge_prob must lie in [0, 1], got {edge_prob!r}")
    classes = tuple(v % 3 for v in range(n))
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if classes[u] != classes[v] and stream.next_bernoulli(edge_prob):
                edges.append((u, v))
    return ColorableGraph(n=n, edges=tuple(edges), classes=classes)


def random_colouring(stream: RngStream, n: int) -> bytearray:
    return bytearray(1 if stream.next_bernoulli(0.5) else 0 for _ in range(n))


def seek_monochromatic_triangle(
    graph: ColorableGraph, colouring
) -> tuple[int, int, int] | None:
    """Lexicographically smallest same-coloured triangle, or None.

    Scans candidate minimum vertices in order; within one, candidate
    middle vertices in order; the third vertex is the lowest set bit of an
    adjacency intersection.  Restricting partners to higher indices makes
    the first hit the lexicographic minimum.
    """
    n = graph.n
    if len(colouring) != n:
        raise ValueError("colouring length must equal vertex count")
    masks = [0, 0]
    for v in range(n):
        masks[1 if colouring[v] else 0] |= 1 << v
    adj = graph._adj
    for u in range(n - 2):
        same = masks[1 if colouring[u] else 0]
        cand = adj[u] & same & ~((1 << (u + 1)) - 1)
        au = adj[u]
        while cand:
            low = cand & -cand
            cand ^= low
            v = low.bit_length() - 1
            common = au & adj[v] & same & ~((1 << (v + 1)) - 1)
            if common:
                w_low = common & -common
                return (u, v, w_low.bit_length() - 1)
    return None


PotentialSpec = tuple[tuple[int, int], tuple[int, int]]


@dataclass
class RecolourResult:
    colouring: bytearray
    iterations: int
    censored: bool
    trajectory: Trajectory | None


def run_recolour(
    graph: ColorableGraph,
    init,
    stream: RngStream,
    cap: int,
    potential_spec: PotentialSpec | None = None,
) -> RecolourResult:
    """Repair ``init`` until triangle-free (among monochromatic ones) or capped.

    potential_spec = ((class_a, class_b), (colour_a, colour_b)) tracks
    Y_t = #{v in class_a : colour(v) = colour_a}
        + #{v in class_b : colour(v) = colour_b}
    and records its trajectory.
    """
    if cap < 0:
        raise ValueError("cap must be nonnegative")
    n = graph.n
    colouring = bytearray(init)
    if len(colouring) != n:
        raise ValueError("init length must equal vertex count")

    record = potential_spec is not None
    if record:
        (ca, cb), (col_a, col_b) = potential_spec
        if ca == cb or not {ca, cb} <= {0, 1, 2}:
            raise ValueError("potential_spec needs two distinct witness classes")
        if {col_a, col_b} != {0, 1}:
            raise ValueError("potential_spec needs the two colours in some order")
        pairing = {ca: col_a, cb: col_b}
        y = sum(
            1
            for v in range(n)
            if graph.classes[v] in pairing and colouring[v] == pairing[graph.classes[v]]
        )
        values: list[float] = [y]

    t = 0
    censored = False
    while True:
        tri = seek_monochromatic_triangle(graph, colouring)
        if tri is None:
            break
        if t >= cap:
            censored = True
            break
        v = tri[stream.next_index(3)]
        colouring[v] ^= 1
        t += 1
        if record:
            cls = graph.classes[v]
            if cls in pairing:
                y += 1 if colouring[v] == pairing[cls] else -1
                values.append(y)
            else:
                values.append(y)

    traj = None
    if record:
        traj = Trajectory(values=values, censored=censored, cap=cap if censored else None)
    return RecolourResult(
        colouring=colouring, iterations=t, censored=censored, trajectory=traj
    )


# ---------------------------------------------------------------------------
# Text format: first line the vertex count, then one "u v" line per edge,
# then a "class c0 c1 ... c_{n-1}" line carrying the witness partition.


def emit_graph(graph: ColorableGraph) -> str:
    lines = [str(graph.n)]
    lines.extend(f"{u} {v}" for u, v in graph.edges)
    lines.append("class " + " ".join(str(c) for c in graph.classes))
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> ColorableGraph:
    n = None
    edges: list[tuple[int, int]] = []
    classes: tuple[int, ...] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if n is None:
            try:
                n = int(line)
            except ValueError:
                raise FormatError(f"first line must be the vertex count, got {line!r}", lineno) from None
            continue
        if line.startswith("class"):
            if classes is not None:
                raise FormatError("duplicate class line", lineno)
            toks = line.split()[1:]
            try:
                classes = tuple(int(tok) for tok in toks)
            except ValueError:
                raise FormatError("class line must list integers", lineno) from None
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"edge line must be 'u v', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(f"edge line must be 'u v', got {line!r}", lineno) from None
        edges.append((u, v))
    if n is None:
        raise FormatError("empty graph file")
    if classes is None:
        raise FormatError("missing class line")
    try:
        return ColorableGraph(n=n, edges=tuple(edges), classes=classes)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
