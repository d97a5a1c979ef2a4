"""Game graphs, validation, generators and JSON I/O.

A game is a directed graph with two absorbing leaves: the target ``t`` that
Player 1 wants to reach and the sink ``s`` from which ``t`` is unreachable.
Every other vertex must be able to reach both leaves.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from pathlib import Path
from typing import Iterable, Sequence


class InvalidGameError(ValueError):
    """Raised when a game violates the structural assumptions."""

    def __init__(self, violations: Sequence["Violation"]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class NotADagError(ValueError):
    """Raised by DAG-only operations on a game with a cycle."""


@dataclass(frozen=True)
class Violation:
    vertex: int | None
    rule: str

    def __str__(self) -> str:
        where = "game" if self.vertex is None else f"vertex {self.vertex}"
        return f"{where}: {self.rule}"


@dataclass(frozen=True)
class Configuration:
    vertex: int
    b1: int
    b2: int


@dataclass(frozen=True, eq=False)
class Game:
    vertex_names: tuple[str, ...]
    edges: tuple[tuple[int, ...], ...]
    target: int
    sink: int
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertex_names", tuple(self.vertex_names))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if len(self.edges) != len(self.vertex_names):
            raise ValueError("need one adjacency list per vertex")
        object.__setattr__(
            self, "_index", {name: i for i, name in enumerate(self.vertex_names)}
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Game):
            return NotImplemented
        return (
            self.vertex_names == other.vertex_names
            and self.edges == other.edges
            and self.target == other.target
            and self.sink == other.sink
        )

    def __hash__(self) -> int:
        return hash((self.vertex_names, self.edges, self.target, self.sink))

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_names)

    @property
    def n_edges(self) -> int:
        return sum(len(e) for e in self.edges)

    def successors(self, v: int) -> tuple[int, ...]:
        return self.edges[v]

    def interior(self) -> list[int]:
        return [v for v in range(self.n_vertices) if v not in (self.target, self.sink)]

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"no vertex named {name!r}") from None

    def name(self, v: int) -> str:
        return self.vertex_names[v]

    @property
    def root(self) -> int | None:
        """The unique interior vertex without incoming edges, if there is one."""
        has_pred = {u for succ in self.edges for u in succ}
        roots = [v for v in self.interior() if v not in has_pred]
        return roots[0] if len(roots) == 1 else None

    def edge_list(self) -> list[tuple[int, int]]:
        return [(v, u) for v, succ in enumerate(self.edges) for u in succ]


def _reaches(edges: Sequence[Sequence[int]], goal: int) -> set[int]:
    """Vertices with a path to ``goal`` (including ``goal``)."""
    preds: list[list[int]] = [[] for _ in edges]
    for v, succ in enumerate(edges):
        for u in succ:
            preds[u].append(v)
    seen = {goal}
    queue = deque([goal])
    while queue:
        u = queue.popleft()
        for v in preds[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def validate_game(g: Game) -> list[Violation]:
    """Return every violated structural rule; an empty list means the game is valid."""
    n = g.n_vertices
    out: list[Violation] = []
    for leaf, label in ((g.target, "target"), (g.sink, "sink")):
        if not 0 <= leaf < n:
            out.append(Violation(None, f"{label} index {leaf} out of range"))
    if out:
        return out
    for v, succ in enumerate(g.edges):
        for u in succ:
            if not 0 <= u < n:
                out.append(Violation(v, f"edge to out-of-range vertex {u}"))
    if out:
        return out
    if g.target == g.sink:
        out.append(Violation(g.target, "target and sink coincide"))
    if g.edges[g.target]:
        out.append(Violation(g.target, "target has outgoing edges"))
    if g.edges[g.sink]:
        out.append(Violation(g.sink, "sink has outgoing edges"))
    to_target = _reaches(g.edges, g.target)
    to_sink = _reaches(g.edges, g.sink)
    if g.sink in to_target and g.target != g.sink:
        out.append(Violation(g.sink, "sink has a path to target"))
    for v in g.interior():
        if not g.edges[v]:
            out.append(Violation(v, "no outgoing edge"))
            continue
        if v not in to_target:
            out.append(Violation(v, "no path to target"))
        if v not in to_sink:
            out.append(Violation(v, "no path to sink"))
    return out


def require_valid(g: Game) -> None:
    violations = validate_game(g)
    if violations:
        raise InvalidGameError(violations)


def _build(names: list[str], edges: list[list[int]], target: int, sink: int) -> Game:
    return Game(tuple(names), tuple(tuple(e) for e in edges), target, sink)


def gen_race(a: int, b: int) -> Game:
    """race(a, b): Player 1 must win ``a`` biddings before Player 2 wins ``b``.

    Vertex ``v_{x,y}`` means x more wins are needed by Player 1 and y by Player 2;
    the root is ``v_{a,b}``.
    """
    if a < 1 or b < 1:
        raise ValueError(f"race needs a, b >= 1, got ({a}, {b})")
    names = ["t", "s"]
    cell = {}
    for x in range(1, a + 1):
        for y in range(1, b + 1):
            cell[x, y] = len(names)
            names.append(f"v_{{{x},{y}}}")
    edges: list[list[int]] = [[] for _ in names]
    for (x, y), v in cell.items():
        edges[v].append(0 if x == 1 else cell[x - 1, y])
        edges[v].append(1 if y == 1 else cell[x, y - 1])
    # root first after the leaves keeps CSV columns readable
    order = [0, 1, cell[a, b]] + [v for v in cell.values() if v != cell[a, b]]
    return _relabel(names, edges, order, target=0, sink=1)


def _relabel(names, edges, order, target, sink) -> Game:
    pos = {old: new for new, old in enumerate(order)}
    new_names = [names[old] for old in order]
    new_edges = [[pos[u] for u in edges[old]] for old in order]
    return _build(new_names, new_edges, pos[target], pos[sink])


def gen_tow(n: int) -> Game:
    """Tug of war on a chain ``s - v_0 - ... - v_{n-1} - t``.

    ``v_{n-k}`` is the vertex k steps away from the target.
    """
    if n < 1:
        raise ValueError(f"tug of war needs n >= 1, got {n}")
    names = ["t", "s"] + [f"v_{i}" for i in range(n)]
    edges: list[list[int]] = [[], []]
    for i in range(n):
        succ = [1 if i == 0 else 2 + i - 1]
        succ.append(0 if i == n - 1 else 2 + i + 1)
        edges.append(succ)
    return _build(names, edges, 0, 1)


def tow_vertex(g: Game, k: int) -> int:
    """Index of the vertex ``k`` steps from the target in a ``gen_tow`` game."""
    n = g.n_vertices - 2
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}")
    return g.index(f"v_{n - k}")


def gen_choice(children: Sequence[Game]) -> Game:
    """A fresh ``root`` with one edge to the root of each child game.

    Children share the target and the sink; child ``i``'s vertices are
    renamed ``c<i>.<name>``.
    """
    if not children:
        raise ValueError("choice needs at least one child game")
    names = ["t", "s", "root"]
    edges: list[list[int]] = [[], [], []]
    for i, child in enumerate(children):
        require_valid(child)
        croot = child.root
        if croot is None:
            raise ValueError(f"child {i} has no unique root vertex")
        mapping = {child.target: 0, child.sink: 1}
        for v in child.interior():
            mapping[v] = len(names)
            names.append(f"c{i}.{child.name(v)}")
            edges.append([])
        for v in child.interior():
            edges[mapping[v]] = [mapping[u] for u in child.successors(v)]
        edges[2].append(mapping[croot])
    return _build(names, edges, 0, 1)


def gen_pipe_violation() -> Game:
    """Six-vertex tug of war 0..5 (0 = sink, 5 = target) with an extra edge 1 -> 3."""
    edges = [
        [],
        [0, 2, 3],
        [1, 3],
        [2, 4],
        [3, 5],
        [],
    ]
    return _build([str(i) for i in range(6)], edges, 5, 0)


def random_game(
    rng: random.Random,
    n_interior: int,
    *,
    dag: bool = False,
    edge_prob: float = 0.45,
    max_tries: int = 1000,
) -> Game:
    """Sample a valid game with ``n_interior`` interior vertices by rejection."""
    if n_interior < 1:
        raise ValueError("need at least one interior vertex")
    n = n_interior + 2
    for _ in range(max_tries):
        edges: list[list[int]] = [[], []]
        for i in range(n_interior):
            v = i + 2
            cands = [0, 1] + [
                u for u in range(2, n) if u != v and (not dag or u > v)
            ]
            succ = [u for u in cands if rng.random() < edge_prob]
            if not succ:
                succ = [rng.choice(cands)]
            edges.append(sorted(succ))
        names = ["t", "s"] + [f"q{i}" for i in range(n_interior)]
        g = _build(names, edges, 0, 1)
        if not validate_game(g):
            return g
    raise RuntimeError("could not sample a valid game")


def random_choice_tree(rng: random.Random, depth: int, max_side: int = 4) -> Game:
    """A choice tree whose leaves are random race games."""
    if depth <= 0 or rng.random() < 0.3:
        return gen_race(rng.randint(1, max_side), rng.randint(1, max_side))
    k = rng.randint(1, 3)
    return gen_choice([random_choice_tree(rng, depth - 1, max_side) for _ in range(k)])


def topological_order(g: Game) -> list[int]:
    """Reverse topological order (successors before predecessors), leaves first.

    Raises NotADagError on cyclic games.
    """
    sorter = TopologicalSorter({v: g.successors(v) for v in range(g.n_vertices)})
    try:
        order = list(sorter.static_order())
    except CycleError as exc:
        raise NotADagError(f"game has a cycle through {exc.args[1]}") from None
    rest = [v for v in order if v not in (g.target, g.sink)]
    return [g.target, g.sink] + rest


def is_dag(g: Game) -> bool:
    try:
        topological_order(g)
    except NotADagError:
        return False
    return True


def max_path_lengths(g: Game) -> list[int]:
    """Longest path length from every vertex to a leaf."""
    length = [0] * g.n_vertices
    for v in topological_order(g):
        succ = g.successors(v)
        if succ:
            length[v] = 1 + max(length[u] for u in succ)
    return length


def max_path(g: Game, v: int) -> int:
    return max_path_lengths(g)[v]


def longest_simple_path_lengths(g: Game, limit: int = 16) -> list[int]:
    """Longest simple path from every vertex to a leaf, by exhaustive search.

    Equals ``max_path_lengths`` on DAGs.  Exponential in general, so games
    with more than ``limit`` vertices are rejected.
    """
    if g.n_vertices > limit:
        raise ValueError(f"longest simple paths limited to {limit} vertices")
    leaves = {g.target, g.sink}

    def dfs(v: int, seen: int) -> int:
        best = -1
        for u in g.successors(v):
            if seen >> u & 1:
                continue
            if u in leaves:
                best = max(best, 1)
            else:
                sub = dfs(u, seen | 1 << u)
                if sub >= 0:
                    best = max(best, sub + 1)
        return best

    return [0 if v in leaves else dfs(v, 1 << v) for v in range(g.n_vertices)]


# -- JSON ------------------------------------------------------------------


def game_to_dict(g: Game) -> dict:
    return {
        "vertices": list(g.vertex_names),
        "edges": [[v, u] for v, u in g.edge_list()],
        "target": g.target,
        "sink": g.sink,
    }


def game_from_dict(data: dict) -> Game:
    try:
        names = [str(x) for x in data["vertices"]]
        pairs = data["edges"]
        target = int(data["target"])
        sink = int(data["sink"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed game description: {exc}") from None
    edges: list[list[int]] = [[] for _ in names]
    for pair in pairs:
        v, u = int(pair[0]), int(pair[1])
        if not 0 <= v < len(names):
            raise InvalidGameError([Violation(None, f"edge from out-of-range vertex {v}")])
        edges[v].append(u)
    g = _build(names, edges, target, sink)
    require_valid(g)
    return g


def dump_game(g: Game, path: str | Path | None = None) -> str:
    text = json.dumps(game_to_dict(g), indent=1)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def load_game(path: str | Path) -> Game:
    return game_from_dict(json.loads(Path(path).read_text()))


# -- generator specs ---------------------------------------------------------


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced parentheses in {text!r}")
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ValueError(f"unbalanced parentheses in {text!r}")
    parts.append("".join(cur))
    return parts


def _wrapped(text: str) -> bool:
    """True if the whole string sits inside one pair of parentheses."""
    if not (text.startswith("(") and text.endswith(")")):
        return False
    depth = 0
    for i, ch in enumerate(text):
        depth += (ch == "(") - (ch == ")")
        if depth == 0 and i < len(text) - 1:
            return False
    return depth == 0


def parse_spec(spec: str) -> Game:
    """Build a game from ``race:a:b | tow:n | choice:<spec>,<spec>... | pipe-violation``.

    Nested choices are written with parentheses, e.g.
    ``choice:(choice:race:1:1,race:2:2),race:3:3``.
    """
    spec = spec.strip()
    if _wrapped(spec):
        return parse_spec(spec[1:-1])
    kind, _, rest = spec.partition(":")
    try:
        if kind == "race":
            a, b = rest.split(":")
            return gen_race(int(a), int(b))
        if kind == "tow":
            return gen_tow(int(rest))
        if kind == "choice":
            return gen_choice([parse_spec(p) for p in _split_top(rest) if p.strip()])
        if kind == "pipe-violation" and not rest:
            return gen_pipe_violation()
    except ValueError as exc:
        raise ValueError(f"bad game spec {spec!r}: {exc}") from None
    raise ValueError(f"bad game spec {spec!r}")


def vertex_ids(g: Game, names: Iterable[str] | None) -> list[int]:
    if names is None:
        return list(range(g.n_vertices))
    return [g.index(n) for n in names]
