"""Two-direction geometry: bolts, orbits, and alternating measures.

With two directions ``a1, a2``, points sharing an ``a1``-level form the
clique family ``E1`` and likewise ``E2``.  A *bolt* is an ordered point
sequence whose consecutive links strictly alternate between the two
families; it is *closed* when it has even length and the wrap-around link
continues the alternation.  Closed bolts carry alternating +/-1 measures
that annihilate both directions.

Every point's (level-1, level-2) pair is an edge of a bipartite graph on
level nodes, and a closed bolt is exactly a simple cycle there, so detection
is a linear-time cycle search rather than a combinatorial enumeration.

For infinite bolts, truncations carry the normalized alternating measures
``mu_n`` (mass 1/n per point, signs alternating).  A finite probe cannot
decide a limit statement, so :func:`weak_star_probe` reports empirical decay
plus the provable telescoping bound and labels the favourable outcome
"consistent-with-zero", never "converges".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .measures import Direction, DiscreteMeasure, Point
from .rationals import RationalLike, rationalize


class BoltGenerationError(Exception):
    """A generator rule failed to extend its bolt; carries the violating step."""

    def __init__(self, step: int, message: str):
        super().__init__(f"step {step}: {message}")
        self.step = step


@dataclass(frozen=True)
class Bolt:
    """An alternating point sequence; ``first_link`` is 1 or 2, naming the
    family of the link from the first point to the second."""

    points: tuple[Point, ...]
    first_link: int
    closed: bool = False
    indices: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.first_link not in (1, 2):
            raise ValueError("first_link must be 1 or 2")
        if self.closed and len(self.points) % 2 != 0:
            raise ValueError("closed bolts have even length")

    def __len__(self) -> int:
        return len(self.points)

    def link_family(self, j: int) -> int:
        """Family of the link from point j to point j+1 (0-based)."""
        return self.first_link if j % 2 == 0 else 3 - self.first_link


def verify_bolt(bolt: Bolt, a1: Direction, a2: Direction) -> bool:
    """Check consecutive distinctness and strict alternation (wrap included if closed)."""
    pts = bolt.points
    m = len(pts)
    if m == 0:
        return False
    pairs = [(j, (j + 1) % m) for j in range(m if bolt.closed else m - 1)]
    for j, jn in pairs:
        p, q = pts[j], pts[jn]
        if p.coords == q.coords:
            return False
        fam = bolt.link_family(j)
        a = a1 if fam == 1 else a2
        other = a2 if fam == 1 else a1
        if a.dot(p) != a.dot(q):
            return False
        if other.dot(p) == other.dot(q):
            return False  # would sit in both families at once
    return True


@dataclass(frozen=True)
class BoltGraph:
    """Exact level-sharing structure of a point set under two directions."""

    points: tuple[Point, ...]
    a1: Direction
    a2: Direction
    levels1: tuple[Fraction, ...]
    groups1: tuple[tuple[int, ...], ...]
    levels2: tuple[Fraction, ...]
    groups2: tuple[tuple[int, ...], ...]

    def edge_pairs(self, family: int) -> set[frozenset[int]]:
        groups = self.groups1 if family == 1 else self.groups2
        pairs: set[frozenset[int]] = set()
        for members in groups:
            for i, a in enumerate(members):
                for b in members[i + 1 :]:
                    pairs.add(frozenset((a, b)))
        return pairs


def _parallel(a: Direction, b: Direction) -> bool:
    d = a.dim
    for i in range(d):
        for j in range(i + 1, d):
            if a.coords[i] * b.coords[j] != a.coords[j] * b.coords[i]:
                return False
    return True


def build_bolt_graph(
    points: Sequence[Point], a1: Direction, a2: Direction
) -> BoltGraph:
    """Group points by exact level along both directions.

    Rejects parallel directions, and rejects point pairs sharing both levels
    (such a pair belongs to both families, which breaks alternation).
    """
    pts = tuple(points)
    if not pts:
        raise ValueError("need at least one point")
    if _parallel(a1, a2):
        raise ValueError("directions must not be parallel")
    if len({p.coords for p in pts}) != len(pts):
        raise ValueError("points must be pairwise distinct")
    seen: dict[tuple[Fraction, Fraction], int] = {}
    for j, p in enumerate(pts):
        key = (a1.dot(p), a2.dot(p))
        if key in seen:
            raise ValueError(
                f"points {seen[key]} and {j} share both projection levels; "
                "alternating traversal is ambiguous"
            )
        seen[key] = j

    def grouped(a: Direction):
        by_level: dict[Fraction, list[int]] = {}
        for j, p in enumerate(pts):
            by_level.setdefault(a.dot(p), []).append(j)
        ordered = sorted(by_level.items())
        return (
            tuple(lv for lv, _ in ordered),
            tuple(tuple(m) for _, m in ordered),
        )

    levels1, groups1 = grouped(a1)
    levels2, groups2 = grouped(a2)
    return BoltGraph(pts, a1, a2, levels1, groups1, levels2, groups2)


def find_closed_bolt(graph: BoltGraph) -> Bolt | None:
    """Search for a closed bolt via cycle detection on the level graph.

    Nodes are the distinct levels of either direction and each point is the
    edge joining its two levels; a simple cycle there is precisely a closed
    bolt (even length, alternation forced by bipartiteness).
    """
    level1_of = {}
    level2_of = {}
    for gi, members in enumerate(graph.groups1):
        for j in members:
            level1_of[j] = gi
    for gi, members in enumerate(graph.groups2):
        for j in members:
            level2_of[j] = gi
    adj: dict[tuple[str, int], list[tuple[tuple[str, int], int]]] = {}
    for j in range(len(graph.points)):
        nu = ("u", level1_of[j])
        nv = ("v", level2_of[j])
        adj.setdefault(nu, []).append((nv, j))
        adj.setdefault(nv, []).append((nu, j))

    visited: set[tuple[str, int]] = set()
    parent: dict[tuple[str, int], tuple[tuple[str, int] | None, int | None]] = {}
    for root in adj:
        if root in visited:
            continue
        visited.add(root)
        parent[root] = (None, None)
        stack = [(root, iter(adj[root]))]
        while stack:
            node, it = stack[-1]
            advanced = False
            for nb, edge in it:
                if nb not in visited:
                    visited.add(nb)
                    parent[nb] = (node, edge)
                    stack.append((nb, iter(adj[nb])))
                    advanced = True
                    break
                if parent[node][1] != edge:
                    return _bolt_from_cycle(graph, parent, node, nb, edge)
            if not advanced:
                stack.pop()
    return None


def _bolt_from_cycle(graph, parent, lower, upper, closing_edge) -> Bolt:
    path_edges: list[int] = []
    node = lower
    while node != upper:
        pnode, pedge = parent[node]
        path_edges.append(pedge)
        node = pnode
    cycle = list(reversed(path_edges)) + [closing_edge]
    points = tuple(graph.points[j] for j in cycle)
    first = 1 if graph.a1.dot(points[0]) == graph.a1.dot(points[1]) else 2
    bolt = Bolt(points, first, closed=True, indices=tuple(cycle))
    assert verify_bolt(bolt, graph.a1, graph.a2)
    return bolt


def orbits(graph: BoltGraph) -> tuple[tuple[int, ...], ...]:
    """Connected components under level sharing (union of both families)."""
    n = len(graph.points)
    root = list(range(n))

    def find(a: int) -> int:
        while root[a] != a:
            root[a] = root[root[a]]
            a = root[a]
        return a

    for groups in (graph.groups1, graph.groups2):
        for members in groups:
            base = find(members[0])
            for j in members[1:]:
                root[find(j)] = base
    comps: dict[int, list[int]] = {}
    for j in range(n):
        comps.setdefault(find(j), []).append(j)
    return tuple(tuple(sorted(c)) for c in sorted(comps.values()))


def bolt_measure(bolt: Bolt, n: int) -> DiscreteMeasure:
    """The normalized alternating measure on the first ``n`` bolt points:
    weight ``(-1)^(j+1)/n`` at the j-th point (1-based)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > len(bolt.points):
        raise ValueError(f"bolt has only {len(bolt.points)} points, asked for {n}")
    sign = 1
    atoms = []
    for p in bolt.points[:n]:
        atoms.append((p, Fraction(sign, n)))
        sign = -sign
    return DiscreteMeasure.from_atoms(atoms)


@dataclass(frozen=True)
class BoltGenerator:
    """Rule-driven infinite bolt: a start point and a next-point map.

    ``first_link`` names the family of the first step; subsequent steps must
    alternate, and :meth:`generate` checks that exactly (raising
    :class:`BoltGenerationError` on the violating step).
    """

    name: str
    initial: Point
    rule: Callable[[Point], Point]
    a1: Direction
    a2: Direction
    first_link: int = 1

    def generate(self, n: int) -> Bolt:
        if n < 1:
            raise ValueError("n must be positive")
        pts = [self.initial]
        seen = {self.initial.coords}
        current = self.initial
        for step in range(1, n):
            nxt = self.rule(current)
            if nxt.coords == current.coords:
                raise BoltGenerationError(step, "rule repeated the previous point")
            fam = self.first_link if (step - 1) % 2 == 0 else 3 - self.first_link
            along = self.a1 if fam == 1 else self.a2
            across = self.a2 if fam == 1 else self.a1
            if along.dot(nxt) != along.dot(current):
                raise BoltGenerationError(
                    step, f"step is not perpendicular to direction {fam}"
                )
            if across.dot(nxt) == across.dot(current):
                raise BoltGenerationError(step, "step shares both levels")
            if nxt.coords in seen:
                raise BoltGenerationError(step, "rule revisited an earlier point")
            seen.add(nxt.coords)
            pts.append(nxt)
            current = nxt
        return Bolt(tuple(pts), self.first_link)


def _inward_spiral_rule(p: Point) -> Point:
    x, y = p.coords
    if x == 0:
        if y == 0:
            return Point.of(1, -1)
        return Point((3 * y / 4, y / 4))
    return Point((Fraction(0), y - x))


def paper_orbit_generator() -> BoltGenerator:
    """The built-in single-orbit infinite bolt for directions (1,1), (1,-1).

    Starting at the origin, each step slides along the current level line of
    the alternating direction; from the third point on the sequence contracts
    by -1/2 every two steps, so the whole orbit accumulates back at the
    start and is topologically closed.
    """
    return BoltGenerator(
        name="paper-orbit",
        initial=Point.of(0, 0),
        rule=_inward_spiral_rule,
        a1=Direction.of(1, 1),
        a2=Direction.of(1, -1),
        first_link=1,
    )


@dataclass(frozen=True)
class PointTest:
    """A plain test function evaluated at bolt points."""

    name: str
    func: Callable[[Point], RationalLike]


@dataclass(frozen=True)
class RidgeTest:
    """A test of the form g1(a1 . x) + g2(a2 . x), given by level profiles.

    Profiles must return rationals so the telescoping bound can be checked
    exactly.
    """

    name: str
    profile1: Callable[[Fraction], RationalLike]
    profile2: Callable[[Fraction], RationalLike]


ProbeTestLike = PointTest | RidgeTest


@dataclass
class ProbeReport:
    """Decay table and verdict of a finite weak-star probe."""

    n_max: int
    rows: list[tuple[int, str, float]]
    final_values: dict[str, float]
    ridge_bounds_ok: bool
    threshold: float
    verdict: str
    bolt: Bolt


def weak_star_probe(
    gen: BoltGenerator,
    tests: Sequence[ProbeTestLike],
    n_max: int,
    threshold: RationalLike = Fraction(1, 100),
) -> ProbeReport:
    """Tabulate |integral of f d(mu_n)| for n = 1..n_max along a generated bolt.

    For ridge tests the alternating sums telescope within each level pair, so
    |integral| <= (2/n)(sup|g1| + sup|g2|) must hold exactly (sup over the
    realized levels); the probe verifies that for every n.  The verdict is
    "consistent-with-zero" iff every ridge bound holds and every plain test
    ends below the threshold at n = n_max.
    """
    if not tests:
        raise ValueError("need at least one test")
    thr = rationalize(threshold)
    bolt = gen.generate(n_max)
    u_levels = [gen.a1.dot(p) for p in bolt.points]
    v_levels = [gen.a2.dot(p) for p in bolt.points]

    rows: list[tuple[int, str, float]] = []
    final_values: dict[str, float] = {}
    ridge_bounds_ok = True
    pointwise_ok = True

    per_test_values: list[list[Fraction | float]] = []
    for test in tests:
        if isinstance(test, RidgeTest):
            g1 = {lv: rationalize(test.profile1(lv)) for lv in set(u_levels)}
            g2 = {lv: rationalize(test.profile2(lv)) for lv in set(v_levels)}
            bound = 2 * (
                max(abs(v) for v in g1.values()) + max(abs(v) for v in g2.values())
            )
            partial = Fraction(0)
            values: list[Fraction | float] = []
            sign = 1
            for j in range(n_max):
                partial += sign * (g1[u_levels[j]] + g2[v_levels[j]])
                sign = -sign
                values.append(abs(partial) / (j + 1))
                if abs(partial) > bound:
                    ridge_bounds_ok = False
            per_test_values.append(values)
        else:
            partial = Fraction(0)
            fpartial = 0.0
            exact = True
            values = []
            sign = 1
            for j in range(n_max):
                val = test.func(bolt.points[j])
                if exact and not isinstance(val, float):
                    partial += sign * rationalize(val)
                    values.append(abs(partial) / (j + 1))
                else:
                    if exact:
                        fpartial = float(partial)
                        exact = False
                    fpartial += sign * float(val)
                    values.append(abs(fpartial) / (j + 1))
                sign = -sign
            final = values[-1]
            passed = final <= float(thr) if isinstance(final, float) else final <= thr
            if not passed:
                pointwise_ok = False
            per_test_values.append(values)

    for n in range(1, n_max + 1):
        for test, values in zip(tests, per_test_values):
            rows.append((n, test.name, float(values[n - 1])))
    for test, values in zip(tests, per_test_values):
        final_values[test.name] = float(values[-1])

    verdict = (
        "consistent-with-zero" if ridge_bounds_ok and pointwise_ok else "inconclusive"
    )
    return ProbeReport(
        n_max=n_max,
        rows=rows,
        final_values=final_values,
        ridge_bounds_ok=ridge_bounds_ok,
        threshold=float(thr),
        verdict=verdict,
        bolt=bolt,
    )
