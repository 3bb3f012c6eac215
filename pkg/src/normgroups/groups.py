"""Finite permutation groups given by generators.

Groups are stored as generator lists and materialized fully on demand:
every group handled here has at most a few hundred thousand elements,
so a deterministic breadth-first closure (identity first, generators
applied in listed order) is both simple and fast, and the resulting
element order anchors every "first witness" the rest of the package
reports.

The element matrix (one row per element, one column per point) is the
workhorse for the vectorized callers in the normalizing machinery.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Literal, Sequence

import numpy as np

from .transform import ParseError, Permutation, Transformation

OrbitAction = Literal["points", "sets", "right", "conjugation"]


class PermutationGroup:
    """A permutation group on the points 0..degree-1."""

    def __init__(
        self,
        generators: Iterable[Permutation],
        *,
        degree: int | None = None,
        label: str | None = None,
    ):
        gens = tuple(generators)
        for g in gens:
            if not isinstance(g, Permutation):
                raise TypeError(f"generator {g!r} is not a Permutation")
        if gens:
            n = gens[0].degree
            for g in gens:
                if g.degree != n:
                    raise ValueError(f"degree mismatch: {g.degree} vs {n}")
            if degree is not None and degree != n:
                raise ValueError(f"degree mismatch: {degree} vs generator degree {n}")
        elif degree is None:
            raise ValueError("a group without generators needs an explicit degree")
        else:
            n = degree
        if n < 1:
            raise ValueError("degree must be at least 1")
        self.degree = n
        self.generators = gens
        self.label = label if label is not None else _default_label(gens)
        self._elements: tuple[Permutation, ...] | None = None
        self._matrix: np.ndarray | None = None
        self._inverse_matrix: np.ndarray | None = None

    # -- element enumeration -------------------------------------------------

    def elements(self) -> tuple[Permutation, ...]:
        """All elements in deterministic breadth-first discovery order."""
        if self._elements is None:
            identity = tuple(range(self.degree))
            seen = {identity}
            order: list[tuple[int, ...]] = [identity]
            queue = deque([identity])
            gens = [g.images for g in self.generators]
            while queue:
                cur = queue.popleft()
                for g in gens:
                    nxt = tuple(g[v] for v in cur)
                    if nxt not in seen:
                        seen.add(nxt)
                        order.append(nxt)
                        queue.append(nxt)
            self._elements = tuple(Permutation(p) for p in order)
        return self._elements

    def order(self) -> int:
        return len(self.elements())

    def element_matrix(self) -> np.ndarray:
        """(order, degree) int8 matrix of images, rows in discovery order."""
        if self._matrix is None:
            self._matrix = np.array([p.images for p in self.elements()], dtype=np.int8)
        return self._matrix

    def inverse_matrix(self) -> np.ndarray:
        """Row i is the inverse of element_matrix row i."""
        if self._inverse_matrix is None:
            m = self.element_matrix()
            inv = np.empty_like(m)
            rows = np.arange(m.shape[0])[:, None]
            inv[rows, m.astype(np.int64)] = np.arange(self.degree, dtype=np.int8)
            self._inverse_matrix = inv
        return self._inverse_matrix

    def __contains__(self, p: Transformation) -> bool:
        return isinstance(p, Permutation) and p.degree == self.degree and p in set(self.elements())

    def __len__(self) -> int:
        return self.order()

    def conjugated_by(self, p: Permutation, label: str | None = None) -> "PermutationGroup":
        """The relabeled copy p^-1 * G * p."""
        return PermutationGroup(
            [g.conjugated_by(p) for g in self.generators],
            degree=self.degree,
            label=label or f"{self.label}^{p.cycle_string()}",
        )

    def __repr__(self) -> str:
        return f"PermutationGroup(label={self.label!r}, degree={self.degree})"

    # -- orbits ---------------------------------------------------------------

    def orbit(self, seed, action: OrbitAction = "points") -> "OrbitRecord":
        """Breadth-first orbit of seed under the chosen action.

        Actions: "points" (x -> image of x), "sets" (setwise image),
        "right" (t -> t * g), "conjugation" (t -> g^-1 t g).  Members are
        recorded in discovery order with Schreier words over generator
        indices, replayable left to right.
        """
        act = _ACTIONS.get(action)
        if act is None:
            raise ValueError(f"unknown action {action!r}")
        seed = _canonical_seed(seed, action, self.degree)
        members = [seed]
        index = {seed: 0}
        parents = [-1]
        via = [-1]
        queue = deque([0])
        while queue:
            i = queue.popleft()
            cur = members[i]
            for k, g in enumerate(self.generators):
                nxt = act(cur, g)
                if nxt not in index:
                    index[nxt] = len(members)
                    members.append(nxt)
                    parents.append(i)
                    via.append(k)
                    queue.append(len(members) - 1)
        return OrbitRecord(self, seed, action, members, index, parents, via)

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree

    def orbits_on_points(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for p in range(self.degree):
            if p not in seen:
                orb = self.orbit(p).members
                seen.update(orb)
                out.append(tuple(sorted(orb)))
        return out

    # -- primitivity ----------------------------------------------------------

    def is_primitive(self) -> bool:
        """True iff transitive with no nontrivial invariant partition.

        Minimal-block construction: for each point b != 0, glue 0 with b
        and propagate closure under the generators via union-find; the
        group is primitive iff every such congruence is universal.
        Degrees 1 and 2 admit no nontrivial partition at all.
        """
        if not self.is_transitive():
            return False
        n = self.degree
        if n <= 2:
            return True
        return all(self._minimal_congruence_is_universal(b) for b in range(1, n))

    def _minimal_congruence_is_universal(self, beta: int) -> bool:
        parent = list(range(self.degree))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x: int, y: int) -> bool:
            rx, ry = find(x), find(y)
            if rx == ry:
                return False
            parent[rx] = ry
            return True

        classes = self.degree
        queue = deque()
        if union(0, beta):
            classes -= 1
            queue.append((0, beta))
        while queue:
            x, y = queue.popleft()
            for g in self.generators:
                gx, gy = g.images[x], g.images[y]
                if union(gx, gy):
                    classes -= 1
                    queue.append((gx, gy))
        return classes == 1

    def minimal_block_system(self) -> list[tuple[int, ...]] | None:
        """A nontrivial invariant partition, or None if primitive.

        Returns the finest congruence gluing 0 with the least point that
        yields a nontrivial one, as sorted blocks.
        """
        if not self.is_transitive():
            raise ValueError("block systems are defined for transitive groups")
        for beta in range(1, self.degree):
            parent = list(range(self.degree))

            def find(x: int) -> int:
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            merged = deque([(0, beta)])
            parent[find(0)] = find(beta)
            while merged:
                x, y = merged.popleft()
                for g in self.generators:
                    gx, gy = g.images[x], g.images[y]
                    rx, ry = find(gx), find(gy)
                    if rx != ry:
                        parent[rx] = ry
                        merged.append((gx, gy))
            blocks: dict[int, list[int]] = {}
            for p in range(self.degree):
                blocks.setdefault(find(p), []).append(p)
            if 1 < len(blocks) < self.degree:
                return sorted(tuple(sorted(b)) for b in blocks.values())
        return None

    # -- set transitivity -----------------------------------------------------

    def is_ij_homogeneous(self, i: int, j: int) -> tuple[bool, tuple[tuple[int, ...], tuple[int, ...]] | None]:
        """Whether every i-set maps into some position inside every j-set.

        True iff for all |I| = i and |J| = j there is g with I*g a subset
        of J.  On failure returns the witness pair (I, J), both 0-based
        sorted tuples, least in lexicographic scan order.
        """
        n = self.degree
        if not 1 <= i <= j <= n:
            raise ValueError(f"need 1 <= i <= j <= degree, got i={i} j={j} n={n}")
        m = self.element_matrix().astype(np.int64)
        all_j = [sum(1 << p for p in J) for J in itertools.combinations(range(n), j)]
        seen: set[int] = set()
        for I in itertools.combinations(range(n), i):
            mask = sum(1 << p for p in I)
            if mask in seen:
                continue
            cols = m[:, I]
            orbit_masks = np.unique(np.bitwise_or.reduce(1 << cols, axis=1))
            seen.update(int(v) for v in orbit_masks)
            for jmask in all_j:
                if not np.any((orbit_masks & ~jmask) == 0):
                    J = tuple(p for p in range(n) if (jmask >> p) & 1)
                    return False, (I, J)
        return True, None

    # -- counting -------------------------------------------------------------

    def average_intersection(self, A: Iterable[int], B: Iterable[int]) -> Fraction:
        """Exact average of |A*g meet B| over the group; needs transitivity."""
        if not self.is_transitive():
            raise ValueError("average intersection requires a transitive group")
        A = sorted(set(A))
        B = sorted(set(B))
        for p in A + B:
            if not 0 <= p < self.degree:
                raise ValueError(f"point {p} outside 0..{self.degree - 1}")
        if not A or not B:
            return Fraction(0)
        m = self.element_matrix()
        cols = m[:, A]
        total = int(np.isin(cols, np.array(B, dtype=np.int8)).sum(dtype=np.int64))
        return Fraction(total, self.order())


@dataclass
class OrbitRecord:
    """An orbit with its discovery order and Schreier words."""

    group: PermutationGroup
    seed: object
    action: OrbitAction
    members: list
    _index: dict = field(repr=False)
    _parents: list[int] = field(repr=False)
    _via: list[int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x) -> bool:
        return _canonical_seed(x, self.action, self.group.degree) in self._index

    def __iter__(self):
        return iter(self.members)

    def word(self, member) -> tuple[int, ...]:
        """Generator indices mapping seed to member, applied left to right."""
        i = self._index[_canonical_seed(member, self.action, self.group.degree)]
        out: list[int] = []
        while self._parents[i] != -1:
            out.append(self._via[i])
            i = self._parents[i]
        return tuple(reversed(out))

    def replay(self, word: Iterable[int]):
        """Apply a generator-index word to the seed."""
        act = _ACTIONS[self.action]
        cur = self.seed
        for k in word:
            cur = act(cur, self.group.generators[k])
        return cur


def _act_points(x: int, g: Permutation) -> int:
    return g.images[x]


def _act_sets(s: tuple[int, ...], g: Permutation) -> tuple[int, ...]:
    return tuple(sorted(g.images[p] for p in s))


def _act_right(t: Transformation, g: Permutation) -> Transformation:
    return t * g


def _act_conjugation(t: Transformation, g: Permutation) -> Transformation:
    return t.conjugated_by(g)


_ACTIONS: dict[str, Callable] = {
    "points": _act_points,
    "sets": _act_sets,
    "right": _act_right,
    "conjugation": _act_conjugation,
}


def _canonical_seed(seed, action: OrbitAction, degree: int):
    if action == "points":
        if not isinstance(seed, int) or not 0 <= seed < degree:
            raise ValueError(f"point seed {seed!r} outside 0..{degree - 1}")
        return seed
    if action == "sets":
        s = tuple(sorted(set(seed)))
        for p in s:
            if not 0 <= p < degree:
                raise ValueError(f"point {p} outside 0..{degree - 1}")
        return s
    if not isinstance(seed, Transformation):
        raise ValueError(f"{action} action needs a Transformation seed")
    if seed.degree != degree:
        raise ValueError(f"degree mismatch: {seed.degree} vs {degree}")
    return seed


def _default_label(gens: tuple[Permutation, ...]) -> str:
    if not gens:
        return "trivial"
    body = ", ".join(g.cycle_string() for g in gens[:3])
    if len(gens) > 3:
        body += ", ..."
    return f"<{body}>"


def group_from_generator_text(
    text: str, *, degree: int | None = None, label: str | None = None
) -> PermutationGroup:
    """Parse a generator file: one permutation per line, # comments, blanks ok.

    Lines may use cycle notation or 1-based image lists.  Generators of
    smaller inferred degree are extended by fixed points to the largest
    degree seen (or the explicit one).
    """
    raw: list[tuple[int, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if body:
            raw.append((lineno, body))
    perms: list[Permutation] = []
    for lineno, body in raw:
        try:
            perms.append(Permutation.parse(body, degree))
        except ParseError as e:
            raise ParseError(str(e), line=lineno) from None
    if degree is None:
        n = max((p.degree for p in perms), default=1)
        perms = [_extend(p, n) for p in perms]
    return PermutationGroup(perms, degree=degree if degree is not None else max(
        (p.degree for p in perms), default=1
    ), label=label)


def _extend(p: Permutation, degree: int) -> Permutation:
    if p.degree == degree:
        return p
    return Permutation(p.images + tuple(range(p.degree, degree)))
