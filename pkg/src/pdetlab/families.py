"""Generators for the built-in self-dual families."""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

from .complex import EMPTY, CellComplex, InvalidComplexError, ensure_valid
from .selfdual import SelfDualStructure, ensure_self_dual, validate_self_dual

__all__ = [
    "FamilySpec",
    "polygon",
    "simplex",
    "simplex_skeleton",
    "pyramid",
    "diminished_trapezohedron",
    "single_vertex",
    "parse_shorthand",
    "load",
]


def _check(s: SelfDualStructure) -> SelfDualStructure:
    ensure_self_dual(s)
    return s


def polygon(n: int) -> SelfDualStructure:
    """n-gon as a 2-ball; vertex v_i pairs with the edge opposite to it."""
    if n < 3:
        raise ValueError(f"polygon needs n >= 3, got {n}")
    m = n // 2
    cells: list = [(f"v{i}", 0, []) for i in range(n)]
    cells += [(f"e{i}", 1, [(f"v{i}", -1), (f"v{(i + 1) % n}", 1)]) for i in range(n)]
    cells.append(("f", 2, [(f"e{i}", 1) for i in range(n)]))
    alpha = {EMPTY: "f", "f": EMPTY}
    for i in range(n):
        alpha[f"v{i}"] = f"e{(i + m) % n}"
        alpha[f"e{i}"] = f"v{(i + m + 1) % n}"
    return _check(SelfDualStructure(CellComplex(cells), alpha, 2, antipodal=n % 2 == 1))


def _simplex_cells(n: int, top: int) -> list:
    cells = []
    for size in range(1, top + 2):
        for face in combinations(range(1, n + 1), size):
            bd = []
            if size > 1:
                for j in range(size):
                    bd.append(("-".join(map(str, face[:j] + face[j + 1:])), (-1) ** j))
            cells.append(("-".join(map(str, face)), size - 1, bd))
    return cells


def simplex(n: int) -> SelfDualStructure:
    """Simplex on vertices 1..n with the standard orientation; alpha is complementation."""
    if n < 1:
        raise ValueError(f"simplex needs at least one vertex, got {n}")
    x = CellComplex(_simplex_cells(n, n - 1))
    full = frozenset(range(1, n + 1))

    def name(face) -> str:
        return "-".join(map(str, sorted(face))) if face else EMPTY

    alpha = {}
    for c in x.all_cells():
        verts = frozenset() if c == EMPTY else frozenset(int(v) for v in c.split("-"))
        alpha[c] = name(full - verts)
    return _check(SelfDualStructure(x, alpha, n - 1, antipodal=True))


def simplex_skeleton(n: int, k: int) -> CellComplex:
    """All faces of dimension at most k of the simplex on n vertices."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    return CellComplex(_simplex_cells(n, min(k, n - 1)))


def single_vertex() -> CellComplex:
    return CellComplex([("v", 0, [])])


def pyramid(s: SelfDualStructure) -> SelfDualStructure:
    """Cone over the boundary of ``s``, capped by a copy of its top cell as the base."""
    ensure_self_dual(s)
    x = s.complex
    used = set(x.all_cells())
    level = 0
    while f"a{level}" in used or any(c.startswith(f"a{level}*") for c in used):
        level += 1
    apex = f"a{level}"

    def cone(c: str) -> str:
        return apex if c == EMPTY else f"{apex}*{c}"

    cells = [(c, x.dim_of(c), x.boundary(c)) for c in x.all_cells() if c != EMPTY]
    cells.append((apex, 0, []))
    top = x.dim
    for c in x.all_cells():
        if c == EMPTY or x.dim_of(c) == top:
            continue
        bd = [(c, 1)]
        for f, coeff in x.boundary(c):
            bd.append((cone(f), -coeff))
        cells.append((cone(c), x.dim_of(c) + 1, bd))
    # the old top cell becomes the base; the solid pyramid bounds base and cones of the rim
    (old_top,) = x.cells(top)
    solid = cone(old_top)
    rim = [(old_top, 1)] + [(cone(f), -coeff) for f, coeff in x.boundary(old_top)]
    cells.append((solid, top + 1, rim))
    big = CellComplex(cells)

    alpha = {}
    for c in x.all_cells():
        alpha[c] = cone(s.alpha[c])
        alpha[cone(c)] = s.alpha[c]
    anti = s.antipodal
    return _check(SelfDualStructure(big, alpha, s.ball_dim + 1, antipodal=anti))


def _orient_top(faces: list[tuple[str, dict[str, int]]]) -> list[tuple[str, int]]:
    """Signs on the 2-cells of a closed surface so that their edge boundaries cancel."""
    by_edge: dict[str, list[int]] = {}
    for k, (_, bd) in enumerate(faces):
        for e in bd:
            by_edge.setdefault(e, []).append(k)
    sign = {0: 1}
    queue = deque([0])
    while queue:
        k = queue.popleft()
        for e, c in faces[k][1].items():
            for other in by_edge[e]:
                if other == k:
                    continue
                want = -sign[k] * c * faces[other][1][e]
                if other not in sign:
                    sign[other] = want
                    queue.append(other)
                elif sign[other] != want:
                    raise InvalidComplexError([])
    return [(name, sign[k]) for k, (name, _) in enumerate(faces)]


def diminished_trapezohedron(m: int) -> SelfDualStructure:
    """Apex n over an m-gon a_i of kites, a zigzag of triangles, and an m-gon base.

    Cells: vertices n, a_i, b_i; edges n-a_i, a_i-b_i, b_i-a_(i+1), b_i-b_(i+1);
    kites (n, a_i, b_i, a_(i+1)); triangles (b_i, a_(i+1), b_(i+1)); base B over the b_i.
    """
    if m < 3:
        raise ValueError(f"trapezohedron needs m >= 3, got {m}")
    nxt = lambda i: (i + 1) % m  # noqa: E731
    prv = lambda i: (i - 1) % m  # noqa: E731
    cells: list = [("n", 0, [])]
    cells += [(f"a{i}", 0, []) for i in range(m)]
    cells += [(f"b{i}", 0, []) for i in range(m)]
    cells += [(f"na{i}", 1, [("n", -1), (f"a{i}", 1)]) for i in range(m)]
    cells += [(f"ab{i}", 1, [(f"a{i}", -1), (f"b{i}", 1)]) for i in range(m)]
    cells += [(f"ba{i}", 1, [(f"b{i}", -1), (f"a{nxt(i)}", 1)]) for i in range(m)]
    cells += [(f"bb{i}", 1, [(f"b{i}", -1), (f"b{nxt(i)}", 1)]) for i in range(m)]
    faces: list[tuple[str, dict[str, int]]] = []
    for i in range(m):
        # n -> a_i -> b_i -> a_(i+1) -> n
        faces.append((f"k{i}", {f"na{i}": 1, f"ab{i}": 1, f"ba{i}": 1, f"na{nxt(i)}": -1}))
    for i in range(m):
        # b_i -> a_(i+1) -> b_(i+1) -> b_i
        faces.append((f"t{i}", {f"ba{i}": 1, f"ab{nxt(i)}": 1, f"bb{i}": -1}))
    faces.append(("B", {f"bb{i}": 1 for i in range(m)}))
    cells += [(name, 2, list(bd.items())) for name, bd in faces]
    cells.append(("ball", 3, _orient_top(faces)))
    x = CellComplex(cells)

    alpha = {EMPTY: "ball", "ball": EMPTY, "n": "B", "B": "n"}
    for i in range(m):
        pairs = [(f"a{i}", f"t{prv(i)}"), (f"b{i}", f"k{i}"), (f"na{i}", f"bb{prv(i)}")]
        for u, v in pairs:
            alpha[u], alpha[v] = v, u
        alpha[f"ab{i}"] = f"ab{i}"
        alpha[f"ba{i}"] = f"ba{i}"
    return _check(SelfDualStructure(x, alpha, 3, antipodal=m % 2 == 0))


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: tuple[int, ...] = ()
    base: "FamilySpec | None" = None
    path: str | None = None

    def build(self) -> SelfDualStructure | CellComplex:
        f, p = self.family, self.params
        if f == "polygon":
            return polygon(*p)
        if f == "simplex":
            return simplex(*p)
        if f == "simplex_skeleton":
            return simplex_skeleton(*p)
        if f == "diminished_trapezohedron":
            return diminished_trapezohedron(*p)
        if f == "single_vertex":
            return single_vertex()
        if f == "pyramid":
            base = self.base.build()
            if not isinstance(base, SelfDualStructure):
                raise ValueError("pyramid needs a self-dual base")
            return pyramid(base)
        if f == "from_file":
            return load(self.path)
        raise ValueError(f"unknown family {f!r}")


_SHORT = [
    (re.compile(r"^polygon(\d+)$"), "polygon"),
    (re.compile(r"^simplex(\d+)-skel(\d+)$"), "simplex_skeleton"),
    (re.compile(r"^simplex(\d+)$"), "simplex"),
    (re.compile(r"^trapezohedron(\d+)$"), "diminished_trapezohedron"),
    (re.compile(r"^(vertex)$"), "single_vertex"),
]


def parse_shorthand(name: str) -> FamilySpec | None:
    """``polygon5``, ``simplex7``, ``simplex6-skel2``, ``trapezohedron6``, ``vertex``, ``pyramid-<name>``."""
    if name.startswith("pyramid-"):
        inner = parse_shorthand(name[len("pyramid-"):])
        return None if inner is None else FamilySpec("pyramid", base=inner)
    for pattern, family in _SHORT:
        m = pattern.match(name)
        if m:
            nums = tuple(int(g) for g in m.groups() if g.isdigit())
            return FamilySpec(family, nums)
    return None


def load(source: str | Path) -> SelfDualStructure | CellComplex:
    """Read a complex (or self-dual structure, if it carries alpha) from a file or a shorthand name."""
    spec = parse_shorthand(str(source))
    path = Path(source)
    if spec is not None and not path.exists():
        return spec.build()
    import json

    data = json.loads(path.read_text())
    if isinstance(data, dict) and "alpha" in data:
        s = SelfDualStructure.from_dict(data)
        ensure_valid(s.complex)
        return s
    x = CellComplex.from_dict(data)
    return x


def as_complex(obj: SelfDualStructure | CellComplex) -> CellComplex:
    return obj.complex if isinstance(obj, SelfDualStructure) else obj


__all__ += ["as_complex", "validate_self_dual"]
