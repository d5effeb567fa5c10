"""Finite cell complexes with signed incidence and their integral homology."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .linalg import IntMatrix, rank, smith_normal_form

__all__ = [
    "EMPTY",
    "CellComplex",
    "ComplexFormatError",
    "InvalidComplexError",
    "NotAcyclicError",
    "Subcomplex",
    "Homology",
    "Violation",
    "validate",
    "ensure_valid",
    "boundary_matrix",
    "reduced_homology",
    "relative_homology",
    "relative_homology_order",
    "skeleton",
    "restrict_columns",
    "rank_formula",
    "rank_check",
    "is_acyclic_through",
    "require_acyclic",
]

EMPTY = "empty"


class ComplexFormatError(ValueError):
    """Malformed complex description (structure, not mathematics)."""


class InvalidComplexError(ValueError):
    def __init__(self, violations: Sequence["Violation"]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations[:5]))


class NotAcyclicError(ValueError):
    """The complex has nonzero reduced homology below the requested dimension."""

    def __init__(self, dim: int, homology: "Homology"):
        self.dim = dim
        self.homology = homology
        super().__init__(f"reduced homology in dimension {dim} is {homology}, not 0")


@dataclass(frozen=True)
class Violation:
    code: str
    cell: str
    detail: str

    def __str__(self) -> str:
        return f"{self.code} at {self.cell}: {self.detail}"


class CellComplex:
    """Graded cells with integer incidence coefficients.

    Cell order within each dimension is insertion order and fixes every matrix
    index.  The empty cell ``EMPTY`` (dimension -1) is always present and is
    the facet of each vertex.
    """

    def __init__(self, cells: Iterable[tuple[str, int, Iterable[tuple[str, int]]]], regular: bool = True):
        self.regular = bool(regular)
        self._by_dim: dict[int, list[str]] = {-1: [EMPTY]}
        self._dim: dict[str, int] = {EMPTY: -1}
        self._boundary: dict[str, tuple[tuple[str, int], ...]] = {EMPTY: ()}
        for cid, d, bd in cells:
            if not isinstance(cid, str) or not cid:
                raise ComplexFormatError(f"cell id must be a non-empty string, got {cid!r}")
            if cid == EMPTY:
                raise ComplexFormatError(f"cell id {EMPTY!r} is reserved for the empty cell")
            if cid in self._dim:
                raise ComplexFormatError(f"duplicate cell id {cid!r}")
            if isinstance(d, bool) or not isinstance(d, int) or d < 0:
                raise ComplexFormatError(f"cell {cid!r}: dimension must be an integer >= 0")
            entries = []
            for item in bd:
                try:
                    f, c = item
                except (TypeError, ValueError):
                    raise ComplexFormatError(f"cell {cid!r}: boundary entries are [facet, coefficient] pairs") from None
                if isinstance(c, bool) or not isinstance(c, int):
                    raise ComplexFormatError(f"cell {cid!r}: coefficient for {f!r} must be an integer")
                entries.append((str(f), c))
            if d == 0 and not any(f == EMPTY for f, _ in entries):
                entries.insert(0, (EMPTY, 1))
            self._by_dim.setdefault(d, []).append(cid)
            self._dim[cid] = d
            self._boundary[cid] = tuple(entries)
        self._index = {c: i for ids in self._by_dim.values() for i, c in enumerate(ids)}
        self._matrices: dict[int, IntMatrix] = {}
        self._valid: bool | None = None

    @property
    def dim(self) -> int:
        return max(self._by_dim)

    def cells(self, d: int) -> list[str]:
        return list(self._by_dim.get(d, ()))

    def all_cells(self) -> list[str]:
        """Every cell, by dimension then insertion order (empty cell first)."""
        return [c for d in sorted(self._by_dim) for c in self._by_dim[d]]

    def f(self, d: int) -> int:
        return len(self._by_dim.get(d, ()))

    def f_vector(self) -> tuple[int, ...]:
        """Cell counts from dimension -1 up to ``dim``."""
        return tuple(self.f(d) for d in range(-1, self.dim + 1))

    def dim_of(self, cell: str) -> int:
        return self._dim[cell]

    def index_of(self, cell: str) -> int:
        return self._index[cell]

    def boundary(self, cell: str) -> tuple[tuple[str, int], ...]:
        return self._boundary[cell]

    def facets(self, cell: str) -> list[str]:
        return list(dict.fromkeys(f for f, _ in self._boundary[cell]))

    def __contains__(self, cell: object) -> bool:
        return cell in self._dim

    def __len__(self) -> int:
        return len(self._dim)

    def boundary_matrix(self, i: int) -> IntMatrix:
        """Rows are (i-1)-cells, columns i-cells; defined for every integer i."""
        if i not in self._matrices:
            rows, cols = self.cells(i - 1), self.cells(i)
            ridx = {c: k for k, c in enumerate(rows)}
            data = [[0] * len(cols) for _ in rows]
            for j, c in enumerate(cols):
                for f, coeff in self._boundary[c]:
                    k = ridx.get(f)
                    if k is not None:
                        data[k][j] += coeff
            self._matrices[i] = IntMatrix.from_rows(data, len(cols))
        return self._matrices[i]

    def face_closure(self) -> dict[str, frozenset[str]]:
        """Map each cell to the set of all cells below or equal to it."""
        closure: dict[str, frozenset[str]] = {}
        for c in self.all_cells():
            down = {c}
            for f, _ in self._boundary[c]:
                if f in closure:
                    down |= closure[f]
            closure[c] = frozenset(down)
        return closure

    # serialization

    def to_dict(self) -> dict:
        cells = []
        for c in self.all_cells():
            if c == EMPTY:
                continue
            bd = [[f, k] for f, k in self._boundary[c] if not (self._dim[c] == 0 and f == EMPTY and k == 1)]
            cells.append({"id": c, "dim": self._dim[c], "boundary": bd})
        return {"cells": cells, "regular": self.regular}

    @classmethod
    def from_dict(cls, data: Mapping) -> "CellComplex":
        if not isinstance(data, Mapping) or "cells" not in data:
            raise ComplexFormatError('complex JSON needs a top-level "cells" list')
        raw = data["cells"]
        if not isinstance(raw, list):
            raise ComplexFormatError('"cells" must be a list')
        items = []
        for k, cell in enumerate(raw):
            if not isinstance(cell, Mapping) or "id" not in cell or "dim" not in cell:
                raise ComplexFormatError(f"cells[{k}]: needs 'id' and 'dim'")
            items.append((cell["id"], cell["dim"], cell.get("boundary", [])))
        return cls(items, regular=data.get("regular", True))

    def to_json(self) -> str:
        return dumps_document(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "CellComplex":
        return cls.from_dict(json.loads(text))


def dumps_document(doc: Mapping) -> str:
    """Stable text layout: one cell per line, every other key on its own line."""
    lines = ["{", '  "cells": [']
    cells = doc.get("cells", [])
    for k, cell in enumerate(cells):
        sep = "," if k + 1 < len(cells) else ""
        lines.append("    " + json.dumps(cell, separators=(", ", ": "), ensure_ascii=False) + sep)
    lines.append("  ]")
    rest = [(key, val) for key, val in doc.items() if key != "cells"]
    if rest:
        lines[-1] += ","
    for k, (key, val) in enumerate(rest):
        sep = "," if k + 1 < len(rest) else ""
        lines.append(f"  {json.dumps(key)}: {json.dumps(val, sort_keys=False, ensure_ascii=False)}{sep}")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------- validation


def validate(x: CellComplex) -> list[Violation]:
    """Grading, incidence and boundary-composition checks; empty list means valid."""
    out: list[Violation] = []
    for c in x.all_cells():
        if c == EMPTY:
            continue
        d = x.dim_of(c)
        seen = set()
        for f, coeff in x.boundary(c):
            if f not in x:
                out.append(Violation("unknown-facet", c, f"facet {f!r} does not exist"))
                continue
            if x.dim_of(f) != d - 1:
                out.append(Violation("bad-grading", c, f"facet {f!r} has dimension {x.dim_of(f)}, expected {d - 1}"))
            if x.regular:
                if coeff not in (1, -1):
                    out.append(Violation("irregular-coefficient", c, f"coefficient {coeff} on {f!r} but complex is flagged regular"))
                if f in seen:
                    out.append(Violation("repeated-facet", c, f"facet {f!r} listed twice in a regular complex"))
            seen.add(f)
        if d == 0 and dict(x.boundary(c)).get(EMPTY) != 1:
            out.append(Violation("augmentation", c, "vertex must have incidence +1 with the empty cell"))
    if out:
        return out
    # boundary of boundary, one column at a time so the offending cell is named
    for i in range(1, x.dim + 1):
        lower, upper = x.boundary_matrix(i - 1), x.boundary_matrix(i)
        if lower.rows == 0 or upper.cols == 0:
            continue
        prod = lower @ upper
        for j, c in enumerate(x.cells(i)):
            col = prod.column(j)
            if any(col):
                out.append(Violation("boundary-squared", c, f"d(d({c})) = {list(col)} is not zero"))
    return out


def ensure_valid(x: CellComplex) -> None:
    if x._valid is None:
        x._valid = not validate(x)
    if not x._valid:
        raise InvalidComplexError(validate(x))


def boundary_matrix(x: CellComplex, i: int) -> IntMatrix:
    if not -1 <= i <= x.dim:
        raise IndexError(f"boundary index {i} outside [-1, {x.dim}]")
    return x.boundary_matrix(i)


# ----------------------------------------------------------------- subcomplexes


@dataclass(frozen=True)
class Subcomplex:
    """Downward-closed set of cells of ``complex``."""

    complex: CellComplex
    cells: frozenset[str]

    def __post_init__(self) -> None:
        for c in self.cells:
            if c not in self.complex:
                raise KeyError(f"unknown cell {c!r}")
        for c in self.cells:
            for f, _ in self.complex.boundary(c):
                if f not in self.cells:
                    raise ValueError(f"not a subcomplex: {c!r} is included but its facet {f!r} is not")

    @classmethod
    def whole(cls, x: CellComplex) -> "Subcomplex":
        return cls(x, frozenset(x.all_cells()))

    def cells_in_dim(self, d: int) -> list[str]:
        return [c for c in self.complex.cells(d) if c in self.cells]

    def f(self, d: int) -> int:
        return len(self.cells_in_dim(d))

    def __contains__(self, cell: object) -> bool:
        return cell in self.cells

    def __len__(self) -> int:
        return len(self.cells)


def _restricted(x: CellComplex, keep: frozenset[str] | set[str], i: int) -> IntMatrix:
    full = x.boundary_matrix(i)
    rows = [k for k, c in enumerate(x.cells(i - 1)) if c in keep]
    cols = [k for k, c in enumerate(x.cells(i)) if c in keep]
    return full.submatrix(rows, cols)


@dataclass(frozen=True)
class Homology:
    free_rank: int
    torsion: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def order(self) -> int | None:
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def __str__(self) -> str:
        parts = [f"Z^{self.free_rank}"] if self.free_rank else []
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


def _homology_of(x: CellComplex, keep: frozenset[str] | set[str], i: int) -> Homology:
    if i < -1:
        return Homology(0, ())
    d_out = _restricted(x, keep, i)
    d_in = _restricted(x, keep, i + 1)
    n_i = d_out.cols
    kernel = n_i - rank(d_out)
    snf = smith_normal_form(d_in)
    return Homology(kernel - snf.rank, snf.torsion)


def reduced_homology(x: CellComplex | Subcomplex, i: int) -> Homology:
    """Reduced integral homology ``ker d_i / im d_(i+1)`` of a complex or subcomplex."""
    if isinstance(x, Subcomplex):
        return _homology_of(x.complex, x.cells, i)
    return _homology_of(x, frozenset(x.all_cells()), i)


def relative_homology(t: Subcomplex, t_sub: Subcomplex, i: int) -> Homology:
    if t.complex is not t_sub.complex:
        raise ValueError("subcomplexes of different complexes")
    if not t_sub.cells <= t.cells:
        raise ValueError("relative homology needs T' inside T")
    return _homology_of(t.complex, t.cells - t_sub.cells, i)


def relative_homology_order(t: Subcomplex, t_sub: Subcomplex, i: int) -> int | None:
    """``|H_i(T, T')|``, or None when the group is infinite."""
    return relative_homology(t, t_sub, i).order()


def skeleton(x: CellComplex, i: int) -> Subcomplex:
    return Subcomplex(x, frozenset(c for c in x.all_cells() if x.dim_of(c) <= i))


def restrict_columns(x: CellComplex, i: int, chosen: Iterable[str]) -> Subcomplex:
    """Full (i-1)-skeleton plus the chosen i-cells."""
    chosen = list(chosen)
    for c in chosen:
        if c not in x or x.dim_of(c) != i:
            raise KeyError(f"{c!r} is not an {i}-cell")
    base = [c for c in x.all_cells() if x.dim_of(c) <= i - 1]
    return Subcomplex(x, frozenset(base) | frozenset(chosen))


# ----------------------------------------------------------------- acyclicity


def is_acyclic_through(x: CellComplex, i: int) -> bool:
    """True when reduced homology vanishes in every dimension -1..i."""
    return all(reduced_homology(x, j).is_zero for j in range(-1, i + 1))


def require_acyclic(x: CellComplex, i: int) -> None:
    for j in range(-1, i + 1):
        h = reduced_homology(x, j)
        if not h.is_zero:
            raise NotAcyclicError(j, h)


def rank_formula(x: CellComplex, i: int) -> int:
    """Alternating sum of face numbers predicting ``rank d_i`` on an (i-1)-acyclic complex."""
    return sum((-1) ** (i - 1 - j) * x.f(j) for j in range(-1, i))


def rank_check(x: CellComplex, i: int) -> bool:
    require_acyclic(x, i - 1)
    return rank(x.boundary_matrix(i)) == rank_formula(x, i)
