"""Small hand-built complexes shared by the tests."""

from hypothesis import strategies as st

from pdetlab.complex import CellComplex


def cycle(n):
    cells = [(f"v{i}", 0, []) for i in range(n)]
    cells += [(f"e{i}", 1, [(f"v{i}", -1), (f"v{(i + 1) % n}", 1)]) for i in range(n)]
    return CellComplex(cells)


def projective_plane():
    return CellComplex([("v", 0, []), ("e", 1, []), ("f", 2, [("e", 2)])], regular=False)


def triangle(corrupt=False):
    cells = [("1", 0, []), ("2", 0, []), ("3", 0, []),
             ("12", 1, [("1", -1), ("2", 1)]),
             ("13", 1, [("1", -1), ("3", 1)]),
             ("23", 1, [("2", -1), ("3", 1)]),
             ("123", 2, [("23", 1), ("13", 1 if corrupt else -1), ("12", 1)])]
    return CellComplex(cells)


@st.composite
def simplicial(draw):
    n = draw(st.integers(1, 5))
    faces = draw(st.sets(st.frozensets(st.integers(1, n), min_size=1, max_size=n), min_size=1, max_size=12))
    closed = set()
    for f in faces:
        items = sorted(f)
        for mask in range(1, 1 << len(items)):
            closed.add(tuple(v for k, v in enumerate(items) if mask >> k & 1))
    cells = []
    for face in sorted(closed, key=lambda f: (len(f), f)):
        name = "-".join(map(str, face))
        bd = [("-".join(map(str, face[:j] + face[j + 1:])), (-1) ** j) for j in range(len(face))] if len(face) > 1 else []
        cells.append((name, len(face) - 1, bd))
    return CellComplex(cells)
