"""Built-in example algebras, emitted in the text format."""

import re

from .classify import construct_double
from .linalg import qarray
from .textio import AlgebraFile, dumps, from_algebra, parse, read


def _file(n, names, pairs, tensors=None):
    index = {x: i for i, x in enumerate(names)}
    brackets = {}
    for a, b, rhs in pairs:
        brackets[(index[a], index[b])] = {index[k]: qarray([c])[0] for k, c in rhs.items()}
    return AlgebraFile(n, list(names), brackets, tensors=tensors or {}, named_basis=True)


def heisenberg(k):
    """h_{2k+1}: [x_i, y_i] = z."""
    if k < 1:
        raise ValueError("heisenberg-N needs N >= 1")
    names = [f"x{i}" for i in range(1, k + 1)] + [f"y{i}" for i in range(1, k + 1)] + ["z"]
    pairs = [(f"x{i}", f"y{i}", {"z": 1}) for i in range(1, k + 1)]
    return _file(2 * k + 1, names, pairs)


def dim6_free2step():
    names = [f"e{i}" for i in range(1, 7)]
    pairs = [("e1", "e2", {"e4": 1}), ("e1", "e3", {"e5": 1}), ("e2", "e3", {"e6": 1})]
    return _file(6, names, pairs)


def _wedge(i, j, m):
    """Skew generator sending e_i to e_j (and e_j to -e_i)."""
    rows = [[0] * m for _ in range(m)]
    rows[j][i] = 1
    rows[i][j] = -1
    return qarray(rows)


def double_file(generators):
    alg, s = construct_double(generators)
    return from_algebra(alg, {"S": s})


def dim8_double():
    return double_file([_wedge(0, 1, 3), _wedge(1, 2, 3)])


def h1_plus_h1():
    names = ["x1", "y1", "z1", "x2", "y2", "z2"]
    pairs = [("x1", "y1", {"z1": 1}), ("x2", "y2", {"z2": 1})]
    return _file(6, names, pairs)


def h1_plus_abelian2():
    names = ["x", "y", "z", "a1", "a2"]
    return _file(5, names, [("x", "y", {"z": 1})])


def solvable_counterexample():
    """Not nilpotent: kept only to exercise the validator."""
    # [e2, e3] = e1 and [e3, e1] = e2, i.e. [e1, e3] = -e2
    names = ["e1", "e2", "e3"]
    return _file(3, names, [("e2", "e3", {"e1": 1}), ("e1", "e3", {"e2": -1})])


FIXED = {
    "dim6-free2step": dim6_free2step,
    "dim8-double": dim8_double,
    "h1-plus-h1": h1_plus_h1,
    "h1-plus-abelian2": h1_plus_abelian2,
    "solvable-counterexample": solvable_counterexample,
}

DESCRIPTIONS = {
    "heisenberg-N": "Heisenberg algebra of dimension 2N+1",
    "dim6-free2step": "free 2-step algebra on 3 generators, center = derived algebra",
    "dim8-double": "doubling of span{e1^e2, e2^e3} in so(3), carries an indecomposable tensor S",
    "h1-plus-h1": "orthogonal sum of two 3-dimensional Heisenberg algebras",
    "h1-plus-abelian2": "3-dimensional Heisenberg algebra plus an abelian plane",
    "solvable-counterexample": "solvable, not 2-step nilpotent (validator fixture)",
    "double(GENFILE)": "doubling construction from skew generators in GENFILE",
}

# every catalog algebra that passes validation, used by tests and acceptance
VALID_NAMES = [
    "heisenberg-1",
    "heisenberg-2",
    "heisenberg-3",
    "dim6-free2step",
    "h1-plus-h1",
    "h1-plus-abelian2",
    "dim8-double",
]


def lookup(name):
    """AlgebraFile for a catalog name, or None if the name is not in the catalog."""
    m = re.fullmatch(r"heisenberg-(\d+)", name)
    if m:
        return heisenberg(int(m.group(1)))
    m = re.fullmatch(r"double\((.+)\)", name)
    if m:
        gens = read(m.group(1)).generators
        return double_file(list(gens.values()))
    if name in FIXED:
        return FIXED[name]()
    return None


def emit(name):
    af = lookup(name)
    if af is None:
        raise KeyError(name)
    return dumps(af, header=f"{name}: {describe(name)}")


def describe(name):
    if name.startswith("heisenberg-"):
        return DESCRIPTIONS["heisenberg-N"]
    if name.startswith("double("):
        return DESCRIPTIONS["double(GENFILE)"]
    return DESCRIPTIONS[name]


def load(name):
    """Round-trip through the text format, as the CLI does."""
    return parse(emit(name))
