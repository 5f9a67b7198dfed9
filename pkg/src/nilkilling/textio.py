"""Line-oriented algebra file format.

    # comment
    dim 3
    basis x1 y1 z
    bracket x1 y1 = 1 z
    metric identity
    tensor S
    1 0 0
    0 1 0
    0 0 0

``dim`` comes first. Brackets not listed are zero; right-hand sides are
``c1 name1 + c2 name2 ...`` with rational ``p/q`` coefficients (a missing
coefficient means 1). ``metric gram`` is followed by N rows and forces float
mode. ``tensor NAME`` is followed by N rows of a symmetric matrix.
Generator files for the doubling construction use ``generator NAME`` blocks
of skew m x m rows instead of brackets.
"""

import re
from dataclasses import dataclass, field

from ._scalar import Q, parse_rational
from .errors import ParseError
from .linalg import is_symmetric, qarray, to_float, zeros
from .liealg import from_gram, validate

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")


@dataclass
class AlgebraFile:
    dim: int
    names: list
    brackets: dict = field(default_factory=dict)  # (i, j) with i < j -> {k: Q}
    gram: object = None  # None means identity
    tensors: dict = field(default_factory=dict)  # name -> exact matrix
    generators: dict = field(default_factory=dict)  # name -> exact matrix
    named_basis: bool = False

    def structure_constants(self):
        n = self.dim
        c = zeros((n, n, n))
        for (i, j), rhs in self.brackets.items():
            for k, x in rhs.items():
                c[i, j, k] += x
                c[j, i, k] -= x
        return c

    def build(self):
        """Validated algebra plus tensors expressed in its orthonormal basis."""
        c = self.structure_constants()
        if self.gram is None:
            alg = validate(c, self.names)
            return alg, dict(self.tensors)
        alg = from_gram(to_float(c), to_float(self.gram), self.names)
        m = alg.frame
        return alg, {name: m.T @ to_float(s) @ m for name, s in self.tensors.items()}


def _rows(lines, start, n, what):
    rows = []
    for offset in range(n):
        idx = start + offset
        if idx >= len(lines):
            last = lines[-1][0] if lines else 0
            raise ParseError(f"{what}: expected {n} rows, file ended", last + 1)
        lineno, text = lines[idx]
        toks = text.split()
        if len(toks) != n:
            raise ParseError(f"{what}: expected {n} entries, got {len(toks)}", lineno)
        try:
            rows.append([parse_rational(t) for t in toks])
        except ValueError as exc:
            raise ParseError(f"{what}: {exc}", lineno) from None
    return qarray(rows), start + n


def _parse_rhs(text, index, lineno):
    out = {}
    text = text.strip()
    if text in ("", "0"):
        return out
    text = re.sub(r"\s*-\s*", " + -", text).strip()
    for term in filter(None, (t.strip() for t in text.split("+"))):
        toks = term.split()
        if len(toks) == 1:
            coef_text, name = "1", toks[0]
            if name.startswith("-"):
                coef_text, name = "-1", name[1:]
        elif len(toks) == 2:
            coef_text, name = toks
            if coef_text == "-":
                coef_text = "-1"
        else:
            raise ParseError(f"cannot read bracket term {term!r}", lineno)
        if name not in index:
            raise ParseError(f"unknown basis element {name!r}", lineno)
        try:
            coef = parse_rational(coef_text.replace("- ", "-"))
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        k = index[name]
        out[k] = out.get(k, Q(0)) + coef
    return {k: x for k, x in out.items() if x != 0}


def parse(text):
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append((lineno, stripped))
    if not lines:
        raise ParseError("empty file", 1)
    lineno, first = lines[0]
    toks = first.split()
    if toks[0] != "dim" or len(toks) != 2:
        raise ParseError("the first directive must be 'dim N'", lineno)
    try:
        n = int(toks[1])
    except ValueError:
        raise ParseError(f"bad dimension {toks[1]!r}", lineno) from None
    if n < 1:
        raise ParseError("dimension must be positive", lineno)
    af = AlgebraFile(n, [f"e{i + 1}" for i in range(n)])
    index = {name: i for i, name in enumerate(af.names)}
    seen_metric = False
    pos = 1
    while pos < len(lines):
        lineno, text = lines[pos]
        head, _, rest = text.partition(" ")
        rest = rest.strip()
        pos += 1
        if head == "dim":
            raise ParseError("'dim' given twice", lineno)
        elif head == "basis":
            if af.brackets or af.tensors:
                raise ParseError("'basis' must precede brackets and tensors", lineno)
            names = rest.split()
            if len(names) != n:
                raise ParseError(f"'basis' lists {len(names)} names for dimension {n}", lineno)
            bad = [x for x in names if not _NAME.match(x)]
            if bad or len(set(names)) != n:
                raise ParseError(f"invalid or repeated basis names: {bad or names}", lineno)
            af.names = names
            af.named_basis = True
            index = {name: i for i, name in enumerate(names)}
        elif head == "bracket":
            lhs, eq, rhs = rest.partition("=")
            pair = lhs.split()
            if not eq or len(pair) != 2:
                raise ParseError("expected 'bracket A B = ...'", lineno)
            for name in pair:
                if name not in index:
                    raise ParseError(f"unknown basis element {name!r}", lineno)
            i, j = index[pair[0]], index[pair[1]]
            if i == j:
                raise ParseError(f"bracket of {pair[0]} with itself", lineno)
            coeffs = _parse_rhs(rhs, index, lineno)
            if i > j:
                i, j = j, i
                coeffs = {k: -x for k, x in coeffs.items()}
            if (i, j) in af.brackets:
                raise ParseError(f"bracket [{af.names[i]},{af.names[j]}] given twice", lineno)
            af.brackets[(i, j)] = coeffs
        elif head == "metric":
            if seen_metric:
                raise ParseError("'metric' given twice", lineno)
            seen_metric = True
            if rest == "identity":
                continue
            if rest != "gram":
                raise ParseError("metric must be 'identity' or 'gram'", lineno)
            af.gram, pos = _rows(lines, pos, n, "metric gram")
            if not is_symmetric(af.gram):
                raise ParseError("Gram matrix is not symmetric", lineno)
        elif head in ("tensor", "generator"):
            if not _NAME.match(rest):
                raise ParseError(f"{head} needs a name", lineno)
            store = af.tensors if head == "tensor" else af.generators
            if rest in store:
                raise ParseError(f"{head} {rest!r} given twice", lineno)
            mat, pos = _rows(lines, pos, n, f"{head} {rest}")
            if head == "tensor" and not is_symmetric(mat):
                raise ParseError(f"tensor {rest!r} is not symmetric", lineno)
            if head == "generator" and not all(x == 0 for x in (mat + mat.T).flat):
                raise ParseError(f"generator {rest!r} is not skew-symmetric", lineno)
            store[rest] = mat
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)
    return af


def read(path):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def _fmt(x):
    return str(Q(x))


def _matrix_lines(m):
    return [" ".join(_fmt(x) for x in row) for row in m]


def dumps(af, header=None):
    """Canonical text; ``parse(dumps(af))`` reproduces ``af``."""
    out = []
    if header:
        out += [f"# {line}" for line in header.splitlines()]
    out.append(f"dim {af.dim}")
    if af.named_basis:
        out.append("basis " + " ".join(af.names))
    for (i, j) in sorted(af.brackets):
        rhs = af.brackets[(i, j)]
        if not rhs:
            continue
        terms = " + ".join(f"{_fmt(x)} {af.names[k]}" for k, x in sorted(rhs.items()))
        out.append(f"bracket {af.names[i]} {af.names[j]} = {terms}")
    if af.gram is None:
        out.append("metric identity")
    else:
        out.append("metric gram")
        out += _matrix_lines(af.gram)
    for name, m in af.tensors.items():
        out.append(f"tensor {name}")
        out += _matrix_lines(m)
    for name, m in af.generators.items():
        out.append(f"generator {name}")
        out += _matrix_lines(m)
    return "\n".join(out) + "\n"


def from_algebra(alg, tensors=None):
    """AlgebraFile for an exact algebra (orthonormal basis)."""
    n = alg.dim
    brackets = {}
    for i, j, k, c in alg.terms:
        brackets.setdefault((i, j), {})[k] = Q(c)
    af = AlgebraFile(n, list(alg.names), brackets, named_basis=True)
    af.tensors = dict(tensors or {})
    return af
