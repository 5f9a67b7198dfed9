"""JSON-ready encoding of results. Exact scalars become ``"p/q"`` strings."""

import json

import numpy as np

from . import __version__

SCHEMA = 1


def scalar(x):
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    return str(x)


def vector(v):
    return [scalar(x) for x in v]


def sparse_vector(v):
    """Nonzero entries as [index, value] pairs (0-based)."""
    return [[i, scalar(x)] for i, x in enumerate(v) if x != 0]


def matrix(m):
    return [vector(row) for row in np.asarray(m)]


def subspace(space):
    return [vector(b) for b in space.basis]


def header(command, mode, seeds=None, **extra):
    out = {"tool": "nilkilling", "version": __version__, "schema": SCHEMA, "command": command, "mode": mode}
    out["seeds"] = seeds or {}
    out.update(extra)
    return out


def block_certificate(b):
    out = {
        "component": b.component,
        "kind": b.kind,
        "decomposable": b.decomposable,
        "reason": b.reason,
        "eigenvalues": vector(b.eigenvalues),
    }
    if b.shift is not None:
        out["shift"] = scalar(b.shift)
    if b.derivations:
        out["derivations"] = [matrix(d) for d in b.derivations]
    if b.witness is not None:
        out["infeasibility_witness"] = sparse_vector(b.witness)
    if b.block_pair is not None:
        out["indecomposable_block_pair"] = list(b.block_pair)
    return out


def verdict(label, v):
    return {
        "tensor": label,
        "verdict": v.label,
        "numerical": not v.exact,
        "fast_path": v.fast_path,
        "trace": list(v.trace),
        "certificate": [block_certificate(b) for b in v.blocks],
    }


def dumps(doc):
    return json.dumps(doc, indent=2) + "\n"
