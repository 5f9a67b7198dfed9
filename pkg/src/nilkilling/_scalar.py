"""Exact scalar backend.

``Q`` is gmpy2's C-backed ``mpq`` when importable, otherwise the stdlib
``fractions.Fraction``. Both keep values in lowest terms with a positive
denominator. Set ``NILKILLING_PURE=1`` to force the pure-Python backend.
"""

import os

BACKEND = "fractions"

if not os.environ.get("NILKILLING_PURE"):
    try:
        from gmpy2 import mpq as Q

        BACKEND = "gmpy2"
    except ImportError:  # pragma: no cover - depends on environment
        pass

if BACKEND == "fractions":
    from fractions import Fraction as Q


def parse_rational(text):
    """Parse ``"p/q"``, ``"-3"`` or ``"2.5"``-free rational text into ``Q``."""
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    if any(ch in text for ch in ".eE"):
        raise ValueError(f"not a rational literal: {text!r}")
    num, _, den = text.partition("/")
    try:
        p = int(num)
        q = int(den) if den else 1
    except ValueError:
        raise ValueError(f"not a rational literal: {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Q(p, q)


__all__ = ["Q", "BACKEND", "parse_rational"]
