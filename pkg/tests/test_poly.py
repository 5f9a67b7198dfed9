from nilkilling import _poly
from nilkilling._scalar import Q


def qs(*xs):
    return [Q(x) for x in xs]


def test_sturm_counts_distinct_roots():
    # (x - 1)^2 (x + 2) (x^2 + 1)
    p = qs(1, 0, -2, 2, -3, 2)
    assert _poly.real_root_count(p) == 2
    assert _poly.real_root_count(qs(1, 0, 1)) == 0


def test_squarefree_keeps_roots_simple():
    p = qs(1, 0, -4, 0, 4)  # (x^2 - 2)^2
    assert _poly.squarefree(p) == qs(1, 0, -2)
    assert _poly.quotient(p, qs(1, 0, -2)) == qs(1, 0, -2)


def test_rational_roots_and_interpolation():
    xs = qs(0, 1, 2, 3)
    p = _poly.interpolate(xs, [(2 * x - 1) * (x + 3) * x for x in xs])
    assert p == qs(2, 5, -3, 0)
    assert sorted(_poly.rational_roots(p)) == [Q(-3), Q(0), Q(1, 2)]
