import pytest

from nilkilling import catalog
from nilkilling.errors import ParseError
from nilkilling.textio import dumps, from_algebra, parse

H1 = """\
# Heisenberg
dim 3
basis x y z
bracket x y = z
metric identity
tensor S
1 0 0
0 1 0
0 0 5/2
"""


def test_parse_h1():
    af = parse(H1)
    alg, tensors = af.build()
    assert alg.names == ["x", "y", "z"]
    assert alg.bracket([1, 0, 0], [0, 1, 0])[2] == 1
    assert str(tensors["S"][2, 2]) == "5/2"


def test_default_names_and_signs():
    af = parse("dim 3\nbracket e2 e1 = -2 e3\n")
    assert af.names == ["e1", "e2", "e3"]
    assert af.brackets == {(0, 1): {2: 2}}


def test_multi_term_rhs():
    af = parse("dim 4\nbracket e1 e2 = e3 - 1/2 e4\n")
    rhs = af.brackets[(0, 1)]
    assert rhs[2] == 1 and str(rhs[3]) == "-1/2"


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("", 1, "empty"),
        ("basis a b\n", 1, "first directive"),
        ("dim 3\nfoo\n", 2, "unknown directive"),
        ("dim 3\nbracket e1 e9 = e3\n", 2, "unknown basis element"),
        ("dim 3\nbracket e1 e2 = 0.5 e3\n", 2, "not a rational"),
        ("dim 3\nbracket e1 e1 = e3\n", 2, "itself"),
        ("dim 2\ntensor S\n1 2\n3 1\n", 2, "not symmetric"),
        ("dim 2\ntensor S\n1 0\n", 4, "file ended"),
        ("dim 2\nmetric gram\n1 0\n0 1\nmetric identity\n", 5, "twice"),
        ("dim 3\nbracket e1 e2 = e3\nbracket e2 e1 = e3\n", 3, "twice"),
    ],
)
def test_parse_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert exc.value.line == line
    assert fragment in str(exc.value)


def test_gram_metric_forces_float():
    af = parse("dim 3\nbracket e1 e2 = e3\nmetric gram\n2 0 0\n0 1 0\n0 0 1\n")
    alg, _ = af.build()
    assert alg.mode == "float"


@pytest.mark.parametrize("name", catalog.VALID_NAMES + ["solvable-counterexample", "heisenberg-5"])
def test_round_trip_is_lossless(name):
    text = catalog.emit(name)
    af = parse(text)
    assert dumps(af, header=f"{name}: {catalog.describe(name)}") == text


def test_from_algebra_round_trip():
    alg, tensors = catalog.load("dim8-double").build()
    af = from_algebra(alg, tensors)
    alg2, tensors2 = parse(dumps(af)).build()
    assert (alg2.c == alg.c).all()
    assert (tensors2["S"] == tensors["S"]).all()


def test_emit_dim6_brackets():
    text = catalog.emit("dim6-free2step")
    assert "bracket e1 e2 = 1 e4" in text
    assert "bracket e1 e3 = 1 e5" in text
    assert "bracket e2 e3 = 1 e6" in text


def test_dim8_double_matches_the_described_algebra():
    alg, tensors = catalog.load("dim8-double").build()
    names = alg.names
    assert names == ["e1", "e2", "e3", "e4", "e5", "e6", "z1", "z2"]
    b = {(names[i], names[j]): {names[k]: c for k, c in ((k, alg.c[i, j, k]) for k in range(8)) if c != 0} for i, j, _, _ in alg.terms}
    assert b[("e1", "e2")] == {"z1": 1}
    assert b[("e4", "e5")] == {"z1": 1}
    assert b[("e2", "e3")] == {"z2": 1}
    assert b[("e5", "e6")] == {"z2": 1}
    assert len(b) == 4


def test_double_from_generator_file(tmp_path):
    gen = tmp_path / "gens.txt"
    gen.write_text("dim 3\ngenerator A\n0 -1 0\n1 0 0\n0 0 0\ngenerator B\n0 0 0\n0 0 -1\n0 1 0\n")
    af = catalog.lookup(f"double({gen})")
    alg, tensors = af.build()
    ref, ref_t = catalog.load("dim8-double").build()
    assert (alg.c == ref.c).all()
    assert (tensors["S"] == ref_t["S"]).all()


def test_unknown_catalog_name():
    assert catalog.lookup("nothing") is None
    with pytest.raises(KeyError):
        catalog.emit("nothing")
