import pytest

from retractkit.catalog import Catalog, CatalogError, parse_gens_definition, resolve, shipped_catalog
from retractkit.morphisms import are_isomorphic


def test_builtin_syntax():
    assert resolve("S(4)").order == 24
    assert resolve("S4") is resolve("S(4)")
    assert resolve("Dih4").order == 8
    assert resolve("Q8").order == 8
    assert resolve("power(S3, 2)").order == 36
    assert resolve("direct(S4, C3)").name == "direct(S4,C3)"


@pytest.mark.parametrize("bad", ["Foo", "S(", "direct(S4)", "S(4", "power(S4)", "S4 x"])
def test_bad_refs(bad):
    with pytest.raises(CatalogError):
        resolve(bad)


def test_catalog_file():
    cat = Catalog.from_text("""
    # a comment
    G = gens(4): (1 2), (1 2 3 4)
    H = direct(G, C3)
    """)
    assert cat.resolve("G").order == 24
    assert cat.resolve("H").order == 72


def test_catalog_errors():
    with pytest.raises(CatalogError):
        Catalog.from_text("A = B\nB = A\n")
    with pytest.raises(CatalogError):
        Catalog.from_text("A = S3\nA = S4\n")
    with pytest.raises(CatalogError):
        Catalog.from_text("just text\n")


def test_gens_definition():
    assert parse_gens_definition("gens(3): (1 2 3)").order == 3
    assert parse_gens_definition("gens(1):").order == 1


def test_shipped_round_trip():
    cat = shipped_catalog()
    again = Catalog.from_text(cat.to_text())
    assert again.definitions == cat.definitions
    for name in cat.definitions:
        g, h = cat.resolve(name), again.resolve(name)
        assert g.order == h.order
        assert are_isomorphic(g, h) is not None
