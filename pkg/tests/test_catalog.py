import ast
from pathlib import Path

import pytest

from stgalerkin.catalog import (ACCEPTANCE, CATALOG, CATALOG_BY_SCHEME, COMPANIONS, h_rate,
                                render_catalog, tau_rate)
from stgalerkin.methods import SCHEMES

ROOT = Path(__file__).resolve().parents[1]
IDS = [str(i) for i in range(1, 13)] + ["E"] + [str(i) for i in range(13, 20)]


def _test_names():
    names = set()
    for path in (ROOT / "tests").glob("test_*.py"):
        tree = ast.parse(path.read_text())
        names |= {n.name for n in tree.body if isinstance(n, ast.FunctionDef)}
    return names


def test_every_criterion_listed_once_in_order():
    assert [c.cid for c in ACCEPTANCE] == IDS


def test_every_listed_test_exists():
    names = _test_names()
    for c in ACCEPTANCE + COMPANIONS:
        assert c.test in names, c.test


def test_catalog_covers_every_scheme():
    assert {e.scheme for e in CATALOG} == set(SCHEMES)


def test_rates_for_named_rows():
    assert tau_rate("WaveWalkington", "LinfL2@dt", 2) == 2
    assert tau_rate("WaveWalkington", "LinfH1semi", 2) == 3
    assert tau_rate("HeatJamet", "LinfL2", 0) == 1
    assert h_rate("HeatJamet", "LinfL2", 2) == 3
    assert tau_rate("WaveJohnson", "LinfL2@v", 3) == 4
    assert "no CFL" in CATALOG_BY_SCHEME["WaveJohnson"].notes
    assert "C_CFL" in CATALOG_BY_SCHEME["WaveVanilla"].notes
    with pytest.raises(KeyError):
        tau_rate("WaveJohnson", "LinfL2@dt", 1)


def test_generated_document_is_current():
    assert (ROOT / "docs" / "method_catalog.md").read_text() == render_catalog()
    text = render_catalog()
    for c in ACCEPTANCE:
        assert sum(line.startswith(f"| {c.cid} | {c.suite}") for line in text.splitlines()) == 1
