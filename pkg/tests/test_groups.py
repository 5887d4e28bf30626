import json

import pytest

from hbv.groups import FiniteGroup, GroupError, PRESET_NAMES, preset


def test_presets_valid():
    for name in PRESET_NAMES:
        g = preset(name)
        assert g.table[g.identity] == list(range(g.order))
        for i in range(g.order):
            assert g.table[i][g.inv[i]] == g.identity


def test_orders():
    assert [preset(n).order for n in ("Z2", "Z3", "Z4", "Z6", "S3", "D4", "Q8")] == \
        [2, 3, 4, 6, 6, 8, 8]


def test_conjugacy_classes():
    assert len(preset("S3").conjugacy_classes()) == 3
    assert len(preset("D4").conjugacy_classes()) == 5
    assert len(preset("Q8").conjugacy_classes()) == 5
    assert len(preset("Z6").conjugacy_classes()) == 6


def test_centralizers_d4():
    g = preset("D4")
    orders = sorted(
        g.centralizer(cls[0]).order for cls in g.conjugacy_classes()
    )
    assert orders == [4, 4, 4, 8, 8]


def test_abelian():
    assert preset("Z6").is_abelian()
    assert not preset("S3").is_abelian()
    assert not preset("Q8").is_abelian()


def test_json_roundtrip(tmp_path):
    g = preset("S3")
    path = tmp_path / "s3.json"
    path.write_text(json.dumps(g.to_json()))
    g2 = FiniteGroup.load(path)
    assert g2.table == g.table and g2.names == g.names


def test_malformed_tables_rejected():
    with pytest.raises(GroupError):
        FiniteGroup(["a", "b"], [[0, 0], [1, 1]])  # not a Latin square
    # subtraction table mod 5: a Latin square but not a group
    sub5 = [[(i - j) % 5 for j in range(5)] for i in range(5)]
    with pytest.raises(GroupError):
        FiniteGroup(list("abcde"), sub5)


def test_unknown_preset():
    with pytest.raises(GroupError):
        preset("Z5")
