"""Exercises the geofig_py extension end to end."""

import tempfile
import xml.etree.ElementTree as ET
from pathlib import Path

import geofig_py as g


def main():
    cat = g.Catalog.reference()
    assert len(cat) == 24, cat
    assert g.Catalog.parse(cat.to_text()).clause_ids() == cat.clause_ids()
    assert cat.difficulty("triangle") == "easy"

    assert g.parse_instance("midpoint  M A B") == "midpoint M A B"
    try:
        g.parse_instance("midpoint M A")
    except ValueError:
        pass
    else:
        raise AssertionError("short instance accepted")

    group = g.select_group("hard", seed=7)
    assert 3 <= len(group) <= 5, group

    out = g.render_group(["triangle A B C", "midpoint M A B", "angle_annot A B D 60"], seed=3)
    ET.fromstring(out["svg"])
    assert "60°" in out["caption"] and out["max_residual"] <= 1e-9
    assert set(out["points"]) >= {"A", "B", "C", "M", "D"}

    record, svg = g.generate_sample("medium", seed=1, index=5)
    assert record["id"] == "000005" and len(record["clauses"]) == 2
    ET.fromstring(svg)

    with tempfile.TemporaryDirectory() as tmp:
        report = g.build(output_dir=tmp, counts=(3, 6, 6), seed=11, workers=2)
        assert report["generated"] == 15, report
        manifest = Path(tmp) / "manifest.jsonl"
        stats = g.stats(manifest)
        assert stats["samples"] == 15
        assert sum(c["total"] for c in stats["clauses"]) == stats["total_instances"]
        assert g.verify(manifest) == []
        assert g.build(output_dir=tmp, counts=(3, 6, 6), seed=11)["skipped"] == 15

    print("smoke test passed")


if __name__ == "__main__":
    main()
