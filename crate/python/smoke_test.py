#!/usr/bin/env python3
"""Smoke test for the ietlab_py extension module.

Builds nothing itself: run `cargo build -p ietlab-py` (or --release) first.
The script locates the compiled library under target/, loads it, and walks
the main types and operations end to end.
"""

import json
import shutil
import sys
import tempfile
from pathlib import Path


def load_module():
    root = Path(__file__).resolve().parent.parent
    candidates = [
        root / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libietlab_py.so", "ietlab_py.so")
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("build the extension first: cargo build -p ietlab-py")
    staging = Path(tempfile.mkdtemp(prefix="ietlab-py-"))
    shutil.copy2(built, staging / "ietlab_py.so")
    sys.path.insert(0, str(staging))
    import ietlab_py

    return ietlab_py


def main():
    m = load_module()

    # --- spec construction and the worked lamplighter example ---
    lamp = m.Spec(4, ["(1,3)"])
    assert lamp.q == 4 and lamp.s == 1 and lamp.qgens == ["(1,3)"]
    report = lamp.analyze()
    assert report["lamplighter"] == {"L": [2], "k": 1}
    assert report["solvable"] == {"dl": 2}
    assert report["abelianization"] == {"free_rank": 1, "F": [2]}

    # JSON round trip matches the CLI wire format.
    again = m.Spec.from_json(lamp.to_json())
    assert json.loads(again.to_json()) == json.loads(lamp.to_json())

    # --- word algebra: [R_α, E_τ] is torsion with a two-piece profile ---
    rot = m.Word.rotation(lamp, 1)
    gen = m.Word.generator(lamp, 0)
    comm = m.Word.commutator(rot, gen)
    assert len(comm) == 4
    assert comm.is_torsion() and comm.torsion_order() == 2
    # Closed form: trivial near 0 (σ² commutes with (1,3)), a double swap
    # beyond the fractional offset of α₁.
    profile = comm.profile()
    assert profile == [("0/1", "()"), ("-1/4+a1", "(1,3)(2,4)")]
    rational, coefficients = rot.translation()
    assert coefficients == [1] and rational != "0"
    assert (comm * comm.inverse()) == m.Word.identity(lamp)

    # --- witness search resolves the 3-solvable finite part ---
    pair = m.Spec(4, ["(1,2)", "(3,4)"])
    assert pair.analyze()["solvable"] == {"dl": 3}
    witness = pair.witness("(1,2)(3,4)")
    assert witness is not None and witness.is_torsion()
    assert witness.profile() == [("0/1", "(1,2)(3,4)")]

    # --- non-isomorphism evidence ---
    evidence = m.compare(lamp, m.Spec(5, ["(1,2)"], s=2))
    kinds = {e["kind"] for e in evidence}
    assert "free-rank" in kinds
    assert m.compare(lamp, lamp) == []

    # --- alternate realization yields the identical report ---
    over_sqrt3 = m.Spec(4, ["(1,3)"], radicands=[3])
    alt = over_sqrt3.analyze()
    assert {k: v for k, v in alt.items() if k != "spec"} == {
        k: v for k, v in report.items() if k != "spec"
    }

    # --- constructions and verification suites ---
    level = m.tower_level(3)
    assert level["order"] == "128" and level["derived_length"] == 3
    names = m.catalog_names()
    assert "lamplighter-q4" in names and "nvs-A5" in names
    entry = m.catalog_spec("metabelian-q3")
    assert entry.analyze()["solvable"] == {"dl": 2}

    outcomes = m.verify("wreath-ab")
    assert all(o["passed"] for o in outcomes)

    # Caps surface as RuntimeError, schema problems as ValueError.
    try:
        pair.analyze(closure_cap=2)
    except Exception:
        raise AssertionError("capped analyze should return a partial report")
    assert pair.analyze(closure_cap=2)["incomplete"][0]["stage"] == "abelianization"
    try:
        m.Spec(4, ["(1,9)"])
        raise AssertionError("bad permutation must raise")
    except ValueError:
        pass

    print("smoke test passed")


if __name__ == "__main__":
    main()
