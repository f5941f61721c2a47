#!/usr/bin/env python3
"""Smoke test for the _syncong extension module.

Builds nothing itself: expects `cargo build -p syncong-python` (or
`--release`) to have produced the cdylib already, copies it next to a
temporary directory under the importable name, and exercises the three
classes plus the module functions.

Run from anywhere:  python3 python/smoke_test.py
"""

import json
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def import_module():
    candidates = [
        REPO / "target" / "debug" / "lib_syncong.so",
        REPO / "target" / "release" / "lib_syncong.so",
    ]
    built = [p for p in candidates if p.exists()]
    if not built:
        sys.exit("build the extension first: cargo build -p syncong-python")
    src = max(built, key=lambda p: p.stat().st_mtime)
    tmp = Path(tempfile.mkdtemp(prefix="syncong-smoke-"))
    shutil.copy(src, tmp / "_syncong.so")
    sys.path.insert(0, str(tmp))
    import _syncong

    return _syncong


def cyclic_text(n):
    flat = [(i + j) % n for i in range(n) for j in range(n)]
    lines = [f"algebra z{n}", f"carrier {n}", "op add 2"]
    for i in range(0, len(flat), 10):
        lines.append(" ".join(map(str, flat[i : i + 10])))
    return "\n".join(lines) + "\n"


ABSTAR = """dfa abstar
alphabet a b
states 3
initial 0
accepting 0
1 2
2 0
2 2
"""

TOWER = (
    "system tower2\ndepth 3\n"
    + cyclic_text(2)
    + cyclic_text(4)
    + cyclic_text(8)
    + "map 2 1\n0 1 0 1\nmap 3 2\n0 1 2 3 0 1 2 3\n"
)


def check_algebra(m):
    z4 = m.Algebra.parse(cyclic_text(4) + "subset evens 0 2\n")
    assert z4.name == "z4" and z4.carrier == 4
    assert z4.signature() == [("add", 2)]
    assert z4.subsets() == [("evens", [0, 2])]
    assert z4.eval("add(add(x,y),x)", {"x": 1, "y": 2}) == 0

    assert z4.syntactic_classes([0, 2]) == [[0, 2], [1, 3]]
    quotient, eta = z4.syntactic_quotient([0, 2])
    assert quotient.carrier == 2 and eta == [0, 1, 0, 1]
    explicit, proj = z4.quotient([[0, 2], [1, 3]])
    assert explicit.carrier == 2 and proj == eta

    assert len(z4.translations()) == 4
    detset = z4.determining_set([0, 2])
    minimal = z4.minimal_determining_set([0, 2])
    assert 0 < len(minimal) <= len(detset)

    assert z4.omega_power(1) == 0
    assert z4.omega_power(1, factorial=3) == 2  # 3! = 6, 6 mod 4

    report = json.loads(z4.determination_report([0, 2]))
    assert len(report["conditions"]) == 10
    assert report["class_count"] == 2

    splits = z4.linearize("add(add(x1,x1),x2)")
    assert len(splits) == 2

    def rejects(f, *args, **kwargs):
        try:
            f(*args, **kwargs)
        except ValueError:
            return True
        return False

    assert rejects(z4.syntactic_classes, [0, 9])
    assert rejects(m.Algebra.parse, "algebra broken\n")
    print("algebra ok")


def check_dfa(m):
    d = m.Dfa.parse(ABSTAR)
    assert d.name == "abstar" and d.states == 3
    assert d.alphabet == ["a", "b"]
    assert d.accepts([]) and d.accepts(["a", "b"])
    assert not d.accepts(["b"]) and not d.accepts(["a", "a"])
    assert d.minimize().states == 3
    assert d.serialize() == ABSTAR

    monoid, accepted = d.syntactic_monoid()
    assert monoid.carrier == 6
    assert monoid.name == "abstar_synmon"
    assert ("mul", 2) in monoid.signature() and ("e", 0) in monoid.signature()
    assert len(accepted) == 2  # the empty word's class and ab's class
    print("dfa ok")


def check_system(m):
    s = m.System.parse(TOWER)
    assert s.name == "tower2" and s.depth == 3
    assert s.is_valid()
    assert json.loads(s.diagnostics())["checks"][0]["homomorphism"]
    assert s.level(2).carrier == 4
    assert s.projection(3, 1) == [0, 1, 0, 1, 0, 1, 0, 1]
    assert s.separates_at([1, 3, 7], [1, 3, 3]) == 3
    assert s.separates_at([1, 3, 7], [1, 3, 7]) is None

    recognizer, image = s.recognize(2, [0, 2])
    assert recognizer.carrier == 2 and image == [0]

    q = s.quotient(
        [
            [[0], [1]],
            [[0, 2], [1, 3]],
            [[0, 2, 4, 6], [1, 3, 5, 7]],
        ]
    )
    assert q.depth == 3
    assert all(q.level(k).carrier == 2 for k in (1, 2, 3))
    assert q.is_valid()
    print("system ok")


def check_functions(m):
    terms = m.classical_terms("mul")
    assert terms[0] == "x1" and "mul(x1,x2)" in terms
    assert len(terms) == 4
    print("functions ok")


def main():
    m = import_module()
    check_algebra(m)
    check_dfa(m)
    check_system(m)
    check_functions(m)
    print("smoke test passed")


if __name__ == "__main__":
    main()
