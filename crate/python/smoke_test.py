"""Smoke test for the compiled extension module.

Build it with `cargo build -p ancillary-python --release`, then run
`python3 python/smoke_test.py`. The loader looks for the shared library in
target/release and target/debug unless ANCILLARY_LIB points at it.
"""

import importlib.machinery
import importlib.util
import os
import pathlib
import sys
from fractions import Fraction

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    candidates = [os.environ.get("ANCILLARY_LIB")] + [
        str(ROOT / "target" / profile / name)
        for profile in ("release", "debug")
        for name in ("libancillary.so", "libancillary.dylib", "ancillary.pyd")
    ]
    for path in filter(None, candidates):
        if os.path.exists(path):
            loader = importlib.machinery.ExtensionFileLoader("ancillary", path)
            spec = importlib.util.spec_from_loader("ancillary", loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    sys.exit("extension module not built; run cargo build -p ancillary-python")


def main():
    anc = load()

    m = anc.Model.example1("1/100")
    assert m.probabilities()[0][0] == Fraction(27, 200)
    assert anc.mss(m) == "1|2|3|4|5|6|7"

    c = anc.classify(m)
    assert sorted(c["maximal"]) == ["1,2|3,4|5,6|7", "1,3|2,4|5,6|7"]
    assert c["laminal"] == "1,2,3,4|5,6|7"
    assert len(c["minimal"]) == 5
    assert c["stable"] == c["minimal"]
    assert not anc.is_stable(m, "1,3,5,6|2,4|7")

    mixed = m.mixture("1,2|3,4|5,6|7", [Fraction(7, 100), "13/100", "27/100", "53/100"])
    p = mixed.probabilities()
    block = [0, 2, 4, 5]
    lr = sum(p[0][x] for x in block) / sum(p[1][x] for x in block)
    assert lr == Fraction(1916, 2015)

    e = anc.evidence_sc(m, "5")
    assert e["contour"] == ["5", "6"]
    assert e["probabilities"] == [[Fraction(1, 3), Fraction(2, 3)], [Fraction(2, 3), Fraction(1, 3)]]
    assert e["idempotent"]

    assert anc.sc_equivalence(m, "5", m, "5") == list(range(7))
    assert anc.s_equivalence(m, "5", m, "6") is None

    degenerate = anc.Model.example1(0, allow_degenerate=True)
    assert anc.mss(degenerate) == "1,4,6|2,3|5|7"

    report, csvs, ok = anc.reproduce("all", "1/100")
    assert ok and "FAIL" not in report
    assert [name for name, _ in csvs] == ["figure1.csv"]

    try:
        anc.Model.example1("1/10")
    except ValueError:
        pass
    else:
        raise AssertionError("out-of-range epsilon accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
