"""Smoke test for the hyperberge extension module.

Run after `maturin develop -m crates/python/Cargo.toml`, or point
HYPERBERGE_LIB at a built libhyperberge.so.
"""

import importlib.machinery
import importlib.util
import json
import os
import sys


def load():
    path = os.environ.get("HYPERBERGE_LIB")
    if not path:
        import hyperberge

        return hyperberge
    loader = importlib.machinery.ExtensionFileLoader("hyperberge", path)
    spec = importlib.util.spec_from_loader("hyperberge", loader)
    module = importlib.util.module_from_spec(spec)
    loader.exec_module(module)
    return module


def main():
    hb = load()

    k4 = hb.Hypergraph.complete(4, 3)
    assert len(k4) == 4 and k4.n == 4 and k4.r == 3
    cycle = hb.find_cycle(k4)
    assert cycle is not None and cycle.kind == "cycle"
    assert hb.verify_certificate(k4, cycle) == []

    ke = hb.Hypergraph.clique_plus_pendant(6, 3)
    assert hb.find_cycle(ke) is None
    path = hb.find_path(ke)
    assert path is not None and len(path.vertices) == 6
    assert hb.brute_force_oracle(ke, "cycle") is False

    kv = hb.Hypergraph.clique_plus_isolated(6, 3)
    assert hb.find_path(kv) is None
    assert hb.Hypergraph.parse(kv.to_text()) == kv
    assert hb.Hypergraph.parse(kv.to_json()) == kv

    bad = hb.Certificate.from_json(json.dumps({"kind": "cycle", "vertices": [0, 1, 2], "edges": [[0, 1, 2]] * 3}))
    assert any(v["violation"] == "repeated_edge" for v in hb.verify_certificate(k4, bad))

    est = hb.spectral_radius(hb.Hypergraph.complete(5, 3))
    assert est["lower"] <= 6.0 + 1e-12 and est["upper"] >= 6.0 - 1e-12
    assert est["upper"] - est["lower"] <= 1e-8
    assert hb.exceeds_threshold(ke, 6.0) == "certified_above"
    assert abs(hb.bai_lu_bound(3, 10) - 6.0) < 1e-9
    assert hb.binom(28, 9) == 6906900
    assert hb.threshold("edge_cycle", 6, 3) == 10
    assert hb.level_size(6, 4, 6) == 5005
    assert hb.check_convexity_chain(7, 3)["lines"] == [16, 20, 20, 20]

    try:
        hb.Hypergraph(5, 3, [[0, 1, 7]])
    except ValueError:
        pass
    else:
        raise AssertionError("out-of-range vertex accepted")

    report = hb.verify_lemma(5)
    assert report["pass"] is True
    assert [level["nonhamiltonian"] for level in report["levels"]] == [30, 0]

    print("python smoke test: ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
