"""Smoke test for the stp12 Python extension.

Build the extension and run:

    cargo build -p stp12-py --release --features extension-module
    python3 python/smoke_test.py

If `stp12` is not importable, the freshly built library under target/release
is copied into a temporary directory as `stp12.so` and imported from there.
"""

import importlib
import itertools
import random
import shutil
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load():
    try:
        return importlib.import_module("stp12")
    except ImportError:
        pass
    built = ROOT / "target" / "release" / "libstp12_py.so"
    if not built.exists():
        sys.exit(f"stp12 is not importable and {built} does not exist; build it first")
    tmp = Path(tempfile.mkdtemp(prefix="stp12-"))
    shutil.copy(built, tmp / "stp12.so")
    sys.path.insert(0, str(tmp))
    return importlib.import_module("stp12")


stp12 = load()

P3 = """SECTION Graph
Nodes 3
Edges 2
E 1 2 1
E 2 3 1
END
SECTION Terminals
Terminals 2
T 1
T 3
END
EOF
"""


def brute_force_opt(inst):
    """Independent optimum: cheapest spanning tree over terminals plus every
    subset of non-terminals, with distances 1 (edge) and 2 (non-edge)."""
    edges = set(inst.edges)
    steiner = [v for v in range(inst.node_count) if v not in set(inst.terminals)]
    best = None
    for r in range(len(steiner) + 1):
        for extra in itertools.combinations(steiner, r):
            nodes = list(inst.terminals) + list(extra)
            pairs = sorted(
                (1 if (min(a, b), max(a, b)) in edges else 2, a, b)
                for a, b in itertools.combinations(nodes, 2)
            )
            parent = {v: v for v in nodes}

            def find(v):
                while parent[v] != v:
                    parent[v] = parent[parent[v]]
                    v = parent[v]
                return v

            cost = 0
            for w, a, b in pairs:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb
                    cost += w
            best = cost if best is None else min(best, cost)
    return best


def random_instance(rng, n, p, r):
    edges = [(a, b) for a, b in itertools.combinations(range(n), 2) if rng.random() < p]
    return stp12.Instance(n, edges, rng.sample(range(n), r))


def test_p3():
    inst = stp12.parse_stp(P3)
    assert inst.node_count == 3 and inst.terminals == [0, 2]
    assert inst.distance(0, 1) == 1 and inst.distance(0, 2) == 2
    for solve in (stp12.rayward_smith, stp12.six_phase, stp12.optimum):
        cost, conns = solve(inst)
        assert cost == 2 and inst.is_valid(conns) and inst.cost(conns) == 2
    again = stp12.Instance.from_stp(inst.to_stp("p3"))
    assert again.edges == inst.edges


def test_ratios_against_independent_optimum():
    rng = random.Random(11)
    for _ in range(60):
        inst = random_instance(rng, rng.randint(2, 9), rng.choice([0.2, 0.35, 0.5]), 0)
        n = inst.node_count
        inst = stp12.Instance(n, inst.edges, rng.sample(range(n), rng.randint(1, min(n, 5))))
        opt = brute_force_opt(inst)
        assert stp12.brute_force(inst)[0] == opt
        assert stp12.dreyfus_wagner(inst)[0] == opt
        for mode in ("cheapest", "strict-paper"):
            rs, conns = stp12.rayward_smith(inst, mode)
            assert inst.is_valid(conns) and inst.cost(conns) == rs
            assert Fraction(rs) <= Fraction(4, 3) * opt
            sp, conns = stp12.six_phase(inst, mode)
            assert inst.is_valid(conns) and inst.cost(conns) == sp
            assert Fraction(sp) <= Fraction(5, 4) * opt


def test_generators():
    a = stp12.generate("random-gnp:n=10,p=3/10,r=4", seed=5)
    b = stp12.generate("random-gnp:n=10,p=3/10,r=4,seed=5")
    assert a.edges == b.edges and a.terminals == b.terminals
    bp = stp12.generate("bp-adversarial:depth=5")
    assert stp12.optimum(bp)[0] == 14
    assert stp12.rayward_smith(bp)[0] == 18
    try:
        stp12.optimum(stp12.generate("bp-adversarial:depth=7"))
    except stp12.CapExceededError:
        pass
    else:
        raise AssertionError("cap not enforced")


def test_cost_index():
    for t in range(2, 8):
        for e in range(1, 10):
            assert stp12.cost_index(t, e) == Fraction(e, t - 1) - 1
    try:
        stp12.cost_index(1, 1)
    except ValueError:
        pass
    else:
        raise AssertionError("accepted a single terminal")


def test_matching_against_networkx():
    import networkx as nx

    rng = random.Random(3)
    for _ in range(100):
        n = rng.randint(1, 12)
        edges = [(a, b) for a, b in itertools.combinations(range(n), 2) if rng.random() < 0.3]
        got = stp12.maximum_matching(n, edges)
        used = [v for pair in got for v in pair]
        assert len(used) == len(set(used))
        assert all(pair in edges for pair in got)
        g = nx.Graph(edges)
        assert len(got) == len(nx.max_weight_matching(g, maxcardinality=True))


def test_normalize():
    rng = random.Random(8)
    for _ in range(40):
        inst = random_instance(rng, 9, 0.3, 0)
        inst = stp12.Instance(9, inst.edges, rng.sample(range(9), 4))
        opt, witness = stp12.optimum(inst)
        for mode in ("s3", "s4"):
            out = stp12.normalize(inst, witness, mode)
            assert out["normal"]
            assert inst.is_valid(out["connections"])
            assert out["cost"] == inst.cost(out["connections"]) >= opt
    comet = stp12.generate("comet-chain:a=1,b=3,count=1")
    out = stp12.normalize(comet, stp12.optimum(comet)[1], "s4")
    assert out["histogram"] == {"comet(1,3)": 1}


def test_errors():
    for bad in ("SECTION Graph\nNodes 2\nE 1 2 9\nEND\nEOF\n", "garbage"):
        try:
            stp12.parse_stp(bad)
        except stp12.StpError:
            pass
        else:
            raise AssertionError(f"parsed {bad!r}")
    try:
        stp12.Instance(3, [(0, 3)], [0])
    except ValueError:
        pass
    else:
        raise AssertionError("accepted an out-of-range edge")


if __name__ == "__main__":
    tests = [(name, fn) for name, fn in sorted(globals().items()) if name.startswith("test_")]
    for name, fn in tests:
        fn()
        print(f"ok {name}")
    print(f"{len(tests)} passed")
