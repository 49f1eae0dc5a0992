import random

import pytest

from quadol.netlist import (BlifError, LutNetwork, LutNode, NetlistError,
                            lut_count, normalize_support, parse_blif,
                            parse_blif_file, topological_order, validate,
                            write_blif)
from quadol.truthtab import TruthTable

from conftest import fixture, random_network
from oracles import scalar_outputs

SMALL = """\
# two-bit and/xor demo
.model demo
.inputs a b c
.outputs y z
.names a b t
11 1
.names t c y   # y = t & ~c
10 1
.names a b z \\

10 1
01 1
.end
"""


def test_parse_small():
    net = parse_blif(SMALL)
    assert net.name == "demo"
    assert net.primary_inputs == ("a", "b", "c")
    assert net.primary_outputs == ("y", "z")
    assert set(net.nodes) == {"t", "y", "z"}
    # column order: first fanin is table input 0
    assert net.nodes["t"].function.bits == 0b1000          # and
    assert net.nodes["y"].function.bits == 0b0010          # t & ~c
    assert net.nodes["z"].function.bits == 0b0110          # xor
    assert net.nodes["z"].fanins == ("a", "b")


def test_parse_offset_and_constants():
    net = parse_blif("""\
.model m
.inputs a b
.outputs y k0 k1
.names a b y
0- 0
-0 0
.names k0
.names k1
1
.end
""")
    assert net.nodes["y"].function.bits == 0b1000  # complement of the off-set
    assert net.nodes["k0"].function.bits == 0
    assert net.nodes["k1"].function.bits == 1
    assert net.nodes["k1"].fanins == ()


def test_parse_errors_carry_line_numbers():
    cases = [
        (".model a\n.model b\n.end", "multiple .model"),
        (".model m\n.inputs a\n.outputs y\n.latch a y\n.end", "sequential"),
        (".model m\n.subckt foo\n.end", ".subckt"),
        (".model m\n.wire x\n.end", "unsupported directive"),
        (".model m\n.inputs a\n.outputs y\n.names a y\n2 1\n.end", "malformed cube"),
        (".model m\n.inputs a\n.outputs y\n.names a y\n11 1\n.end", "cube width"),
        (".model m\n.inputs a\n.outputs y\n.names a y\n1 1\n0 0\n.end", "mixes"),
        (".model m\n.inputs a\n.outputs y\n1 1\n.end", "outside .names"),
        (".model m\n.inputs a a\n.outputs y\n.names a y\n1 1\n.end",
         "multiply driven"),
        (".model m\n.inputs a\n.outputs y\n.names a a y\n11 1\n.end",
         "duplicate fanins"),
        (".model m\n.inputs a b c d e f g\n.outputs y\n.names a b c d e f g y\n"
         "1111111 1\n.end", "not LUT-6"),
    ]
    for text, needle in cases:
        with pytest.raises(BlifError) as err:
            parse_blif(text)
        assert needle in str(err.value)


def test_parse_rejects_broken_structure():
    with pytest.raises(BlifError, match="no driver"):
        parse_blif(".model m\n.inputs a\n.outputs y\n.names a q y\n11 1\n.end")
    with pytest.raises(BlifError, match="no driver"):
        parse_blif(".model m\n.inputs a\n.outputs y\n.end")
    with pytest.raises(BlifError, match="cycle"):
        parse_blif(".model m\n.inputs a\n.outputs y\n"
                   ".names a q y\n11 1\n.names a y q\n11 1\n.end")


def test_node_validation():
    t2 = TruthTable.constant(2, False)
    with pytest.raises(NetlistError, match="fanins but table"):
        LutNode("y", ("a",), t2)
    with pytest.raises(NetlistError, match="duplicate"):
        LutNode("y", ("a", "a"), t2)
    with pytest.raises(NetlistError, match="own fanin"):
        LutNode("y", ("a", "y"), t2)


def test_write_parse_roundtrip_preserves_functions():
    rng = random.Random(101)
    for _ in range(20):
        net = random_network(rng)
        back = parse_blif(write_blif(net))
        assert back.name == net.name
        assert back.primary_inputs == net.primary_inputs
        assert back.primary_outputs == net.primary_outputs
        assert set(back.nodes) == set(net.nodes)
        for name, node in net.nodes.items():
            assert back.nodes[name].fanins == node.fanins
            assert back.nodes[name].function == node.function
        # and the emitted text is stable
        assert write_blif(back) == write_blif(net)


def test_write_wraps_long_lines():
    pis = tuple(f"very_long_signal_name_{k}" for k in range(8))
    nodes = {"y": LutNode("y", pis[:6], TruthTable.constant(6, True))}
    net = LutNetwork("m", pis, ("y",), nodes)
    text = write_blif(net)
    assert all(len(line) <= 77 for line in text.splitlines())
    assert parse_blif(text).nodes["y"].fanins == pis[:6]


def test_topological_order_is_stable_and_correct():
    net = parse_blif(SMALL)
    order = [n.output for n in topological_order(net)]
    assert order.index("t") < order.index("y")
    assert order == sorted(order, key=lambda s: (s != "t", s))  # t, y, z here
    cyc = LutNetwork("m", ("a",), ("x",), {
        "x": LutNode("x", ("q",), TruthTable.variable(1, 0)),
        "q": LutNode("q", ("x",), TruthTable.variable(1, 0)),
    })
    with pytest.raises(NetlistError, match="cycle"):
        topological_order(cyc)


def test_validate_catches_missing_po_driver():
    net = LutNetwork("m", ("a",), ("y", "zz"), {
        "y": LutNode("y", ("a",), TruthTable.variable(1, 0))})
    with pytest.raises(NetlistError, match="zz"):
        validate(net)


def test_lut_count_with_merges():
    net = parse_blif(SMALL)
    assert lut_count(net) == 3
    assert lut_count(net, (("t", "z"),)) == 2
    with pytest.raises(NetlistError, match="conflicting"):
        lut_count(net, (("t", "z"), ("z", "y")))
    with pytest.raises(NetlistError, match="unknown"):
        lut_count(net, (("t", "nope"),))


def test_normalize_support_drops_padding_inputs():
    pad = TruthTable.variable(3, 0)  # ignores inputs 1 and 2
    net = LutNetwork("m", ("a", "b", "c"), ("y",),
                     {"y": LutNode("y", ("a", "b", "c"), pad)})
    norm = normalize_support(net)
    assert norm.nodes["y"].fanins == ("a",)
    assert norm.nodes["y"].function.n == 1
    rng = random.Random(3)
    for _ in range(10):
        net = random_network(rng)
        norm = normalize_support(net)
        validate(norm)
        for vec in range(1 << len(net.primary_inputs)):
            env = {pi: (vec >> i) & 1
                   for i, pi in enumerate(net.primary_inputs)}
            assert scalar_outputs(net, env) == scalar_outputs(norm, env)


def test_with_nodes_guards():
    net = parse_blif(SMALL)
    with pytest.raises(NetlistError, match="unknown node"):
        net.with_nodes({"nope": LutNode("nope", (), TruthTable.constant(0, False))})
    with pytest.raises(NetlistError, match="mismatch"):
        net.with_nodes({"t": LutNode("other", (), TruthTable.constant(0, False))})


def test_fixture_files_parse():
    for name, nodes, pis, pos in [("adder8.blif", 17, 17, 9),
                                  ("mult4.blif", 21, 8, 8),
                                  ("mult4_approx.blif", 20, 8, 8),
                                  ("adder4.blif", 8, 9, 5)]:
        net = parse_blif_file(fixture(name))
        assert len(net.nodes) == nodes
        assert len(net.primary_inputs) == pis
        assert len(net.primary_outputs) == pos
        validate(net)
