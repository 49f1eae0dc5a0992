"""LUT-mapped combinational netlists and a BLIF reader/writer.

The model is deliberately small: named primary inputs and outputs plus
single-output LUT nodes of at most six fanins. Signals are plain strings;
each signal has exactly one driver (a primary input or a node output).
Networks are treated as immutable, editing operations build new ones.

Supported BLIF subset: .model, .inputs, .outputs, .names with 0/1/- cube
rows (on-set or off-set form), comments introduced by '#', backslash line
continuation, and .end. Latches, subcircuits and anything sequential are
rejected.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import cached_property

from .truthtab import MAX_INPUTS, TruthTable, full_mask


class BlifError(Exception):
    """Raised for unparsable or unsupported BLIF input."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NetlistError(Exception):
    """Raised for structurally invalid networks."""


@dataclass(frozen=True)
class LutNode:
    output: str
    fanins: tuple[str, ...]
    function: TruthTable

    def __post_init__(self) -> None:
        if len(self.fanins) != self.function.n:
            raise NetlistError(
                f"node {self.output}: {len(self.fanins)} fanins but table has "
                f"{self.function.n} inputs")
        if len(set(self.fanins)) != len(self.fanins):
            raise NetlistError(f"node {self.output}: duplicate fanins")
        if len(self.fanins) > MAX_INPUTS:
            raise NetlistError(f"node {self.output}: not LUT-6 mapped")
        if self.output in self.fanins:
            raise NetlistError(f"node {self.output}: drives its own fanin")


@dataclass
class LutNetwork:
    name: str
    primary_inputs: tuple[str, ...]
    primary_outputs: tuple[str, ...]
    nodes: dict[str, LutNode]
    merges: tuple[tuple[str, str], ...] = ()

    @cached_property
    def po_set(self) -> frozenset[str]:
        return frozenset(self.primary_outputs)

    @cached_property
    def fanouts(self) -> dict[str, tuple[str, ...]]:
        """Map from signal to the node outputs that consume it."""
        out: dict[str, list[str]] = {s: [] for s in self.signals()}
        for node in self.nodes.values():
            for s in node.fanins:
                out[s].append(node.output)
        return {s: tuple(v) for s, v in out.items()}

    def signals(self) -> list[str]:
        return list(self.primary_inputs) + list(self.nodes)

    def driver_exists(self, signal: str) -> bool:
        return signal in self.nodes or signal in self._pi_set

    @cached_property
    def _pi_set(self) -> frozenset[str]:
        return frozenset(self.primary_inputs)

    def with_nodes(self, new_nodes: dict[str, LutNode],
                   extra_merges: tuple[tuple[str, str], ...] = ()) -> "LutNetwork":
        """Copy of the network with some nodes replaced."""
        merged = dict(self.nodes)
        for name, node in new_nodes.items():
            if name not in merged:
                raise NetlistError(f"cannot replace unknown node {name}")
            if node.output != name:
                raise NetlistError("replacement output name mismatch")
            merged[name] = node
        return LutNetwork(self.name, self.primary_inputs, self.primary_outputs,
                          merged, self.merges + extra_merges)


def validate(net: LutNetwork) -> None:
    """Check the single-driver, driver-exists and acyclicity invariants."""
    seen = set()
    for pi in net.primary_inputs:
        if pi in seen:
            raise NetlistError(f"signal {pi} multiply driven")
        seen.add(pi)
    for name in net.nodes:
        if name in seen:
            raise NetlistError(f"signal {name} multiply driven")
        seen.add(name)
    for node in net.nodes.values():
        for s in node.fanins:
            if s not in seen:
                raise NetlistError(f"node {node.output}: fanin {s} has no driver")
    for po in net.primary_outputs:
        if po not in seen:
            raise NetlistError(f"primary output {po} has no driver")
    topological_order(net)


def topological_order(net: LutNetwork) -> list[LutNode]:
    """Kahn ordering of the nodes; raises NetlistError on a cycle.

    Ties are resolved by node name so the order (and everything derived
    from it, like emitted BLIF) is stable.
    """
    remaining: dict[str, set[str]] = {}
    for node in net.nodes.values():
        remaining[node.output] = {s for s in node.fanins if s in net.nodes}
    ready = sorted(name for name, deps in remaining.items() if not deps)
    order: list[LutNode] = []
    fanout: dict[str, list[str]] = {}
    for node in net.nodes.values():
        for s in node.fanins:
            if s in net.nodes:
                fanout.setdefault(s, []).append(node.output)
    heap = list(ready)
    heapq.heapify(heap)
    while heap:
        name = heapq.heappop(heap)
        order.append(net.nodes[name])
        for consumer in fanout.get(name, ()):
            deps = remaining[consumer]
            deps.discard(name)
            if not deps:
                heapq.heappush(heap, consumer)
    if len(order) != len(net.nodes):
        raise NetlistError("combinational cycle detected")
    return order


def lut_count(net: LutNetwork, merges: tuple[tuple[str, str], ...] | None = None) -> int:
    """LUT usage: every merged pair shares one dual-output LUT."""
    if merges is None:
        merges = net.merges
    used: set[str] = set()
    for f, g in merges:
        for member in (f, g):
            if member not in net.nodes:
                raise NetlistError(f"merge references unknown node {member}")
            if member in used:
                raise NetlistError(f"node {member} appears in conflicting merges")
            used.add(member)
    return len(net.nodes) - len(merges)


def normalize_support(net: LutNetwork) -> LutNetwork:
    """Shrink every node to its true functional support.

    Global functions are unchanged; a node whose function is constant
    becomes a zero-input constant node.
    """
    new_nodes: dict[str, LutNode] = {}
    for node in net.nodes.values():
        supp = sorted(node.function.support())
        if len(supp) == node.function.n:
            new_nodes[node.output] = node
            continue
        table = node.function.project(supp)
        fanins = tuple(node.fanins[i] for i in supp)
        new_nodes[node.output] = LutNode(node.output, fanins, table)
    return LutNetwork(net.name, net.primary_inputs, net.primary_outputs,
                      new_nodes, net.merges)


# ---------------------------------------------------------------------------
# BLIF input


def _logical_lines(text: str):
    """Yield (line_number, joined_line) with comments and continuations gone."""
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        start = i + 1
        raw = lines[i]
        cut = raw.find("#")
        if cut >= 0:
            raw = raw[:cut]
        buf = raw.rstrip()
        while buf.endswith("\\"):
            buf = buf[:-1]
            i += 1
            if i >= len(lines):
                break
            nxt = lines[i]
            cut = nxt.find("#")
            if cut >= 0:
                nxt = nxt[:cut]
            buf += " " + nxt.rstrip()
        i += 1
        if buf.strip():
            yield start, buf.strip()


def _compile_cover(output: str, fanins: tuple[str, ...], cubes: list[tuple[str, str]],
                   line: int) -> TruthTable:
    """Build the node function from cube rows.

    Every cube row must agree on the output column; a '1' column defines
    the on-set, a '0' column the off-set.
    """
    n = len(fanins)
    if not cubes:
        return TruthTable.constant(n, False)
    out_values = {v for _, v in cubes}
    if len(out_values) > 1:
        raise BlifError(f"node {output}: cover mixes on-set and off-set rows", line)
    on_form = cubes[0][1] == "1"
    acc = 0
    for pattern, _ in cubes:
        if len(pattern) != n:
            raise BlifError(
                f"node {output}: cube width {len(pattern)} does not match "
                f"{n} fanins", line)
        term = 0
        for idx in range(1 << n):
            ok = True
            for j, ch in enumerate(pattern):
                if ch == "-":
                    continue
                if ((idx >> j) & 1) != (ch == "1"):
                    ok = False
                    break
            if ok:
                term |= 1 << idx
        acc |= term
    bits = acc if on_form else (full_mask(n) ^ acc)
    return TruthTable(n, bits)


def parse_blif(text: str) -> LutNetwork:
    model_name: str | None = None
    inputs: list[str] = []
    outputs: list[str] = []
    raw_nodes: list[tuple[int, str, tuple[str, ...], list[tuple[str, str]]]] = []
    current: tuple[int, str, tuple[str, ...], list[tuple[str, str]]] | None = None
    ended = False

    for line_no, line in _logical_lines(text):
        if ended:
            break
        if line.startswith("."):
            tokens = line.split()
            directive = tokens[0]
            if directive == ".model":
                if model_name is not None:
                    raise BlifError("multiple .model sections are not supported",
                                    line_no)
                model_name = tokens[1] if len(tokens) > 1 else "top"
                current = None
            elif directive == ".inputs":
                inputs.extend(tokens[1:])
                current = None
            elif directive == ".outputs":
                outputs.extend(tokens[1:])
                current = None
            elif directive == ".names":
                if len(tokens) < 2:
                    raise BlifError(".names needs at least an output", line_no)
                fanins = tuple(tokens[1:-1])
                if len(set(fanins)) != len(fanins):
                    raise BlifError(f"node {tokens[-1]}: duplicate fanins", line_no)
                current = (line_no, tokens[-1], fanins, [])
                raw_nodes.append(current)
            elif directive in (".latch", ".clock"):
                raise BlifError("sequential elements are not supported", line_no)
            elif directive == ".subckt":
                raise BlifError(".subckt is not supported", line_no)
            elif directive == ".end":
                ended = True
                current = None
            else:
                raise BlifError(f"unsupported directive {directive}", line_no)
            continue
        # cube row
        if current is None:
            raise BlifError(f"unexpected line outside .names: {line!r}", line_no)
        tokens = line.split()
        if len(tokens) == 1 and not current[2]:
            pattern, value = "", tokens[0]
        elif len(tokens) == 2:
            pattern, value = tokens
        else:
            raise BlifError(f"malformed cube row {line!r}", line_no)
        if value not in ("0", "1") or any(c not in "01-" for c in pattern):
            raise BlifError(f"malformed cube row {line!r}", line_no)
        current[3].append((pattern, value))

    nodes: dict[str, LutNode] = {}
    driven = set()
    for pi in inputs:
        if pi in driven:
            raise BlifError(f"signal {pi} multiply driven")
        driven.add(pi)
    for line_no, output, fanins, cubes in raw_nodes:
        if output in driven:
            raise BlifError(f"signal {output} multiply driven", line_no)
        driven.add(output)
        if len(fanins) > MAX_INPUTS:
            raise BlifError(f"node {output}: not LUT-6 mapped "
                            f"({len(fanins)} fanins)", line_no)
        table = _compile_cover(output, fanins, cubes, line_no)
        nodes[output] = LutNode(output, fanins, table)

    net = LutNetwork(model_name or "top", tuple(inputs), tuple(outputs), nodes)
    try:
        validate(net)
    except NetlistError as exc:
        raise BlifError(str(exc)) from exc
    return net


def parse_blif_file(path) -> LutNetwork:
    with open(path, "r", encoding="ascii") as fh:
        return parse_blif(fh.read())


# ---------------------------------------------------------------------------
# BLIF output


def _wrap(prefix: str, names: tuple[str, ...]) -> str:
    parts = [prefix]
    width = len(prefix)
    out = []
    for name in names:
        if width + len(name) + 1 > 76 and len(parts) > 1:
            out.append(" ".join(parts) + " \\")
            parts = [name]
            width = len(name)
        else:
            parts.append(name)
            width += len(name) + 1
    out.append(" ".join(parts))
    return "\n".join(out)


def _cover_lines(node: LutNode) -> list[str]:
    n = node.function.n
    bits = node.function.bits
    ones = bits.bit_count()
    size = 1 << n
    if n == 0:
        return ["1"] if bits else []
    if bits == 0:
        return []
    if bits == full_mask(n):
        return ["-" * n + " 1"]  # an empty off-set would read back as 0
    use_offset = ones > size // 2
    value = "0" if use_offset else "1"
    target = (bits ^ full_mask(n)) if use_offset else bits
    lines = []
    for idx in range(size):
        if (target >> idx) & 1:
            pattern = "".join("1" if (idx >> j) & 1 else "0" for j in range(n))
            lines.append(f"{pattern} {value}")
    return lines


def write_blif(net: LutNetwork) -> str:
    out = [f".model {net.name}"]
    out.append(_wrap(".inputs", net.primary_inputs))
    out.append(_wrap(".outputs", net.primary_outputs))
    for node in topological_order(net):
        out.append(_wrap(".names", node.fanins + (node.output,)))
        out.extend(_cover_lines(node))
    out.append(".end")
    return "\n".join(out) + "\n"


def write_blif_file(net: LutNetwork, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(write_blif(net))
