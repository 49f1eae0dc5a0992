import os
import random

from quadol.netlist import LutNetwork, LutNode
from quadol.truthtab import TruthTable

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")

# Filled by test_acceptance.py; replayed after capture ends so the
# per-criterion verdict lines always reach the terminal.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def fixture(name: str) -> str:
    return os.path.join(FIXTURES, name)


def random_network(rng: random.Random, n_pi: int = 5,
                   n_nodes: int = 8) -> LutNetwork:
    """A random valid combinational network (may contain padding fanins)."""
    pis = tuple(f"i{k}" for k in range(n_pi))
    nodes = {}
    signals = list(pis)
    for k in range(n_nodes):
        name = f"n{k}"
        arity = rng.randint(0, min(6, len(signals)))
        fanins = tuple(rng.sample(signals, arity))
        nodes[name] = LutNode(name, fanins, TruthTable.random(arity, rng))
        signals.append(name)
    pos = tuple(rng.sample(sorted(nodes), rng.randint(1, n_nodes)))
    return LutNetwork("rand", pis, pos, nodes)
