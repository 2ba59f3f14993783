import pytest

from satatpg.bench_io import parse_bench
from satatpg.circuit import build_circuit

# y = x0*x1 + x2*x3, the running two-AND/one-OR example
SMALL_BENCH = """\
INPUT(x0)
INPUT(x1)
INPUT(x2)
INPUT(x3)
OUTPUT(y)

g1 = AND(x0, x1)
g2 = AND(x2, x3)
y = OR(g1, g2)
"""

# seven-input two-output circuit with a fanout branch on x3; used for the
# four-fault grouped locking and attack tests
FOUR_FAULT_BENCH = """\
INPUT(x0)
INPUT(x1)
INPUT(x2)
INPUT(x3)
INPUT(x4)
INPUT(x5)
INPUT(x6)
OUTPUT(y0)
OUTPUT(y1)

g1 = AND(x0, x1)
g2 = AND(x3, x4)
g3 = OR(x3, x5)
y0 = OR(g1, g2)
y1 = AND(g3, x6)
"""

# z = (a OR NOT a) AND b; the tautology net t hosts redundant faults
TAUTOLOGY_BENCH = """\
INPUT(a)
INPUT(b)
OUTPUT(z)

na = NOT(a)
t = OR(a, na)
z = AND(t, b)
"""


@pytest.fixture
def small_ast():
    return parse_bench(SMALL_BENCH)


@pytest.fixture
def small_circuit(small_ast):
    return build_circuit(small_ast)


@pytest.fixture
def four_fault_ast():
    return parse_bench(FOUR_FAULT_BENCH)


@pytest.fixture
def four_fault_circuit(four_fault_ast):
    return build_circuit(four_fault_ast)


@pytest.fixture
def tautology_ast():
    return parse_bench(TAUTOLOGY_BENCH)


@pytest.fixture
def tautology_circuit(tautology_ast):
    return build_circuit(tautology_ast)
