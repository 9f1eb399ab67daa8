import os

import numpy as np
import pytest

from gpquiver.algebra import dual_numbers, kA2, kA3_with_relation, make_Bn, tensor
from gpquiver.exactla import DEFAULT_FIELD, ExactMatrix
from gpquiver.modules import Module

DATA = os.path.join(os.path.dirname(__file__), os.pardir, "data")


def data_path(name):
    return os.path.abspath(os.path.join(DATA, name))


def arrow_module(T, phi):
    """``A --phi--> A`` over ``k[x]/(x^2) ⊗ kA2``: two copies of ``A`` joined by the arrow.

    ``phi`` is a 2x2 integer matrix commuting with multiplication by ``x``.
    """
    A, B = T.tensor_of
    Y = np.array([[0, 0], [1, 0]])
    I2 = np.eye(2, dtype=int)
    Z = np.zeros((2, 2), dtype=int)
    acts = []
    for g in T.generators:
        x, y = divmod(g, B.dim)
        ax = I2 if A.labels[x] == "e0" else Y
        lab = B.labels[y]
        if lab == "e0":
            M = np.block([[ax, Z], [Z, Z]])
        elif lab == "e1":
            M = np.block([[Z, Z], [Z, ax]])
        else:
            M = np.block([[Z, Z], [ax @ phi, Z]])
        acts.append(ExactMatrix.from_rows(T.field, M.tolist()))
    return Module(T, 4, acts)


@pytest.fixture(scope="session")
def A2():
    return kA2()


@pytest.fixture(scope="session")
def D():
    return dual_numbers()


@pytest.fixture(scope="session")
def A3():
    return kA3_with_relation()


@pytest.fixture(scope="session")
def DA2(D, A2):
    return tensor(D, A2)


@pytest.fixture(scope="session")
def X_y(DA2):
    return arrow_module(DA2, np.array([[0, 0], [1, 0]]))


@pytest.fixture(scope="session")
def X_id(DA2):
    return arrow_module(DA2, np.eye(2, dtype=int))


@pytest.fixture(scope="session")
def field():
    return DEFAULT_FIELD


# acceptance summary: one line per criterion, printed after the run

ACCEPTANCE = {}


def record_criterion(number, ok, detail):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
