import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from incidencelab.constructions import (
    AlgebraicParams,
    gen_algebraic,
    gen_desargues,
    gen_reye,
    gen_tricolor,
)

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def algebraic_3_2():
    return gen_algebraic(AlgebraicParams(3, 2))


@pytest.fixture(scope="session")
def algebraic_3_3():
    return gen_algebraic(AlgebraicParams(3, 3))


@pytest.fixture(scope="session")
def algebraic_4_2():
    return gen_algebraic(AlgebraicParams(4, 2))


@pytest.fixture(scope="session")
def desargues():
    return gen_desargues()


@pytest.fixture(scope="session")
def reye():
    return gen_reye()


@pytest.fixture(scope="session")
def tricolor():
    return gen_tricolor(2, [1, 1, 1, -1, -1, -1])


@pytest.fixture(scope="session")
def golden_dir():
    return GOLDEN
