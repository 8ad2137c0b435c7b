import json
import pathlib

import pytest

from fracstefan import special_functions as sf
from fracstefan import similarity

DATA = pathlib.Path(__file__).parent / "data"
BACKENDS = ["python"] + (["compiled"] if sf._backend.compiled_kernels is not None else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    """Run a test once per available kernel backend."""
    with sf.use_backend(request.param):
        yield request.param


@pytest.fixture(scope="session")
def oracle():
    """Frozen extended-precision reference values."""
    return json.loads((DATA / "oracle.json").read_text())


ICE = similarity.Material(2.22, 2050.0)
WATER = similarity.Material(0.556, 4186.0)


def ice_water(alpha=0.5, q0=5e4, **kw):
    return similarity.FluxProblem(ICE, WATER, 1000.0, 334000.0, 263.15, 273.15, q0, alpha, **kw)


def ice_water_temperature(alpha=0.5, T_0=283.15):
    return similarity.TemperatureProblem(ICE, WATER, 1000.0, 334000.0, 263.15, 273.15, T_0, alpha)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
