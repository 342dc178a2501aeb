import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from oracles import corpus  # noqa: E402
from redsparse import VALUE_KINDS, Dims, ValueKind, coo_from_arrays  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def matrix_corpus():
    return corpus()


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@st.composite
def coo_matrices(draw, kinds=VALUE_KINDS, max_rows=30, max_cols=8):
    kind: ValueKind = draw(st.sampled_from(kinds))
    nrows = draw(st.integers(1, max_rows))
    ncols = draw(st.integers(1, max_cols))
    cells = draw(st.sets(st.tuples(st.integers(0, nrows - 1), st.integers(0, ncols - 1)), max_size=nrows * ncols))
    if kind.is_float:
        pool = draw(st.lists(st.floats(-1e3, 1e3, allow_nan=False, width=8 * kind.width_bytes), min_size=1, max_size=4))
    else:
        info = np.iinfo(kind.dtype)
        pool = draw(st.lists(st.integers(int(info.min), int(info.max)), min_size=1, max_size=4))
    cells = sorted(cells)
    vals = [draw(st.sampled_from(pool)) for _ in cells]
    rows = [r for r, _ in cells]
    cols = [c for _, c in cells]
    return coo_from_arrays(rows, cols, np.array(vals, dtype=kind.dtype), Dims(nrows, ncols), kind)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
