import numpy as np
import pytest

from doubletrine import double_trine

ACCEPTANCE = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def dt():
    return double_trine()


def assert_close(a, b, tol):
    a, b = np.asarray(a), np.asarray(b)
    assert a.shape == b.shape, (a.shape, b.shape)
    err = float(np.max(np.abs(a - b))) if a.size else 0.0
    assert err <= tol, f"max deviation {err:.3e} > {tol:.1e}"


def run_cli(argv):
    """Run the CLI in-process; returns ``(exit_code, stdout, stderr)``."""
    import contextlib
    import io

    from doubletrine.cli import main

    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            code = main(argv)
        except SystemExit as exc:
            code = exc.code
    return code, out.getvalue(), err.getvalue()


def _optimize(tmp_path_factory, mode, m):
    import json

    path = tmp_path_factory.mktemp(f"opt_{mode}") / "best.json"
    code, out, err = run_cli(["optimize", "--mode", mode, "-M", str(m), "--output-format", "json",
                              "--output", str(path)])
    assert code == 0, err
    return json.loads(out), path


@pytest.fixture(scope="session")
def global_run(tmp_path_factory):
    """Default-budget (20 restarts x 2000 iterations) global search, M=4."""
    return _optimize(tmp_path_factory, "global", 4)


@pytest.fixture(scope="session")
def product_run(tmp_path_factory):
    """Default-budget product-mode search, M=6."""
    return _optimize(tmp_path_factory, "product", 6)


@pytest.fixture(scope="session")
def one_way_run():
    from doubletrine.adaptive import optimize_one_way

    return optimize_one_way(double_trine(), 3, 3, budget=2000, seed=0, restarts=4)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number}. {name}: {detail}")
