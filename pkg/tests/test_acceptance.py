"""Acceptance suite: the full selftest, run twice.

The first run goes through :func:`voicelab.acceptance.run_acceptance`, the
second through the command line.  Criterion 13 (determinism) combines the
in-run re-check with a byte comparison of every artifact of the two runs.
One pass/fail line per criterion is printed in the terminal summary.
"""

import filecmp
import io
from contextlib import redirect_stdout

import pytest

from voicelab.acceptance import CRITERIA, run_acceptance
from voicelab.cli import main

SEED = 0
LINES = []


@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    a = tmp_path_factory.mktemp("selftest_a")
    b = tmp_path_factory.mktemp("selftest_b")
    results = {r.number: r for r in run_acceptance(SEED, a)}
    with redirect_stdout(io.StringIO()) as buf:
        code = main(["selftest", "--out", str(b), "--seed", str(SEED)])
    names = sorted(p.name for p in a.iterdir())
    differing = [n for n in names if not (b / n).exists() or not filecmp.cmp(a / n, b / n, shallow=False)]
    differing += sorted(p.name for p in b.iterdir() if not (a / p.name).exists())

    r13 = results[13]
    r13.add("files differing between two full runs", len(differing), 1)
    r13.diagnostics["full_run_files"] = len(names)
    r13.diagnostics["full_run_differing"] = differing
    LINES[:] = [results[n].summary_line() for n in sorted(results)]
    return {"results": results, "exit_code": code, "stdout": buf.getvalue()}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(runs, number):
    result = runs["results"][number]
    if not result.passed:
        pytest.fail(result.summary_line(), pytrace=False)


def test_cli_exit_code_matches_results(runs):
    failed = [r for r in runs["results"].values() if not r.passed]
    # criterion 13's full-run check is added here, not in the CLI run itself
    cli_failed = [r for r in failed if r.number != 13 or any(
        not c.passed for c in r.checks[:-1])]
    assert runs["exit_code"] == (2 if cli_failed else 0)
    assert runs["stdout"].count("criterion") >= len(CRITERIA)
