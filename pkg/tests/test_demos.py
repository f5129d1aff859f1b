"""Every demo script runs to completion with exit code 0."""

import os
import subprocess
import sys

import pytest

DEMOS = os.path.join(os.path.dirname(__file__), os.pardir, "demos")
SCRIPTS = sorted(f for f in os.listdir(DEMOS) if f.endswith(".py"))


def test_demo_scripts_present():
    assert len(SCRIPTS) == 6


@pytest.mark.parametrize("script", SCRIPTS)
def test_demo_runs(script):
    proc = subprocess.run(
        [sys.executable, os.path.join(DEMOS, script)],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.strip()
