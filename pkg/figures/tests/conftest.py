import subprocess
import sys

import pytest

# small, fast settings per reproduction target; the producer is the pxpfsa
# CLI, consumed strictly through its command-line interface
PRODUCER_ARGS = {
    "z2-beta-compare": ["--L", "8", "--lam", "0.108"],
    "z2-complexity": ["--L", "8", "--dt", "0.1", "--t-max", "5",
                      "--lambdas", "0,0.108"],
    "z3-summary": ["--L", "6", "--dt", "0.1", "--t-max", "5"],
    "z3-exact": ["--L", "6", "--dt", "0.1", "--t-max", "5"],
    "vacuum-complexity": ["--L", "8", "--dt", "0.1", "--t-max", "5"],
    "fsa-errors-z2": ["--sizes", "6,8"],
    "fsa-errors-vacuum": ["--sizes", "8,10"],
    "error3-scan": ["--L", "100", "--values", "0.05:0.6:0.05"],
    "q-scan": ["--L", "8", "--lambdas", "0,0.108"],
}


@pytest.fixture(scope="session")
def csv_dirs(tmp_path_factory):
    root = tmp_path_factory.mktemp("csv")
    dirs = {}
    for target, extra in PRODUCER_ARGS.items():
        out = root / target
        cmd = [sys.executable, "-m", "pxpfsa.cli", "reproduce", target,
               "--out", str(out)] + extra
        proc = subprocess.run(cmd, capture_output=True, text=True)
        assert proc.returncode == 0, f"{target}: {proc.stderr}"
        dirs[target] = out
    return dirs
