import subprocess
import sys
from pathlib import Path

BENCH = Path(__file__).parent.parent / "benchmarks" / "bench_kernels.py"


def test_benchmark_runs_small():
    args = ["--algebra", "heisenberg-1", "--steps", "50", "--states", "2", "--repeat", "1"]
    proc = subprocess.run([sys.executable, str(BENCH), *args], capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stderr
    assert "RK4 on heisenberg-1" in proc.stdout
    assert "fractions" in proc.stdout
