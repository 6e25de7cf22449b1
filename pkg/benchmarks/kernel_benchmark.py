"""Compare the jitted statevector kernels against the pure-numpy fallback.

Runs the same workload in two subprocesses, one per VQPREP_BACKEND value,
so each process gets a clean kernel selection at import time.

Usage: python benchmarks/kernel_benchmark.py [--qubits 12] [--layers 4] [--loops 20]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, os, time
import numpy as np
from vqprep.ansatz import AnsatzConfig, AnsatzKind, build_ansatz, random_theta
from vqprep.circuits import bind, execute
from vqprep.statevector import new_zero_state

n, layers, loops = {n}, {layers}, {loops}
cfg = AnsatzConfig(AnsatzKind.G2, n, layers)
circ = build_ansatz(cfg)
theta = random_theta(cfg, 0)
bound = bind(circ, theta)

# warm-up covers jit compilation for the numba backend
execute(bound, new_zero_state(n))

start = time.perf_counter()
for _ in range(loops):
    out = execute(bound, new_zero_state(n))
elapsed = time.perf_counter() - start
print(json.dumps({{
    "backend": os.environ.get("VQPREP_BACKEND", "numba"),
    "seconds_per_run": elapsed / loops,
    "checksum": float(np.abs(out.amplitudes).sum()),
}}))
"""


def run_backend(backend: str, n: int, layers: int, loops: int) -> dict:
    env = dict(os.environ, VQPREP_BACKEND=backend)
    code = WORKER.format(n=n, layers=layers, loops=loops)
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--qubits", type=int, default=12)
    ap.add_argument("--layers", type=int, default=4)
    ap.add_argument("--loops", type=int, default=20)
    args = ap.parse_args()

    results = [run_backend(b, args.qubits, args.layers, args.loops)
               for b in ("numba", "numpy")]
    if abs(results[0]["checksum"] - results[1]["checksum"]) > 1e-9:
        raise SystemExit("backend outputs disagree; aborting")

    print(f"G2 ansatz, N={args.qubits}, L={args.layers}, {args.loops} runs")
    for r in results:
        print(f"  {r['backend']:>6}: {r['seconds_per_run'] * 1e3:8.2f} ms/run")
    ratio = results[1]["seconds_per_run"] / results[0]["seconds_per_run"]
    print(f"  speedup (numba vs numpy): {ratio:.2f}x")


if __name__ == "__main__":
    main()
