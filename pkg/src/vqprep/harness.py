"""Experiment runner: case studies, sweeps, barren-plateau diagnostic, noise runs.

Each experiment kind maps to one figure-style output. Results are plain
dataclasses serialized to JSON (full traces) and CSV (one row per repeat
and iteration) so plotting stays out of scope. Runs are deterministic for
a fixed base seed; repeat i and sweep point j derive independent streams.
"""

from __future__ import annotations

import csv
import json
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats

from . import __version__
from .ansatz import AnsatzConfig, AnsatzKind, build_ansatz, table1_depth
from .circuits import dag_depth
from .cost import CostContext, EvaluationMode, cost, gradient_variance
from .noise import ReadoutNoiseModel, build_calibration_matrix
from .optimizers import AdamConfig, QngConfig, TrainingTrace, train
from .statevector import ValidationError
from .targets import completed_unitary, make_target, target_circuit

EXPERIMENT_KINDS = ("train_once", "sweep_N", "sweep_L", "bp_variance", "noise_sweep", "depth_report")

# figure -> experiment mapping printed by `vqprep list-experiments`
FIGURE_MAP = {
    "convergence case studies (cost vs iteration)": "train_once",
    "distance vs number of qubits": "sweep_N",
    "distance vs number of layers": "sweep_L",
    "gradient-variance decay (barren plateau)": "bp_variance",
    "distance vs readout error rate, with/without mitigation": "noise_sweep",
    "target-vs-ansatz circuit depth table": "depth_report",
}


@dataclass
class ExperimentConfig:
    kind: str = "train_once"
    target: str = "GHZ"
    n_qubits: int = 3
    ansatz: str = "G2"
    layers: int = 2
    optimizer: str = "adam"
    learning_rate: float = 0.1
    qng_regularization: float = 1e-3
    mode: str = "exact"
    shots: int = 10_000
    iterations: int = 100
    repeats: int = 10
    n_values: list[int] = field(default_factory=list)
    l_values: list[int] = field(default_factory=list)
    epsilons: list[float] = field(default_factory=list)
    mitigate: bool = False
    bp_samples: int = 200
    seed: int = 0
    jobs: int = 1
    out: str | None = None
    fmt: str = "json"

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ValidationError(f"unknown experiment kind {self.kind!r}")
        if self.epsilons and self.kind != "noise_sweep":
            raise ValidationError("an epsilon list is only meaningful for noise_sweep")
        if self.mitigate and self.kind != "noise_sweep":
            raise ValidationError("mitigation flag is only meaningful for noise_sweep")
        if self.kind == "noise_sweep" and not self.epsilons:
            self.epsilons = [0.01, 0.02, 0.03, 0.04]
        if self.kind == "sweep_N" and not self.n_values:
            self.n_values = list(range(2, 9))
        if self.kind == "bp_variance" and not self.n_values:
            self.n_values = list(range(2, 8))
        if self.kind == "sweep_L" and not self.l_values:
            self.l_values = list(range(1, 6))


@dataclass
class ExperimentResult:
    config: dict
    points: list[dict]
    summary: dict
    tool_version: str
    wall_time: float


def derive_seed(*parts) -> int:
    """Stable derived integer seed for independent substreams."""
    entropy = [p if isinstance(p, int) else zlib.crc32(str(p).encode()) for p in parts]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


def _optimizer_config(config: ExperimentConfig):
    if config.optimizer.lower() == "adam":
        return AdamConfig(learning_rate=config.learning_rate)
    if config.optimizer.lower() == "qng":
        return QngConfig(learning_rate=config.learning_rate, regularization=config.qng_regularization)
    raise ValidationError(f"unknown optimizer {config.optimizer!r}")


def _ansatz_kind(name: str) -> AnsatzKind:
    try:
        return AnsatzKind[name.upper()]
    except KeyError:
        raise ValidationError(f"unknown ansatz kind {name!r}") from None


def _trace_record(trace: TrainingTrace, ctx_exact: CostContext, ctx_shots: CostContext,
                  repeat: int, seed: int) -> dict:
    # the reported distance is recorded in both exact and shot evaluation
    final_exact = cost(ctx_exact, trace.theta_final) if trace.error is None else None
    final_shots = cost(ctx_shots, trace.theta_final, eval_seed=(seed, 1, 0, 2)) if trace.error is None else None
    return {
        "repeat": repeat,
        "seed": seed,
        "cost_history": trace.cost_history,
        "theta_final": trace.theta_final.tolist(),
        "iterations_run": trace.iterations_run,
        "final_cost_exact": final_exact,
        "final_cost_shots": final_shots,
        "wall_time": trace.wall_time,
        "error": trace.error,
    }


def _train_point(config: ExperimentConfig, n_qubits: int, layers: int,
                 epsilon: float | None = None) -> dict:
    """Train `repeats` independent seeds for one sweep point."""
    kind = _ansatz_kind(config.ansatz)
    circuit = build_ansatz(AnsatzConfig(kind, n_qubits, layers))
    target = make_target(config.target, n_qubits)
    unitary = completed_unitary(target)

    noise = mitigation_matrix = None
    if epsilon is not None and epsilon > 0.0:
        noise = ReadoutNoiseModel(epsilon)
        if config.mitigate:
            # calibration is built once per sweep point, not per iteration
            mitigation_matrix = build_calibration_matrix(
                n_qubits, noise, shots=config.shots, seed=derive_seed(config.seed, "cal", n_qubits, layers)
            )
    mode = (EvaluationMode.exact() if config.mode == "exact"
            else EvaluationMode.with_shots(config.shots, derive_seed(config.seed, n_qubits, layers)))
    ctx = CostContext(ansatz=circuit, target=unitary, mode=mode, noise=noise, mitigation=mitigation_matrix)
    ctx_exact = CostContext(ansatz=circuit, target=unitary, mode=EvaluationMode.exact())
    ctx_shots = CostContext(
        ansatz=circuit, target=unitary,
        mode=EvaluationMode.with_shots(config.shots, derive_seed(config.seed, "report", n_qubits, layers)),
    )
    optimizer = _optimizer_config(config)

    def one_repeat(i: int) -> dict:
        seed = derive_seed(config.seed, "repeat", config.target, config.ansatz, n_qubits,
                           layers, 0 if epsilon is None else int(epsilon * 1e6), i)
        trace = train(ctx, optimizer, iterations=config.iterations, seed=seed)
        return _trace_record(trace, ctx_exact, ctx_shots, i, seed)

    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            repeats = list(pool.map(one_repeat, range(config.repeats)))
    else:
        repeats = [one_repeat(i) for i in range(config.repeats)]

    finals = [r["final_cost_exact"] for r in repeats if r["error"] is None]
    objectives = [r["cost_history"][-1] for r in repeats if r["error"] is None and r["cost_history"]]
    point = {
        "n_qubits": n_qubits,
        "layers": layers,
        "repeats": repeats,
        "mean_final_cost": float(np.mean(finals)) if finals else None,
        "std_final_cost": float(np.std(finals)) if finals else None,
        # the training objective as last evaluated, i.e. including shot
        # sampling and any readout noise / mitigation in the loop
        "mean_final_objective": float(np.mean(objectives)) if objectives else None,
    }
    if epsilon is not None:
        point["epsilon"] = epsilon
    return point


def run(config: ExperimentConfig) -> ExperimentResult:
    start = time.perf_counter()
    points: list[dict] = []
    summary: dict = {}

    if config.kind == "train_once":
        points.append(_train_point(config, config.n_qubits, config.layers))
        summary["mean_final_cost"] = points[0]["mean_final_cost"]
    elif config.kind == "sweep_N":
        for n in config.n_values:
            points.append(_train_point(config, n, config.layers))
        summary["mean_final_cost_by_n"] = {str(p["n_qubits"]): p["mean_final_cost"] for p in points}
    elif config.kind == "sweep_L":
        for layers in config.l_values:
            points.append(_train_point(config, config.n_qubits, layers))
        summary["mean_final_cost_by_l"] = {str(p["layers"]): p["mean_final_cost"] for p in points}
    elif config.kind == "noise_sweep":
        for eps in config.epsilons:
            points.append(_train_point(config, config.n_qubits, config.layers, epsilon=eps))
        summary["mean_final_cost_by_eps"] = {f"{p['epsilon']:g}": p["mean_final_cost"] for p in points}
    elif config.kind == "bp_variance":
        kind = _ansatz_kind(config.ansatz)
        for n in config.n_values:
            circuit = build_ansatz(AnsatzConfig(kind, n, config.layers))
            unitary = completed_unitary(make_target(config.target, n))
            var = gradient_variance(circuit, unitary, param_index=0,
                                    n_samples=config.bp_samples,
                                    rng_seed=derive_seed(config.seed, "bp", n))
            points.append({"n_qubits": n, "variance": var})
        fit = stats.linregress([p["n_qubits"] for p in points],
                               [np.log(p["variance"]) for p in points])
        summary.update({
            "slope": fit.slope, "intercept": fit.intercept,
            "slope_stderr": fit.stderr, "r_squared": fit.rvalue**2,
        })
    elif config.kind == "depth_report":
        kind = _ansatz_kind(config.ansatz)
        report = depth_report(
            [(config.target, n) for n in (config.n_values or [config.n_qubits])],
            [AnsatzConfig(kind, n, config.layers) for n in (config.n_values or [config.n_qubits])],
            optimizer=_optimizer_config(config), iterations=config.iterations, seed=config.seed,
        )
        points.extend(report)

    return ExperimentResult(
        config=asdict(config),
        points=points,
        summary=summary,
        tool_version=__version__,
        wall_time=time.perf_counter() - start,
    )


def depth_report(target_specs, ansatz_configs, optimizer=None, iterations: int = 100,
                 seed: int = 0, check_training: bool = True) -> list[dict]:
    """Depth comparison rows for matching (target, ansatz) pairs."""
    rows = []
    optimizer = optimizer or AdamConfig()
    for (tname, n), acfg in zip(target_specs, ansatz_configs):
        if acfg.n_qubits != n:
            raise ValidationError("target and ansatz qubit counts must match per row")
        target = make_target(tname, n)
        circuit = build_ansatz(acfg)
        prep = target_circuit(target)
        row = {
            "target": tname,
            "n_qubits": n,
            "ansatz": acfg.kind.name,
            "layers": acfg.layers,
            "ansatz_dag_depth": dag_depth(circuit),
            "ansatz_formula_depth": table1_depth(acfg),
            "target_circuit_depth": dag_depth(prep.circuit) if prep is not None else None,
        }
        if check_training:
            ctx = CostContext(ansatz=circuit, target=completed_unitary(target), mode=EvaluationMode.exact())
            trace = train(ctx, optimizer, iterations=iterations, seed=derive_seed(seed, "depth", tname, n))
            row["trained_below_0.05"] = bool(trace.cost_history and trace.cost_history[-1] < 0.05)
        rows.append(row)
    return rows


def result_to_json(result: ExperimentResult) -> str:
    return json.dumps(asdict(result), indent=2, sort_keys=True)


def result_from_json(text: str) -> ExperimentResult:
    return ExperimentResult(**json.loads(text))


def emit(result: ExperimentResult, fmt: str, path):
    """Write the result as JSON (full traces) or CSV (plot-friendly rows)."""
    if fmt == "json":
        with open(path, "w") as fh:
            fh.write(result_to_json(result))
        return
    if fmt != "csv":
        raise ValidationError(f"unknown output format {fmt!r}")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if result.config["kind"] == "bp_variance":
            writer.writerow(["n_qubits", "variance", "slope", "intercept", "r_squared"])
            for p in result.points:
                writer.writerow([p["n_qubits"], p["variance"],
                                 result.summary["slope"], result.summary["intercept"],
                                 result.summary["r_squared"]])
        elif result.config["kind"] == "depth_report":
            keys = ["target", "n_qubits", "ansatz", "layers", "ansatz_dag_depth",
                    "ansatz_formula_depth", "target_circuit_depth", "trained_below_0.05"]
            writer.writerow(keys)
            for p in result.points:
                writer.writerow([p.get(k) for k in keys])
        else:
            writer.writerow(["n_qubits", "layers", "epsilon", "repeat", "iteration", "cost"])
            for p in result.points:
                for rep in p["repeats"]:
                    for it, c in enumerate(rep["cost_history"]):
                        writer.writerow([p["n_qubits"], p["layers"], p.get("epsilon", ""),
                                         rep["repeat"], it, c])
