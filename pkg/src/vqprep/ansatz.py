"""Builders for the hypergraph-based ansatz families.

Three families over N qubits, L layers:

  G2       ring 2-uniform graph block: Ry column, first CZ round, Ry
           column, remaining CZ rounds (2N parameters per layer)
  G2_GN    G2 block plus an N-uniform block: one N-controlled Z + Ry column
           (3N parameters per layer)
  G2_GN_W  G2_GN plus a phase block: ring of controlled-Rx, Rz column, Rx
           column (6N parameters per layer)

Ring CZ edges are scheduled in 2 alternating rounds for even N and 3
rounds for odd N (edge {N-1, 0} last). For N = 2 the ring degenerates to
a single edge, emitted once per layer.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .circuits import Circuit, GateSpec, circuit_from_gates
from .statevector import StateVector, ValidationError, apply_hadamard, apply_multi_controlled_z, new_zero_state


class AnsatzKind(Enum):
    G2 = "g2"
    G2_GN = "g2_gn"
    G2_GN_W = "g2_gn_w"


@dataclass(frozen=True)
class AnsatzConfig:
    kind: AnsatzKind
    n_qubits: int
    layers: int

    def __post_init__(self):
        if self.n_qubits < 2:
            raise ValidationError("ansatz needs at least 2 qubits")
        if self.layers < 1:
            raise ValidationError("layer count must be >= 1")
        if self.kind in (AnsatzKind.G2_GN, AnsatzKind.G2_GN_W) and self.n_qubits < 3:
            raise ValidationError(f"{self.kind.name} requires n_qubits >= 3")


def ring_edge_rounds(n_qubits: int) -> list[list[tuple[int, int]]]:
    """Ring edges {i, (i+1) mod N} grouped into non-overlapping rounds."""
    n = n_qubits
    if n == 2:
        return [[(0, 1)]]
    edges = [(i, (i + 1) % n) for i in range(n)]
    if n % 2 == 0:
        return [edges[0::2], edges[1::2]]
    # odd: two alternating rounds over the chain, wrap-around edge last
    return [edges[0:-1:2], edges[1:-1:2], [edges[-1]]]


def _params_per_layer(kind: AnsatzKind) -> int:
    return {AnsatzKind.G2: 2, AnsatzKind.G2_GN: 3, AnsatzKind.G2_GN_W: 6}[kind]


def expected_parameter_count(config: AnsatzConfig) -> int:
    """2NL, 3NL or 6NL depending on family."""
    return _params_per_layer(config.kind) * config.n_qubits * config.layers


def table1_depth(config: AnsatzConfig) -> int:
    """The tabulated per-family depth formula (parity-dependent)."""
    even = config.n_qubits % 2 == 0
    per_layer = {
        AnsatzKind.G2: 4 if even else 6,
        AnsatzKind.G2_GN: 6 if even else 8,
        AnsatzKind.G2_GN_W: 9 if even else 11,
    }[config.kind]
    return per_layer * config.layers


def build_ansatz(config: AnsatzConfig) -> Circuit:
    n = config.n_qubits
    gates = []
    slot = 0

    def ry_column():
        nonlocal slot
        for q in range(n):
            gates.append(GateSpec("RY", (q,), slot))
            slot += 1

    def column(kind):
        nonlocal slot
        for q in range(n):
            gates.append(GateSpec(kind, (q,), slot))
            slot += 1

    rounds = ring_edge_rounds(n)
    for _ in range(config.layers):
        # G2 block: alternating structure, every CZ sits between two Ry
        # columns. The second of two Ry columns goes between the CZ rounds,
        # not after them; a bare trailing CZ round is intentional.
        ry_column()
        for (a, b) in rounds[0]:
            gates.append(GateSpec("MCZ", (a, b)))
        ry_column()
        for rnd in rounds[1:]:
            for (a, b) in rnd:
                gates.append(GateSpec("MCZ", (a, b)))
        if config.kind in (AnsatzKind.G2_GN, AnsatzKind.G2_GN_W):
            # GN block: rotation column, then one hyperedge over all qubits
            ry_column()
            gates.append(GateSpec("MCZ", tuple(range(n))))
        if config.kind is AnsatzKind.G2_GN_W:
            # phase block: controlled-Rx ring, then Rz and Rx columns
            for rnd in rounds:
                for (a, b) in rnd:
                    gates.append(GateSpec("CRX", (a, b), slot))
                    slot += 1
            column("RZ")
            column("RX")
    return circuit_from_gates(n, gates)


def hypergraph_edges(n_qubits: int, k: int) -> list[tuple[int, ...]]:
    """Cyclic k-windows over the ring, deduplicated: k=2 is the ring, k=N one full edge."""
    if not 2 <= k <= n_qubits:
        raise ValidationError("edge uniformity k must satisfy 2 <= k <= n_qubits")
    seen = set()
    edges = []
    for i in range(n_qubits):
        edge = tuple(sorted((i + j) % n_qubits for j in range(k)))
        if edge not in seen:
            seen.add(edge)
            edges.append(edge)
    return edges


def graph_state_reference(n_qubits: int, k: int) -> StateVector:
    """|+>^N followed by CZ on every k-uniform edge; the family's fixed point."""
    state = new_zero_state(n_qubits)
    for q in range(n_qubits):
        state = apply_hadamard(state, q)
    for edge in hypergraph_edges(n_qubits, k):
        state = apply_multi_controlled_z(state, edge)
    return state


def random_theta(config: AnsatzConfig, seed) -> np.ndarray:
    """Uniform [0, 2pi) initialization, seeded."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    return rng.uniform(0.0, 2.0 * np.pi, size=expected_parameter_count(config))
