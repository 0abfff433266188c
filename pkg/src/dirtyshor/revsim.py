"""Bit-exact simulation of reversible-pure circuits.

A basis state is one python int, bit i = qubit i, so a gate costs O(1)
machine-word work per 64 qubits and registers of thousands of qubits stay
cheap. permutation_table vectorizes the same semantics over every basis
state at once for small widths, which is what exhaustive tests and the
phase estimation driver use.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .circuits import Circuit, CircuitError, Gate, GateKind, RegisterMap

_PERM_WIDTH_CAP = 22  # 2**22 int64 entries = 32 MiB, enough for every test


class SimulationError(ValueError):
    pass


class BasisState:
    """Packed-bit computational basis state with optional register views."""

    __slots__ = ("value", "width", "regs")

    def __init__(self, width: int, value: int = 0, regs: RegisterMap | None = None):
        if width < 1:
            raise SimulationError("width must be positive")
        if not 0 <= value < 1 << width:
            raise SimulationError("value does not fit the declared width")
        if regs is not None and regs.width != width:
            raise SimulationError("register map width mismatch")
        self.value = value
        self.width = width
        self.regs = regs

    def get(self, name: str) -> int:
        if self.regs is None:
            raise SimulationError("no register map attached")
        return self.regs.value(self.value, name)

    def set(self, name: str, v: int) -> "BasisState":
        if self.regs is None:
            raise SimulationError("no register map attached")
        return BasisState(self.width, self.regs.with_value(self.value, name, v), self.regs)

    def bit(self, q: int) -> int:
        return (self.value >> q) & 1

    def __eq__(self, other) -> bool:
        return isinstance(other, BasisState) and self.value == other.value and self.width == other.width

    def __repr__(self) -> str:
        return f"BasisState(width={self.width}, value={self.value:#x})"


def apply_gate(gate: Gate, state: int) -> int:
    k = gate.kind
    if k == GateKind.CX:
        if (state >> gate.controls[0]) & 1:
            state ^= 1 << gate.target
    elif k == GateKind.CCX:
        c1, c2 = gate.controls
        if (state >> c1) & 1 and (state >> c2) & 1:
            state ^= 1 << gate.target
    elif k == GateKind.X:
        state ^= 1 << gate.target
    elif k == GateKind.MCX:
        for c in gate.controls:
            if not (state >> c) & 1:
                return state
        state ^= 1 << gate.target
    else:
        raise SimulationError(f"{k.name} is not a reversible-pure gate")
    return state


def run(circuit: Circuit, state: int | BasisState) -> int | BasisState:
    """Apply every gate; returns the same type it was given."""
    wrapped = isinstance(state, BasisState)
    s = state.value if wrapped else state
    if s >> circuit.width:
        raise SimulationError("state has bits beyond the circuit width")
    # inlined dispatch, this loop is the throughput path
    for g in circuit.gates:
        k = g.kind
        if k == GateKind.CX:
            if (s >> g.controls[0]) & 1:
                s ^= 1 << g.target
        elif k == GateKind.CCX:
            c = g.controls
            if (s >> c[0]) & 1 and (s >> c[1]) & 1:
                s ^= 1 << g.target
        elif k == GateKind.X:
            s ^= 1 << g.target
        elif k == GateKind.MCX:
            for c in g.controls:
                if not (s >> c) & 1:
                    break
            else:
                s ^= 1 << g.target
        else:
            raise SimulationError(f"{k.name} is not a reversible-pure gate")
    if wrapped:
        return BasisState(state.width, s, state.regs)
    return s


def trace(circuit: Circuit, state: int, checkpoints: Sequence[int]) -> list[int]:
    """States after the first k gates, for each checkpoint k (ascending).

    checkpoint k = 0 is the input state; k = len(circuit) the output. This
    is the oracle fault bisection compares segment runs against.
    """
    pts = list(checkpoints)
    if pts != sorted(pts):
        raise SimulationError("checkpoints must be ascending")
    if pts and (pts[0] < 0 or pts[-1] > len(circuit.gates)):
        raise SimulationError("checkpoint out of range")
    out: list[int] = []
    s = state
    i = 0
    for k in pts:
        while i < k:
            s = apply_gate(circuit.gates[i], s)
            i += 1
        out.append(s)
    return out


def prefix_states(circuit: Circuit, state: int) -> list[int]:
    """All len(circuit)+1 prefix states in one pass."""
    out = [state]
    s = state
    for g in circuit.gates:
        s = apply_gate(g, s)
        out.append(s)
    return out


class PermSink:
    """Streams gates over all 2**width basis states at once (numpy int64)."""

    __slots__ = ("vals",)

    def __init__(self, width: int):
        if width > _PERM_WIDTH_CAP:
            raise SimulationError(f"permutation table capped at width {_PERM_WIDTH_CAP}")
        self.vals = np.arange(1 << width, dtype=np.int64)

    def x(self, t: int) -> None:
        self.vals ^= 1 << t

    def cx(self, c: int, t: int) -> None:
        v = self.vals
        v ^= ((v >> c) & 1) << t

    def ccx(self, c1: int, c2: int, t: int) -> None:
        v = self.vals
        v ^= ((v >> c1) & (v >> c2) & 1) << t

    def mcx(self, controls: tuple[int, ...], t: int) -> None:
        v = self.vals
        acc = (v >> controls[0]) & 1
        for c in controls[1:]:
            acc &= (v >> c) & 1
        v ^= acc << t


def permutation_table(circuit: Circuit) -> np.ndarray:
    """perm[s] = circuit(s) for every basis state s; width-capped."""
    sink = PermSink(circuit.width)
    for g in circuit.gates:
        k = g.kind
        if k == GateKind.CX:
            sink.cx(g.controls[0], g.target)
        elif k == GateKind.CCX:
            sink.ccx(g.controls[0], g.controls[1], g.target)
        elif k == GateKind.X:
            sink.x(g.target)
        elif k == GateKind.MCX:
            sink.mcx(g.controls, g.target)
        else:
            raise SimulationError(f"{k.name} is not a reversible-pure gate")
    return sink.vals


def check_restores(perm: np.ndarray, qubits: Iterable[int]) -> bool:
    """True when the permutation leaves every listed qubit bit-identical."""
    v = np.arange(len(perm), dtype=np.int64)
    for q in qubits:
        if (((perm >> q) ^ (v >> q)) & 1).any():
            return False
    return True
