"""Fault injection and binary-search localization for Toffoli networks.

Faults are injected into a segment executor that can run any contiguous
gate range of a fixed circuit on a basis state, standing in for hardware.
Because the networks are permutations, a triggered fault shows up as an
exact bit mismatch against the reversible-simulation golden output, and
localization bisects: feed each half its golden input state, see which
half's output deviates, recurse. A single triggered fault deviates in
exactly one half per level, so the faulty gate index is pinned in
ceil(log2 G) rounds; multiple faults may flag both halves and come back
as a list of ranges.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuits import Circuit, CircuitError, GateKind
from .revsim import BasisState, prefix_states

_FAULT_KINDS = ("missing", "bitflip")


class FaultError(CircuitError):
    pass


class InconclusiveError(RuntimeError):
    """The vector set never triggers the fault, so bisection has no signal."""


@dataclass(frozen=True)
class FaultSpec:
    """missing: gate `index` is silently skipped.
    bitflip: `qubit` is flipped right after gate `index` executes."""

    kind: str
    index: int
    qubit: int | None = None

    def __post_init__(self):
        if self.kind not in _FAULT_KINDS:
            raise FaultError(f"unknown fault kind {self.kind!r}")
        if self.kind == "bitflip" and self.qubit is None:
            raise FaultError("bitflip fault needs a qubit")
        if self.kind == "missing" and self.qubit is not None:
            raise FaultError("missing-gate fault takes no qubit")


def parse_faults(text: str) -> list[FaultSpec]:
    """One fault per line: `missing <gate-index>` or `bitflip <gate-index> <qubit>`."""
    faults = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "missing" and len(parts) == 2:
                faults.append(FaultSpec("missing", int(parts[1])))
            elif parts[0] == "bitflip" and len(parts) == 3:
                faults.append(FaultSpec("bitflip", int(parts[1]), int(parts[2])))
            else:
                raise FaultError(f"line {lineno}: cannot parse fault {line!r}")
        except ValueError as exc:
            raise FaultError(f"line {lineno}: non-integer field in {line!r}") from exc
    return faults


def faults_to_text(faults) -> str:
    lines = []
    for f in faults:
        lines.append(f"missing {f.index}" if f.kind == "missing" else f"bitflip {f.index} {f.qubit}")
    return "\n".join(lines) + "\n" if lines else ""


class SegmentExecutor:
    """Runs gate ranges of one circuit with hidden faults; counts every call."""

    def __init__(self, circuit: Circuit, faults) -> None:
        faults = tuple(faults)
        n_gates = len(circuit.gates)
        for f in faults:
            if not 0 <= f.index < n_gates:
                raise FaultError(f"fault index {f.index} outside 0..{n_gates - 1}")
            if f.kind == "bitflip" and not 0 <= f.qubit < circuit.width:
                raise FaultError(f"fault qubit {f.qubit} outside circuit width")
        self.width = circuit.width
        self.n_gates = n_gates
        self.faults = faults
        self.calls = 0
        self._missing = frozenset(f.index for f in faults if f.kind == "missing")
        flips: dict[int, int] = {}
        for f in faults:
            if f.kind == "bitflip":
                flips[f.index] = flips.get(f.index, 0) ^ (1 << f.qubit)
        self._flips = flips
        self._gates = circuit.gates

    def run(self, lo: int, hi: int, state: int) -> int:
        """Apply gates [lo, hi) with faults realized; one counted call."""
        if not 0 <= lo <= hi <= self.n_gates:
            raise FaultError(f"range [{lo}, {hi}) outside 0..{self.n_gates}")
        self.calls += 1
        missing = self._missing
        flips = self._flips
        for idx in range(lo, hi):
            if idx not in missing:
                g = self._gates[idx]
                k = g.kind
                if k == GateKind.CCX:
                    c1, c2 = g.controls
                    if (state >> c1) & 1 and (state >> c2) & 1:
                        state ^= 1 << g.target
                elif k == GateKind.CX:
                    if (state >> g.controls[0]) & 1:
                        state ^= 1 << g.target
                elif k == GateKind.X:
                    state ^= 1 << g.target
                elif k == GateKind.MCX:
                    if all((state >> c) & 1 for c in g.controls):
                        state ^= 1 << g.target
                else:
                    raise FaultError(f"cannot execute {k.name} segment")
            if idx in flips:
                state ^= flips[idx]
        return state


def inject(circuit: Circuit, faults) -> SegmentExecutor:
    return SegmentExecutor(circuit, faults)


def _values(vectors) -> list[int]:
    return [v.value if isinstance(v, BasisState) else int(v) for v in vectors]


def call_bound(n_gates: int, n_vectors: int) -> int:
    rounds = max(1, math.ceil(math.log2(n_gates))) if n_gates > 1 else 1
    return 2 * n_vectors * (rounds + 1)


def fault_detect(executor: SegmentExecutor, circuit: Circuit, vectors) -> bool:
    """True iff some vector's full-range output differs from fault-free sim."""
    for v in _values(vectors):
        golden = prefix_states(circuit, v)[-1]
        if executor.run(0, executor.n_gates, v) != golden:
            return True
    return False


def fault_localize(executor: SegmentExecutor, circuit: Circuit, vectors) -> list[tuple[int, int]]:
    """Gate ranges containing faults, each narrowed as far as the call budget
    2 * |vectors| * (ceil(log2 G) + 1) allows; a single triggered fault comes
    back as one exact single-gate range.

    Each bisection level feeds both halves their golden (fault-free) input
    states, so a deviation in a half certifies a triggered fault inside it.
    Raises InconclusiveError when no vector shows any full-range deviation.
    """
    values = _values(vectors)
    if not values:
        raise InconclusiveError("no test vectors supplied")
    n_gates = executor.n_gates
    if n_gates == 0:
        raise InconclusiveError("empty circuit")
    prefixes = [prefix_states(circuit, v) for v in values]
    budget = call_bound(n_gates, len(values))
    start_calls = executor.calls

    def affordable(need: int) -> bool:
        return executor.calls - start_calls + need <= budget

    def deviates(lo: int, hi: int) -> bool:
        for pref in prefixes:
            if executor.run(lo, hi, pref[lo]) != pref[hi]:
                return True
        return False

    if not deviates(0, n_gates):
        raise InconclusiveError("vectors never trigger the fault end to end")

    ranges: list[tuple[int, int]] = []

    def descend(lo: int, hi: int) -> None:
        if hi - lo == 1:
            ranges.append((lo, hi))
            return
        if not affordable(2 * len(values)):
            ranges.append((lo, hi))
            return
        mid = (lo + hi) // 2
        left = deviates(lo, mid)
        right = deviates(mid, hi)
        if not left and not right:
            # faults straddle the cut and cancel on these vectors; report
            # the whole range rather than guess
            ranges.append((lo, hi))
            return
        if left:
            descend(lo, mid)
        if right:
            descend(mid, hi)

    descend(0, n_gates)
    return ranges


def random_vectors(width: int, count: int, seed: int | np.random.Generator = 0) -> list[int]:
    """Uniform basis states for trigger sampling; width may exceed 64 bits."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    out = []
    for _ in range(count):
        v = 0
        for off in range(0, width, 32):
            v |= int(rng.integers(0, 1 << 32)) << off
        out.append(v & ((1 << width) - 1))
    return out
