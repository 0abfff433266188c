"""Gate-level circuit IR for Toffoli-based reversible synthesis.

Circuits are flat gate lists over qubits indexed 0..width-1, little endian
(qubit i of a register carries weight 2**i). The reversible-pure subset is
X / CX / CCX / MCX; H, PHASE and MEASURE exist only so the phase estimation
driver can express its semiclassical loop. Synthesis routines emit into any
"sink" exposing x/cx/ccx/mcx methods, which lets counting, simulation and
materialization share one emission pass.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Iterator, NamedTuple


class GateKind(IntEnum):
    X = 0
    CX = 1
    CCX = 2
    MCX = 3
    H = 4
    PHASE = 5
    MEASURE = 6


REVERSIBLE_KINDS = frozenset(
    {GateKind.X, GateKind.CX, GateKind.CCX, GateKind.MCX}
)

_N_CONTROLS = {GateKind.X: 0, GateKind.CX: 1, GateKind.CCX: 2}


class Gate(NamedTuple):
    kind: GateKind
    controls: tuple[int, ...]
    target: int
    param: float = 0.0

    def qubits(self) -> tuple[int, ...]:
        return self.controls + (self.target,)


class CircuitError(ValueError):
    pass


def _check_gate(kind: GateKind, controls: tuple[int, ...], target: int, width: int) -> None:
    if not 0 <= target < width:
        raise CircuitError(f"target {target} out of range for width {width}")
    seen = {target}
    for c in controls:
        if not 0 <= c < width:
            raise CircuitError(f"control {c} out of range for width {width}")
        if c in seen:
            raise CircuitError(f"duplicate qubit {c} in gate")
        seen.add(c)
    if kind in _N_CONTROLS and len(controls) != _N_CONTROLS[kind]:
        raise CircuitError(f"{kind.name} takes {_N_CONTROLS[kind]} controls, got {len(controls)}")
    if kind == GateKind.MCX and len(controls) < 1:
        raise CircuitError("MCX needs at least one control")
    if kind in (GateKind.H, GateKind.PHASE, GateKind.MEASURE) and controls:
        raise CircuitError(f"{kind.name} takes no controls")


class Circuit:
    """Mutable gate list with a fixed width.

    Doubles as an emission sink: the x/cx/ccx/mcx methods append validated
    gates, so synthesis code can target a Circuit or any lighter sink
    interchangeably.
    """

    __slots__ = ("width", "gates", "tag")

    def __init__(self, width: int, gates: Iterable[Gate] = (), tag: str = ""):
        if width < 1:
            raise CircuitError("width must be positive")
        self.width = width
        self.tag = tag
        self.gates: list[Gate] = []
        for g in gates:
            self.append(g)

    def append(self, gate: Gate) -> None:
        _check_gate(gate.kind, gate.controls, gate.target, self.width)
        self.gates.append(gate)

    # sink interface
    def x(self, t: int) -> None:
        self.append(Gate(GateKind.X, (), t))

    def cx(self, c: int, t: int) -> None:
        self.append(Gate(GateKind.CX, (c,), t))

    def ccx(self, c1: int, c2: int, t: int) -> None:
        self.append(Gate(GateKind.CCX, (c1, c2), t))

    def mcx(self, controls: tuple[int, ...], t: int) -> None:
        controls = tuple(controls)
        if len(controls) == 0:
            self.x(t)
        elif len(controls) == 1:
            self.cx(controls[0], t)
        elif len(controls) == 2:
            self.ccx(controls[0], controls[1], t)
        else:
            self.append(Gate(GateKind.MCX, controls, t))

    def h(self, t: int) -> None:
        self.append(Gate(GateKind.H, (), t))

    def phase(self, theta: float, t: int) -> None:
        self.append(Gate(GateKind.PHASE, (), t, theta))

    def measure(self, t: int) -> None:
        self.append(Gate(GateKind.MEASURE, (), t))

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    @property
    def reversible_pure(self) -> bool:
        return all(g.kind in REVERSIBLE_KINDS for g in self.gates)

    def reverse(self) -> "Circuit":
        """Inverse circuit: reversed order, PHASE angles negated."""
        rev = Circuit(self.width, tag=self.tag)
        for g in reversed(self.gates):
            if g.kind == GateKind.MEASURE:
                raise CircuitError("cannot reverse a circuit containing MEASURE")
            if g.kind == GateKind.PHASE:
                rev.append(Gate(GateKind.PHASE, (), g.target, -g.param))
            else:
                rev.append(g)
        return rev

    def extend(self, other: "Circuit") -> None:
        if other.width > self.width:
            raise CircuitError("cannot extend with a wider circuit")
        for g in other.gates:
            self.append(g)


# --------------------------------------------------------------------------
# sinks


class CountingSink:
    """Tallies gate counts, greedy ASAP depth and touched qubits in O(1)/gate.

    Depth layers gates as early as qubit availability allows: a gate lands on
    layer 1 + max(frontier of its qubits). This is the schedule a
    maximally-parallel executor could realize, so disjoint-qubit gate blocks
    count as one layer.
    """

    __slots__ = ("toffoli", "cnot", "not_", "_frontier", "depth")

    def __init__(self, width: int):
        self.toffoli = 0
        self.cnot = 0
        self.not_ = 0
        self.depth = 0
        self._frontier = [0] * width

    # the three hot methods inline their frontier updates; emission spends
    # most of its time here, so no shared _place helper

    def x(self, t: int) -> None:
        self.not_ += 1
        f = self._frontier
        layer = f[t] + 1
        f[t] = layer
        if layer > self.depth:
            self.depth = layer

    def cx(self, c: int, t: int) -> None:
        self.cnot += 1
        f = self._frontier
        a, b = f[c], f[t]
        layer = (a if a > b else b) + 1
        f[c] = f[t] = layer
        if layer > self.depth:
            self.depth = layer

    def ccx(self, c1: int, c2: int, t: int) -> None:
        self.toffoli += 1
        f = self._frontier
        layer = f[c1]
        b, c = f[c2], f[t]
        if b > layer:
            layer = b
        if c > layer:
            layer = c
        layer += 1
        f[c1] = f[c2] = f[t] = layer
        if layer > self.depth:
            self.depth = layer

    def mcx(self, controls: tuple[int, ...], t: int) -> None:
        raise CircuitError("MCX must be lowered before resource counting")

    @property
    def width_touched(self) -> int:
        # a qubit was touched exactly when some gate advanced its frontier
        return sum(1 for v in self._frontier if v)

    @property
    def total(self) -> int:
        return self.toffoli + self.cnot + self.not_


class StateSink:
    """Applies emitted gates directly to a packed-bit basis state."""

    __slots__ = ("state",)

    def __init__(self, state: int):
        self.state = state

    def x(self, t: int) -> None:
        self.state ^= 1 << t

    def cx(self, c: int, t: int) -> None:
        if (self.state >> c) & 1:
            self.state ^= 1 << t

    def ccx(self, c1: int, c2: int, t: int) -> None:
        s = self.state
        if (s >> c1) & 1 and (s >> c2) & 1:
            self.state ^= 1 << t

    def mcx(self, controls: tuple[int, ...], t: int) -> None:
        s = self.state
        for c in controls:
            if not (s >> c) & 1:
                return
        self.state ^= 1 << t


class RecordingSink:
    """Buffers flat gate ops so a block can be replayed, possibly reversed.

    Synthesis uses this for compute/uncompute sandwiches; all reversible
    gates here are self-inverse, so reversal is order reversal.
    """

    __slots__ = ("ops",)

    def __init__(self):
        self.ops: list[tuple] = []

    def x(self, t: int) -> None:
        self.ops.append(("x", t))

    def cx(self, c: int, t: int) -> None:
        self.ops.append(("cx", c, t))

    def ccx(self, c1: int, c2: int, t: int) -> None:
        self.ops.append(("ccx", c1, c2, t))

    def mcx(self, controls: tuple[int, ...], t: int) -> None:
        self.ops.append(("mcx", controls, t))

    def replay(self, sink) -> None:
        self._replay(self.ops, sink)

    def replay_reversed(self, sink) -> None:
        self._replay(reversed(self.ops), sink)

    @staticmethod
    def _replay(ops, sink) -> None:
        x, cx, ccx, mcx = sink.x, sink.cx, sink.ccx, sink.mcx
        for op in ops:
            k = op[0]
            if k == "ccx":
                ccx(op[1], op[2], op[3])
            elif k == "cx":
                cx(op[1], op[2])
            elif k == "x":
                x(op[1])
            else:
                mcx(op[1], op[2])


class TeeSink:
    """Fans emitted gates out to several sinks in one pass."""

    __slots__ = ("sinks",)

    def __init__(self, *sinks):
        self.sinks = sinks

    def x(self, t: int) -> None:
        for s in self.sinks:
            s.x(t)

    def cx(self, c: int, t: int) -> None:
        for s in self.sinks:
            s.cx(c, t)

    def ccx(self, c1: int, c2: int, t: int) -> None:
        for s in self.sinks:
            s.ccx(c1, c2, t)

    def mcx(self, controls: tuple[int, ...], t: int) -> None:
        for s in self.sinks:
            s.mcx(controls, t)


def emit_controlled_x(sink, controls: tuple[int, ...], target: int) -> None:
    """Emit a NOT with however many controls, picking the narrowest kind."""
    k = len(controls)
    if k == 0:
        sink.x(target)
    elif k == 1:
        sink.cx(controls[0], target)
    elif k == 2:
        sink.ccx(controls[0], controls[1], target)
    else:
        sink.mcx(tuple(controls), target)


class LoweringSink:
    """Pass-through sink that rewrites k >= 3 MCX gates into Toffolis.

    Borrows the first pool qubit the gate does not touch; borrowed qubits
    are restored, so any idle data qubit qualifies.
    """

    __slots__ = ("sink", "pool")

    def __init__(self, sink, pool: Iterable[int]):
        self.sink = sink
        self.pool = tuple(pool)

    def x(self, t: int) -> None:
        self.sink.x(t)

    def cx(self, c: int, t: int) -> None:
        self.sink.cx(c, t)

    def ccx(self, c1: int, c2: int, t: int) -> None:
        self.sink.ccx(c1, c2, t)

    def mcx(self, controls: tuple[int, ...], t: int) -> None:
        if len(controls) <= 2:
            emit_controlled_x(self.sink, controls, t)
            return
        used = set(controls)
        used.add(t)
        dirty = next((q for q in self.pool if q not in used), None)
        if dirty is None:
            raise CircuitError("no pool qubit free of the MCX being lowered")
        emit_mcx(self.sink, controls, t, dirty)


def emit_circuit(circuit: Circuit, sink) -> None:
    """Replay a materialized reversible circuit into a sink."""
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
            raise CircuitError(f"cannot replay {k.name} into a gate sink")


# --------------------------------------------------------------------------
# multi-control lowering


def emit_mcx(sink, controls: tuple[int, ...], target: int, dirty: int | None = None) -> None:
    """Emit a multi-controlled NOT, lowering k >= 3 controls to Toffolis.

    A 3-controlled NOT costs exactly 4 Toffolis and borrows one dirty qubit
    in an unknown state, which is restored. Larger k recurses by splitting
    off one control, reusing the target as scratch for the inner gate, so
    the cost grows as 4**(k-2); the artifact itself never emits k > 3.
    """
    k = len(controls)
    if k == 0:
        sink.x(target)
        return
    if k == 1:
        sink.cx(controls[0], target)
        return
    if k == 2:
        sink.ccx(controls[0], controls[1], target)
        return
    if dirty is None:
        raise CircuitError(f"lowering a {k}-controlled NOT needs a dirty qubit")
    if dirty == target or dirty in controls:
        raise CircuitError("dirty qubit must not touch the gate being lowered")
    head, tail = controls[:-1], controls[-1]
    # toggle trick: target ^= tail & (dirty ^ head-AND) twice leaves
    # target ^= AND(all controls) and restores dirty
    if k == 3:
        sink.ccx(tail, dirty, target)
        sink.ccx(head[0], head[1], dirty)
        sink.ccx(tail, dirty, target)
        sink.ccx(head[0], head[1], dirty)
    else:
        sink.ccx(tail, dirty, target)
        emit_mcx(sink, head, dirty, target)
        sink.ccx(tail, dirty, target)
        emit_mcx(sink, head, dirty, target)


def lower_multi_controlled(circuit: Circuit, dirty_pool: Iterable[int]) -> Circuit:
    """Rewrite every MCX with >= 3 controls into Toffolis.

    Each lowered gate borrows the first pool qubit it does not touch; the
    borrowed qubit may hold any value and is restored.
    """
    pool = tuple(dirty_pool)
    out = Circuit(circuit.width, tag=circuit.tag)
    for g in circuit.gates:
        if g.kind == GateKind.MCX and len(g.controls) >= 3:
            used = set(g.qubits())
            dirty = next((q for q in pool if q not in used), None)
            if dirty is None:
                raise CircuitError("no pool qubit free of the MCX being lowered")
            emit_mcx(out, g.controls, g.target, dirty)
        else:
            out.append(g)
    return out


# --------------------------------------------------------------------------
# register bookkeeping


@dataclass(frozen=True)
class RegisterMap:
    """Named, disjoint little-endian views into one qubit row.

    clean lists qubits guaranteed |0> on entry; dirty lists borrowable
    qubits in unknown states that every routine must restore. Both refer to
    register names.
    """

    width: int
    registers: dict[str, tuple[int, ...]] = field(default_factory=dict)
    clean: tuple[str, ...] = ()
    dirty: tuple[str, ...] = ()

    def __post_init__(self):
        seen: set[int] = set()
        for name, qubits in self.registers.items():
            for q in qubits:
                if not 0 <= q < self.width:
                    raise CircuitError(f"register {name}: qubit {q} out of range")
                if q in seen:
                    raise CircuitError(f"register {name}: qubit {q} assigned twice")
                seen.add(q)
        for name in self.clean + self.dirty:
            if name not in self.registers:
                raise CircuitError(f"unknown register {name!r} in clean/dirty listing")

    def __getitem__(self, name: str) -> tuple[int, ...]:
        return self.registers[name]

    def value(self, state: int, name: str) -> int:
        v = 0
        for i, q in enumerate(self.registers[name]):
            v |= ((state >> q) & 1) << i
        return v

    def with_value(self, state: int, name: str, value: int) -> int:
        for i, q in enumerate(self.registers[name]):
            state = (state & ~(1 << q)) | (((value >> i) & 1) << q)
        return state

    def borrow(self, count: int, from_registers: Iterable[str], exclude: Iterable[int] = ()) -> tuple[int, ...]:
        """Hand out `count` currently-idle qubits from the named registers."""
        off = set(exclude)
        picked: list[int] = []
        for name in from_registers:
            for q in self.registers[name]:
                if q not in off:
                    picked.append(q)
                    if len(picked) == count:
                        return tuple(picked)
        raise CircuitError(f"cannot borrow {count} qubits, only {len(picked)} idle")


# --------------------------------------------------------------------------
# text format

_KIND_NAMES = {GateKind.X: "x", GateKind.CX: "cx", GateKind.CCX: "ccx", GateKind.MCX: "mcx"}
_NAME_KINDS = {v: k for k, v in _KIND_NAMES.items()}


def circuit_to_text(circuit: Circuit) -> str:
    """Serialize a reversible-pure circuit.

    Line 1 is `width <w>`; each following line is one gate, controls first,
    target last: `x t`, `cx c t`, `ccx c1 c2 t`, `mcx c1 ... ck t`.
    """
    lines = [f"width {circuit.width}"]
    for g in circuit.gates:
        name = _KIND_NAMES.get(g.kind)
        if name is None:
            raise CircuitError(f"{g.kind.name} has no text form")
        lines.append(" ".join([name, *map(str, g.controls), str(g.target)]))
    return "\n".join(lines) + "\n"


def circuit_from_text(text: str) -> Circuit:
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("width "):
        raise CircuitError("first line must be `width <w>`")
    try:
        width = int(lines[0].split()[1])
    except (IndexError, ValueError) as exc:
        raise CircuitError("malformed width line") from exc
    circ = Circuit(width)
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        kind = _NAME_KINDS.get(parts[0])
        if kind is None:
            raise CircuitError(f"line {lineno}: unknown gate {parts[0]!r}")
        try:
            qubits = [int(p) for p in parts[1:]]
        except ValueError as exc:
            raise CircuitError(f"line {lineno}: non-integer qubit") from exc
        if not qubits:
            raise CircuitError(f"line {lineno}: missing target")
        circ.append(Gate(kind, tuple(qubits[:-1]), qubits[-1]))
    return circ
