"""Small-width statevector simulation and the semiclassical factoring loop.

The period-finding register is replaced by one recycled control qubit:
each of the 2n iterations Hadamards it, applies the controlled modular
multiplication by a^(2^(2n-1-i)), rotates by a phase assembled from the
bits already measured, Hadamards again and measures. The measured bits,
least significant first, form the phase-estimation outcome y, which
continued fractions turn into an order candidate and the usual
gcd(a^(r/2) +- 1, N) step turns into factors.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .circuits import Circuit, Gate, GateKind
from .modular import ModMulSpec, ctrl_modmul_inplace, multiplier_constants
from .revsim import SimulationError, permutation_table

SV_WIDTH_CAP = 26
NORM_TOL = 1e-10
_SQRT_HALF = math.sqrt(0.5)


class Statevector:
    """Dense 2^width amplitude vector, norm-checked after every operation."""

    __slots__ = ("width", "amps")

    def __init__(self, width: int, value: int = 0, cap: int = SV_WIDTH_CAP):
        if width < 1 or width > cap:
            raise SimulationError(f"width {width} outside 1..{cap}")
        if not 0 <= value < (1 << width):
            raise SimulationError(f"basis value {value} out of range")
        self.width = width
        self.amps = np.zeros(1 << width, dtype=np.complex128)
        self.amps[value] = 1.0

    @classmethod
    def from_amplitudes(cls, amps, cap: int = SV_WIDTH_CAP) -> "Statevector":
        amps = np.asarray(amps, dtype=np.complex128)
        width = (len(amps) - 1).bit_length()
        if len(amps) != 1 << width:
            raise SimulationError("amplitude count must be a power of two")
        sv = cls(width, 0, cap)
        sv.amps = amps.copy()
        sv._check_norm()
        return sv

    def copy(self) -> "Statevector":
        out = Statevector.__new__(Statevector)
        out.width = self.width
        out.amps = self.amps.copy()
        return out

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amps) ** 2)))

    def _check_norm(self) -> None:
        if abs(self.norm() - 1.0) > NORM_TOL:
            raise SimulationError(f"state norm {self.norm()} drifted past tolerance")

    def _view(self, q: int) -> np.ndarray:
        # axis 1 of the reshape is qubit q (little endian)
        return self.amps.reshape(-1, 2, 1 << q)

    def apply_controlled_x(self, controls: tuple[int, ...], target: int) -> None:
        idx = np.arange(len(self.amps), dtype=np.int64)
        flip = np.int64(1 << target)
        if not controls:
            src = idx ^ flip
        else:
            cmask = np.int64(0)
            for c in controls:
                cmask |= np.int64(1 << c)
            src = idx.copy()
            sel = (idx & cmask) == cmask
            src[sel] ^= flip
        self.amps = self.amps[src]
        self._check_norm()

    def apply_permutation(self, perm: np.ndarray) -> None:
        """Route amplitude i to basis index perm[i]."""
        if len(perm) != len(self.amps):
            raise SimulationError("permutation size does not match state")
        out = np.empty_like(self.amps)
        out[perm] = self.amps
        self.amps = out
        self._check_norm()

    def hadamard(self, q: int) -> None:
        v = self._view(q)
        a0 = v[:, 0, :].copy()
        a1 = v[:, 1, :]
        v[:, 0, :] = (a0 + a1) * _SQRT_HALF
        v[:, 1, :] = (a0 - a1) * _SQRT_HALF
        self._check_norm()

    def phase_shift(self, theta: float, q: int) -> None:
        self._view(q)[:, 1, :] *= cmath.exp(1j * theta)
        self._check_norm()

    def probability(self, q: int) -> float:
        """P(qubit q measures 1)."""
        v = self._view(q)[:, 1, :]
        return float(np.sum(v.real**2 + v.imag**2))

    def measure(self, q: int, rng: np.random.Generator | None = None, forced: int | None = None) -> int:
        p1 = self.probability(q)
        if forced is not None:
            bit = forced
        else:
            if rng is None:
                raise SimulationError("measurement needs an rng or a forced outcome")
            bit = 1 if rng.random() < p1 else 0
        p = p1 if bit else 1.0 - p1
        if p <= 0.0:
            raise SimulationError(f"outcome {bit} on qubit {q} has zero probability")
        v = self._view(q)
        v[:, 1 - bit, :] = 0.0
        self.amps *= 1.0 / math.sqrt(p)
        self._check_norm()
        return bit

    def apply_gate(self, gate: Gate, rng: np.random.Generator | None = None) -> int | None:
        k = gate.kind
        if k in (GateKind.X, GateKind.CX, GateKind.CCX, GateKind.MCX):
            self.apply_controlled_x(gate.controls, gate.target)
            return None
        if k == GateKind.H:
            self.hadamard(gate.target)
            return None
        if k == GateKind.PHASE:
            self.phase_shift(gate.param, gate.target)
            return None
        if k == GateKind.MEASURE:
            return self.measure(gate.target, rng)
        raise SimulationError(f"cannot apply {k.name}")


def sv_run(
    circuit: Circuit,
    state: Statevector | int = 0,
    seed: int | np.random.Generator = 0,
) -> tuple[Statevector, list[int]]:
    """Apply a circuit to a (copy of the) state, collecting measured bits."""
    sv = state.copy() if isinstance(state, Statevector) else Statevector(circuit.width, state)
    if sv.width != circuit.width:
        raise SimulationError("state width does not match circuit")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    record: list[int] = []
    for gate in circuit.gates:
        bit = sv.apply_gate(gate, rng)
        if bit is not None:
            record.append(bit)
    return sv, record


# --------------------------------------------------------------------------
# semiclassical phase estimation driver


def semiclassical_angle(k: int, bits) -> float:
    """Phase correction before the k-th measurement from earlier bits:
    theta_k = -pi * sum_{j<k} m_j 2^(j-k)."""
    s = sum(bits[j] * 2.0 ** (j - k) for j in range(k))
    return -math.pi * s if s else 0.0


@dataclass(frozen=True)
class ShorRun:
    """One period-finding attempt: measured bits (m_0 least significant),
    the outcome y, the order candidate and any factors it yielded."""

    N: int
    a: int
    seed: int | None
    bits: tuple[int, ...]
    y: int | None
    r: int | None
    factors: tuple[int, int] | None
    width: int


def _multiplier_tables(N: int, a: int, count: int, mode: str) -> list[np.ndarray]:
    cache: dict[int, np.ndarray] = {}
    tables = []
    for c in multiplier_constants(a, N, count):
        if c not in cache:
            cache[c] = permutation_table(ctrl_modmul_inplace(ModMulSpec.standard(c, N, mode)))
        tables.append(cache[c])
    return tables


def shor_period_finding(
    N: int,
    a: int,
    seed: int | None = 0,
    rng: np.random.Generator | None = None,
    mode: str = "serial",
) -> ShorRun:
    """Sample one 2n-bit phase-estimation outcome with 2n+2 live qubits."""
    if math.gcd(a, N) != 1:
        raise ValueError(f"a={a} shares a factor with N={N}")
    n = N.bit_length()
    t = 2 * n
    width = 2 * n + 2
    if width > SV_WIDTH_CAP:
        raise SimulationError(f"N={N} needs {width} qubits, over the {SV_WIDTH_CAP} cap")
    ctrl = 2 * n + 1
    tables = _multiplier_tables(N, a, t, mode)
    if rng is None:
        rng = np.random.default_rng(seed)
    sv = Statevector(width, value=1)  # multiplication register starts at |1>
    bits: list[int] = []
    for i in range(t):
        sv.hadamard(ctrl)
        sv.apply_permutation(tables[t - 1 - i])
        sv.phase_shift(semiclassical_angle(i, bits), ctrl)
        sv.hadamard(ctrl)
        m = sv.measure(ctrl, rng)
        if m:
            sv.apply_controlled_x((), ctrl)  # recycle: reset to |0>
        bits.append(m)
    y = sum(b << i for i, b in enumerate(bits))
    r = continued_fraction_order(y, 1 << t, N, a)
    return ShorRun(
        N=N, a=a, seed=seed, bits=tuple(bits), y=y, r=r,
        factors=order_to_factors(a, r, N), width=width,
    )


def exact_outcome_distribution(N: int, a: int, mode: str = "serial") -> dict[int, float]:
    """Probability of every 2n-bit outcome y, by branching both results of
    each measurement instead of sampling one."""
    if math.gcd(a, N) != 1:
        raise ValueError(f"a={a} shares a factor with N={N}")
    n = N.bit_length()
    t = 2 * n
    width = 2 * n + 2
    if width > SV_WIDTH_CAP:
        raise SimulationError(f"N={N} needs {width} qubits, over the {SV_WIDTH_CAP} cap")
    ctrl = 2 * n + 1
    tables = _multiplier_tables(N, a, t, mode)
    dist: dict[int, float] = {}
    start = Statevector(width, value=1)

    def branch(sv: Statevector, i: int, bits: list[int], prob: float) -> None:
        if i == t:
            y = sum(b << j for j, b in enumerate(bits))
            dist[y] = dist.get(y, 0.0) + prob
            return
        sv.hadamard(ctrl)
        sv.apply_permutation(tables[t - 1 - i])
        sv.phase_shift(semiclassical_angle(i, bits), ctrl)
        sv.hadamard(ctrl)
        p1 = sv.probability(ctrl)
        for m, p in ((0, 1.0 - p1), (1, p1)):
            if p <= 1e-18:
                continue
            nxt = sv.copy()
            nxt.measure(ctrl, forced=m)
            if m:
                nxt.apply_controlled_x((), ctrl)
            bits.append(m)
            branch(nxt, i + 1, bits, prob * p)
            bits.pop()

    branch(start, 0, [], 1.0)
    return dist


# --------------------------------------------------------------------------
# classical post-processing


def continued_fraction_order(y: int, Q: int, N: int, a: int) -> int | None:
    """Order candidate from the convergents of y/Q.

    Walks convergent denominators q < N in ascending order; each is
    refined by doubling (q, 2q, 4q, ... < N) because the measured phase
    may land on a convergent whose denominator divides the order. Returns
    the first candidate r with a^r = 1 mod N, or None.
    """
    if not 0 <= y < Q:
        raise ValueError(f"y={y} outside [0, {Q})")
    if y == 0:
        return None
    num, den = y, Q
    k_prev, k_last = 1, 0
    while den:
        term = num // den
        num, den = den, num % den
        k = term * k_last + k_prev
        k_prev, k_last = k_last, k
        if k >= N:
            break
        cand = k
        while 0 < cand < N:
            if pow(a, cand, N) == 1:
                return cand
            cand *= 2
    return None


def order_to_factors(a: int, r: int | None, N: int) -> tuple[int, int] | None:
    """gcd(a^(r/2) +- 1, N) when r is even and a^(r/2) != -1 mod N."""
    if r is None or r % 2:
        return None
    h = pow(a, r // 2, N)
    if h == N - 1:
        return None
    for d in (math.gcd(h - 1, N), math.gcd(h + 1, N)):
        if 1 < d < N:
            return tuple(sorted((d, N // d)))  # type: ignore[return-value]
    return None


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in range(2, math.isqrt(n) + 1):
        if n % p == 0:
            return False
    return True


def _prime_power_root(n: int) -> int | None:
    for k in range(2, n.bit_length() + 1):
        root = round(n ** (1.0 / k))
        for cand in (root - 1, root, root + 1):
            if cand > 1 and cand**k == n:
                return cand
    return None


@dataclass(frozen=True)
class ShorOutcome:
    N: int
    seed: int
    factors: tuple[int, int] | None
    runs: tuple[ShorRun, ...] = field(default_factory=tuple)

    @property
    def attempts_used(self) -> int:
        return len(self.runs)


def validate_modulus(N: int) -> None:
    """Reject inputs the factoring loop cannot help with: even numbers,
    primes, prime powers, and anything over the simulator width cap."""
    if N < 3 or N % 2 == 0:
        raise ValueError("N must be an odd integer >= 3")
    if _is_prime(N):
        raise ValueError(f"N={N} is prime")
    root = _prime_power_root(N)
    if root is not None:
        raise ValueError(f"N={N} is a prime power of {root}")
    if 2 * N.bit_length() + 2 > SV_WIDTH_CAP:
        raise SimulationError(
            f"N={N} needs {2 * N.bit_length() + 2} qubits, over the {SV_WIDTH_CAP} cap"
        )


def shor_factor(N: int, attempts: int = 16, seed: int = 0, mode: str = "serial") -> ShorOutcome:
    """Repeatedly pick a, shortcut on gcd, otherwise run period finding.

    Requires N odd, composite and not a prime power; every random draw
    comes from the one seeded generator, so outcomes are reproducible.
    """
    validate_modulus(N)
    rng = np.random.default_rng(seed)
    runs: list[ShorRun] = []
    for _ in range(attempts):
        a = int(rng.integers(2, N - 1))
        g = math.gcd(a, N)
        if g > 1:
            factors = tuple(sorted((g, N // g)))
            runs.append(ShorRun(N=N, a=a, seed=None, bits=(), y=None, r=None,
                                factors=factors, width=2 * N.bit_length() + 2))
            return ShorOutcome(N=N, seed=seed, factors=factors, runs=tuple(runs))
        run = shor_period_finding(N, a, seed=None, rng=rng, mode=mode)
        runs.append(run)
        if run.factors is not None:
            return ShorOutcome(N=N, seed=seed, factors=run.factors, runs=tuple(runs))
    return ShorOutcome(N=N, seed=seed, factors=None, runs=tuple(runs))


def format_transcript(run: ShorRun) -> str:
    """Line-oriented record: one `i= m= theta=` line per iteration, then
    the summary `y= r= factors=` line."""
    lines = []
    for i, m in enumerate(run.bits):
        lines.append(f"i={i} m={m} theta={semiclassical_angle(i, run.bits)}")
    y = run.y if run.y is not None else "none"
    r = run.r if run.r is not None else "none"
    f = f"{run.factors[0]},{run.factors[1]}" if run.factors else "none"
    lines.append(f"y={y} r={r} factors={f}")
    return "\n".join(lines) + "\n"
