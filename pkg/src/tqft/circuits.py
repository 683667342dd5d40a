"""Depth-truncated QFT circuit plans and their statevector application.

A plan for register size m and truncation depth d contains, for each stage
j = 0..m-1 (acting on qubit j, qubit 0 = most significant bit):

    H on qubit j, then controlled-phase gates CP(k) for k = 2..min(d, m-j),
    with control qubit j+k-1 and phase angle 2*pi/2^k on |11>.

A single bit-reversal permutation closes the plan. It relabels amplitudes
classically instead of emitting SWAP gates, so it never enters the
two-qubit gate count; with it, the d = m plan realizes the exact DFT
matrix entry (y, x) = exp(2*pi*i*x*y/N)/sqrt(N).

Truncation drops every rotation finer than 2*pi/2^d. gate_count gives the
retained controlled-phase count without building a plan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .numerics import StateVector

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

HADAMARD = "H"
CONTROLLED_PHASE = "CP"
BIT_REVERSAL = "BITREV"


@dataclass(frozen=True)
class GateOp:
    """One plan element: H <target>, CP <k> <control> <target>, or BITREV."""

    kind: str
    target: int = -1
    control: int = -1
    k: int = 0

    def __post_init__(self):
        if self.kind == HADAMARD:
            if self.target < 0:
                raise ValueError("Hadamard needs a target qubit")
        elif self.kind == CONTROLLED_PHASE:
            if self.k < 2:
                raise ValueError(f"controlled-phase angle index must be >= 2, got {self.k}")
            if self.target < 0 or self.control < 0:
                raise ValueError("controlled-phase needs control and target qubits")
            if self.control == self.target:
                raise ValueError("control and target must differ")
        elif self.kind != BIT_REVERSAL:
            raise ValueError(f"unknown gate kind {self.kind!r}")

    @property
    def angle(self) -> float:
        """Rotation angle 2*pi/2^k in radians (controlled-phase only)."""
        if self.kind != CONTROLLED_PHASE:
            raise ValueError(f"{self.kind} gate has no angle")
        return 2.0 * math.pi / (1 << self.k)


def hadamard(target: int) -> GateOp:
    return GateOp(HADAMARD, target=target)


def controlled_phase(k: int, control: int, target: int) -> GateOp:
    return GateOp(CONTROLLED_PHASE, target=target, control=control, k=k)


def bit_reversal() -> GateOp:
    return GateOp(BIT_REVERSAL)


def gate_count(m: int, d: int) -> int:
    """Number of controlled-phase gates in the depth-d plan on m qubits.

    Stage j retains min(d-1, m-j-1) gates (never negative); d = m gives the
    full-circuit count m(m-1)/2.
    """
    _check_m_d(m, d)
    return sum(max(0, min(d - 1, m - j - 1)) for j in range(m))


@dataclass(frozen=True)
class CircuitPlan:
    """Ordered gate list for the depth-d truncated QFT on m qubits."""

    m: int
    d: int
    gates: tuple[GateOp, ...] = field(repr=False)

    def __post_init__(self):
        _check_m_d(self.m, self.d)
        n_h = n_cp = 0
        for g in self.gates:
            if g.kind == HADAMARD:
                n_h += 1
                if not 0 <= g.target < self.m:
                    raise ValueError(f"Hadamard target {g.target} out of range for m={self.m}")
            elif g.kind == CONTROLLED_PHASE:
                n_cp += 1
                if not (0 <= g.target < self.m and 0 <= g.control < self.m):
                    raise ValueError(f"gate qubits ({g.control}, {g.target}) out of range")
                if g.k > self.d:
                    raise ValueError(f"angle index {g.k} exceeds truncation depth {self.d}")
        if n_h != self.m:
            raise ValueError(f"plan must hold exactly {self.m} Hadamards, found {n_h}")
        if n_cp != gate_count(self.m, self.d):
            raise ValueError(
                f"plan holds {n_cp} controlled-phase gates, "
                f"expected {gate_count(self.m, self.d)} for (m={self.m}, d={self.d})"
            )
        if not self.gates or self.gates[-1].kind != BIT_REVERSAL:
            raise ValueError("plan must end with a single bit-reversal")
        if sum(g.kind == BIT_REVERSAL for g in self.gates) != 1:
            raise ValueError("plan must contain exactly one bit-reversal")

    @property
    def controlled_phase_count(self) -> int:
        return sum(g.kind == CONTROLLED_PHASE for g in self.gates)


def plan_truncated_qft(m: int, d: int) -> CircuitPlan:
    """Build the depth-d truncated QFT plan. d is validated, never clamped."""
    _check_m_d(m, d)
    gates: list[GateOp] = []
    for j in range(m):
        gates.append(hadamard(j))
        for k in range(2, min(d, m - j) + 1):
            gates.append(controlled_phase(k, control=j + k - 1, target=j))
    gates.append(bit_reversal())
    return CircuitPlan(m, d, tuple(gates))


def _check_m_d(m: int, d: int) -> None:
    if m < 1:
        raise ValueError(f"register size must be >= 1, got {m}")
    if not 1 <= d <= m:
        raise ValueError(f"truncation depth must satisfy 1 <= d <= m, got d={d}, m={m}")


APPLY_MAX_QUBITS = 24  # 2^24 complex amplitudes = 256 MiB; the desk-scale ceiling


@lru_cache(maxsize=64)
def bit_reversal_permutation(m: int) -> np.ndarray:
    """Index permutation rev with rev[y] = y read back in reversed bit order."""
    idx = np.arange(1 << m)
    rev = np.zeros_like(idx)
    for b in range(m):
        rev |= ((idx >> b) & 1) << (m - 1 - b)
    rev.setflags(write=False)
    return rev


def apply_plan(state: StateVector, plan: CircuitPlan, inverse: bool = False) -> StateVector:
    """Apply a plan (or its adjoint) to a statevector.

    The inverse direction runs the gates in reverse order with conjugated
    phase angles; Hadamard and the bit-reversal permutation are their own
    inverses. Output norm equals input norm to machine precision.
    """
    if state.m != plan.m:
        raise ValueError(f"state has m={state.m} but plan has m={plan.m}")
    amps = state.amplitudes.copy()
    apply_plan_to_array(amps, plan, inverse=inverse)
    return StateVector(state.m, amps)


def apply_plan_to_array(amps: np.ndarray, plan: CircuitPlan, inverse: bool = False) -> None:
    """In-place plan application on an array whose last axis is the state axis.

    Leading axes are batch dimensions, so a (batch, 2^m) array runs every
    state through the same plan in one pass.
    """
    m = plan.m
    if m > APPLY_MAX_QUBITS:
        raise ValueError(f"statevector application is limited to m <= {APPLY_MAX_QUBITS}")
    if amps.shape[-1] != 1 << m:
        raise ValueError(f"last axis must have length {1 << m}, got {amps.shape[-1]}")
    gates = reversed(plan.gates) if inverse else plan.gates
    sign = -1.0 if inverse else 1.0
    for g in gates:
        if g.kind == HADAMARD:
            _apply_hadamard(amps, m, g.target)
        elif g.kind == CONTROLLED_PHASE:
            _apply_controlled_phase(amps, m, g.control, g.target, sign * g.angle)
        else:
            amps[...] = amps[..., bit_reversal_permutation(m)]


def _apply_hadamard(amps: np.ndarray, m: int, target: int) -> None:
    b = m - 1 - target  # bit position from the least significant end
    n = 1 << m
    view = amps.reshape(amps.shape[:-1] + (n >> (b + 1), 2, 1 << b))
    a0 = view[..., 0, :].copy()
    a1 = view[..., 1, :]
    view[..., 0, :] = (a0 + a1) * _INV_SQRT2
    view[..., 1, :] = (a0 - a1) * _INV_SQRT2


def _apply_controlled_phase(amps: np.ndarray, m: int, control: int, target: int,
                            angle: float) -> None:
    # Diagonal gate: multiply amplitudes with both qubit bits set. Exposing
    # the two bits as length-2 axes makes that a strided sub-block multiply.
    b_hi = m - 1 - min(control, target)
    b_lo = m - 1 - max(control, target)
    n = 1 << m
    view = amps.reshape(
        amps.shape[:-1] + (n >> (b_hi + 1), 2, (1 << b_hi) >> (b_lo + 1), 2, 1 << b_lo)
    )
    view[..., 1, :, 1, :] *= complex(math.cos(angle), math.sin(angle))


def full_qft_matrix(m: int) -> np.ndarray:
    """Dense DFT unitary with entry (y, x) = exp(2*pi*i*x*y/N)/sqrt(N).

    Test oracle only; refuses m > 8.
    """
    if not 1 <= m <= 8:
        raise ValueError(f"dense QFT matrix is a test oracle, limited to 1 <= m <= 8 (got {m})")
    n = 1 << m
    y = np.arange(n)
    return np.exp(2j * np.pi * np.outer(y, y) / n) / math.sqrt(n)


def plan_unitary(plan: CircuitPlan, inverse: bool = False) -> np.ndarray:
    """Dense unitary realized by a plan, built column-by-column (m <= 8)."""
    if plan.m > 8:
        raise ValueError(f"dense plan unitary is limited to m <= 8 (got {plan.m})")
    n = 1 << plan.m
    basis = np.eye(n, dtype=np.complex128)  # row x is the basis state |x>
    apply_plan_to_array(basis, plan, inverse=inverse)
    return basis.T.copy()


def serialize_plan(plan: CircuitPlan) -> str:
    """Line-oriented text form: header `m=<m> d=<d>`, one gate per line."""
    lines = [f"m={plan.m} d={plan.d}"]
    for g in plan.gates:
        if g.kind == HADAMARD:
            lines.append(f"H {g.target}")
        elif g.kind == CONTROLLED_PHASE:
            lines.append(f"CP {g.k} {g.control} {g.target}")
        else:
            lines.append("BITREV")
    return "\n".join(lines) + "\n"


def parse_plan(text: str) -> CircuitPlan:
    """Parse the serialize_plan format, validating all plan invariants."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty plan text")
    header = lines[0].split()
    try:
        fields = dict(part.split("=", 1) for part in header)
        m, d = int(fields["m"]), int(fields["d"])
    except (ValueError, KeyError) as exc:
        raise ValueError(f"malformed plan header {lines[0]!r}") from exc
    gates: list[GateOp] = []
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "H" and len(parts) == 2:
            gates.append(hadamard(int(parts[1])))
        elif parts[0] == "CP" and len(parts) == 4:
            gates.append(controlled_phase(int(parts[1]), control=int(parts[2]),
                                          target=int(parts[3])))
        elif parts[0] == "BITREV" and len(parts) == 1:
            gates.append(bit_reversal())
        else:
            raise ValueError(f"malformed plan line {ln!r}")
    return CircuitPlan(m, d, tuple(gates))
