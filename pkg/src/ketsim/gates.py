"""Gate constants, parameterized unitaries, oracles, and register embeddings.

Matrices are plain complex ndarrays.  The control qubit of CNOT (and the
first qubit of any two-qubit gate) is the *high-order* qubit of the pair,
matching the amplitude ordering (a, b, c, d) -> (a, b, d, c).

Dense matrices are capped at dimension 1024 (10 qubits); anything larger
must be applied through the O(2**n) kernels ``apply_gate_at`` and
``apply_oracle_at`` instead of being materialized.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import CapacityExceeded, DimensionMismatch, InvalidInput
from .state import StateVector

DENSE_DIM_CAP = 1024

_SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class TruthTable:
    """A boolean function f: {0,1}**arity -> {0,1} tabulated over all inputs.

    ``outputs[x]`` is f at the input whose bits are the binary digits of
    ``x``, most significant first.
    """

    arity: int
    outputs: tuple[int, ...]

    def __post_init__(self):
        if self.arity < 1:
            raise InvalidInput("truth table arity must be at least 1")
        if len(self.outputs) != 1 << self.arity:
            raise InvalidInput(
                f"truth table of arity {self.arity} needs {1 << self.arity} outputs, "
                f"got {len(self.outputs)}"
            )
        if any(v not in (0, 1) for v in self.outputs):
            raise InvalidInput("truth table outputs must be 0 or 1")

    @classmethod
    def from_function(cls, arity: int, fn: Callable[[int], int]) -> "TruthTable":
        return cls(arity, tuple(int(fn(x)) for x in range(1 << arity)))

    @property
    def ones(self) -> int:
        return sum(self.outputs)

    def is_constant(self) -> bool:
        return self.ones in (0, len(self.outputs))

    def is_balanced(self) -> bool:
        return self.ones * 2 == len(self.outputs)


def identity(dim: int = 2) -> np.ndarray:
    return np.eye(dim, dtype=np.complex128)


def pauli_x() -> np.ndarray:
    return np.array([[0, 1], [1, 0]], dtype=np.complex128)


def pauli_y() -> np.ndarray:
    return np.array([[0, -1j], [1j, 0]], dtype=np.complex128)


def pauli_z() -> np.ndarray:
    return np.array([[1, 0], [0, -1]], dtype=np.complex128)


def hadamard() -> np.ndarray:
    return np.array([[1, 1], [1, -1]], dtype=np.complex128) * _SQRT_HALF


def u2_from_params(a: float, b: float, c: float, d: float) -> np.ndarray:
    """General 2x2 unitary: global phase e^{ia} times three rotation factors.

    The factors are, in order: an XX-axis rotation by ``b``, a plane
    rotation by ``c``, and a relative phase by ``d``.  Every 2x2 unitary
    arises from some choice of the four angles.
    """
    for value in (a, b, c, d):
        if not math.isfinite(value):
            raise InvalidInput("u2 parameters must be finite")
    first = np.array(
        [[math.cos(b), -1j * math.sin(b)], [-1j * math.sin(b), math.cos(b)]],
        dtype=np.complex128,
    )
    second = np.array(
        [[math.cos(c), -math.sin(c)], [math.sin(c), math.cos(c)]], dtype=np.complex128
    )
    third = np.array(
        [[complex(math.cos(d), -math.sin(d)), 0], [0, complex(math.cos(d), math.sin(d))]],
        dtype=np.complex128,
    )
    return complex(math.cos(a), math.sin(a)) * (first @ second @ third)


def cnot() -> np.ndarray:
    """Controlled NOT on two qubits, control = high-order qubit."""
    return np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
    )


def toffoli_unitary() -> np.ndarray:
    """8x8 permutation |a,b,c> -> |a,b,c xor ab| lifting the classical gate."""
    m = np.eye(8, dtype=np.complex128)
    m[[6, 7]] = m[[7, 6]]
    return m


def classical_toffoli(a: int, b: int, c: int) -> tuple[int, int, int]:
    """Reversible classical gate (a, b, c) -> (a, b, c xor ab)."""
    for bit in (a, b, c):
        if bit not in (0, 1):
            raise InvalidInput(f"bits must be 0 or 1, got {bit!r}")
    return a, b, c ^ (a & b)


def nand_via_toffoli(a: int, b: int) -> int:
    """NAND computed reversibly: the third output of Toffoli with c = 1."""
    return classical_toffoli(a, b, 1)[2]


def bell_pair(i: int, j: int) -> StateVector:
    """The four maximally entangled 2-qubit states, indexed by two bits.

    (0,0) and (1,0) are (|00> +/- |11>)/sqrt(2); (0,1) and (1,1) are
    (|01> +/- |10>)/sqrt(2).
    """
    if i not in (0, 1) or j not in (0, 1):
        raise InvalidInput("bell_pair indices must be bits")
    sign = -1.0 if i else 1.0
    if j == 0:
        amps = [_SQRT_HALF, 0.0, 0.0, sign * _SQRT_HALF]
    else:
        amps = [0.0, _SQRT_HALF, sign * _SQRT_HALF, 0.0]
    return StateVector(amps)


def is_unitary(m: np.ndarray, tol: float = 1e-9) -> bool:
    """Whether ||M* M - I||_F <= tol for a square matrix."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    gram = m.conj().T @ m
    return bool(np.linalg.norm(gram - np.eye(m.shape[0])) <= tol)


def _check_dense_dim(dim: int) -> None:
    if dim > DENSE_DIM_CAP:
        raise CapacityExceeded(
            f"dense matrix of dimension {dim} exceeds the cap of {DENSE_DIM_CAP}; "
            "use apply_gate_at / apply_oracle_at instead"
        )


def embed_single(g: np.ndarray, i: int, n: int) -> np.ndarray:
    """Extend a 1-qubit gate to act on qubit ``i`` of an n-qubit register."""
    g = np.asarray(g, dtype=np.complex128)
    if g.shape != (2, 2):
        raise DimensionMismatch(f"embed_single needs a 2x2 gate, got {g.shape}")
    if not 0 <= i < n:
        raise InvalidInput(f"qubit index {i} out of range for {n} qubits")
    _check_dense_dim(1 << n)
    return np.kron(np.kron(identity(1 << i), g), identity(1 << (n - 1 - i)))


def embed_two(g: np.ndarray, i: int, j: int, n: int) -> np.ndarray:
    """Extend a 2-qubit gate to the ordered qubit pair (i, j) of n qubits.

    Qubit ``i`` plays the gate's high-order role (the control, for CNOT);
    all other qubits are left untouched.
    """
    g = np.asarray(g, dtype=np.complex128)
    if g.shape != (4, 4):
        raise DimensionMismatch(f"embed_two needs a 4x4 gate, got {g.shape}")
    if i == j:
        raise InvalidInput("embed_two requires two distinct qubits")
    for q in (i, j):
        if not 0 <= q < n:
            raise InvalidInput(f"qubit index {q} out of range for {n} qubits")
    dim = 1 << n
    _check_dense_dim(dim)
    out = np.zeros((dim, dim), dtype=np.complex128)
    pos_i = n - 1 - i
    pos_j = n - 1 - j
    clear = ~((1 << pos_i) | (1 << pos_j))
    for col in range(dim):
        gate_col = 2 * ((col >> pos_i) & 1) + ((col >> pos_j) & 1)
        base = col & clear
        for bi in (0, 1):
            for bj in (0, 1):
                value = g[2 * bi + bj, gate_col]
                if value != 0:
                    out[base | (bi << pos_i) | (bj << pos_j), col] = value
    return out


def apply(g: np.ndarray, s: StateVector) -> StateVector:
    """Matrix-vector action of a full-register gate on a state."""
    g = np.asarray(g, dtype=np.complex128)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise DimensionMismatch(f"gate must be square, got shape {g.shape}")
    if g.shape[0] != s.dim:
        raise DimensionMismatch(
            f"gate dimension {g.shape[0]} does not match state dimension {s.dim}"
        )
    return StateVector(g @ s.amplitudes)


def apply_gate_at(g: np.ndarray, targets: Sequence[int], s: StateVector) -> StateVector:
    """Apply a small gate to the listed qubits without materializing 2**n x 2**n.

    Equivalent to ``apply(embed_...(g, ...), s)`` but runs in O(2**n)
    amplitude updates.  The first listed qubit is the gate's high-order
    qubit.
    """
    targets = list(targets)
    k = len(targets)
    if len(set(targets)) != k or k == 0:
        raise InvalidInput("targets must be distinct and nonempty")
    n = s.num_qubits
    for q in targets:
        if not 0 <= q < n:
            raise InvalidInput(f"qubit index {q} out of range for {n} qubits")
    g = np.asarray(g, dtype=np.complex128)
    if g.shape != (1 << k, 1 << k):
        raise DimensionMismatch(f"gate shape {g.shape} does not act on {k} qubits")
    tensor_state = s.amplitudes.reshape([2] * n)
    tensor_gate = g.reshape([2] * (2 * k))
    moved = np.tensordot(tensor_gate, tensor_state, axes=(list(range(k, 2 * k)), targets))
    rest = [q for q in range(n) if q not in set(targets)]
    order = np.argsort(targets + rest)
    return StateVector(np.transpose(moved, order).reshape(-1))


def oracle_from_truth_table(f: TruthTable) -> np.ndarray:
    """Reversible lift of f on arity+1 qubits: |x>|y> -> |x>|y xor f(x)>.

    The result is a 0/1 permutation matrix and its own inverse.
    """
    dim = 1 << (f.arity + 1)
    _check_dense_dim(dim)
    out = np.zeros((dim, dim), dtype=np.complex128)
    for col in range(dim):
        x, y = col >> 1, col & 1
        out[(x << 1) | (y ^ f.outputs[x]), col] = 1.0
    return out


def apply_oracle_at(f: TruthTable, targets: Sequence[int], s: StateVector) -> StateVector:
    """O(2**n) kernel for the oracle of ``f``.

    ``targets`` lists the arity input qubits (first = x1) followed by the
    output qubit that receives y xor f(x).
    """
    targets = list(targets)
    if len(targets) != f.arity + 1:
        raise InvalidInput(
            f"oracle of arity {f.arity} needs {f.arity + 1} targets, got {len(targets)}"
        )
    if len(set(targets)) != len(targets):
        raise InvalidInput("targets must be distinct")
    n = s.num_qubits
    for q in targets:
        if not 0 <= q < n:
            raise InvalidInput(f"qubit index {q} out of range for {n} qubits")
    idx = np.arange(s.dim)
    x = np.zeros(s.dim, dtype=np.intp)
    for q in targets[:-1]:
        x = (x << 1) | ((idx >> (n - 1 - q)) & 1)
    flips = np.asarray(f.outputs, dtype=np.intp)[x] << (n - 1 - targets[-1])
    return StateVector(s.amplitudes[idx ^ flips])


def walsh_hadamard(n: int) -> np.ndarray:
    """n-fold tensor power of the Hadamard gate.

    Applied to |0...0> it produces the uniform superposition of all 2**n
    basis states with amplitude 2**(-n/2) each.
    """
    if n < 1:
        raise InvalidInput("walsh_hadamard needs n >= 1")
    _check_dense_dim(1 << n)
    return reduce(np.kron, [hadamard()] * n)


def basis_cloner(n: int) -> np.ndarray:
    """Permutation unitary on C^n x C^n copying every basis state.

    Maps |i>|blank> -> |i>|i> with the blank sheet fixed at basis index 0.
    The remaining columns are completed to a bijection deterministically:
    source pairs (i, j), j != 0, are scanned with j outermost and assigned
    the lexicographically smallest target pair not yet used.  By linearity
    the same map sends a superposition to an entangled state rather than
    to its product clone, which is the no-cloning obstruction.
    """
    if not 2 <= n <= 32:
        raise InvalidInput(f"basis_cloner supports 2 <= n <= 32, got {n}")
    mapping: dict[tuple[int, int], tuple[int, int]] = {(i, 0): (i, i) for i in range(n)}
    used = set(mapping.values())
    free = iter(
        (k, l) for k in range(n) for l in range(n) if (k, l) not in used
    )
    for j in range(1, n):
        for i in range(n):
            mapping[(i, j)] = next(free)
    out = np.zeros((n * n, n * n), dtype=np.complex128)
    for (i, j), (k, l) in mapping.items():
        out[k * n + l, i * n + j] = 1.0
    return out
