"""Gamma-matrix encoding of the filled-lowest-orbital fermion state.

The fully antisymmetric coefficient tensor of an n-particle Slater
determinant over n orbitals equals, up to one overall constant, the
trace of a product of Clifford generators closed by the chirality
matrix. Generators are built as the usual tensor-product ladder on
n/2 qubits:

    gamma^{2k}   = Z^{(x k)} (x) X (x) 1 ...
    gamma^{2k+1} = Z^{(x k)} (x) Y (x) 1 ...

so dim gamma = 2**(n/2). Traces are normalized by their value on the
identity permutation (0, 1, ..., n-1), which makes the amplitude exactly
the permutation sign, or 0 on a repeated index.

Site k of the first-quantized encoding is particle k; the local
dimension is the orbital count n.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import states
from .errors import InvalidInput, TooLarge
from .mps import PeriodicMps
from .states import DenseState

MAX_GENERATORS = 14  # dim guard 2**7

_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
_I = np.eye(2, dtype=np.complex128)


@dataclass
class CliffordRep:
    """n anticommuting Hermitian unitaries plus the chirality matrix."""

    n: int
    dim: int
    gammas: np.ndarray  # (n, dim, dim)
    gamma5: np.ndarray  # (dim, dim)
    trace_norm: complex  # tr(gamma^0 ... gamma^{n-1} gamma5)


def _kron_chain(ops) -> np.ndarray:
    out = ops[0]
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def build_clifford(n: int) -> CliffordRep:
    """Deterministic representation with {g^a, g^b} = 2 delta^{ab}."""
    if n < 2 or n % 2 != 0:
        raise InvalidInput(f"generator count must be even and >= 2, got {n}")
    if n > MAX_GENERATORS:
        raise TooLarge(f"n={n} generators exceed the dim guard 2**{MAX_GENERATORS // 2}")
    qubits = n // 2
    dim = 2**qubits
    gammas = np.empty((n, dim, dim), dtype=np.complex128)
    for a in range(n):
        k, odd = divmod(a, 2)
        ops = [_Z] * k + [_Y if odd else _X] + [_I] * (qubits - k - 1)
        gammas[a] = _kron_chain(ops)
    gamma5 = np.eye(dim, dtype=np.complex128)
    for a in range(n):
        gamma5 = gamma5 @ gammas[a]
    gamma5 = (-1j) ** qubits * gamma5
    trace_norm = complex(np.trace(np.linalg.multi_dot(list(gammas)) @ gamma5))
    return CliffordRep(n, dim, gammas, gamma5, trace_norm)


def _check_indices(rep: CliffordRep, indices) -> list:
    indices = [int(i) for i in indices]
    if len(indices) != rep.n:
        raise InvalidInput(f"expected {rep.n} indices, got {len(indices)}")
    for i in indices:
        if not 0 <= i < rep.n:
            raise InvalidInput(f"orbital index {i} out of range 0..{rep.n - 1}")
    return indices


def epsilon_via_trace(rep: CliffordRep, indices) -> complex:
    """Normalized trace tr(g^{a_1} ... g^{a_n} g5) / tr(g^0 ... g^{n-1} g5).

    Equals +1/-1 on even/odd permutations of (0..n-1) and 0 on repeats.
    """
    indices = _check_indices(rep, indices)
    prod = rep.gammas[indices[0]]
    for a in indices[1:]:
        prod = prod @ rep.gammas[a]
    return complex(np.trace(prod @ rep.gamma5) / rep.trace_norm)


def permutation_sign(indices) -> int:
    """Sign of a permutation of (0..len-1); 0 if any value repeats."""
    perm = list(indices)
    if len(set(perm)) != len(perm):
        return 0
    sign = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def _prefix_products(rep: CliffordRep, count: int) -> np.ndarray:
    """Generator products for all n**count index prefixes, C-ordered."""
    block = rep.gammas.copy()
    for _ in range(count - 1):
        block = np.einsum("pab,ibc->piac", block, rep.gammas, optimize=True)
        block = block.reshape(-1, rep.dim, rep.dim)
    return block


@dataclass
class SlaterState:
    """Totally antisymmetric n-particle state; amplitudes evaluated on demand."""

    rep: CliffordRep

    @property
    def n(self) -> int:
        return self.rep.n

    def amplitude(self, indices) -> complex:
        """Normalized amplitude for one occupation string."""
        return epsilon_via_trace(self.rep, indices) / math.sqrt(
            math.factorial(self.rep.n)
        )

    def amplitude_table(self) -> np.ndarray:
        """All n**n amplitudes as an n-index tensor.

        Meets in the middle: prefix products for each half are reused
        across tuples, so the cost is one big matrix product instead of
        n**n separate trace chains.
        """
        n, dim = self.rep.n, self.rep.dim
        if n**n > 2**24:
            raise TooLarge(f"{n}**{n} amplitudes exceed the dense guard")
        half = n // 2
        left = _prefix_products(self.rep, half)
        right = _prefix_products(self.rep, n - half)
        closing = self.rep.gamma5 / (self.rep.trace_norm * math.sqrt(math.factorial(n)))
        right = right @ closing
        amps = np.einsum("iab,jba->ij", left, right, optimize=True)
        return amps.reshape((n,) * n)

    def to_dense_state(self) -> DenseState:
        return DenseState(self.n, self.n, self.amplitude_table().reshape(-1))


def slater_from_trace(rep: CliffordRep) -> SlaterState:
    return SlaterState(rep)


def half_cut_entropy(rep: CliffordRep) -> float:
    """Entropy of the first n/2 particles against the rest, in nats.

    Computed densely from the trace-generated amplitudes; the analytic
    value is ln C(n, n/2), which always sits at or below the ring-MPS
    capacity 2 ln dim = n ln 2.
    """
    state = slater_from_trace(rep).to_dense_state()
    s = states.entropy(states.schmidt_spectrum(state, rep.n // 2))
    if binomial_entropy(rep.n) > capacity_bound(rep) + 1e-12:
        raise InvalidInput("half-cut entropy formula exceeds the MPS capacity bound")
    return s


def binomial_entropy(n: int) -> float:
    """ln C(n, n/2), the analytic half-cut entropy."""
    return math.log(math.comb(n, n // 2))


def capacity_bound(rep: CliffordRep) -> float:
    """2 ln dim: the most entropy a chi = dim ring MPS can carry at one cut."""
    return 2.0 * math.log(rep.dim)


def export_periodic_mps(rep: CliffordRep) -> PeriodicMps:
    """Ring MPS whose amplitudes equal the normalized traces.

    Every site carries the generator matrices; the chirality matrix and
    the trace normalization are folded into the last site.
    """
    mats = np.broadcast_to(
        rep.gammas, (rep.n, rep.n, rep.dim, rep.dim)
    ).copy()
    mats[-1] = rep.gammas @ rep.gamma5 / rep.trace_norm
    return PeriodicMps(rep.n, rep.n, rep.dim, mats)
