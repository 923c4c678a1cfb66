"""Dense quantum states and the brute-force spectral toolbox.

A state of n sites with local dimension d is a complex vector of d**n
amplitudes in big-endian flat order (site 1 is the most significant
digit). Reduced density matrices, Schmidt spectra and von Neumann
entropies are computed directly from the amplitudes; these routines are
the ground truth the MPS module is checked against.

Entropies are in nats throughout.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import InvalidInput

# Weights at or below this are counted as zero when reporting a Schmidt rank.
DISCARD_TOL = 1e-12
# Constructors renormalize inside this window and reject outside it.
NORM_TOL = 1e-3


@dataclass
class DenseState:
    """Normalized amplitude vector over ``n`` sites of local dimension ``d``."""

    n: int
    d: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInput(f"need at least one site, got n={self.n}")
        if self.d < 2:
            raise InvalidInput(f"local dimension must be >= 2, got d={self.d}")
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != self.d**self.n:
            raise InvalidInput(
                f"expected {self.d}**{self.n} = {self.d**self.n} amplitudes, "
                f"got {amps.size}"
            )
        if not np.isfinite(amps).all():
            raise InvalidInput("amplitudes contain non-finite values")
        norm = np.linalg.norm(amps)
        if abs(norm**2 - 1.0) > NORM_TOL:
            raise InvalidInput(
                f"state norm^2 = {norm**2:.6g} is too far from 1 to renormalize"
            )
        self.amplitudes = amps / norm

    def overlap(self, other: "DenseState") -> complex:
        if (self.n, self.d) != (other.n, other.d):
            raise InvalidInput("overlap needs matching site count and dimension")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def tensor(self) -> np.ndarray:
        """Amplitudes viewed as an n-index tensor of shape (d,) * n."""
        return self.amplitudes.reshape((self.d,) * self.n)


@dataclass
class SchmidtSpectrum:
    """Descending Schmidt weights at one cut; ``chi`` counts those above tolerance."""

    weights: np.ndarray
    chi: int = field(default=0)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if w.size == 0:
            raise InvalidInput("empty Schmidt spectrum")
        if np.any(w < -DISCARD_TOL):
            raise InvalidInput("Schmidt weights must be non-negative")
        w = np.sort(np.clip(w, 0.0, None))[::-1]
        if abs(np.sum(w**2) - 1.0) > 1e-8:
            raise InvalidInput(
                f"squared Schmidt weights sum to {np.sum(w**2):.10g}, expected 1"
            )
        self.weights = w
        self.chi = int(np.sum(w > DISCARD_TOL))


def _check_cut(state: DenseState, cut: int):
    if not 1 <= cut <= state.n - 1:
        raise InvalidInput(f"cut must lie in 1..{state.n - 1}, got {cut}")


def reduced_density_matrix(state: DenseState, cut: int, keep: str = "left") -> np.ndarray:
    """Density matrix of the first ``cut`` sites (or the rest, keep="right")."""
    _check_cut(state, cut)
    m = linalg.reshape_to_matrix(state.amplitudes, state.d**cut, state.d ** (state.n - cut))
    if keep == "left":
        return m @ m.conj().T
    if keep == "right":
        return m.T @ m.conj()
    raise InvalidInput(f"keep must be 'left' or 'right', got {keep!r}")


def schmidt_spectrum(state: DenseState, cut: int, discard_tol: float = DISCARD_TOL) -> SchmidtSpectrum:
    """Schmidt weights across the cut ``first cut sites | rest``.

    The weights are the singular values of the amplitude matrix reshaped
    to d**cut x d**(n-cut); values at or below ``discard_tol`` are
    dropped so that ``chi == len(weights)``.
    """
    _check_cut(state, cut)
    m = linalg.reshape_to_matrix(state.amplitudes, state.d**cut, state.d ** (state.n - cut))
    s = linalg.svd(m).s
    s = s[s > discard_tol]
    return SchmidtSpectrum(s)


def entropy(spectrum: SchmidtSpectrum) -> float:
    """Von Neumann entropy -sum(l^2 ln l^2) in nats, with 0 ln 0 = 0."""
    p = spectrum.weights**2
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def entropy_at_cut(state: DenseState, cut: int) -> float:
    return entropy(schmidt_spectrum(state, cut))


def entropy_left_equals_right(state: DenseState, cut: int) -> tuple[float, float]:
    """Entropies of both parties, each from its own reduced density matrix.

    Computed independently (two partial traces, two eigendecompositions)
    rather than via one SVD, as a cross-check that both sides agree.
    """
    out = []
    for keep in ("left", "right"):
        rho = reduced_density_matrix(state, cut, keep)
        w = linalg.eigh(rho)[0]
        p = w[w > 0]
        out.append(float(-np.sum(p * np.log(p))))
    return out[0], out[1]


# -- canonical example states -------------------------------------------------

def product_state(orbitals) -> DenseState:
    """Tensor product of single-site vectors; orbitals is a list of 1-D arrays."""
    amps = np.array([1.0], dtype=np.complex128)
    d = len(np.atleast_1d(orbitals[0]))
    for v in orbitals:
        v = np.asarray(v, dtype=np.complex128).reshape(-1)
        if v.size != d:
            raise InvalidInput("all site vectors must share one local dimension")
        amps = np.kron(amps, v)
    norm = np.linalg.norm(amps)
    if norm == 0.0:
        raise InvalidInput("product state built from a zero site vector")
    return DenseState(len(orbitals), d, amps / norm)


def basis_state(n: int, d: int, digits) -> DenseState:
    amps = np.zeros(d**n, dtype=np.complex128)
    flat = 0
    for q in digits:
        flat = flat * d + int(q)
    amps[flat] = 1.0
    return DenseState(n, d, amps)


def ghz_state(n: int) -> DenseState:
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[0] = amps[-1] = 1.0 / math.sqrt(2)
    return DenseState(n, 2, amps)


def w_state(n: int) -> DenseState:
    amps = np.zeros(2**n, dtype=np.complex128)
    for k in range(n):
        amps[1 << k] = 1.0 / math.sqrt(n)
    return DenseState(n, 2, amps)


def flat_entangled_state(half: int) -> DenseState:
    """2*half qubits with 2**half equal Schmidt weights at the middle cut."""
    dim = 2**half
    amps = np.eye(dim, dtype=np.complex128).reshape(-1) / math.sqrt(dim)
    return DenseState(2 * half, 2, amps)


def random_state(n: int, d: int, seed: int) -> DenseState:
    """Seeded complex Gaussian state, normalized."""
    rng = np.random.default_rng(seed)
    amps = rng.standard_normal(d**n) + 1j * rng.standard_normal(d**n)
    return DenseState(n, d, amps / np.linalg.norm(amps))


# -- QSTATE v1 text format ----------------------------------------------------

def save_qstate(state: DenseState, path):
    lines = ["QSTATE 1", f"{state.n} {state.d}"]
    lines.extend(f"{float(c.real)!r} {float(c.imag)!r}" for c in state.amplitudes)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_qstate(path) -> DenseState:
    with open(path) as fh:
        raw = [ln.strip() for ln in fh if ln.strip()]
    if not raw or raw[0].split() != ["QSTATE", "1"]:
        raise InvalidInput(f"{path}: missing 'QSTATE 1' header")
    try:
        n, d = (int(tok) for tok in raw[1].split())
    except (IndexError, ValueError) as exc:
        raise InvalidInput(f"{path}: malformed size line") from exc
    body = raw[2:]
    if len(body) != d**n:
        raise InvalidInput(
            f"{path}: expected {d**n} amplitude lines, found {len(body)}"
        )
    amps = np.empty(d**n, dtype=np.complex128)
    for i, ln in enumerate(body):
        parts = ln.split()
        if len(parts) != 2:
            raise InvalidInput(f"{path}: line {i + 3}: expected 're im'")
        try:
            re, im = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise InvalidInput(f"{path}: line {i + 3}: non-numeric value") from exc
        if not (math.isfinite(re) and math.isfinite(im)):
            raise InvalidInput(f"{path}: line {i + 3}: non-finite value")
        amps[i] = complex(re, im)
    return DenseState(n, d, amps)
