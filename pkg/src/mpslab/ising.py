"""Transverse-field Ising chain: H = -sum sx_k sx_{k+1} - h sum sz_k.

Ground states come from matrix-free Lanczos (ARPACK) on a bit-arithmetic
matvec; block entropies come from the dense state via the spectral
toolbox. The chain is critical at h = 1 with central charge 1/2, which
the block-entropy fit recovers through the finite-size chord length
(n/pi) sin(pi l / n) on periodic chains.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
import scipy.sparse.linalg as spla

from . import states
from .errors import InvalidInput, NumericalFailure, TooLarge
from .states import DenseState

MAX_SITES = 22
DEFAULT_SEED = 7
# Below this an entropy-vs-chord fit is flagged as unreliable (saturated,
# off-critical scans land far below; critical scans sit above 0.999).
FIT_R2_THRESHOLD = 0.98


@dataclass(frozen=True)
class IsingChain:
    n: int
    h: float
    boundary: str = "periodic"

    def __post_init__(self):
        if self.n < 2:
            raise InvalidInput(f"chain needs n >= 2 sites, got {self.n}")
        if self.h < 0:
            raise InvalidInput(f"field strength must be >= 0, got {self.h}")
        if self.boundary not in ("open", "periodic"):
            raise InvalidInput(f"boundary must be open|periodic, got {self.boundary!r}")


@lru_cache(maxsize=8)
def _index_tables(n: int, boundary: str):
    idx = np.arange(2**n, dtype=np.int64)
    ones = np.bitwise_count(idx).astype(np.int64)
    zsum = (n - 2 * ones).astype(np.float64)
    bonds = [(k, k + 1) for k in range(n - 1)]
    if boundary == "periodic":
        bonds.append((n - 1, 0))
    # site k occupies bit (n - 1 - k): big-endian flat indexing
    flips = tuple(idx ^ ((1 << (n - 1 - a)) | (1 << (n - 1 - b))) for a, b in bonds)
    return zsum, flips


def apply_hamiltonian(chain: IsingChain, v: np.ndarray) -> np.ndarray:
    """H @ v without materializing H; sign and bit arithmetic on indices."""
    v = np.asarray(v)
    if v.shape != (2**chain.n,):
        raise InvalidInput(
            f"vector length {v.shape} does not match 2**{chain.n}"
        )
    zsum, flips = _index_tables(chain.n, chain.boundary)
    out = (-chain.h * zsum) * v
    for flip in flips:
        out = out - v[flip]
    return out


def ground_state(
    chain: IsingChain,
    tol: float = 1e-10,
    max_iter: int = 5000,
    seed: int = DEFAULT_SEED,
) -> tuple[float, DenseState]:
    """Lowest eigenpair by implicitly restarted Lanczos with a seeded start.

    Deterministic for a fixed seed. The residual ||H psi - E psi|| is
    verified against tol * |E| after convergence.
    """
    if chain.n > MAX_SITES:
        raise TooLarge(f"n={chain.n} exceeds the {MAX_SITES}-site dense guard")
    dim = 2**chain.n
    op = spla.LinearOperator(
        (dim, dim), matvec=lambda v: apply_hamiltonian(chain, v), dtype=np.float64
    )
    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(dim)
    try:
        w, v = spla.eigsh(op, k=1, which="SA", v0=v0, maxiter=max_iter, tol=0)
    except spla.ArpackNoConvergence as exc:
        raise NumericalFailure(f"Lanczos did not converge: {exc}") from exc
    energy = float(w[0])
    psi = v[:, 0]
    psi = psi / np.linalg.norm(psi)
    # fix the sign gauge so repeated runs emit identical vectors
    pivot = int(np.argmax(np.abs(psi)))
    if psi[pivot] < 0:
        psi = -psi
    residual = float(np.linalg.norm(apply_hamiltonian(chain, psi) - energy * psi))
    if residual > tol * max(abs(energy), 1.0):
        raise NumericalFailure(
            f"ground-state residual {residual:.3e} exceeds {tol:.1e} * |E|"
        )
    return energy, DenseState(chain.n, 2, psi.astype(np.complex128))


def chord_length(n: int, l, boundary: str = "periodic"):
    """Effective block length for finite-size entropy fits.

    Periodic chains use (n/pi) sin(pi l/n); open chains fall back to the
    asymptotic plain l.
    """
    l = np.asarray(l, dtype=np.float64)
    if boundary == "periodic":
        return (n / np.pi) * np.sin(np.pi * l / n)
    return l


@dataclass
class EntropyScan:
    """Block entropies S_l of a ground state for every left block l."""

    n: int
    h: float
    boundary: str
    energy: float
    block_sizes: list
    entropies: list  # nats, aligned with block_sizes
    fitted_c: Optional[float] = None
    fit_residual: Optional[float] = None
    fit_r2: Optional[float] = None

    @property
    def fit_reliable(self) -> bool:
        return self.fit_r2 is not None and self.fit_r2 >= FIT_R2_THRESHOLD


def scan_ground_state(
    chain: IsingChain,
    tol: float = 1e-10,
    max_iter: int = 5000,
    seed: int = DEFAULT_SEED,
) -> tuple[EntropyScan, DenseState]:
    """Ground state, S_l for l = 1..n-1, and the central-charge fit."""
    energy, psi = ground_state(chain, tol=tol, max_iter=max_iter, seed=seed)
    ls = list(range(1, chain.n))
    ents = [states.entropy_at_cut(psi, l) for l in ls]
    scan = EntropyScan(chain.n, chain.h, chain.boundary, energy, ls, ents)
    scan.fitted_c, scan.fit_residual, scan.fit_r2 = _fit(scan)
    return scan, psi


def entropy_scan(
    chain: IsingChain,
    tol: float = 1e-10,
    max_iter: int = 5000,
    seed: int = DEFAULT_SEED,
) -> EntropyScan:
    return scan_ground_state(chain, tol=tol, max_iter=max_iter, seed=seed)[0]


def _fit(scan: EntropyScan) -> tuple[float, float, float]:
    ls = np.asarray(scan.block_sizes, dtype=np.float64)
    s = np.asarray(scan.entropies, dtype=np.float64)
    if ls.size < 3:
        raise InvalidInput("central-charge fit needs at least 3 block entropies")
    x = np.log(chord_length(scan.n, ls, scan.boundary)) / 3.0
    design = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(design, s, rcond=None)
    pred = design @ coef
    rms = float(np.sqrt(np.mean((pred - s) ** 2)))
    ss_tot = float(np.sum((s - s.mean()) ** 2))
    r2 = 1.0 - float(np.sum((pred - s) ** 2)) / ss_tot if ss_tot > 0 else 0.0
    return float(coef[0]), rms, r2


def fit_central_charge(scan: EntropyScan) -> tuple[float, float]:
    """Least-squares slope of S_l against (1/3) ln chord(l); returns (c, rms)."""
    c, rms, _ = _fit(scan)
    return c, rms


def chi_requirement(psi: DenseState, fidelity_target: float) -> list[int]:
    """Minimal Schmidt rank per cut retaining ``fidelity_target`` squared mass."""
    if not 0 < fidelity_target <= 1:
        raise InvalidInput("fidelity target must lie in (0, 1]")
    out = []
    for l in range(1, psi.n):
        p = states.schmidt_spectrum(psi, l).weights ** 2
        cum = np.cumsum(p)
        pos = int(np.searchsorted(cum, fidelity_target - 1e-15))
        out.append(min(pos + 1, len(p)))
    return out
