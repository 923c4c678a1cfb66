"""Canonical-form matrix product states.

Conventions (fixed once, inherited everywhere):

* Open-boundary MPS in gamma/lambda canonical form. Site tensor
  ``gammas[k]`` has shape ``(chi_{k}, d, chi_{k+1})`` with boundary bond
  dimensions 1; ``lambdas[k]`` holds the descending Schmidt weights on
  the bond between sites k and k+1 (k = 0..n-2).
* The state is the chain  G[0] L[0] G[1] L[1] ... L[n-2] G[n-1]  where
  each L is inserted on the bond to its right-hand neighbour.
* In this gauge ``lambdas[a-1]`` IS the Schmidt spectrum of the cut
  ``first a sites | rest``: absorbing each lambda leftward gives
  left-orthonormal tensors, absorbing rightward gives right-orthonormal
  ones.
* Periodic MPS store one chi x chi matrix per site and physical index;
  amplitudes are traces of the matrix product around the ring.

Construction is a single left-to-right sweep of Schmidt splits: reshape,
SVD, divide out the previous bond weights, push the remaining weights
into the unfactored right block, repeat.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linalg, states
from .errors import CorruptMps, InvalidInput, NumericalFailure, TooLarge
from .states import DISCARD_TOL, DenseState, SchmidtSpectrum

# Largest amplitude count we are willing to materialize densely.
DENSE_GUARD = 2**24


@dataclass
class Mps:
    """Open-boundary MPS in gamma/lambda form."""

    n: int
    d: int
    gammas: list
    lambdas: list

    @property
    def bond_dimensions(self) -> tuple:
        return tuple(len(lam) for lam in self.lambdas)

    def bond_spectrum(self, cut: int) -> SchmidtSpectrum:
        """Schmidt spectrum at the cut ``first cut sites | rest``."""
        if not 1 <= cut <= self.n - 1:
            raise InvalidInput(f"cut must lie in 1..{self.n - 1}, got {cut}")
        return SchmidtSpectrum(self.lambdas[cut - 1])

    def validate(self):
        if len(self.gammas) != self.n or len(self.lambdas) != self.n - 1:
            raise CorruptMps("tensor/bond count does not match site count")
        left = 1
        for k, g in enumerate(self.gammas):
            right = len(self.lambdas[k]) if k < self.n - 1 else 1
            if g.shape != (left, self.d, right):
                raise CorruptMps(
                    f"site {k}: tensor shape {g.shape} != ({left}, {self.d}, {right})"
                )
            left = right
        for k, lam in enumerate(self.lambdas):
            cap = min(self.d ** (k + 1), self.d ** (self.n - k - 1))
            if len(lam) > cap:
                raise CorruptMps(f"bond {k + 1}: chi={len(lam)} exceeds cap {cap}")

    def parameter_count(self) -> int:
        """Stored tensor entries plus bond weights."""
        total = sum(g.size for g in self.gammas)
        total += sum(len(lam) for lam in self.lambdas)
        return int(total)


@dataclass
class PeriodicMps:
    """Uniform-chi MPS on a ring; ``mats[k][i]`` is the chi x chi site matrix."""

    n: int
    d: int
    chi: int
    mats: np.ndarray  # shape (n, d, chi, chi)

    def __post_init__(self):
        self.mats = np.asarray(self.mats, dtype=np.complex128)
        if self.mats.shape != (self.n, self.d, self.chi, self.chi):
            raise InvalidInput(
                f"mats shape {self.mats.shape} != "
                f"({self.n}, {self.d}, {self.chi}, {self.chi})"
            )

    def parameter_count(self) -> int:
        return int(self.n * self.d * self.chi**2)


def to_mps(state: DenseState, chi_max: Optional[int] = None, tol: float = DISCARD_TOL) -> Mps:
    """Decompose a dense state by iterated Schmidt splits.

    With ``chi_max=None`` the representation is exact: every bond keeps
    all weights above ``tol`` and matches the dense Schmidt spectrum of
    that cut. With ``chi_max`` set, each bond keeps at most the chi_max
    largest weights, renormalized.
    """
    if chi_max is not None and chi_max < 1:
        raise InvalidInput(f"chi_max must be >= 1, got {chi_max}")
    n, d = state.n, state.d
    gammas, lambdas = [], []
    lam_prev = np.ones(1)
    work = state.amplitudes.reshape(1, -1)
    for _ in range(n - 1):
        chi_l = work.shape[0]
        u, s, vdag = linalg.svd(work.reshape(chi_l * d, -1))
        keep = s > tol
        if chi_max is not None:
            keep[chi_max:] = False
        if not keep.any():
            keep[0] = True
        u, s, vdag = u[:, keep], s[keep], vdag[keep, :]
        s = s / np.linalg.norm(s)
        gammas.append(u.reshape(chi_l, d, -1) / lam_prev[:, None, None])
        lambdas.append(s)
        lam_prev = s
        work = s[:, None] * vdag
    gammas.append((work / lam_prev[:, None]).reshape(-1, d, 1))
    return Mps(n, d, gammas, lambdas)


def from_mps(mps: Mps) -> DenseState:
    """Contract the chain back into a normalized dense state."""
    mps.validate()
    if mps.d**mps.n > DENSE_GUARD:
        raise TooLarge(f"{mps.d}**{mps.n} amplitudes exceed the dense guard")
    t = mps.gammas[0]
    for k in range(mps.n - 1):
        t = t * mps.lambdas[k]
        t = np.tensordot(t, mps.gammas[k + 1], axes=([-1], [0]))
        t = t.reshape(1, -1, mps.gammas[k + 1].shape[2])
    amps = t.reshape(-1)
    norm = np.linalg.norm(amps)
    if norm == 0.0:
        raise CorruptMps("MPS contracts to the zero vector")
    return DenseState(mps.n, mps.d, amps / norm)


def truncate(mps: Mps, chi: int) -> tuple[Mps, float]:
    """Cap every bond at ``chi`` by a canonical compression sweep.

    Each bond keeps its chi largest weights, applied sequentially so
    that every split operates on the already-projected state (slicing
    bonds independently can collapse degenerate spectra to the zero
    vector). Kept spectra are renormalized; the reported error is the
    multiplicative discarded mass 1 - prod_k(kept mass at bond k).
    """
    if chi < 1:
        raise InvalidInput(f"chi must be >= 1, got {chi}")
    mps.validate()
    if all(len(lam) <= chi for lam in mps.lambdas):
        return Mps(mps.n, mps.d, [g.copy() for g in mps.gammas],
                   [lam.copy() for lam in mps.lambdas]), 0.0
    capped, err = _compression_sweep(mps, chi)
    # spectra extracted before a later cap was applied are stale; one more
    # uncapped sweep restores lambda = Schmidt spectrum at every bond
    return _recanonicalize_sweep(capped), err


def _recanonicalize_sweep(mps: Mps) -> Mps:
    """Restore canonical gauge without touching the represented state."""
    return _compression_sweep(mps, None)[0]


def _compression_sweep(mps: Mps, chi: Optional[int]) -> tuple[Mps, float]:
    """QR sweep right, then an SVD sweep left keeping at most chi weights."""
    n, d = mps.n, mps.d
    if n == 1:
        g = mps.gammas[0]
        return Mps(1, d, [g / np.linalg.norm(g)], []), 0.0
    # absorb lambdas rightward into plain site tensors
    tensors = [mps.gammas[k] * mps.lambdas[k] if k < n - 1 else mps.gammas[k].copy()
               for k in range(n)]
    # left-to-right QR: make every tensor left-orthonormal
    carry = np.ones((1, 1), dtype=np.complex128)
    for k in range(n):
        chi_l = carry.shape[0]
        m = np.tensordot(carry, tensors[k], axes=([1], [0]))
        q, r = np.linalg.qr(m.reshape(chi_l * d, -1))
        tensors[k] = q.reshape(chi_l, d, -1)
        carry = r
    norm = abs(carry[0, 0])
    if norm == 0.0:
        raise NumericalFailure("MPS contracts to the zero vector")
    tensors[-1] = tensors[-1] * (carry[0, 0] / norm)
    # right-to-left SVD: extract (and cap) the Schmidt weights per bond
    lambdas: list = [None] * (n - 1)
    kept_total = 1.0
    for k in range(n - 1, 0, -1):
        chi_l, _, chi_r = tensors[k].shape
        u, s, vdag = linalg.svd(tensors[k].reshape(chi_l, d * chi_r))
        keep = s > DISCARD_TOL
        if chi is not None:
            keep[chi:] = False
        if not keep.any():
            keep[0] = True
        kept_total *= float(np.sum(s[keep] ** 2) / np.sum(s**2))
        u, s, vdag = u[:, keep], s[keep], vdag[keep, :]
        s = s / np.linalg.norm(s)
        lambdas[k - 1] = s
        tensors[k] = vdag.reshape(-1, d, chi_r)
        tensors[k - 1] = np.tensordot(tensors[k - 1], u * s, axes=([2], [0]))
    # tensors[0] is the center G[0] L[0]; the rest are right-orthonormal
    gammas = [tensors[0] / lambdas[0]]
    for k in range(1, n - 1):
        gammas.append(tensors[k] / lambdas[k])
    gammas.append(tensors[n - 1])
    return Mps(n, d, gammas, lambdas), 1.0 - kept_total


def entropy_at_bond(mps: Mps, cut: int) -> float:
    """Entropy of the bond spectrum at ``cut``; hard-checks S <= ln chi."""
    spec = mps.bond_spectrum(cut)
    s = states.entropy(spec)
    bound = float(np.log(max(spec.chi, 1)))
    if s > bound + 1e-10:
        raise NumericalFailure(
            f"entropy {s} exceeds ln chi = {bound} at cut {cut}"
        )
    return s


def _right_absorbed(mps: Mps) -> list:
    return [mps.gammas[k] * mps.lambdas[k] if k < mps.n - 1 else mps.gammas[k]
            for k in range(mps.n)]


def inner_product(a: Mps, b: Mps) -> complex:
    """<a|b> by transfer-matrix contraction; never builds d**n amplitudes."""
    if (a.n, a.d) != (b.n, b.d):
        raise InvalidInput("inner product needs matching site count and dimension")
    a.validate()
    b.validate()
    ta, tb = _right_absorbed(a), _right_absorbed(b)
    env = np.ones((1, 1), dtype=np.complex128)
    for k in range(a.n):
        env = np.einsum("ab,aic,bid->cd", env, ta[k].conj(), tb[k], optimize=True)
    return complex(env[0, 0])


def periodic_amplitude(p: PeriodicMps, indices) -> complex:
    """tr(A[0]^{i0} A[1]^{i1} ... A[n-1]^{i_{n-1}})."""
    indices = list(indices)
    if len(indices) != p.n:
        raise InvalidInput(f"expected {p.n} indices, got {len(indices)}")
    for i in indices:
        if not 0 <= int(i) < p.d:
            raise InvalidInput(f"physical index {i} out of range 0..{p.d - 1}")
    prod = p.mats[0][int(indices[0])]
    for k in range(1, p.n):
        prod = prod @ p.mats[k][int(indices[k])]
    return complex(np.trace(prod))


def periodic_to_dense(p: PeriodicMps) -> DenseState:
    """Evaluate every amplitude of the ring and normalize."""
    if p.d**p.n > DENSE_GUARD:
        raise TooLarge(f"{p.d}**{p.n} amplitudes exceed the dense guard")
    # block[j] carries the partial product for every index prefix
    block = p.mats[0]  # (d, chi, chi)
    for k in range(1, p.n):
        block = np.einsum("pab,ibc->piac", block, p.mats[k], optimize=True)
        block = block.reshape(-1, p.chi, p.chi)
    amps = np.trace(block, axis1=1, axis2=2)
    norm = np.linalg.norm(amps)
    if norm == 0.0:
        raise InvalidInput("periodic MPS evaluates to the zero vector")
    return DenseState(p.n, p.d, amps / norm)


def to_periodic(mps: Mps) -> PeriodicMps:
    """Embed an open chain in the ring form with one uniform bond size.

    Bond weights are absorbed rightward into the site tensors, which are
    then zero-padded to the largest bond dimension.
    """
    mps.validate()
    chi = max(1, max(mps.bond_dimensions, default=1))
    mats = np.zeros((mps.n, mps.d, chi, chi), dtype=np.complex128)
    for k, t in enumerate(_right_absorbed(mps)):
        mats[k, :, : t.shape[0], : t.shape[2]] = t.transpose(1, 0, 2)
    return PeriodicMps(mps.n, mps.d, chi, mats)


def parameter_count(obj) -> int:
    """Stored parameters of an open or periodic MPS (see each class)."""
    if isinstance(obj, (Mps, PeriodicMps)):
        return obj.parameter_count()
    raise InvalidInput(f"cannot count parameters of {type(obj).__name__}")


# -- QMPS v1 text format -------------------------------------------------------

def save_qmps(mps: Mps, path):
    mps.validate()
    lines = ["QMPS 1", f"{mps.n} {mps.d}"]
    if mps.n > 1:
        lines.append(" ".join(str(c) for c in mps.bond_dimensions))
    for g in mps.gammas:
        lines.extend(f"{float(c.real)!r} {float(c.imag)!r}" for c in g.reshape(-1))
    for lam in mps.lambdas:
        lines.extend(f"{float(v)!r} 0.0" for v in lam)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_qmps(path) -> Mps:
    with open(path) as fh:
        raw = [ln.strip() for ln in fh if ln.strip()]
    if not raw or raw[0].split() != ["QMPS", "1"]:
        raise InvalidInput(f"{path}: missing 'QMPS 1' header")
    try:
        n, d = (int(tok) for tok in raw[1].split())
        chis = [int(tok) for tok in raw[2].split()] if n > 1 else []
    except (IndexError, ValueError) as exc:
        raise CorruptMps(f"{path}: malformed header") from exc
    if len(chis) != n - 1 or any(c < 1 for c in chis):
        raise CorruptMps(f"{path}: expected {n - 1} positive bond dimensions")
    bounds = [1] + chis + [1]
    values = []
    body = raw[3:] if n > 1 else raw[2:]
    for ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise CorruptMps(f"{path}: expected 're im' value lines")
        try:
            values.append(complex(float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise CorruptMps(f"{path}: non-numeric tensor entry") from exc
    values = np.asarray(values, dtype=np.complex128)
    if not np.isfinite(values).all():
        raise CorruptMps(f"{path}: non-finite tensor entries")
    gamma_len = sum(bounds[k] * d * bounds[k + 1] for k in range(n))
    lam_len = sum(chis)
    if values.size != gamma_len + lam_len:
        raise CorruptMps(
            f"{path}: expected {gamma_len + lam_len} entries, found {values.size}"
        )
    gammas, pos = [], 0
    for k in range(n):
        size = bounds[k] * d * bounds[k + 1]
        gammas.append(values[pos : pos + size].reshape(bounds[k], d, bounds[k + 1]))
        pos += size
    lambdas = []
    for chi in chis:
        lam = values[pos : pos + chi].real.copy()
        pos += chi
        lambdas.append(lam)
    out = Mps(n, d, gammas, lambdas)
    out.validate()
    return out
