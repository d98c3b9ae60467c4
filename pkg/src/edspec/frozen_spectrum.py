"""Bi-orthogonal spectral decomposition of a frozen-parameter operator.

A diagonalizable H is resolved into right kets |psi_n> (eigenvectors of H)
and left bras <l_n| (eigenvectors of H^dagger with conjugated eigenvalues),
rescaled so <l_m|psi_n> = delta_mn.  Left vectors are stored as columns l_n
whose Hermitian conjugate is the bra, so the pairing is vdot(l_m, psi_n).

Normalization puts the full scale factor on the left vector: right kets are
unit norm with their largest-magnitude component made real and positive,
which keeps decompositions reproducible across runs.

From the decomposition, the intertwining metric and its inverse are the
sign-weighted expansions

    eta      = sum_n s_n l_n l_n^dagger        (H^dagger eta = eta H)
    eta^{-1} = sum_n s_n psi_n psi_n^dagger    (H eta^{-1} = eta^{-1} H^dagger)

with s_n = +-1; the all-plus choice is the positive candidate metric.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ComplexSpectrum, DegenerateSpectrum, PairingFailure
from .operators import OperatorMatrix

#: Relative eigenvalue-gap floor below which bi-orthonormalization is rejected.
DEGENERACY_FACTOR = 1e-8
#: Relative tolerance for matching H and H^dagger spectra.
PAIRING_FACTOR = 1e-6
#: Default reality tolerance: |Im E| <= tol * (1 + |E|).
REAL_TOLERANCE = 1e-8


@dataclass(frozen=True)
class FrozenDecomposition:
    """Eigen-data of H at one frozen parameter value.

    ``right_kets`` and ``left_bras`` hold one vector per column, ordered by
    (Re E, Im E); ``left_bras[:, n]`` is the vector whose conjugate transpose
    is the n-th bra.
    """

    eigenvalues: np.ndarray
    right_kets: np.ndarray
    left_bras: np.ndarray
    biorth_residual: float
    completeness_residual: float
    reality_flags: np.ndarray
    z: float | None = None

    @property
    def size(self) -> int:
        return self.eigenvalues.shape[0]


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Unit-normalize columns and rotate the largest component real positive."""
    out = vectors / np.linalg.norm(vectors, axis=0)
    lead = np.argmax(np.abs(out), axis=0)
    pivot = out[lead, np.arange(out.shape[1])]
    return out * (np.abs(pivot) / pivot)


def _match_conjugate(w_right: np.ndarray, w_left: np.ndarray, tol: float) -> np.ndarray:
    """Greedy best-first matching of conj(w_left) onto w_right.

    Returns perm with conj(w_left[perm[i]]) ~ w_right[i]; raises
    PairingFailure if the best available distance exceeds tol.
    """
    n = w_right.shape[0]
    dist = np.abs(w_right[:, None] - np.conj(w_left)[None, :])
    order = np.argsort(dist, axis=None, kind="stable")
    perm = np.full(n, -1)
    used_left = np.zeros(n, dtype=bool)
    matched = 0
    for flat in order:
        i, j = divmod(int(flat), n)
        if perm[i] >= 0 or used_left[j]:
            continue
        if dist[i, j] > tol:
            raise PairingFailure(
                f"left/right eigenvalue matching exceeds tolerance: "
                f"|{w_right[i]} - conj({w_left[j]})| = {dist[i, j]:.3e} > {tol:.3e}"
            )
        perm[i] = j
        used_left[j] = True
        matched += 1
        if matched == n:
            break
    return perm


def decompose(H: OperatorMatrix, z: float | None = None,
              tol_real: float = REAL_TOLERANCE) -> FrozenDecomposition:
    """Bi-orthonormalized eigen-decomposition of a diagonalizable matrix.

    Raises DegenerateSpectrum when two eigenvalues sit closer than
    1e-8 * ||H||, and PairingFailure when the H / H^dagger spectra cannot be
    matched.  Hermitian input takes an exact orthonormal path.
    """
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"H must be square, got shape {H.shape}")
    if not np.all(np.isfinite(H.real)) or not np.all(np.isfinite(np.asarray(H, complex).imag)):
        raise ValueError("H has non-finite entries")
    n = H.shape[0]
    scale = max(np.linalg.norm(H), 1e-300)

    hermitian = np.array_equal(H, H.conj().T)
    if hermitian:
        # Orthonormalization stays well posed under degeneracy, so the gap
        # check below is skipped on this path.
        w, v = np.linalg.eigh(H)
        w = w.astype(complex)
        kets = _fix_phases(v.astype(complex))
        lefts = kets.copy()
    else:
        w, v = np.linalg.eig(H)
        if n > 1:
            gaps = np.abs(w[:, None] - w[None, :])
            np.fill_diagonal(gaps, np.inf)
            gap = gaps.min()
            if gap < DEGENERACY_FACTOR * scale:
                raise DegenerateSpectrum(
                    f"minimal eigenvalue gap {gap:.3e} below {DEGENERACY_FACTOR * scale:.3e}"
                )
        wl, u = np.linalg.eig(H.conj().T)
        perm = _match_conjugate(w, wl, PAIRING_FACTOR * scale)
        u = u[:, perm]
        kets = _fix_phases(v)
        lefts = np.empty_like(u)
        for k in range(n):
            c = np.vdot(u[:, k], kets[:, k])
            if abs(c) < 1e-12:
                raise PairingFailure(
                    f"paired left/right eigenvectors nearly orthogonal at index {k}"
                )
            lefts[:, k] = u[:, k] / np.conj(c)

    order = np.lexsort((w.imag, w.real))
    w, kets, lefts = w[order], kets[:, order], lefts[:, order]

    gram = lefts.conj().T @ kets
    biorth = float(np.abs(gram - np.eye(n)).max())
    completeness = float(np.linalg.norm(kets @ lefts.conj().T - np.eye(n)))
    flags = np.abs(w.imag) <= tol_real * (1.0 + np.abs(w))
    return FrozenDecomposition(
        eigenvalues=w,
        right_kets=kets,
        left_bras=lefts,
        biorth_residual=biorth,
        completeness_residual=completeness,
        reality_flags=flags,
        z=z,
    )


def _checked_signs(dec: FrozenDecomposition, signs) -> np.ndarray:
    if not bool(np.all(dec.reality_flags)):
        raise ComplexSpectrum(
            "metric expansions need a real spectrum; some eigenvalues are complex"
        )
    if signs is None:
        return np.ones(dec.size)
    signs = np.asarray(signs, dtype=float)
    if signs.shape != (dec.size,):
        raise ValueError(f"need {dec.size} signs, got shape {signs.shape}")
    if not np.all(np.abs(signs) == 1.0):
        raise ValueError("signs must be +1 or -1")
    return signs


def eta_from_decomposition(dec: FrozenDecomposition, signs=None) -> OperatorMatrix:
    """Sign-weighted left-vector expansion sum_n s_n l_n l_n^dagger.

    All-plus signs give the positive candidate metric; every sign choice
    intertwines H with H^dagger.
    """
    s = _checked_signs(dec, signs)
    eta = (dec.left_bras * s) @ dec.left_bras.conj().T
    return 0.5 * (eta + eta.conj().T)


def eta_inverse_from_decomposition(dec: FrozenDecomposition, signs=None) -> OperatorMatrix:
    """Sign-weighted right-vector expansion sum_n s_n psi_n psi_n^dagger."""
    s = _checked_signs(dec, signs)
    inv = (dec.right_kets * s) @ dec.right_kets.conj().T
    return 0.5 * (inv + inv.conj().T)


@dataclass(frozen=True)
class SpectrumClassification:
    """Partition of the eigenvalues into real singlets and conjugate pairs."""

    real_indices: tuple
    conjugate_pairs: tuple       # pairs (i, j) with E_i ~ conj(E_j)
    unpaired_indices: tuple      # complex eigenvalues without a conjugate partner

    @property
    def conjugation_symmetric(self) -> bool:
        return len(self.unpaired_indices) == 0


def classify_spectrum(dec: FrozenDecomposition,
                      tol_real: float = REAL_TOLERANCE) -> SpectrumClassification:
    """Report-only classification; warns when conjugation symmetry is broken."""
    w = dec.eigenvalues
    real = [i for i in range(dec.size) if abs(w[i].imag) <= tol_real * (1.0 + abs(w[i]))]
    complex_idx = [i for i in range(dec.size) if i not in real]
    pairs = []
    unpaired = []
    open_idx = list(complex_idx)
    while open_idx:
        i = open_idx.pop(0)
        best_j, best_d = None, np.inf
        for j in open_idx:
            d = abs(w[i] - np.conj(w[j]))
            if d < best_d:
                best_j, best_d = j, d
        if best_j is not None and best_d <= tol_real * (1.0 + abs(w[i])):
            open_idx.remove(best_j)
            pairs.append((i, best_j))
        else:
            unpaired.append(i)
    if unpaired:
        warnings.warn(
            f"{len(unpaired)} complex eigenvalues have no conjugate partner",
            RuntimeWarning,
            stacklevel=2,
        )
    return SpectrumClassification(
        real_indices=tuple(real),
        conjugate_pairs=tuple(pairs),
        unpaired_indices=tuple(unpaired),
    )
