"""Overlap structure, energy-independent operators, and metrics of a level set.

With right vectors |phi^a> and left vectors |phi_a> drawn from different
fixed-point energies, the Gram-type overlap matrix R_ab = <phi_a|phi^b> is
generally non-Hermitian.  Its inverse dresses the dual ("double-bracket")
vectors

    |phi^b>>  = sum_a |phi^a> (R^-1)_ab          <<phi_a| . |phi^b> = delta
    <<phi_a|  = sum_b (R^-1)_ab <phi_b|          <phi_a| . |phi^b>> = delta

and, mirroring the ket dressing on the left family, |phi_b>> has coefficient
matrix (R^dagger)^-1, the unique choice closing the duality relations.

Two energy-independent operators share the one-sided action of the
energy-dependent problem on the level set,

    K = sum_a |phi^a> E_a <<phi_a|     K |phi^b>  = E_b |phi^b>
    L = sum_b |phi^b>> E_b <phi_b|     <phi_a| L  = E_a <phi_a|

and become Hermitian under the positive expansions

    mu = sum_a |phi_a>> <<phi_a|       K^dagger mu = mu K
    nu = sum_a |phi_a>  <phi_a|        nu L = L^dagger nu

whose inverses (on the spanned subspace) are mu^-1 = sum |phi^a><phi^a| and
nu^-1 = sum |phi^a>> (|phi^a>>)^dagger.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ComplexSpectrum, IllConditionedOverlap, NonHermitianMetric
from .fixedpoint import PhysicalLevel
from .frozen_spectrum import FrozenDecomposition, decompose
from .operators import OperatorMatrix

#: Overlap-matrix condition number above which the basis is rejected.
CONDITION_LIMIT = 1e10


@dataclass(frozen=True)
class PhysicalBasis:
    """Level set with overlap matrix R, its inverse, and the dressed duals.

    ``double_kets[:, b]`` is |phi^b>>; ``double_bras[:, a]`` is the vector
    whose conjugate transpose is <<phi_a|.
    """

    levels: tuple
    R: np.ndarray
    R_inv: np.ndarray
    condition_R: float
    double_kets: np.ndarray
    double_bras: np.ndarray

    @property
    def size(self) -> int:
        return len(self.levels)

    @property
    def dimension(self) -> int:
        return self.double_kets.shape[0]

    @property
    def energies(self) -> np.ndarray:
        return np.array([lv.energy for lv in self.levels])

    @property
    def right_vectors(self) -> np.ndarray:
        return np.column_stack([lv.right_ket for lv in self.levels])

    @property
    def left_vectors(self) -> np.ndarray:
        return np.column_stack([lv.left_bra for lv in self.levels])


@dataclass(frozen=True)
class MetricSuite:
    """Quasi-Hermitizing metrics of K and L with their diagnostics."""

    mu: OperatorMatrix
    mu_inv: OperatorMatrix
    nu: OperatorMatrix
    nu_inv: OperatorMatrix
    residual_K: float            # ||K^dagger mu - mu K||
    residual_L: float            # ||nu L - L^dagger nu||
    min_eig_mu: float            # on the spanned subspace
    min_eig_nu: float
    eta_plus: OperatorMatrix | None = None
    charge_C: OperatorMatrix | None = None


@dataclass(frozen=True)
class ChargeOperator:
    """Charge C = eta_plus . parity, with ||C^2 - I|| recorded, not asserted."""

    matrix: OperatorMatrix
    involution_residual: float


def build_basis(levels: Sequence[PhysicalLevel]) -> PhysicalBasis:
    """Overlaps, rank-revealing inverse, and dual vectors of a level set."""
    if len(levels) < 1:
        raise ValueError("need at least one physical level")
    phi_r = np.column_stack([np.asarray(lv.right_ket, complex) for lv in levels])
    phi_l = np.column_stack([np.asarray(lv.left_bra, complex) for lv in levels])
    n, m = phi_r.shape
    if m > n:
        raise ValueError(f"{m} levels exceed the ambient dimension {n}")
    R = phi_l.conj().T @ phi_r
    diag_defect = float(np.abs(np.diag(R) - 1.0).max())
    if diag_defect > 1e-8:
        raise ValueError(
            f"levels are not self-biorthonormalized: max |R_aa - 1| = {diag_defect:.3e}"
        )
    u, s, vh = np.linalg.svd(R)
    condition = float(s[0] / s[-1]) if s[-1] > 0.0 else np.inf
    if condition > CONDITION_LIMIT:
        raise IllConditionedOverlap(
            f"overlap matrix condition number {condition:.3e} exceeds {CONDITION_LIMIT:.0e}; "
            "the physical vectors are nearly dependent"
        )
    R_inv = (vh.conj().T / s) @ u.conj().T
    return PhysicalBasis(
        levels=tuple(levels),
        R=R,
        R_inv=R_inv,
        condition_R=condition,
        double_kets=phi_r @ R_inv,
        double_bras=phi_l @ R_inv.conj().T,
    )


def levels_from_decomposition(dec: FrozenDecomposition, H: OperatorMatrix) -> list[PhysicalLevel]:
    """Treat a fixed operator's whole spectrum as the physical level set.

    This is the energy-independent limit: every eigenpair is its own fixed
    point, indexed (n, 0).  Requires a real spectrum.
    """
    if not bool(np.all(dec.reality_flags)):
        raise ComplexSpectrum("physical levels require real energies")
    H = np.asarray(H)
    levels = []
    for k in range(dec.size):
        energy = float(dec.eigenvalues[k].real)
        ket = dec.right_kets[:, k]
        levels.append(PhysicalLevel(
            multi_index=(k, 0),
            energy=energy,
            right_ket=ket,
            left_bra=dec.left_bras[:, k],
            residual=float(np.linalg.norm(H @ ket - energy * ket)),
        ))
    return levels


def levels_from_matrix(H: OperatorMatrix) -> list[PhysicalLevel]:
    """Convenience wrapper: decompose H and promote its spectrum to levels."""
    return levels_from_decomposition(decompose(H), H)


def _span_projector(vectors: np.ndarray) -> np.ndarray:
    q, _ = np.linalg.qr(vectors)
    return q @ q.conj().T


def projector_residual(basis: PhysicalBasis) -> float:
    """Distance of sum_b |phi^b>> <phi_b| from the projector onto the span.

    For a complete level set this is the distance from the identity; for a
    partial set the reference is the orthogonal projector onto the right
    vectors' span (the sum itself is the oblique projector along the left
    complement, so the residual reports its non-orthogonality).
    """
    S = basis.double_kets @ basis.left_vectors.conj().T
    if basis.size == basis.dimension:
        target = np.eye(basis.dimension)
    else:
        target = _span_projector(basis.right_vectors)
    return float(np.linalg.norm(S - target))


def unit_projector(basis: PhysicalBasis) -> np.ndarray:
    """The R^-1-weighted sum representing the unit projector on the level set."""
    return basis.double_kets @ basis.left_vectors.conj().T


def build_K(basis: PhysicalBasis) -> OperatorMatrix:
    """Energy-independent operator reproducing the right action on the levels."""
    return (basis.right_vectors * basis.energies) @ basis.double_bras.conj().T


def build_L(basis: PhysicalBasis) -> OperatorMatrix:
    """Energy-independent operator reproducing the left action on the levels."""
    return (basis.double_kets * basis.energies) @ basis.left_vectors.conj().T


def _hermitize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def _min_subspace_eig(metric: np.ndarray, span: np.ndarray, full: bool) -> float:
    if full:
        return float(np.linalg.eigvalsh(_hermitize(metric)).min())
    q, _ = np.linalg.qr(span)
    return float(np.linalg.eigvalsh(_hermitize(q.conj().T @ metric @ q)).min())


def build_metrics(basis: PhysicalBasis, K: OperatorMatrix, L: OperatorMatrix,
                  eta_plus: OperatorMatrix | None = None,
                  charge: OperatorMatrix | None = None) -> MetricSuite:
    """Positive expansions mu, nu with inverses and intertwining residuals.

    On a partial level set all four matrices vanish on the orthogonal
    complement of the set's span, and the minimal eigenvalues are reported on
    the span only.
    """
    phi_l = basis.left_vectors
    complete = basis.size == basis.dimension
    mu = _hermitize(basis.double_bras @ basis.double_bras.conj().T)
    nu = _hermitize(phi_l @ phi_l.conj().T)
    mu_inv = _hermitize(basis.right_vectors @ basis.right_vectors.conj().T)
    nu_inv = _hermitize(basis.double_kets @ basis.double_kets.conj().T)
    return MetricSuite(
        mu=mu,
        mu_inv=mu_inv,
        nu=nu,
        nu_inv=nu_inv,
        residual_K=float(np.linalg.norm(K.conj().T @ mu - mu @ K)),
        residual_L=float(np.linalg.norm(nu @ L - L.conj().T @ nu)),
        min_eig_mu=_min_subspace_eig(mu, phi_l, complete),
        min_eig_nu=_min_subspace_eig(nu, phi_l, complete),
        eta_plus=eta_plus,
        charge_C=charge,
    )


def build_charge(eta_plus: OperatorMatrix, parity: OperatorMatrix) -> ChargeOperator:
    """Factor the positive metric as eta_plus = C . parity, i.e. C = eta_plus . parity.

    Uses parity^-1 = parity.  ||C^2 - I|| is a diagnostic only: nothing here
    guarantees the charge squares to the identity.
    """
    eta_plus = np.asarray(eta_plus)
    parity = np.asarray(parity)
    n = parity.shape[0]
    if np.abs(parity @ parity - np.eye(n)).max() > 1e-10:
        raise ValueError("parity operator is not involutory")
    scale = max(1.0, np.abs(eta_plus).max())
    if np.abs(eta_plus - eta_plus.conj().T).max() > 1e-10 * scale:
        raise NonHermitianMetric("eta_plus fails the 1e-10 Hermiticity tolerance")
    if np.linalg.eigvalsh(_hermitize(eta_plus)).min() <= 0.0:
        raise ValueError("eta_plus must be positive definite")
    C = eta_plus @ parity
    return ChargeOperator(
        matrix=C,
        involution_residual=float(np.linalg.norm(C @ C - np.eye(n))),
    )
