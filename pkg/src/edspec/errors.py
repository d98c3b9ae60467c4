"""Exception types shared across the solver pipeline."""


class SolverError(Exception):
    """Base class for numerical-contract violations raised by the pipeline."""


class DegenerateMass(SolverError):
    """The effective mass 2 m(z) fell below the singularity threshold."""


class EvaluationFailure(SolverError):
    """A mass-squared evaluator was undefined or non-finite at some (z, x)."""


class AsymmetricGrid(SolverError):
    """Parity requires a grid with x_min = -x_max."""


class NonHermitianMetric(SolverError):
    """A metric operator failed its Hermiticity tolerance."""


class SingularMetric(SolverError):
    """A metric operator is numerically non-invertible."""


class DegenerateSpectrum(SolverError):
    """Two eigenvalues are too close for bi-orthonormalization to be well posed."""


class PairingFailure(SolverError):
    """Left/right eigenvalue matching left an eigenvalue unmatched."""


class ComplexSpectrum(SolverError):
    """An operation requiring a real spectrum met complex eigenvalues."""


class BranchLost(SolverError):
    """Eigenvector-overlap continuation fell below the overlap floor."""


class ComplexBranch(SolverError):
    """A tracked eigenvalue branch left the real axis."""


class RefinementStall(SolverError):
    """Bisection could not reach the requested tolerance."""


class IllConditionedOverlap(SolverError):
    """The overlap matrix of the physical level set is nearly singular."""


class DimensionMismatch(SolverError):
    """Operands have incompatible dimensions."""
