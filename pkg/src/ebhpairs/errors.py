"""Exception types raised by the solvers."""


class EBHError(ValueError):
    """Base class for domain errors in this package."""


class BrillouinZoneError(EBHError):
    """Center-of-mass quasimomentum lies outside [-pi/d, pi/d]."""


class BandEdgeError(EBHError):
    """Evaluation at a band edge where the quantity is singular."""


class FlatBandError(EBHError):
    """Effective hopping J_K vanishes (K = +-pi/d)."""


class SingularAmplitudeError(EBHError):
    """A wavefunction amplitude has a vanishing denominator."""


class WUndefinedError(EBHError):
    """W = UV/(U+2V) is undefined because U + 2V = 0 with UV != 0."""


class CaseMismatchError(EBHError):
    """Parameters do not satisfy the premise of a closed-form special case."""


class OracleError(RuntimeError):
    """Exact diagonalization failed."""
