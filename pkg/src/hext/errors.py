"""Exception types shared across the toolkit."""


class HextError(Exception):
    """Base class for all toolkit errors."""


class PositivityLost(HextError):
    """The integrated quantity v dropped below the configured floor.

    This signals an inadmissible shooting parameter: below the floor the
    square-root term is no longer Lipschitz and the run is meaningless.
    """

    def __init__(self, gamma: float, c: float, floor: float):
        self.gamma = gamma
        self.c = c
        self.floor = floor
        super().__init__(
            f"v fell below floor {floor:g} at gamma={gamma:.12g} (C={c:.12g})"
        )


class StepFailure(HextError):
    """The adaptive step controller failed to make progress."""


class NoBracket(HextError):
    """No sign change of the shooting defect was found in the scanned range."""

    def __init__(self, message: str, scan=None):
        self.scan = scan
        super().__init__(message)


class CertificateFailure(HextError):
    """An exact certificate claim failed.  Carries the first failing claim id."""

    def __init__(self, claim_id: str, certificate=None):
        self.claim_id = claim_id
        self.certificate = certificate
        super().__init__(f"certificate claim failed: {claim_id}")


class EndpointSingularity(HextError):
    """The arc coordinate diverges logarithmically at the interval endpoints."""


class GeneratorMismatch(HextError):
    """Operands live over different exterior-algebra generator sets."""


class NotInvertible(HextError):
    """Element has zero constant term, hence no inverse in the truncated ring."""


class TruncationMismatch(HextError):
    """Mixed truncation orders are rejected rather than silently coerced."""


class NotIdempotentFamily(HextError):
    """Matrix does not satisfy A@A == a*A exactly."""


class SeriesMismatch(HextError):
    """A generating-series coefficient violated its expected homogeneous form."""
