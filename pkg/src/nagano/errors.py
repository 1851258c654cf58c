"""Exception types raised across the package.

Every error carries a short machine-readable ``code`` (used by the CLI when it
writes error JSON) and an optional ``context`` dict.
"""


class NaganoError(Exception):
    code = "error"

    def __init__(self, message="", **context):
        super().__init__(message)
        self.message = message
        self.context = context

    def to_dict(self):
        return {"code": self.code, "message": self.message, "context": self.context}


class ValidationError(NaganoError, ValueError):
    code = "validation_error"


class DimensionMismatch(ValidationError):
    code = "dimension_mismatch"


class IdenticalPlanes(NaganoError, ValueError):
    code = "identical_planes"


class DegenerateQuadruple(NaganoError, ValueError):
    code = "degenerate_quadruple"


class NonTransverseConfiguration(NaganoError, ValueError):
    code = "non_transverse"


class NoSignChange(NaganoError, ValueError):
    code = "no_sign_change"


class NotInDomain(NaganoError, ValueError):
    code = "not_in_domain"


class BoundaryProximity(NotInDomain):
    code = "boundary_proximity"


class ChartDegeneracy(NaganoError, ArithmeticError):
    code = "chart_degeneracy"


class NotPhotonRelated(NaganoError, ValueError):
    code = "not_photon_related"


class DifferentComponents(NaganoError, ValueError):
    code = "different_components"


class EmptyIntersection(NaganoError, ValueError):
    code = "empty_intersection"


class EmptyDualSample(NaganoError, ValueError):
    code = "empty_dual_sample"


class NoChainFound(NaganoError, RuntimeError):
    code = "no_chain_found"


class InvariantViolation(NaganoError, AssertionError):
    code = "invariant_violation"


class UnknownPair(NaganoError, KeyError):
    code = "unknown_pair"

    def __str__(self):
        return self.message


class BindingOutOfRange(ValidationError):
    code = "binding_out_of_range"
