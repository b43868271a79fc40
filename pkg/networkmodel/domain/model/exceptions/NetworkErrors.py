class NetworkModelError(ValueError):
    """Base error for the network model context"""


class SchemaError(NetworkModelError):
    """Malformed network file or model definition"""


class DimensionError(NetworkModelError):
    """Inconsistent matrix or vector sizes"""


class ConventionError(NetworkModelError):
    """Neighborhood convention violated (i not in N_i, asymmetric or unordered neighbors)"""


class MissingNeighborError(NetworkModelError):
    """A neighbor block is missing when lifting a vector family"""


class AlreadyDiscreteError(NetworkModelError):
    """Discretization requested on a model that is already discrete-time"""


class InstabilityWarning(UserWarning):
    """Sparsity projection degraded the spectral radius of the discretized model"""
