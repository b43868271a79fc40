from enum import Enum


class ConeKind(str, Enum):
    """Cones a constraint row can belong to"""
    ZERO = "zero"
    NONNEGATIVE = "nonnegative"
    SECOND_ORDER = "second_order"
    PSD = "psd"
