from enum import Enum


class LmiLifting(str, Enum):
    """First block of the synthesis LMI"""
    OWN_BLOCK = "own_block"        # W_ii^T E_i W_ii + Gamma_i
    NEIGHBORHOOD = "neighborhood"  # E_{N_i} + Gamma_i
