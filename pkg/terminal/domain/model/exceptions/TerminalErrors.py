class TerminalError(ValueError):
    """Base error of the terminal ingredients context"""


class SynthesisInfeasibleError(TerminalError):
    """No distributed terminal cost and gain exist for this coupling structure"""


class SynthesisNumericalError(TerminalError):
    """The synthesis solve failed or returned unusable numbers"""
