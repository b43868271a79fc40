from enum import Enum


class OcpVariant(str, Enum):
    """Online problem formulations"""
    DST = "DST"          # invariance as an LMI
    DST_DD = "DST_DD"    # invariance by diagonal dominance, no PSD cone
    APP = "APP"          # regulation baseline with LMI robust constraints

    @property
    def tracks_reference(self) -> bool:
        return self is not OcpVariant.APP
