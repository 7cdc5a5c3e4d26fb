"""Gray-image cipher built from the Logistic-Sine chaotic map and Rule 30 automata."""

from .cipher import MasterKey, decrypt, derive_schedule, encrypt, encrypt_traced
from .chaos import ChaosParams, ChaosStream, lss_step

__all__ = [
    "ChaosParams",
    "ChaosStream",
    "MasterKey",
    "decrypt",
    "derive_schedule",
    "encrypt",
    "encrypt_traced",
    "lss_step",
]
