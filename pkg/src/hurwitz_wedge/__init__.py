"""Hurwitz numbers for fixed ramification profile and arbitrary genus.

The wedge-space route (``correlator``, ``hurwitz``) is checked against the
brute-force permutation counts in ``oracle``; ``monotone`` covers the
monotone variant, which is oracle-only.
"""

__version__ = "0.1.0"

from .correlator import OperatorWord, connected, disconnected  # noqa: E402
from .hurwitz import HurwitzQuery, hurwitz_number, structure_coefficients  # noqa: E402

__all__ = [
    "HurwitzQuery",
    "OperatorWord",
    "connected",
    "disconnected",
    "hurwitz_number",
    "structure_coefficients",
]
