"""Numerical tolerances used throughout the package.

All values are absolute and tuned for double precision at desk-scale
dimensions (total dimension up to a few thousand for dense matrices).
"""

NORM = 1e-9
ORTH = 1e-9
PROB = 1e-9
TRACE = 1e-9
PSD = 1e-9
RECON = 1e-8
HERM = 1e-10
HERM_INPUT = 1e-8
RANK = 1e-10
AMP = 1e-12
IMAG = 1e-9
EIG = 1e-12
BLOCK = 1e-10

# dense D x D operators are refused above this total dimension
DENSE_CAP = 4096
DEFAULT_MAX_LENGTH = 8


def as_dict() -> dict[str, float]:
    """Snapshot of every tolerance, for embedding into reports."""
    return {
        "norm": NORM,
        "orth": ORTH,
        "prob": PROB,
        "trace": TRACE,
        "psd": PSD,
        "recon": RECON,
        "herm": HERM,
        "herm_input": HERM_INPUT,
        "rank": RANK,
        "amp": AMP,
        "imag": IMAG,
        "eig": EIG,
        "block": BLOCK,
        "dense_cap": DENSE_CAP,
    }
