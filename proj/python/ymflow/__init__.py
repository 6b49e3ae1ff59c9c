"""Python access to the ymflow core."""

import json

from ._core import (
    CriterionResult,
    Dimension,
    criterion_ids,
    make_dimension,
    mu,
    positivity_threshold,
    profile,
    run_criterion,
)

__all__ = [
    "CriterionResult",
    "Dimension",
    "criterion_ids",
    "ggmt",
    "make_dimension",
    "mu",
    "positivity_threshold",
    "profile",
    "run_criterion",
    "spectrum",
]


def _number(x):
    if isinstance(x, str):
        return float(x)
    return x


def ggmt(d, p=4, pathway="exact"):
    """B(n, p) record for n = d + 2 as a dict."""
    from ._core import _ggmt

    rec = json.loads(_ggmt(d, float(p), pathway))
    for key in ("B", "rho_star", "upper_limit", "constant"):
        if key in rec:
            rec[key] = _number(rec[key])
    return rec


def spectrum(d, kind="linearized", R=20.0, N=4000, k=5, extrapolate=False):
    """Lowest k eigenvalues of the half-line operator as a dict."""
    from ._core import _spectrum

    rec = json.loads(_spectrum(d, kind, float(R), int(N), int(k), bool(extrapolate)))
    rec["eigenvalues"] = [_number(v) for v in rec["eigenvalues"]]
    return rec
