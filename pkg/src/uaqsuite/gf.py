"""Kernel backend selection.

The package ships two implementations of its finite-field and subset-scan
kernels: a compiled Cython extension (`_gfcore`) and a pure-Python module
(`_gfpure`). The compiled one is used when it imported successfully; the
environment variable UAQ_GF_BACKEND forces the choice ("compiled",
"pure", or "auto").

Calls that cannot fit the compiled int64 boundary (masks wider than 62
bits, primes above sqrt(2**63)) are routed to the pure module silently,
so results never depend on the backend.
"""

from __future__ import annotations

import math
import os
from array import array

from . import _gfpure
from .errors import ConfigError

# largest prime modulus whose products fit in int64
_COMPILED_P_MAX = 3_037_000_493
_MASK_BITS = 62

_forced = os.environ.get("UAQ_GF_BACKEND", "auto").strip().lower()
if _forced in ("", "auto"):
    try:
        from . import _gfcore  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _gfcore = None
        BACKEND = "pure"
elif _forced == "pure":
    _gfcore = None
    BACKEND = "pure"
elif _forced in ("compiled", "cython"):
    from . import _gfcore  # type: ignore[attr-defined]

    BACKEND = "compiled"
else:
    raise ConfigError(f"unknown UAQ_GF_BACKEND value {_forced!r}")

_impl = _gfcore if BACKEND == "compiled" else _gfpure


def vec(seq) -> array:
    """int64 buffer from a sequence; the common kernel argument type."""
    return seq if isinstance(seq, array) else array("q", seq)


def _use_compiled(p: int) -> bool:
    return BACKEND == "compiled" and p <= _COMPILED_P_MAX


def det_mod_p(flat, n: int, p: int) -> int:
    if _use_compiled(p):
        return _impl.det_mod_p(vec(flat), n, p)
    return _gfpure.det_mod_p(flat, n, p)


def rank_mod_p(flat, rows: int, cols: int, p: int) -> int:
    if _use_compiled(p):
        return _impl.rank_mod_p(vec(flat), rows, cols, p)
    return _gfpure.rank_mod_p(flat, rows, cols, p)


def wedge_coords(flat, n: int, k: int, p: int) -> array:
    """All k-row minors of an n*k matrix, lex order; length binomial(n,k)."""
    m = math.comb(n, k)
    out = array("q", bytes(8 * m))
    if _use_compiled(p):
        _impl.wedge_fill(vec(flat), n, k, p, out)
    else:
        _gfpure.wedge_fill(flat, n, k, p, out)
    return out


def echelon_basis(dim: int, p: int):
    if _use_compiled(p):
        return _impl.EchelonBasis(dim, p)
    return _gfpure.EchelonBasis(dim, p)


def find_solution(role_masks, plb, pub, kp, kr, cons_masks, cons_caps, max_subsets):
    fits = (
        BACKEND == "compiled"
        and len(role_masks) <= _MASK_BITS
        and pub < (1 << _MASK_BITS)
        and all(m < (1 << _MASK_BITS) for m in role_masks)
    )
    if fits:
        return _impl.find_solution(
            vec(role_masks), plb, pub, kp, kr,
            vec(cons_masks), vec(cons_caps), max_subsets,
        )
    return _gfpure.find_solution(
        role_masks, plb, pub, kp, kr, cons_masks, cons_caps, max_subsets
    )
