"""Kernel backend selection.

Two interchangeable implementations of the interface-flux kernels exist: the
pure-numpy one (always available) and a compiled extension built at install
time.  The active backend is chosen at import from the FVX_BACKEND
environment variable ("auto", "python", "compiled") and can be switched at
runtime with use(); `fvx bench` times both.
"""

import os

from . import numpy_backend

_BACKENDS = {"python": numpy_backend}

try:
    from . import _core  # compiled extension, optional

    _BACKENDS["compiled"] = _core
except ImportError:
    _core = None

LAX_FRIEDRICHS = numpy_backend.LAX_FRIEDRICHS
RUSANOV = numpy_backend.RUSANOV
ROE = numpy_backend.ROE
HLL = numpy_backend.HLL
HLLE = numpy_backend.HLLE
HLLC = numpy_backend.HLLC


def available():
    return sorted(_BACKENDS)


def use(name):
    """Select the active kernel backend; returns the previous backend name."""
    global _active, _active_name
    if name == "auto":
        name = "compiled" if "compiled" in _BACKENDS else "python"
    if name not in _BACKENDS:
        raise ValueError(f"unknown kernel backend '{name}' (have {available()})")
    previous = _active_name
    _active = _BACKENDS[name]
    _active_name = name
    return previous


def backend_name():
    return _active_name


_active = None
_active_name = None
use(os.environ.get("FVX_BACKEND", "auto"))


def swe_flux(kind, g, ql, qr, lf_ratio=None, entropy_fix=0.0):
    return _active.swe_flux(kind, g, ql, qr, lf_ratio, entropy_fix)


def euler_flux(kind, gamma, ql, qr, lf_ratio=None, entropy_fix=0.0):
    return _active.euler_flux(kind, gamma, ql, qr, lf_ratio, entropy_fix)
