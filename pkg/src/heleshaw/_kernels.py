"""Kernel dispatch: compiled tracing core when available, pure Python otherwise.

Set HELESHAW_PURE=1 to force the pure-Python kernel (used by the benchmark
and as a safety hatch on platforms without a C toolchain).
"""
import os

from . import _tracer_py

STATUS_CLOSED = _tracer_py.STATUS_CLOSED
STATUS_OPEN = _tracer_py.STATUS_OPEN
STATUS_STALLED = _tracer_py.STATUS_STALLED

if os.environ.get("HELESHAW_PURE"):
    trace_loop = _tracer_py.trace_loop
    KERNEL_BACKEND = "python"
else:
    try:
        from ._curvetrace import trace_loop  # type: ignore[attr-defined]

        KERNEL_BACKEND = "compiled"
    except ImportError:
        trace_loop = _tracer_py.trace_loop
        KERNEL_BACKEND = "python"
