"""Deterministic JSON serialization of results.

Floats are written with 17 significant digits, complex numbers as
``{"re": ..., "im": ...}``, dict order is preserved and nothing time-dependent
is emitted, so identical inputs produce byte-identical output.
"""

from __future__ import annotations

import enum
import json
import math

import numpy as np

from .iteration import IterationTrace
from .numdiff import IdentityReport

__all__ = ["dumps", "complex_json", "identity_report_json", "trace_json"]


def _float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def complex_json(z) -> dict:
    z = complex(z)
    return {"re": float(z.real), "im": float(z.imag)}


def _emit(obj, out: list, indent: int, level: int):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or obj is True or obj is False:
        out.append(json.dumps(obj))
    elif isinstance(obj, enum.Enum):
        out.append(json.dumps(obj.value))
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_float(float(obj)))
    elif isinstance(obj, (complex, np.complexfloating)):
        _emit(complex_json(obj), out, indent, level)
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = list(obj.items())
        for i, (k, v) in enumerate(items):
            out.append(pad + json.dumps(str(k)) + ": ")
            _emit(v, out, indent, level + 1)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad)
            _emit(v, out, indent, level + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    out: list[str] = []
    _emit(obj, out, indent, 0)
    return "".join(out)


def identity_report_json(rep: IdentityReport) -> dict:
    radius, degree, resid = rep.fit_diagnostics
    return {
        "map_kind": rep.map_kind,
        "center": rep.center,
        "passed": rep.passed,
        "checks": [
            {"label": label, "measured": m, "expected": e, "abs_error": err, "tolerance": tol,
             "passed": err < tol}
            for (label, m), (_, e), err, tol in zip(rep.measured, rep.expected,
                                                    rep.abs_errors, rep.tolerances)
        ],
        "measured": {label: m for label, m in rep.measured},
        "informational": {label: v for label, v in rep.informational},
        "fit": {"radius": radius, "degree": degree, "residual_norm": resid},
    }


def trace_json(trace: IterationTrace) -> dict:
    return {
        "status": trace.status,
        "steps": trace.n_steps,
        "final": trace.final,
        "iterates": list(trace.iterates),
        "residuals": list(trace.residuals),
        "error": trace.error,
    }
