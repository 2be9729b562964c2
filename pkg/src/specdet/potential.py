"""Potential specifications on [0, 1]: construction, evaluation, norms, JSON.

A potential is one of six immutable variants.  All represent elements of
L^1([0, 1]); negative values are only admitted on variants carrying an
explicit ``signed`` flag (they exist for comparison experiments, every other
consumer assumes V >= 0).

The JSON wire format is fixed field-for-field (see
``schemas/potential.schema.json``); ``parse_potential`` and
``serialize_potential`` round-trip every variant bit-exactly because floats
are emitted with shortest round-trip repr.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields

import numpy as np

from .errors import (DomainError, PotentialParseError,
                     PotentialValidationError)

__all__ = [
    "Zero", "Constant", "Pulse", "PiecewiseConstant", "Sampled", "ExtremalLq",
    "NormReport", "eval_potential", "lq_norm", "integral", "l1_distance",
    "as_cells", "mesh_cells", "parse_potential", "serialize_potential",
]

_REL_QUAD_TOL = 1e-10
_MAX_QUAD_POINTS = 2 ** 20


def _finite(x, name: str) -> float:
    try:
        v = float(x)
    except (TypeError, ValueError):
        raise PotentialValidationError(f"field '{name}' is not a number", name)
    if not math.isfinite(v):
        raise PotentialValidationError(f"field '{name}' must be finite", name)
    return v


def _finite_tuple(xs, name: str) -> tuple:
    if not isinstance(xs, (list, tuple, np.ndarray)):
        raise PotentialValidationError(f"field '{name}' must be an array", name)
    return tuple(_finite(x, name) for x in xs)


@dataclass(frozen=True)
class Zero:
    """The identically zero potential."""


@dataclass(frozen=True)
class Constant:
    """V(t) = a on all of [0, 1]."""

    a: float
    signed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "a", _finite(self.a, "a"))
        if self.a < 0 and not self.signed:
            raise PotentialValidationError(
                "field 'a' is negative but 'signed' is not set", "a")


@dataclass(frozen=True)
class Pulse:
    """Height m on the closed interval [x1, x2] inside (0, 1), zero outside."""

    x1: float
    x2: float
    m: float

    def __post_init__(self):
        x1 = _finite(self.x1, "x1")
        x2 = _finite(self.x2, "x2")
        m = _finite(self.m, "m")
        if not 0.0 < x1 < x2 < 1.0:
            raise PotentialValidationError(
                "fields 'x1','x2' must satisfy 0 < x1 < x2 < 1", "x1")
        if m <= 0.0:
            raise PotentialValidationError("field 'm' must be positive", "m")
        object.__setattr__(self, "x1", x1)
        object.__setattr__(self, "x2", x2)
        object.__setattr__(self, "m", m)


@dataclass(frozen=True)
class PiecewiseConstant:
    """Cell values between sorted interior breakpoints.

    ``breakpoints`` lie strictly inside (0, 1); ``values`` has one entry per
    cell, i.e. ``len(breakpoints) + 1``.  Cells are closed on the left.
    """

    breakpoints: tuple
    values: tuple
    signed: bool = False

    def __post_init__(self):
        bps = _finite_tuple(self.breakpoints, "breakpoints")
        vals = _finite_tuple(self.values, "values")
        if any(not 0.0 < b < 1.0 for b in bps):
            raise PotentialValidationError(
                "field 'breakpoints' must lie strictly inside (0,1)",
                "breakpoints")
        if any(b1 >= b2 for b1, b2 in zip(bps, bps[1:])):
            raise PotentialValidationError(
                "field 'breakpoints' must be strictly increasing",
                "breakpoints")
        if len(vals) != len(bps) + 1:
            raise PotentialValidationError(
                "field 'values' must have len(breakpoints)+1 entries",
                "values")
        if not self.signed and any(v < 0 for v in vals):
            raise PotentialValidationError(
                "field 'values' has negatives but 'signed' is not set",
                "values")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class Sampled:
    """Samples on the uniform grid i/(n-1), i = 0..n-1, n >= 2.

    ``interp`` is ``"left"`` (step function taking each cell's left sample;
    the final sample is kept only for round-trips) or ``"linear"``.
    """

    values: tuple
    interp: str = "left"
    signed: bool = False
    _arr: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vals = _finite_tuple(self.values, "values")
        if len(vals) < 2:
            raise PotentialValidationError(
                "field 'values' needs at least two samples", "values")
        if self.interp not in ("left", "linear"):
            raise PotentialValidationError(
                "field 'interp' must be 'left' or 'linear'", "interp")
        if not self.signed and any(v < 0 for v in vals):
            raise PotentialValidationError(
                "field 'values' has negatives but 'signed' is not set",
                "values")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "_arr", np.asarray(vals, dtype=float))

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ExtremalLq:
    """Optimizer potential reconstructed from auxiliary-profile samples.

    ``psi`` holds samples of the auxiliary profile on the uniform grid;
    the potential is ``q/(4q-2) * max(interp(psi), 0)**(1/(q-1))``.
    """

    q: float
    A: float
    H: float
    psi: tuple
    _arr: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        q = _finite(self.q, "q")
        A = _finite(self.A, "A")
        H = _finite(self.H, "H")
        psi = _finite_tuple(self.psi, "psi")
        if q <= 1.0:
            raise PotentialValidationError("field 'q' must exceed 1", "q")
        if A <= 0.0:
            raise PotentialValidationError("field 'A' must be positive", "A")
        if len(psi) < 2:
            raise PotentialValidationError(
                "field 'psi' needs at least two samples", "psi")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "_arr", np.asarray(psi, dtype=float))

    @property
    def coefficient(self) -> float:
        return self.q / (4.0 * self.q - 2.0)

    @property
    def exponent(self) -> float:
        return 1.0 / (self.q - 1.0)


PotentialSpec = (Zero, Constant, Pulse, PiecewiseConstant, Sampled,
                 ExtremalLq)


@dataclass(frozen=True)
class NormReport:
    """An L^q norm value together with how it was obtained."""

    q: float
    value: float
    rule: str = "closed-form"


def _check_t(t):
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0) or not np.all(np.isfinite(arr)):
        raise DomainError("evaluation point outside [0, 1]")
    return arr


def eval_potential(V, t):
    """Evaluate V at scalar or array t in [0, 1]."""
    arr = _check_t(t)
    scalar = arr.ndim == 0
    tt = np.atleast_1d(arr)
    if isinstance(V, Zero):
        out = np.zeros_like(tt)
    elif isinstance(V, Constant):
        out = np.full_like(tt, V.a)
    elif isinstance(V, Pulse):
        out = np.where((tt >= V.x1) & (tt <= V.x2), V.m, 0.0)
    elif isinstance(V, PiecewiseConstant):
        edges = np.concatenate(([0.0], V.breakpoints, [1.0]))
        idx = np.clip(np.searchsorted(edges, tt, side="right") - 1, 0,
                      len(V.values) - 1)
        out = np.asarray(V.values, dtype=float)[idx]
    elif isinstance(V, Sampled):
        if V.interp == "left":
            idx = np.clip((tt * (V.n - 1)).astype(np.int64), 0, V.n - 2)
            out = V._arr[idx]
        else:
            out = np.interp(tt, np.linspace(0.0, 1.0, V.n), V._arr)
    elif isinstance(V, ExtremalLq):
        nodes = np.linspace(0.0, 1.0, len(V.psi))
        base = np.clip(np.interp(tt, nodes, V._arr), 0.0, None)
        out = V.coefficient * base ** V.exponent
    else:
        raise DomainError(f"unknown potential variant {type(V).__name__}")
    return float(out[0]) if scalar else out


def as_cells(V):
    """Piecewise-constant cell form ``(edges, values)``, or None.

    Returns None for variants that are not exactly piecewise constant
    (linear Sampled, ExtremalLq).
    """
    if isinstance(V, Zero):
        return np.array([0.0, 1.0]), np.array([0.0])
    if isinstance(V, Constant):
        return np.array([0.0, 1.0]), np.array([V.a])
    if isinstance(V, Pulse):
        return (np.array([0.0, V.x1, V.x2, 1.0]),
                np.array([0.0, V.m, 0.0]))
    if isinstance(V, PiecewiseConstant):
        return (np.concatenate(([0.0], V.breakpoints, [1.0])),
                np.asarray(V.values, dtype=float))
    if isinstance(V, Sampled) and V.interp == "left":
        return np.linspace(0.0, 1.0, V.n), V._arr[:-1].copy()
    return None


def mesh_cells(V, mesh: int):
    """Midpoint piecewise-constant approximation on ``mesh`` uniform cells."""
    if mesh < 2:
        raise DomainError("mesh must be at least 2")
    cells = as_cells(V)
    if cells is not None:
        return cells
    edges = np.linspace(0.0, 1.0, mesh + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    return edges, np.asarray(eval_potential(V, mids), dtype=float)


def _interior_nodes(V):
    """Points where V loses smoothness (for quadrature and integrators)."""
    if isinstance(V, Pulse):
        return np.array([V.x1, V.x2])
    if isinstance(V, PiecewiseConstant):
        return np.asarray(V.breakpoints, dtype=float)
    if isinstance(V, Sampled):
        return np.linspace(0.0, 1.0, V.n)[1:-1]
    if isinstance(V, ExtremalLq):
        return np.linspace(0.0, 1.0, len(V.psi))[1:-1]
    return np.empty(0)


def _simpson_refined(f, n_start: int, rel_tol: float = _REL_QUAD_TOL):
    """Composite Simpson with doubling until successive values agree.

    ``f`` maps an ascending node array on [0, 1] to integrand values.
    Returns (value, points_used).
    """
    n = max(int(n_start), 4)
    if n % 2:
        n += 1
    prev = None
    while True:
        x = np.linspace(0.0, 1.0, n + 1)
        fx = f(x)
        h = 1.0 / n
        val = (h / 3.0) * (fx[0] + fx[-1] + 4.0 * fx[1:-1:2].sum()
                           + 2.0 * fx[2:-1:2].sum())
        if prev is not None and abs(val - prev) <= rel_tol * max(
                abs(val), 1e-300):
            return val, n + 1
        if n + 1 >= _MAX_QUAD_POINTS:
            return val, n + 1
        prev = val
        n *= 2


def lq_norm(V, q) -> NormReport:
    """L^q norm of V on [0, 1]; q >= 1 or math.inf.

    Closed forms for exactly piecewise-constant variants; refined composite
    Simpson (doubling from the stored grid) otherwise.
    """
    qf = float(q)
    if not (qf >= 1.0):
        raise DomainError("q must be >= 1 (or inf)")
    if isinstance(V, Zero):
        return NormReport(qf, 0.0)
    if isinstance(V, Constant):
        return NormReport(qf, abs(V.a))
    if math.isinf(qf):
        if isinstance(V, Pulse):
            return NormReport(qf, V.m)
        cells = as_cells(V)
        if cells is not None:
            return NormReport(qf, float(np.max(np.abs(cells[1]))), "cells")
        if isinstance(V, Sampled):
            return NormReport(qf, float(np.max(np.abs(V._arr))), "cells")
        peak = V.coefficient * max(float(np.max(V._arr)), 0.0) ** V.exponent
        return NormReport(qf, peak, "cells")
    if isinstance(V, Pulse):
        return NormReport(qf, V.m * (V.x2 - V.x1) ** (1.0 / qf))
    cells = as_cells(V)
    if cells is not None:
        edges, vals = cells
        mass = float(np.sum(np.abs(vals) ** qf * np.diff(edges)))
        return NormReport(qf, mass ** (1.0 / qf), "cells")
    n0 = len(V.psi) if isinstance(V, ExtremalLq) else V.n
    mass, pts = _simpson_refined(
        lambda x: np.abs(np.asarray(eval_potential(V, x))) ** qf, n0 - 1)
    return NormReport(qf, max(mass, 0.0) ** (1.0 / qf), f"simpson:{pts}")


def integral(V) -> float:
    """The signed integral of V over [0, 1]."""
    cells = as_cells(V)
    if cells is not None:
        edges, vals = cells
        return float(np.sum(vals * np.diff(edges)))
    n0 = len(V.psi) if isinstance(V, ExtremalLq) else V.n
    val, _ = _simpson_refined(
        lambda x: np.asarray(eval_potential(V, x)), n0 - 1)
    return val


def l1_distance(V1, V2) -> float:
    """The L^1 distance between two potentials.

    Exact via merged cells when both sides are piecewise constant, refined
    Simpson on |V1 - V2| otherwise.
    """
    c1, c2 = as_cells(V1), as_cells(V2)
    if c1 is not None and c2 is not None:
        edges = np.union1d(c1[0], c2[0])
        mids = 0.5 * (edges[:-1] + edges[1:])
        d = np.asarray(eval_potential(V1, mids)) - np.asarray(
            eval_potential(V2, mids))
        return float(np.sum(np.abs(d) * np.diff(edges)))
    n0 = max(len(_interior_nodes(V1)), len(_interior_nodes(V2)), 255) + 1
    val, _ = _simpson_refined(
        lambda x: np.abs(np.asarray(eval_potential(V1, x))
                         - np.asarray(eval_potential(V2, x))), n0)
    return val


# --- JSON wire format ---------------------------------------------------

_TYPE_TAGS = {
    Zero: "zero",
    Constant: "constant",
    Pulse: "pulse",
    PiecewiseConstant: "piecewise",
    Sampled: "sampled",
    ExtremalLq: "extremal_lq",
}


def serialize_potential(V) -> str:
    """Canonical one-line JSON for a potential spec."""
    tag = _TYPE_TAGS.get(type(V))
    if tag is None:
        raise DomainError(f"unknown potential variant {type(V).__name__}")
    obj: dict = {"type": tag}
    if isinstance(V, Constant):
        obj["a"] = V.a
        if V.signed:
            obj["signed"] = True
    elif isinstance(V, Pulse):
        obj.update(x1=V.x1, x2=V.x2, m=V.m)
    elif isinstance(V, PiecewiseConstant):
        obj["breakpoints"] = list(V.breakpoints)
        obj["values"] = list(V.values)
        if V.signed:
            obj["signed"] = True
    elif isinstance(V, Sampled):
        obj["n"] = V.n
        obj["values"] = list(V.values)
        obj["interp"] = V.interp
        if V.signed:
            obj["signed"] = True
    elif isinstance(V, ExtremalLq):
        obj.update(q=V.q, A=V.A, H=V.H)
        obj["psi"] = list(V.psi)
    return json.dumps(obj, separators=(",", ":"))


def _require(obj: dict, key: str):
    if key not in obj:
        raise PotentialParseError(f"missing field '{key}'")
    return obj[key]


def _reject_unknown(obj: dict, allowed: set):
    for key in obj:
        if key not in allowed:
            raise PotentialParseError(f"unknown field '{key}'")


def parse_potential(text):
    """Parse the JSON wire format into a potential spec.

    Accepts str or bytes.  Any defect in the blob surfaces as
    ``PotentialParseError``; malformed JSON additionally carries the byte
    position of the failure.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PotentialParseError(f"malformed JSON: {exc.msg}", exc.pos)
    if not isinstance(obj, dict):
        raise PotentialParseError("payload must be a JSON object")
    try:
        return _build_from_tagged(obj)
    except PotentialValidationError as exc:
        raise PotentialParseError(str(exc)) from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, PotentialParseError):
            raise
        raise PotentialParseError(f"bad payload: {exc}") from exc


def _build_from_tagged(obj: dict):
    tag = _require(obj, "type")
    if tag == "zero":
        _reject_unknown(obj, {"type"})
        return Zero()
    if tag == "constant":
        _reject_unknown(obj, {"type", "a", "signed"})
        return Constant(_require(obj, "a"), bool(obj.get("signed", False)))
    if tag == "pulse":
        _reject_unknown(obj, {"type", "x1", "x2", "m"})
        return Pulse(_require(obj, "x1"), _require(obj, "x2"),
                     _require(obj, "m"))
    if tag == "piecewise":
        _reject_unknown(obj, {"type", "breakpoints", "values", "signed"})
        return PiecewiseConstant(tuple(_require(obj, "breakpoints")),
                                 tuple(_require(obj, "values")),
                                 bool(obj.get("signed", False)))
    if tag == "sampled":
        _reject_unknown(obj, {"type", "n", "values", "interp", "signed"})
        vals = _require(obj, "values")
        n = _require(obj, "n")
        if not isinstance(vals, list) or n != len(vals):
            raise PotentialParseError("field 'n' must equal len(values)")
        return Sampled(tuple(vals), obj.get("interp", "left"),
                       bool(obj.get("signed", False)))
    if tag == "extremal_lq":
        _reject_unknown(obj, {"type", "q", "A", "H", "psi"})
        return ExtremalLq(_require(obj, "q"), _require(obj, "A"),
                          _require(obj, "H"), tuple(_require(obj, "psi")))
    raise PotentialParseError(f"unknown potential type '{tag}'")
