"""JSON problem documents.

Schema id ``hyperperiodic/problem/v1``; see ``docs/problem-schema.md`` and
:data:`PROBLEM_SCHEMA`.  A complex number is written ``[re, im]``; a
piecewise polynomial is ``{"breakpoints": [...], "pieces": [[[re...], [im...]], ...]}``
with ascending coefficients in the global coordinate x.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema
import numpy as np

from .errors import AliasingError, ProblemParseError, ProblemValidationError
from .grid import DEFAULT_ORDER
from .modes import TOL_BC, TOL_RES
from .neumann import DEFAULT_MAX_ITER, DEFAULT_TOL
from .piecewise import MAX_DEGREE, PiecewiseCoefficient
from .problem import DEFAULT_GAMMA, ProblemSpec, make_problem
from .spectral import fourier_modes

SCHEMA_ID = "hyperperiodic/problem/v1"

_complex = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_coeff_list = {"type": "array", "items": {"type": "number"}, "minItems": 1}
_piecewise = {
    "type": "object",
    "required": ["breakpoints", "pieces"],
    "additionalProperties": False,
    "properties": {
        "breakpoints": {"type": "array", "items": {"type": "number"}, "minItems": 2},
        "pieces": {
            "type": "array",
            "items": {"type": "array", "items": _coeff_list, "minItems": 2, "maxItems": 2},
        },
    },
}
_sampled = {
    "type": "object",
    "required": ["re", "im"],
    "additionalProperties": False,
    "properties": {
        "re": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
        "im": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
    },
}

PROBLEM_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": SCHEMA_ID,
    "type": "object",
    "required": ["schema", "period", "truncation", "r0", "r1", "coefficients", "forcing"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "period": {"type": "number", "exclusiveMinimum": 0},
        "truncation": {"type": "integer", "minimum": 0},
        "gamma": {"type": "number"},
        "r0": _complex,
        "r1": _complex,
        "coefficients": {
            "type": "object",
            "required": ["a", "b", "c", "d"],
            "additionalProperties": False,
            "properties": {n: _piecewise for n in "abcd"},
        },
        "forcing": {
            "oneOf": [
                {
                    "type": "object",
                    "required": ["modes"],
                    "additionalProperties": False,
                    "properties": {
                        "modes": {
                            "type": "object",
                            "propertyNames": {"pattern": "^-?[0-9]+$"},
                            "additionalProperties": {
                                "type": "object",
                                "additionalProperties": False,
                                "properties": {"f": _piecewise, "g": _piecewise},
                            },
                        }
                    },
                },
                {
                    "type": "object",
                    "required": ["samples"],
                    "additionalProperties": False,
                    "properties": {
                        "samples": {
                            "type": "object",
                            "required": ["nodes", "times"],
                            "additionalProperties": False,
                            "properties": {
                                "nodes": {"type": "array", "items": {"type": "number"}, "minItems": 2},
                                "times": {"type": "integer", "minimum": 1},
                                "f": _sampled,
                                "g": _sampled,
                            },
                        }
                    },
                },
            ]
        },
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "tol": {"type": "number", "exclusiveMinimum": 0},
                "tol_bc": {"type": "number", "exclusiveMinimum": 0},
                "tol_res": {"type": "number", "exclusiveMinimum": 0},
                "max_iter": {"type": "integer", "minimum": 1},
            },
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "refine": {"type": "integer", "minimum": 0},
                "order": {"type": "integer", "minimum": 2},
            },
        },
    },
}

DEFAULT_TOLERANCES = {"tol": DEFAULT_TOL, "tol_bc": TOL_BC, "tol_res": TOL_RES,
                      "max_iter": DEFAULT_MAX_ITER}
DEFAULT_GRID = {"refine": 0, "order": DEFAULT_ORDER}


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def _pw_from_json(obj, ptr, name, max_degree=None) -> PiecewiseCoefficient:
    bp = obj["breakpoints"]
    pieces = obj["pieces"]
    if len(pieces) != len(bp) - 1:
        raise ProblemValidationError(
            f"{name}: {len(pieces)} pieces but {len(bp)} breakpoints (need {len(bp) - 1})",
            ptr + "/pieces")
    if bp[0] != 0 or bp[-1] != 1 or any(y <= x for x, y in zip(bp, bp[1:])):
        raise ProblemValidationError(
            f"{name}: breakpoints must increase strictly from 0 to 1", ptr + "/breakpoints")
    width = max(max(len(re), len(im)) for re, im in pieces)
    if max_degree is not None and width - 1 > max_degree:
        raise ProblemValidationError(
            f"{name}: polynomial degree {width - 1} exceeds {max_degree}", ptr + "/pieces")
    cf = np.zeros((len(pieces), width), complex)
    for i, (re, im) in enumerate(pieces):
        cf[i, :len(re)] += np.asarray(re, float)
        cf[i, :len(im)] += 1j * np.asarray(im, float)
    return PiecewiseCoefficient(bp, cf)


def _layout(obj) -> tuple:
    """Per-piece ``(len(re), len(im))`` so serialisation reproduces the input lists."""
    return tuple((len(re), len(im)) for re, im in obj["pieces"])


def _pw_to_json(c: PiecewiseCoefficient, layout=None) -> dict:
    if layout is None:
        layout = [(c.coeffs.shape[1],) * 2] * c.n_pieces
    return {"breakpoints": [float(x) for x in c.breakpoints],
            "pieces": [[[float(v) for v in row.real[:nre]], [float(v) for v in row.imag[:nim]]]
                       for row, (nre, nim) in zip(c.coeffs, layout)]}


@dataclass(frozen=True, eq=False)
class ProblemDocument:
    """Parsed problem document; :meth:`to_dict` reproduces the normalised input."""

    period: float
    truncation: int
    gamma: float
    r0: complex
    r1: complex
    coefficients: dict
    forcing_modes: dict | None = None
    samples: dict | None = None
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    grid: dict = field(default_factory=lambda: dict(DEFAULT_GRID))
    layout: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_dict(cls, doc) -> ProblemDocument:
        validator = jsonschema.Draft202012Validator(PROBLEM_SCHEMA)
        err = jsonschema.exceptions.best_match(validator.iter_errors(doc))
        if err is not None:
            raise ProblemParseError(err.message, _pointer(err.absolute_path))
        coefs = {name: _pw_from_json(doc["coefficients"][name], f"/coefficients/{name}",
                                     name, MAX_DEGREE)
                 for name in "abcd"}
        layout = {f"coefficients/{n}": _layout(doc["coefficients"][n]) for n in "abcd"}
        K = int(doc["truncation"])
        forcing_modes = samples = None
        fdoc = doc["forcing"]
        if "modes" in fdoc:
            forcing_modes = {}
            for key, entry in fdoc["modes"].items():
                k = int(key)
                if abs(k) > K:
                    raise ProblemValidationError(
                        f"forcing mode {k} exceeds truncation {K}", f"/forcing/modes/{key}")
                forcing_modes[k] = {
                    comp: _pw_from_json(entry[comp], f"/forcing/modes/{key}/{comp}",
                                        f"forcing {comp}_{k}")
                    for comp in ("f", "g") if comp in entry}
                for comp in forcing_modes[k]:
                    layout[f"forcing/{k}/{comp}"] = _layout(entry[comp])
        else:
            samples = cls._parse_samples(fdoc["samples"], K)
        tol = dict(DEFAULT_TOLERANCES, **doc.get("tolerances", {}))
        grid = dict(DEFAULT_GRID, **doc.get("grid", {}))
        return cls(float(doc["period"]), K, float(doc.get("gamma", DEFAULT_GAMMA)),
                   complex(*doc["r0"]), complex(*doc["r1"]), coefs, forcing_modes,
                   samples, tol, grid, layout)

    @staticmethod
    def _parse_samples(sdoc, K) -> dict:
        nodes = np.asarray(sdoc["nodes"], float)
        N = int(sdoc["times"])
        ptr = "/forcing/samples"
        if nodes[0] != 0 or nodes[-1] != 1 or np.any(np.diff(nodes) <= 0):
            raise ProblemValidationError("sample nodes must increase strictly from 0 to 1",
                                         ptr + "/nodes")
        if N < 2 * K + 1:
            raise ProblemValidationError(
                str(AliasingError(f"{N} samples cannot resolve modes |k| <= {K}")), ptr + "/times")
        out = {"nodes": nodes, "times": N}
        for comp in ("f", "g"):
            if comp not in sdoc:
                continue
            re = np.asarray(sdoc[comp]["re"], float)
            im = np.asarray(sdoc[comp]["im"], float)
            if re.shape != (nodes.size, N) or im.shape != (nodes.size, N):
                raise ProblemValidationError(
                    f"{comp} samples must have shape ({nodes.size}, {N})", f"{ptr}/{comp}")
            out[comp] = re + 1j * im
        return out

    @classmethod
    def load(cls, path) -> ProblemDocument:
        text = Path(path).read_text()
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ProblemParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        out = {
            "schema": SCHEMA_ID,
            "period": self.period,
            "truncation": self.truncation,
            "gamma": self.gamma,
            "r0": [self.r0.real, self.r0.imag],
            "r1": [self.r1.real, self.r1.imag],
            "coefficients": {n: _pw_to_json(c, self.layout.get(f"coefficients/{n}"))
                             for n, c in self.coefficients.items()},
        }
        if self.forcing_modes is not None:
            out["forcing"] = {"modes": {
                str(k): {comp: _pw_to_json(pw, self.layout.get(f"forcing/{k}/{comp}"))
                         for comp, pw in entry.items()}
                for k, entry in self.forcing_modes.items()}}
        else:
            s = self.samples
            sd = {"nodes": [float(x) for x in s["nodes"]], "times": s["times"]}
            for comp in ("f", "g"):
                if comp in s:
                    sd[comp] = {"re": s[comp].real.tolist(), "im": s[comp].imag.tolist()}
            out["forcing"] = {"samples": sd}
        out["tolerances"] = dict(self.tolerances)
        out["grid"] = dict(self.grid)
        return out

    def forcing_pieces(self, K: int) -> tuple[dict, dict]:
        """Mode maps ``k -> PiecewiseCoefficient`` for ``f`` and ``g``, ``|k| <= K``."""
        f, g = {}, {}
        if self.forcing_modes is not None:
            for k, entry in self.forcing_modes.items():
                if abs(k) <= K:
                    if "f" in entry:
                        f[k] = entry["f"]
                    if "g" in entry:
                        g[k] = entry["g"]
            return f, g
        nodes = self.samples["nodes"]
        for comp, target in (("f", f), ("g", g)):
            if comp in self.samples:
                modes = fourier_modes(self.samples[comp], K)
                for j, k in enumerate(range(-K, K + 1)):
                    if np.any(modes[j]):
                        target[k] = PiecewiseCoefficient.piecewise_linear(nodes, modes[j])
        return f, g

    def to_spec(self, k_max: int | None = None, gamma: float | None = None) -> ProblemSpec:
        K = self.truncation if k_max is None else int(k_max)
        if self.samples is not None and self.samples["times"] < 2 * K + 1:
            raise ProblemValidationError(
                f"{self.samples['times']} samples cannot resolve modes |k| <= {K}",
                "/forcing/samples/times")
        f, g = self.forcing_pieces(K)
        c = self.coefficients
        return make_problem(c["a"], c["b"], c["c"], c["d"], self.r0, self.r1,
                            period=self.period, K=K,
                            gamma=self.gamma if gamma is None else gamma,
                            f=f, g=g, order=self.grid["order"], refine=self.grid["refine"])


def parse_problem(path, k_max: int | None = None, gamma: float | None = None) -> ProblemSpec:
    """Load, validate and discretise a problem document."""
    return ProblemDocument.load(path).to_spec(k_max, gamma)
