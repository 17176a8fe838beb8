"""JSON model files.

A model file is one JSON object::

    {
      "name": "twisted-cubic",
      "mode": "exact",
      "params": ["t1"],
      "variables": ["x1", "x2", "x3"],
      "coords": ["t1", "t1^2", {"num": "t1^3", "den": "1"}],
      "patch": {"t1": ["-2", "2"]},
      "known": ["x1^2 - x2"]
    }

Only ``coords`` is required.  Polynomials use the same grammar as
:func:`interpmat.polycore.parse_poly`.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

from .errors import ParseError
from .interp import ParamModel
from .polycore.parse import format_poly, parse_poly
from .polycore.scalar import EXACT, check_mode
from .supports import default_variables


def model_from_dict(data: dict, mode: Optional[str] = None) -> ParamModel:
    if not isinstance(data, dict) or "coords" not in data:
        raise ParseError("model file must be an object with a 'coords' list")
    mode = check_mode(mode or data.get("mode", EXACT))
    coords = data["coords"]
    if not isinstance(coords, list) or not coords:
        raise ParseError("'coords' must be a non-empty list")
    params = tuple(data.get("params", ["t1"]))
    variables = tuple(data.get("variables") or default_variables(len(coords)))
    nums, dens = [], []
    for k, c in enumerate(coords):
        if isinstance(c, str):
            num, den = c, "1"
        elif isinstance(c, dict) and "num" in c:
            num, den = c["num"], c.get("den", "1")
        elif isinstance(c, list) and len(c) == 2:
            num, den = c
        else:
            raise ParseError(f"coordinate {k + 1} must be a string, [num, den] or {{num, den}}")
        try:
            nums.append(parse_poly(num, params, mode))
            dens.append(parse_poly(den, params, mode))
        except ParseError as e:
            raise ParseError(f"coordinate {k + 1}: {e}") from None
    known = []
    for k, q in enumerate(data.get("known", [])):
        try:
            known.append(parse_poly(q, variables, mode))
        except ParseError as e:
            raise ParseError(f"known equation {k + 1}: {e}") from None
    return ParamModel(params, tuple(nums), tuple(dens), mode, variables,
                      data.get("name", ""), tuple(known))


def patch_text(data: dict) -> Optional[str]:
    """The optional patch box as ``"t1:lo,hi;..."``."""
    patch = data.get("patch")
    if not patch:
        return None
    if isinstance(patch, str):
        return patch
    return ";".join(f"{k}:{lo},{hi}" for k, (lo, hi) in patch.items())


def model_to_dict(model: ParamModel) -> dict:
    coords = []
    for num, den in zip(model.numerators, model.denominators):
        coords.append({"num": format_poly(num), "den": format_poly(den)})
    out = {"name": model.name, "mode": model.mode, "params": list(model.params),
           "variables": list(model.variables), "coords": coords}
    if model.known_equations:
        out["known"] = [format_poly(q) for q in model.known_equations]
    return out


def loads_model(text: str, mode: Optional[str] = None) -> ParamModel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno, pos=e.colno - 1) from None
    return model_from_dict(data, mode)


def dumps_model(model: ParamModel) -> str:
    return json.dumps(model_to_dict(model), indent=2, sort_keys=True)


def read_model(path, mode: Optional[str] = None):
    """``(model, raw dict)`` from a JSON model file."""
    text = Path(path).read_text()
    model = loads_model(text, mode)
    return model, json.loads(text)
