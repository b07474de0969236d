"""Stable JSON file formats for measures, step functions, and shifts.

Node keys serialize as "level,index" strings.
"""

from __future__ import annotations

import json
from pathlib import Path

from .martingale import StepFunction
from .measure import MeasureError, MeasureTree
from .shift import CanonicalShift, GeneralShift, Shift, ShiftError, ShiftShape, petermichl
from .tree import Node, node_from_key


class FormatError(ValueError):
    """Malformed input file."""


def save_measure(mu: MeasureTree, path) -> None:
    Path(path).write_text(json.dumps(mu.to_json()) + "\n")


def load_measure(path) -> MeasureTree:
    try:
        obj = json.loads(Path(path).read_text())
        return MeasureTree.from_json(obj)
    except (json.JSONDecodeError, MeasureError, OSError) as exc:
        raise FormatError(f"cannot load measure from {path}: {exc}") from exc


def function_to_json(f: StepFunction) -> dict:
    return {"depth": f.depth, "leaf_values": f.values.tolist()}


def function_from_json(obj: dict) -> StepFunction:
    try:
        return StepFunction(int(obj["depth"]), obj["leaf_values"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed function file: {exc}") from exc


def save_function(f: StepFunction, path) -> None:
    Path(path).write_text(json.dumps(function_to_json(f)) + "\n")


def load_function(path) -> StepFunction:
    try:
        return function_from_json(json.loads(Path(path).read_text()))
    except (json.JSONDecodeError, OSError) as exc:
        raise FormatError(f"cannot load function from {path}: {exc}") from exc


def shift_to_json(T: Shift) -> dict:
    if isinstance(T, CanonicalShift):
        return {
            "kind": "canonical",
            "m": T.m,
            "s": T.s_sel,
            "n": T.n,
            "t": T.t_sel,
            "alphas": {str(node): a for node, a in sorted(T.alphas.items())},
        }
    return {
        "kind": "general",
        "r": T.shape.r,
        "s": T.shape.s,
        "terms": [
            {"Q": str(q), "R": str(r), "S": str(s), "alpha": a}
            for q, r, s, a in T.terms
        ],
    }


def shift_from_json(obj: dict, depth: int) -> Shift:
    try:
        kind = obj["kind"]
        if kind == "petermichl":
            return petermichl(depth)
        if kind == "canonical":
            alphas = {
                node_from_key(key): float(a) for key, a in obj.get("alphas", {}).items()
            }
            return CanonicalShift(
                depth, int(obj["m"]), int(obj["s"]), int(obj["n"]), int(obj["t"]), alphas
            )
        if kind == "general":
            terms = [
                (
                    node_from_key(t["Q"]),
                    node_from_key(t["R"]),
                    node_from_key(t["S"]),
                    float(t["alpha"]),
                )
                for t in obj.get("terms", [])
            ]
            return GeneralShift(depth, ShiftShape(int(obj["r"]), int(obj["s"])), terms)
        raise FormatError(f"unknown shift kind {kind!r}")
    except (KeyError, TypeError, ValueError, ShiftError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"malformed shift file: {exc}") from exc


def save_shift(T: Shift, path) -> None:
    Path(path).write_text(json.dumps(shift_to_json(T)) + "\n")


def load_shift(path, depth: int) -> Shift:
    try:
        return shift_from_json(json.loads(Path(path).read_text()), depth)
    except (json.JSONDecodeError, OSError) as exc:
        raise FormatError(f"cannot load shift from {path}: {exc}") from exc


def norm_report(norm: str, params: dict, value: float, witness: Node | None) -> dict:
    return {
        "norm": norm,
        "params": params,
        "value": value,
        "witness_node": str(witness) if witness is not None else None,
    }
