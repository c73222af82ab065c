"""Metric specification files.

A spec file is a list of ``key = value`` lines::

    # conformally flat, chronological but non-causal
    type = conformal
    E = 0
    F = 1
    G = 0
    psi = sin(2*pi*x) + 0.5*y

``type`` is one of ``flat``, ``conformal``, ``general``.  For ``flat`` and
``conformal`` the coefficients are decimal numbers; for ``general`` they are
expressions in ``x`` and ``y``.  ``psi`` is required for ``conformal`` and
forbidden otherwise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from .expr import Expression, ExpressionSyntaxError, parse_expression
from .metric import FlatMetric

__all__ = [
    "SpecError",
    "MetricSpec",
    "parse_metric_spec",
    "format_metric_spec",
    "load_metric_spec",
]

KINDS = ("flat", "conformal", "general")
KEYS = ("type", "E", "F", "G", "psi")

_NUMBER_RE = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?\Z")


class SpecError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class MetricSpec:
    kind: str
    E: Union[float, Expression]
    F: Union[float, Expression]
    G: Union[float, Expression]
    psi: Optional[Expression] = None

    @property
    def flat(self) -> FlatMetric:
        """The constant-coefficient part (``flat`` and ``conformal`` only)."""
        if self.kind == "general":
            raise SpecError("a general metric has no constant flat part")
        return FlatMetric(self.E, self.F, self.G)


def parse_metric_spec(text: str) -> MetricSpec:
    values: dict[str, tuple[str, int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            col = len(line) - len(line.lstrip()) + 1
            raise SpecError("expected 'key = value'", lineno, col)
        key_part, value_part = line.split("=", 1)
        key = key_part.strip()
        key_col = len(key_part) - len(key_part.lstrip()) + 1
        if key not in KEYS:
            raise SpecError(f"unknown key {key!r}", lineno, key_col)
        if key in values:
            raise SpecError(f"duplicate key {key!r} (first given on line {values[key][1]})",
                            lineno, key_col)
        value = value_part.strip()
        value_col = len(key_part) + 2 + (len(value_part) - len(value_part.lstrip()))
        if not value:
            raise SpecError(f"empty value for {key!r}", lineno, value_col)
        values[key] = (value, lineno, value_col)

    if "type" not in values:
        raise SpecError("missing required key 'type'")
    kind, kind_line, kind_col = values["type"]
    if kind not in KINDS:
        raise SpecError(f"unknown type {kind!r}, expected one of {', '.join(KINDS)}",
                        kind_line, kind_col)
    for key in ("E", "F", "G"):
        if key not in values:
            raise SpecError(f"missing required key {key!r}")
    if kind == "conformal" and "psi" not in values:
        raise SpecError("missing required key 'psi' for a conformal metric")
    if kind != "conformal" and "psi" in values:
        raise SpecError(f"psi is only allowed for conformal metrics, not {kind}",
                        values["psi"][1], 1)

    def expression(key):
        text, line, col = values[key]
        try:
            return parse_expression(text)
        except ExpressionSyntaxError as exc:
            raise SpecError(f"{key}: {exc.reason}", line, col + exc.column - 1) from None

    if kind == "general":
        return MetricSpec(kind, expression("E"), expression("F"), expression("G"))

    coeffs = []
    for key in ("E", "F", "G"):
        text, line, col = values[key]
        if not _NUMBER_RE.match(text):
            raise SpecError(f"{key} must be a decimal number for a {kind} metric, got {text!r}",
                            line, col)
        coeffs.append(float(text))
    # signature is part of the file's contract
    FlatMetric(*coeffs)
    psi = expression("psi") if kind == "conformal" else None
    return MetricSpec(kind, *coeffs, psi=psi)


def _format_value(v) -> str:
    return repr(float(v)) if isinstance(v, (int, float)) else v.source()


def format_metric_spec(spec: MetricSpec) -> str:
    """Serialize ``spec``; :func:`parse_metric_spec` reads it back unchanged."""
    lines = [f"type = {spec.kind}"]
    for key in ("E", "F", "G"):
        lines.append(f"{key} = {_format_value(getattr(spec, key))}")
    if spec.psi is not None:
        lines.append(f"psi = {spec.psi.source()}")
    return "\n".join(lines) + "\n"


def load_metric_spec(path) -> MetricSpec:
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise SpecError(f"file is not valid UTF-8: {exc}") from None
    return parse_metric_spec(text)

