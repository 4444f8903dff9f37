"""Experiment configuration files.

Configs are TOML with one extension: bare fractions like `3/10` are legal
values and are read exactly (they are quoted before parsing, then converted
to Fraction). Sections: [group], [folner], [system], [measure] or repeated
[[measures]], and [params] for command-specific knobs. Integer ranges may be
written as a list or as an inclusive string "2..20". Pattern-valued fields
use the literal forms `box[0,4) : 0110` and `cells (0,1):1`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import measures as measure_builders
from .bowen import CylinderUnion, SubShiftAtoms, SubsetSpec, WholeSpace
from .errors import ConfigError
from .group import FolnerSequence, GroupSpec, heisenberg, zd
from .measures import ProductMeasure
from .shift_space import Alphabet, Pattern, ShiftSpace, pattern_from_literal

__all__ = [
    "ExperimentConfig",
    "load_config",
    "parse_config",
    "as_fraction",
    "parse_int_range",
    "parse_target",
]

_KNOWN_SECTIONS = {"group", "folner", "system", "measure", "measures", "params"}

# quoted strings pass through untouched; bare p/q gets quoted
_FRACTION_RE = re.compile(
    r"(\"[^\"]*\"|'[^']*')|(?<![\w.])(\d+)\s*/\s*(\d+)(?![\w.])"
)


def _quote_fractions(text: str) -> str:
    def sub(m: re.Match) -> str:
        if m.group(1) is not None:
            return m.group(1)
        return f'"{m.group(2)}/{m.group(3)}"'

    return _FRACTION_RE.sub(sub, text)


def as_fraction(value: Any, where: str = "value") -> Fraction:
    """Exact conversion; accepts ints, 'p/q' strings, and floats."""
    try:
        if isinstance(value, str):
            return Fraction(value.strip())
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise ConfigError(f"{where}: cannot read {value!r} as a rational") from e


def parse_int_range(value: Any, where: str = "range") -> list[int]:
    """Either an explicit integer list or an inclusive 'a..b' string."""
    if isinstance(value, str):
        m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", value)
        if not m:
            raise ConfigError(f"{where}: bad range literal {value!r}")
        a, b = int(m.group(1)), int(m.group(2))
        if b < a:
            raise ConfigError(f"{where}: empty range {value!r}")
        return list(range(a, b + 1))
    if isinstance(value, list) and all(isinstance(v, int) for v in value):
        return list(value)
    raise ConfigError(f"{where}: expected an int list or 'a..b', got {value!r}")


def _parse_patterns(values: Any, where: str) -> tuple[Pattern, ...]:
    if not isinstance(values, list):
        raise ConfigError(f"{where}: expected a list of pattern literals")
    out = []
    for v in values:
        try:
            out.append(pattern_from_literal(v))
        except (ValueError, IndexError) as e:
            raise ConfigError(f"{where}: {e}") from e
    return tuple(out)


def parse_target(value: Any, where: str = "params.target") -> SubsetSpec:
    """'whole', {cylinders = [...]}, or {forbid = [...]}."""
    if value is None or value == "whole":
        return WholeSpace()
    if isinstance(value, dict):
        if set(value) == {"cylinders"}:
            return CylinderUnion(_parse_patterns(value["cylinders"], where))
        if set(value) == {"forbid"}:
            return SubShiftAtoms(_parse_patterns(value["forbid"], where))
    raise ConfigError(
        f"{where}: expected 'whole', {{cylinders=[...]}} or {{forbid=[...]}}"
    )


def _build_group(section: dict) -> GroupSpec:
    kind = section.get("kind")
    if kind == "zd":
        d = section.get("d", 1)
        if not isinstance(d, int) or not 1 <= d <= 3:
            raise ConfigError(f"group.d must be an integer in [1, 3], got {d!r}")
        return zd(d)
    if kind == "heisenberg":
        if section.get("d", 3) != 3:
            raise ConfigError("group.d is fixed at 3 for heisenberg")
        return heisenberg()
    raise ConfigError(f"group.kind must be 'zd' or 'heisenberg', got {kind!r}")


def _build_folner(section: dict, group: GroupSpec) -> FolnerSequence:
    rule = section.get("rule", "box")
    if rule == "box":
        return FolnerSequence(group, "box")
    if rule == "explicit":
        raw = section.get("sets")
        if not isinstance(raw, list) or not raw:
            raise ConfigError("folner.sets must be a nonempty list of element lists")
        sets = []
        for i, elems in enumerate(raw):
            try:
                sets.append(frozenset(tuple(int(c) for c in e) for e in elems))
            except (TypeError, ValueError) as e:
                raise ConfigError(f"folner.sets[{i}]: bad element list") from e
        return FolnerSequence(group, "explicit", tuple(sets))
    raise ConfigError(f"folner.rule must be 'box' or 'explicit', got {rule!r}")


def _build_space(section: dict, group: GroupSpec) -> ShiftSpace:
    k = section.get("alphabet")
    if not isinstance(k, int) or k < 2:
        raise ConfigError(f"system.alphabet must be an integer >= 2, got {k!r}")
    forbidden = _parse_patterns(section.get("forbidden", []), "system.forbidden")
    try:
        return ShiftSpace(group, Alphabet(k), forbidden)
    except ValueError as e:
        raise ConfigError(f"system: {e}") from e


def _build_measure(section: dict, where: str) -> ProductMeasure:
    kind = section.get("kind")
    try:
        if kind == "bernoulli":
            probs = section.get("probs")
            if not isinstance(probs, list):
                raise ConfigError(f"{where}.probs must be a list of rationals")
            return measure_builders.bernoulli(
                [as_fraction(p, f"{where}.probs") for p in probs]
            )
        if kind == "markov":
            rows = section.get("transition")
            if not isinstance(rows, list):
                raise ConfigError(f"{where}.transition must be a matrix")
            matrix = [
                [as_fraction(v, f"{where}.transition") for v in row] for row in rows
            ]
            pi = section.get("stationary")
            stat = (
                [as_fraction(v, f"{where}.stationary") for v in pi]
                if pi is not None
                else None
            )
            return measure_builders.markov_chain(matrix, stat)
        if kind == "parry":
            return measure_builders.golden_mean_parry(section.get("convergent", 19))
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(f"{where}: {e}") from e
    raise ConfigError(
        f"{where}.kind must be 'bernoulli', 'markov' or 'parry', got {kind!r}"
    )


@dataclass
class ExperimentConfig:
    """A parsed config: group and Folner always, the rest when present."""

    group: GroupSpec
    folner: FolnerSequence
    space: ShiftSpace | None = None
    measure: ProductMeasure | None = None
    measures: tuple[ProductMeasure, ...] = ()
    params: dict = field(default_factory=dict)

    def require_space(self) -> ShiftSpace:
        if self.space is None:
            raise ConfigError("this command needs a [system] section")
        return self.space

    def require_measure(self) -> ProductMeasure:
        if self.measure is not None:
            return self.measure
        if len(self.measures) == 1:
            return self.measures[0]
        raise ConfigError("this command needs a [measure] section")

    def all_measures(self) -> tuple[ProductMeasure, ...]:
        if self.measures:
            return self.measures
        if self.measure is not None:
            return (self.measure,)
        raise ConfigError("this command needs [measure] or [[measures]]")


def parse_config(text: str) -> ExperimentConfig:
    try:
        raw = tomllib.loads(_quote_fractions(text))
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"malformed config: {e}") from e
    unknown = set(raw) - _KNOWN_SECTIONS
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    if "group" not in raw:
        raise ConfigError("missing [group] section")
    group = _build_group(raw["group"])
    folner = _build_folner(raw.get("folner", {}), group)
    space = _build_space(raw["system"], group) if "system" in raw else None
    measure = (
        _build_measure(raw["measure"], "measure") if "measure" in raw else None
    )
    many = tuple(
        _build_measure(sec, f"measures[{i}]")
        for i, sec in enumerate(raw.get("measures", []))
    )
    params = raw.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("[params] must be a table")
    return ExperimentConfig(
        group=group,
        folner=folner,
        space=space,
        measure=measure,
        measures=many,
        params=params,
    )


def load_config(path: str | Path) -> ExperimentConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {p}: {e}") from e
    return parse_config(text)
