"""Detected-feature records: the tagged union written as JSON lines."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass


def _check_finite(record, *values) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"{type(record).__name__} fields must be finite")


@dataclass(frozen=True)
class CornerFeature:
    x: int
    y: int
    response: float

    def __post_init__(self):
        _check_finite(self, self.x, self.y, self.response)


@dataclass(frozen=True)
class LineFeature:
    rho: float
    theta: float
    votes: int

    def __post_init__(self):
        _check_finite(self, self.rho, self.theta, self.votes)


@dataclass(frozen=True)
class CircleFeature:
    a: float
    b: float
    r: float
    votes: int

    def __post_init__(self):
        _check_finite(self, self.a, self.b, self.r, self.votes)


@dataclass(frozen=True)
class ShapeFeature:
    x: int
    y: int
    votes: int

    def __post_init__(self):
        _check_finite(self, self.x, self.y, self.votes)


FeatureRecord = CornerFeature | LineFeature | CircleFeature | ShapeFeature

_TAGS = {
    CornerFeature: "corner",
    LineFeature: "line",
    CircleFeature: "circle",
    ShapeFeature: "shape",
}
_FIELDS = {
    "corner": (CornerFeature, ("x", "y", "response")),
    "line": (LineFeature, ("rho", "theta", "votes")),
    "circle": (CircleFeature, ("a", "b", "r", "votes")),
    "shape": (ShapeFeature, ("x", "y", "votes")),
}


def feature_to_json(feature: FeatureRecord) -> str:
    """One deterministic JSON object per record, type tag first."""
    tag = _TAGS[type(feature)]
    _, names = _FIELDS[tag]
    payload = {"type": tag}
    payload.update({name: getattr(feature, name) for name in names})
    return json.dumps(payload, separators=(", ", ": "))


def feature_from_json(line: str) -> FeatureRecord:
    payload = json.loads(line)
    tag = payload.get("type")
    if tag not in _FIELDS:
        raise ValueError(f"unknown feature type {tag!r}")
    cls, names = _FIELDS[tag]
    try:
        return cls(**{name: payload[name] for name in names})
    except KeyError as missing:
        raise ValueError(f"{tag} record missing field {missing}") from None


def write_features(path, features) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for feature in features:
            fh.write(feature_to_json(feature) + "\n")


def read_features(path) -> list[FeatureRecord]:
    with open(path, "r", encoding="ascii") as fh:
        return [feature_from_json(line) for line in fh if line.strip()]
