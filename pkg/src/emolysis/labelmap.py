"""Mapping of backend-native label spaces onto the common 9-channel space.

Different emotion models emit different label sets; each registered
source space carries a row-stochastic matrix whose product with a native
score vector yields scores in the common space. The matrices are plain
versioned config data (data/label_maps.yaml by default), not learned.
Valence/arousal conventions are registered alongside and rescaled
affinely onto [-1, 1].

The registry is written once at startup and read-only afterwards.
"""

from dataclasses import dataclass
from importlib import resources
from typing import Dict, Sequence, Tuple

import numpy as np
import yaml

from .errors import RegistryError, ValidationError
from .model import EMOTION_NAMES, EmotionDistribution, VAPoint, clamp_distribution

ROW_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class LabelSpace:
    """An ordered set of native label names."""

    id: str
    labels: Tuple[str, ...]

    def __post_init__(self):
        if not self.labels:
            raise ValidationError(f"label space {self.id!r} has no labels")

    @property
    def arity(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class MappingMatrix:
    """Row-stochastic arity x 9 matrix from a source space to the common one."""

    source: str
    rows: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.float64)
        object.__setattr__(self, "rows", rows)
        if rows.ndim != 2 or rows.shape[1] != len(EMOTION_NAMES):
            raise ValidationError(
                f"matrix for {self.source!r} must be (arity, {len(EMOTION_NAMES)}), "
                f"got {rows.shape}"
            )
        if (rows < 0).any():
            raise ValidationError(f"matrix for {self.source!r} has negative entries")
        sums = rows.sum(axis=1)
        bad = np.nonzero(np.abs(sums - 1.0) > ROW_SUM_TOLERANCE)[0]
        if bad.size:
            raise ValidationError(
                f"matrix for {self.source!r}: row {bad[0]} sums to {sums[bad[0]]!r}, "
                "expected 1"
            )


class LabelMapRegistry:
    """Registered label spaces, mapping matrices and VA conventions."""

    def __init__(self):
        self._spaces: Dict[str, LabelSpace] = {}
        self._matrices: Dict[str, MappingMatrix] = {}
        self._va: Dict[str, Tuple[float, float]] = {}

    # -- registration ---------------------------------------------------

    def register(self, space: LabelSpace, matrix: MappingMatrix) -> None:
        if space.id in self._spaces:
            raise RegistryError(f"label space {space.id!r} already registered")
        if matrix.source != space.id:
            raise ValidationError(
                f"matrix source {matrix.source!r} does not match space {space.id!r}"
            )
        if matrix.rows.shape[0] != space.arity:
            raise ValidationError(
                f"matrix for {space.id!r} has {matrix.rows.shape[0]} rows, "
                f"space arity is {space.arity}"
            )
        self._spaces[space.id] = space
        self._matrices[space.id] = matrix

    def register_va_convention(self, convention_id: str, lo: float, hi: float) -> None:
        if convention_id in self._va:
            raise RegistryError(f"VA convention {convention_id!r} already registered")
        if not lo < hi:
            raise ValidationError(f"VA range [{lo}, {hi}] is empty")
        self._va[convention_id] = (float(lo), float(hi))

    # -- lookup -----------------------------------------------------------

    def space(self, space_id: str) -> LabelSpace:
        try:
            return self._spaces[space_id]
        except KeyError:
            raise RegistryError(f"unknown label space {space_id!r}") from None

    def has_space(self, space_id: str) -> bool:
        return space_id in self._spaces

    @property
    def space_ids(self) -> Tuple[str, ...]:
        return tuple(self._spaces)

    # -- mapping -----------------------------------------------------------

    def map_scores_unclamped(self, native: Sequence[float], space_id: str) -> np.ndarray:
        """Matrix product without the final clamp (linear; for analysis)."""
        space = self.space(space_id)
        vec = np.asarray(native, dtype=np.float64)
        if vec.shape != (space.arity,):
            raise ValidationError(
                f"native vector for {space_id!r} must have length {space.arity}, "
                f"got {vec.shape}"
            )
        if not np.isfinite(vec).all():
            raise ValidationError(f"native vector for {space_id!r} has non-finite entries")
        return vec @ self._matrices[space_id].rows

    def map_scores(self, native: Sequence[float], space_id: str) -> EmotionDistribution:
        """Map native scores to the common space, clamped into [0,1]."""
        return clamp_distribution(self.map_scores_unclamped(native, space_id).tolist())

    def map_va(self, native_va: Tuple[float, float], convention_id: str) -> VAPoint:
        """Affinely rescale (valence, arousal) from a registered range to [-1,1]."""
        try:
            lo, hi = self._va[convention_id]
        except KeyError:
            raise RegistryError(f"unknown VA convention {convention_id!r}") from None
        v, a = native_va
        if (lo, hi) == (-1.0, 1.0):  # identity convention stays bit-exact
            return VAPoint(v, a)
        span = hi - lo
        return VAPoint(
            valence=2.0 * (v - lo) / span - 1.0,
            arousal=2.0 * (a - lo) / span - 1.0,
        )


def load_registry_from_dict(config: Dict) -> LabelMapRegistry:
    target = config.get("target_labels")
    if tuple(target or ()) != EMOTION_NAMES:
        raise ValidationError(
            f"target_labels must be {list(EMOTION_NAMES)}, got {target}"
        )
    registry = LabelMapRegistry()
    for space_id, entry in config.get("spaces", {}).items():
        space = LabelSpace(id=space_id, labels=tuple(entry["labels"]))
        matrix = MappingMatrix(source=space_id, rows=np.asarray(entry["rows"]))
        registry.register(space, matrix)
    for convention_id, (lo, hi) in config.get("va_conventions", {}).items():
        registry.register_va_convention(convention_id, lo, hi)
    return registry


def load_registry(path: str) -> LabelMapRegistry:
    """Load label spaces and VA conventions from a YAML config file."""
    with open(path, "r", encoding="utf-8") as fh:
        return load_registry_from_dict(yaml.safe_load(fh))


def default_registry() -> LabelMapRegistry:
    """Registry built from the packaged label_maps.yaml."""
    data = resources.files("emolysis.data").joinpath("label_maps.yaml").read_text()
    return load_registry_from_dict(yaml.safe_load(data))
