"""Shared tolerances, seeding and error types."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

import numpy as np

DEFAULT_SEED_ENV = "FLEXCHECK_SEED"


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used across the pipeline.

    All cutoffs are relative: ``rank`` against the largest singular value,
    ``cluster`` against the largest operator norm, the rest against the
    natural scale of the quantity they gate.
    """

    rank: float = 1e-9          # singular values below rank * sigma_max count as zero
    cluster: float = 1e-7       # joint eigenvalues closer than this merge
    closure: float = 1e-9       # bracket-closure residual for subalgebras
    membership: float = 1e-8    # group defining-relation residual
    relator: float = 1e-8       # surface relator residual
    cocycle: float = 1e-8       # relator-map residual for cocycles
    gram: float = 1e-6          # Gram eigenvalue separation from zero
    seed: int = 0

    def with_seed(self, seed: int) -> "Tolerances":
        return replace(self, seed=seed)

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


DEFAULT = Tolerances()


def seed_from_env(default: int = 0) -> int:
    raw = os.environ.get(DEFAULT_SEED_ENV)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"{DEFAULT_SEED_ENV} must be an integer, got {raw!r}")


class FlexcheckError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(FlexcheckError):
    """Malformed problem description or CLI input."""


class NumericalAbort(FlexcheckError):
    """A computation could not be certified at the configured tolerances."""


class ExcludedFamilyError(FlexcheckError):
    """Octonionic / exceptional constructions are documented but not computed."""
