"""Global numerical tolerances.

All tolerance lookups go through :func:`get_config`, so a single
:func:`config_context` block changes every threshold used downstream.
"""

from __future__ import annotations

import contextvars
from contextlib import contextmanager
from dataclasses import asdict, dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    unit_tol: float = 1e-9
    herm_tol: float = 1e-9
    psd_tol: float = 1e-9
    trace_tol: float = 1e-9
    recon_tol: float = 1e-8
    point_eq_tol: float = 1e-9
    purity_tol: float = 1e-9
    weight_tol: float = 1e-9
    weight_floor: float = 1e-15

    def as_dict(self) -> dict[str, float]:
        return asdict(self)

    @classmethod
    def names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))


_CONFIG: contextvars.ContextVar[Tolerances] = contextvars.ContextVar(
    "mbred_tolerances", default=Tolerances()
)


def get_config() -> Tolerances:
    """Return the tolerances active in the current context."""
    return _CONFIG.get()


def set_config(**overrides: float) -> Tolerances:
    """Replace tolerances for the current context and return the new record."""
    new = _apply(get_config(), overrides)
    _CONFIG.set(new)
    return new


@contextmanager
def config_context(**overrides: float):
    """Temporarily override tolerances.

    >>> with config_context(recon_tol=1e-6):
    ...     get_config().recon_tol
    1e-06
    """
    token = _CONFIG.set(_apply(get_config(), overrides))
    try:
        yield get_config()
    finally:
        _CONFIG.reset(token)


def _apply(base: Tolerances, overrides: dict[str, float]) -> Tolerances:
    unknown = set(overrides) - set(Tolerances.names())
    if unknown:
        raise KeyError(f"unknown tolerance(s): {sorted(unknown)}")
    for name, value in overrides.items():
        if not value >= 0:
            raise ValueError(f"tolerance {name} must be non-negative, got {value!r}")
    return replace(base, **{k: float(v) for k, v in overrides.items()})
