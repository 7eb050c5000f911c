"""JSON encodings.

* complex matrix / vector: row-major nested lists of ``[re, im]`` pairs
* pure point: ``{"ket": [[re, im], ...], "phase_gauge": "arbitrary"}``
* measure: ``[{"point": ..., "weight": w}, ...]``; abstract sample points as strings
* POVM: list of effect matrices
* extension: ``{"points", "states", "target_dim", "adaptation_note"}``
"""

from __future__ import annotations

import numpy as np

from .exceptions import ValidationError
from .extensions import ClassicalExtension
from .fuzzy import Povm
from .measures import DiscreteMeasure
from .projective import PurePoint


def encode_complex(a) -> list:
    arr = np.asarray(a, dtype=complex)
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def decode_complex(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != 2:
        raise ValidationError("complex data must be nested [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def encode_point(P: PurePoint) -> dict:
    return {"ket": encode_complex(P.ket), "phase_gauge": "arbitrary"}


def decode_point(data: dict) -> PurePoint:
    return PurePoint(decode_complex(data["ket"]))


def encode_measure(mu: DiscreteMeasure) -> list:
    out = []
    for p, w in mu:
        point = encode_point(p) if isinstance(p, PurePoint) else str(p)
        out.append({"point": point, "weight": w})
    return out


def decode_measure(data: list) -> DiscreteMeasure:
    points = [decode_point(e["point"]) if isinstance(e["point"], dict) else str(e["point"]) for e in data]
    return DiscreteMeasure(points, [e["weight"] for e in data])


def encode_povm(F: Povm) -> list:
    return [encode_complex(E) for E in F.effects]


def decode_povm(data: list) -> Povm:
    return Povm(np.stack([decode_complex(E) for E in data]))


def encode_extension(ext: ClassicalExtension) -> dict:
    return {
        "points": [str(lab) for lab in ext.sample_points],
        "states": [encode_complex(ext.assigned_states[lab]) for lab in ext.sample_points],
        "target_dim": ext.target_dim,
        "adaptation_note": ext.adaptation_note,
    }


def decode_extension(data: dict) -> ClassicalExtension:
    labels = tuple(str(lab) for lab in data["points"])
    states = [decode_complex(s) for s in data["states"]]
    if len(states) != len(labels):
        raise ValidationError("points and states must have equal length")
    return ClassicalExtension(
        sample_points=labels,
        assigned_states=dict(zip(labels, states)),
        target_dim=int(data["target_dim"]),
        adaptation_note=data.get("adaptation_note", ""),
    )
