"""Holds/Fails results shared by the checking modules."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import scalars as sc


@dataclass(frozen=True)
class Check:
    """Outcome of a property check.

    ``witness`` is a tuple of elements (or ``None`` entries) that reproduces
    the defect when the identity named by ``label`` is re-evaluated on it.
    """

    holds: bool
    label: str = ""
    witness: tuple = ()
    detail: str = ""
    extra: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds

    @classmethod
    def ok(cls, label: str, detail: str = "", **extra) -> "Check":
        return cls(True, label, (), detail, extra)

    @classmethod
    def fail(cls, label: str, witness=(), detail: str = "", **extra) -> "Check":
        return cls(False, label, tuple(witness), detail, extra)

    @property
    def status(self) -> str:
        return "Holds" if self.holds else "Fails"

    def to_dict(self) -> dict:
        out = {"status": self.status}
        if not self.holds:
            out["witness"] = [element_to_json(w) for w in self.witness]
        if self.detail:
            out["detail"] = self.detail
        for k, v in self.extra.items():
            out[k] = to_jsonable(v)
        return out


def element_to_json(x):
    if x is None:
        return None
    return [sc.format_scalar(v) for v in np.asarray(x).ravel()]


def to_jsonable(v):
    if isinstance(v, np.ndarray):
        if v.ndim == 1:
            return element_to_json(v)
        return [to_jsonable(r) for r in v]
    if isinstance(v, (list, tuple)):
        return [to_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): to_jsonable(x) for k, x in v.items()}
    if isinstance(v, (bool, str)) or v is None:
        return v
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return int(v)
    return sc.format_scalar(v)
