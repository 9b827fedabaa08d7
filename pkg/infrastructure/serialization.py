"""JSON encoding of states and channels

State document::

    {"dims": [2, 2], "ordering": "SX", "matrix": [[re, im], ...]}

with ``matrix`` listing the entries row-major. A channel document is
``{"dim": 2, "label": "...", "operators": [<matrix>, ...]}``. Floats are
written in shortest round-trip form, so a dump/load cycle is bit-exact.
"""
import json
from pathlib import Path
from typing import List, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from domain.enums import Ordering
from domain.errors import FileFormatError
from domain.tolerances import TOLERANCES, Tolerances
from domain.value_objects import DensityMatrix, KrausChannel

Entry = List[float]


def parse_ordering(value: Union[str, Ordering]) -> Ordering:
    """Accepts the enum value ("S⊗X") or its name ("SX")"""
    if isinstance(value, Ordering):
        return value
    try:
        return Ordering[value]
    except KeyError:
        return Ordering(value)


def _encode(mat: np.ndarray) -> List[Entry]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(mat).reshape(-1)]


def _decode(entries: List[Entry], dim: int) -> np.ndarray:
    flat = np.array([complex(re, im) for re, im in entries], dtype=np.complex128)
    return flat.reshape(dim, dim)


def _check_entries(entries: List[Entry], expected: int, what: str) -> None:
    if len(entries) != expected:
        raise ValueError(f"{what} has {len(entries)} entries, expected {expected}")
    if any(len(e) != 2 for e in entries):
        raise ValueError(f"{what} entries must be [re, im] pairs")


class StatePayload(BaseModel):
    dims: List[int] = Field(min_length=1, max_length=2)
    ordering: Ordering = Ordering.SX
    matrix: List[Entry]

    @field_validator("ordering", mode="before")
    @classmethod
    def _parse_ordering(cls, v):
        return parse_ordering(v)

    @model_validator(mode="after")
    def _check_shape(self) -> "StatePayload":
        if any(d < 1 for d in self.dims):
            raise ValueError("dims must be positive")
        d = int(np.prod(self.dims))
        _check_entries(self.matrix, d * d, "matrix")
        return self

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))


class ChannelPayload(BaseModel):
    dim: int = Field(ge=1)
    label: str = "channel"
    operators: List[List[Entry]] = Field(min_length=1)

    @model_validator(mode="after")
    def _check_shape(self) -> "ChannelPayload":
        for j, op in enumerate(self.operators):
            _check_entries(op, self.dim * self.dim, f"operator {j}")
        return self


# ==================== STATES ====================
def state_to_payload(state: DensityMatrix) -> StatePayload:
    return StatePayload(dims=list(state.dims), ordering=state.ordering, matrix=_encode(state.mat))


def state_from_payload(payload: StatePayload, validate: bool = True, tolerances: Tolerances = TOLERANCES) -> DensityMatrix:
    """``validate=False`` keeps invalid matrices so they can be reported"""
    mat = _decode(payload.matrix, payload.dim)
    if validate:
        return DensityMatrix.create(mat, payload.dims, payload.ordering, tolerances, context="state file")
    return DensityMatrix.from_matrix(mat, payload.dims, payload.ordering)


def dump_state(state: DensityMatrix) -> str:
    payload = state_to_payload(state).model_dump(mode="json")
    payload["ordering"] = state.ordering.name
    return json.dumps(payload, indent=2) + "\n"


def load_state_payload(text: str) -> StatePayload:
    try:
        return StatePayload.model_validate_json(text)
    except ValidationError as exc:
        raise FileFormatError(f"malformed state document: {exc}") from exc


def load_state(text: str, validate: bool = True, tolerances: Tolerances = TOLERANCES) -> DensityMatrix:
    return state_from_payload(load_state_payload(text), validate, tolerances)


def read_state_file(path: Union[str, Path], validate: bool = True, tolerances: Tolerances = TOLERANCES) -> DensityMatrix:
    return load_state(_read(path), validate, tolerances)


def write_state_file(state: DensityMatrix, path: Union[str, Path]) -> None:
    Path(path).write_text(dump_state(state), encoding="utf-8")


# ==================== CHANNELS ====================
def channel_to_payload(channel: KrausChannel) -> ChannelPayload:
    return ChannelPayload(dim=channel.dim, label=channel.label, operators=[_encode(k) for k in channel.operators])


def channel_from_payload(payload: ChannelPayload, tolerances: Tolerances = TOLERANCES) -> KrausChannel:
    operators = [_decode(op, payload.dim) for op in payload.operators]
    return KrausChannel.create(operators, label=payload.label, tolerances=tolerances)


def dump_channel(channel: KrausChannel) -> str:
    return json.dumps(channel_to_payload(channel).model_dump(mode="json"), indent=2) + "\n"


def load_channel(text: str, tolerances: Tolerances = TOLERANCES) -> KrausChannel:
    try:
        payload = ChannelPayload.model_validate_json(text)
    except ValidationError as exc:
        raise FileFormatError(f"malformed channel document: {exc}") from exc
    return channel_from_payload(payload, tolerances)


def read_channel_file(path: Union[str, Path], tolerances: Tolerances = TOLERANCES) -> KrausChannel:
    return load_channel(_read(path), tolerances)


def _read(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from exc
