"""JSON and CSV output utilities."""

import dataclasses
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, TextIO, Union

import numpy as np
import pandas as pd

from .. import config


def to_jsonable(value: Any) -> Any:
    """Dataclasses, tuples and numpy scalars as plain JSON values; nan and inf become null."""
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name.rstrip("_"): to_jsonable(getattr(value, f.name))
                for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def format_float(value: float) -> str:
    """A finite float with 17 significant digits, kept readable as a float."""
    if not math.isfinite(value):
        raise ValueError(f"non-finite float {value!r} has no JSON form")
    text = config.FLOAT_FORMAT % value
    if not any(c in text for c in ".e"):
        text += ".0"
    return text


class FixedDigitsEncoder(json.JSONEncoder):
    """json encoder that writes every float with config.FLOAT_FORMAT."""

    def iterencode(self, o, _one_shot=False):
        markers = {} if self.check_circular else None
        encoder = json.encoder.encode_basestring_ascii if self.ensure_ascii \
            else json.encoder.encode_basestring
        indent = self.indent
        if indent is not None and not isinstance(indent, str):
            indent = " " * indent
        return json.encoder._make_iterencode(
            markers, self.default, encoder, indent, format_float,
            self.key_separator, self.item_separator, self.sort_keys,
            self.skipkeys, _one_shot,
        )(o, 0)


def dump_json(payload: Any, stream: TextIO) -> None:
    json.dump(to_jsonable(payload), stream, indent=2, cls=FixedDigitsEncoder)
    stream.write("\n")


def write_csv(frame: pd.DataFrame, target: Union[TextIO, Path, str],
              float_format: Optional[str] = None) -> None:
    """Write a result table with full double precision."""
    if isinstance(target, (str, Path)):
        Path(target).parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(target, index=False, float_format=float_format or config.FLOAT_FORMAT)
