"""
Tuple files

JSON files of the form {"n": int, "matrices": [[[float]]], "metadata": {...}}
with row-major matrices. Floats are written in their shortest round-trip
decimal form (at most 17 significant digits), so a saved tuple loads back
bit for bit.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
from pydantic import ValidationError

from mixdisc.core.tuples import MatrixTuple
from mixdisc.exceptions import ParseError, StorageError
from mixdisc.schemas import TupleFile

logger = logging.getLogger(__name__)

SYMMETRY_TOLERANCE = 1e-9

PathLike = Union[str, Path]


def to_tuple_file(t: MatrixTuple, metadata: Optional[Dict[str, Any]] = None) -> TupleFile:
    return TupleFile(
        n=t.n,
        matrices=[m.entries.tolist() for m in t],
        metadata=dict(metadata or {}),
    )


def dumps(t: MatrixTuple, metadata: Optional[Dict[str, Any]] = None) -> str:
    return to_tuple_file(t, metadata).model_dump_json(indent=2) + "\n"


def loads(text: str) -> Tuple[MatrixTuple, TupleFile]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e}") from e
    try:
        tuple_file = TupleFile.model_validate(payload)
    except ValidationError as e:
        raise ParseError(f"invalid tuple file: {e}") from e

    arrays = []
    for index, matrix in enumerate(tuple_file.matrices):
        a = np.array(matrix, dtype=float)
        if not np.all(np.isfinite(a)):
            raise ParseError(f"matrix {index} has non-finite entries")
        asymmetry = float(np.max(np.abs(a - a.T)))
        if asymmetry > SYMMETRY_TOLERANCE:
            logger.warning(f"Matrix {index} is asymmetric by {asymmetry:.3e}; symmetrizing")
        arrays.append(a)
    return MatrixTuple.from_arrays(arrays), tuple_file


def save_tuple(t: MatrixTuple, path: PathLike, metadata: Optional[Dict[str, Any]] = None) -> None:
    try:
        Path(path).write_text(dumps(t, metadata))
    except OSError as e:
        raise StorageError(f"could not write {path}: {e}") from e
    logger.info(f"Wrote {t.n}-tuple to {path}")


def load_tuple(path: PathLike) -> Tuple[MatrixTuple, TupleFile]:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise StorageError(f"could not read {path}: {e}") from e
    return loads(text)
