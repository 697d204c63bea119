"""
Byte encodings of generated values for external consumers.
"""
import sys
from contextlib import contextmanager
from enum import Enum
from typing import BinaryIO, Iterator, Optional

import numpy as np
import numpy.typing as npt

from cprng.utils.exceptions import OutputError

FIXED32_SCALE = 2.0 ** 32
FIXED32_MAX = 2 ** 32 - 1
RAW_DIGITS = 17


class OutputFormat(str, Enum):
    """Formats accepted by ``gen --format``."""

    RAW_F64 = "raw-f64"
    FIXED32 = "fixed32"
    CSV = "csv"


def to_fixed32(values: npt.ArrayLike) -> npt.NDArray[np.uint32]:
    """floor((x + 1) / 2 * 2^32), clamped to [0, 2^32 - 1]; -1 -> 0 and 1 -> 2^32 - 1."""
    x = np.asarray(values, dtype=np.float64)
    scaled = np.floor((x + 1.0) * 0.5 * FIXED32_SCALE)
    return np.clip(scaled, 0, FIXED32_MAX).astype(np.uint32)


def encode(values: npt.ArrayLike, fmt: OutputFormat) -> bytes:
    """
    Encode a block of values.

    raw-f64 is little-endian IEEE-754 doubles (8 bytes per value), fixed32
    little-endian unsigned 32-bit integers, csv one value per line with 17
    significant digits.
    """
    x = np.asarray(values, dtype=np.float64)
    if fmt is OutputFormat.RAW_F64:
        return x.astype("<f8").tobytes()
    if fmt is OutputFormat.FIXED32:
        return to_fixed32(x).astype("<u4").tobytes()
    if x.size == 0:
        return b""
    return ("\n".join(f"{v:.{RAW_DIGITS}g}" for v in x.tolist()) + "\n").encode("ascii")


def write_block(sink: BinaryIO, values: npt.ArrayLike, fmt: OutputFormat) -> int:
    """Write one encoded block; returns the number of values written."""
    data = encode(values, fmt)
    if data:
        sink.write(data)
    return int(np.asarray(values).size)


@contextmanager
def open_sink(path: Optional[str]) -> Iterator[BinaryIO]:
    """
    Binary sink for ``path``, or standard output when no path is given.

    Raises:
        OutputError: If the path cannot be opened for writing
    """
    if path is None:
        yield sys.stdout.buffer
        sys.stdout.buffer.flush()
        return
    try:
        handle = open(path, "wb")
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}") from e
    with handle:
        yield handle
