# Copyright Thermal Harvesting contributors. All Rights Reserved.
# SPDX-License-Identifier: Apache-2.0
"""
On-disk cache of propagator-generator eigendecompositions.

One file per CavityConfig, named by its content hash. Layout: 8-byte magic,
uint32 version, uint32 dimension, 32-byte SHA-256 key, then little-endian
float64 arrays (eigenvalues re/im, modes re/im, inverse modes re/im).
"""
import contextlib
import os
import struct
import tempfile
from pathlib import Path
from typing import Optional, Union

import numpy as np
import numpy.typing as npt

from harvest.cavity_model import CavityConfig
from harvest.powertools_logger import get_logger

LOG_LEVEL = os.getenv("log_level", "info")
logger = get_logger("generator_cache", LOG_LEVEL)

MAGIC = b"HVGEN\x00\x00\x00"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<8sII32s")
_FLOAT = np.dtype("<f8")

ComplexArray = npt.NDArray[np.complex128]
CachedDecomposition = tuple[ComplexArray, ComplexArray, ComplexArray]


class CacheFormatError(ValueError):
    pass


def encode(
    cfg: CavityConfig,
    eigenvalues: ComplexArray,
    modes: ComplexArray,
    inverse_modes: ComplexArray,
) -> bytes:
    dim = int(eigenvalues.shape[0])
    if modes.shape != (dim, dim) or inverse_modes.shape != (dim, dim):
        raise CacheFormatError(
            f"decomposition shapes {modes.shape}, {inverse_modes.shape} "
            f"do not match dimension {dim}"
        )
    key = bytes.fromhex(cfg.content_hash())
    parts = [_HEADER.pack(MAGIC, FORMAT_VERSION, dim, key)]
    for array in (eigenvalues, modes, inverse_modes):
        parts.append(np.ascontiguousarray(array.real, dtype=_FLOAT).tobytes())
        parts.append(np.ascontiguousarray(array.imag, dtype=_FLOAT).tobytes())
    return b"".join(parts)


def decode(cfg: CavityConfig, payload: bytes) -> CachedDecomposition:
    if len(payload) < _HEADER.size:
        raise CacheFormatError(f"truncated header ({len(payload)} bytes)")
    magic, version, dim, key = _HEADER.unpack_from(payload)
    if magic != MAGIC:
        raise CacheFormatError(f"bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise CacheFormatError(f"unsupported format version {version}")
    if key.hex() != cfg.content_hash():
        raise CacheFormatError("key does not match the requested configuration")
    if dim != cfg.layout.dimension:
        raise CacheFormatError(f"dimension {dim} does not match {cfg.layout.dimension}")

    expected = _HEADER.size + _FLOAT.itemsize * 2 * (dim + 2 * dim * dim)
    if len(payload) != expected:
        raise CacheFormatError(f"payload is {len(payload)} bytes, expected {expected}")

    body = np.frombuffer(payload, dtype=_FLOAT, offset=_HEADER.size)
    sizes = (dim, dim, dim * dim, dim * dim, dim * dim, dim * dim)
    chunks = np.split(body, np.cumsum(sizes)[:-1])
    eigenvalues = chunks[0] + 1j * chunks[1]
    modes = (chunks[2] + 1j * chunks[3]).reshape(dim, dim)
    inverse_modes = (chunks[4] + 1j * chunks[5]).reshape(dim, dim)
    return (
        np.asarray(eigenvalues, dtype=np.complex128),
        np.asarray(modes, dtype=np.complex128),
        np.asarray(inverse_modes, dtype=np.complex128),
    )


class GeneratorCache:
    def __init__(self, directory: Union[str, Path]):
        self.directory = Path(directory)

    def path_for(self, cfg: CavityConfig) -> Path:
        return self.directory / f"{cfg.content_hash()}.hvgen"

    def load(self, cfg: CavityConfig) -> Optional[CachedDecomposition]:
        path = self.path_for(cfg)
        try:
            payload = path.read_bytes()
        except (FileNotFoundError, NotADirectoryError):
            logger.debug("Generator cache miss", path=str(path))
            return None
        except OSError as e:
            logger.warning(
                "Could not read generator cache file", path=str(path), error=str(e)
            )
            return None

        try:
            decomposition = decode(cfg, payload)
        except CacheFormatError as e:
            logger.warning(
                "Ignoring corrupt generator cache file, it will be rebuilt",
                path=str(path),
                error=str(e),
            )
            return None
        logger.debug("Generator cache hit", path=str(path))
        return decomposition

    def store(
        self,
        cfg: CavityConfig,
        eigenvalues: ComplexArray,
        modes: ComplexArray,
        inverse_modes: ComplexArray,
    ) -> None:
        path = self.path_for(cfg)
        payload = encode(cfg, eigenvalues, modes, inverse_modes)
        temporary: Optional[str] = None
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            # concurrent writers race on os.replace, never on a partial file
            with tempfile.NamedTemporaryFile(
                dir=self.directory, suffix=".tmp", delete=False
            ) as handle:
                temporary = handle.name
                handle.write(payload)
            os.replace(temporary, path)
        except OSError as e:
            if temporary is not None:
                with contextlib.suppress(OSError):
                    Path(temporary).unlink(missing_ok=True)
            logger.warning(
                "Could not write generator cache file", path=str(path), error=str(e)
            )
