"""Descriptor index: batch extraction, in-memory layout, binary persistence.

The offline half of the engine: every dataset image is loaded, resized, and
fingerprinted, and the resulting (records, descriptor matrix) pair is stored
in a flat little-endian ``.thir`` file that round-trips bit-exactly.

File layout (all little-endian):

    magic   4s   = b"THIR"
    version u16  = 1
    flags   u16  = 0
    R       u16  curve resolution
    dim     u32  descriptor length (3R)
    resize_w u16 / resize_h u16
    range_policy u8   0 = per-image min/max, 1 = fixed 0-255
    entry_count  u32
    entries: id u32, label u8, magnification u16, path_len u16, path bytes
    matrix:  entry_count * dim float32 in entry order
"""

import io
import logging
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .betti import RANGE_FULL, RANGE_PER_IMAGE, BettiCurveSpec, descriptor
from .errors import DimensionMismatchError, IndexBuildError, IndexFormatError
from .ingest import DatasetRecord, label_name, load_image, resize

__all__ = [
    "Index",
    "IndexStats",
    "build_index",
    "save_index",
    "load_index",
    "stats",
]

log = logging.getLogger(__name__)

_MAGIC = b"THIR"
_VERSION = 1
_HEADER = struct.Struct("<4sHHHIHHBI")
_ENTRY_FIXED = struct.Struct("<IBHH")

_POLICY_CODES = {RANGE_PER_IMAGE: 0, RANGE_FULL: 1}
_POLICY_NAMES = {v: k for k, v in _POLICY_CODES.items()}


@dataclass
class Index:
    """Immutable collection of fingerprinted dataset entries.

    ``descriptors`` is an (n, 3R) float32 matrix aligned with ``records``;
    entry ids are dense 0..n-1 in row order.
    """

    spec: BettiCurveSpec
    resize_dims: tuple[int, int]  # (width, height)
    records: list[DatasetRecord]
    descriptors: np.ndarray

    def __len__(self) -> int:
        return len(self.records)

    @property
    def dim(self) -> int:
        return 3 * self.spec.resolution

    def __eq__(self, other) -> bool:
        if not isinstance(other, Index):
            return NotImplemented
        return (
            self.spec == other.spec
            and self.resize_dims == other.resize_dims
            and self.records == other.records
            and self.descriptors.dtype == other.descriptors.dtype
            and np.array_equal(self.descriptors, other.descriptors)
        )

    def metadata_csv(self) -> str:
        """Entry metadata as ``id,path,label,magnification`` CSV text."""
        lines = ["id,path,label,magnification"]
        for rec in self.records:
            lines.append(f"{rec.id},{rec.path},{label_name(rec.label)},{rec.magnification}")
        return "\n".join(lines) + "\n"


@dataclass
class IndexStats:
    total: int
    labels: dict[str, int]
    magnifications: dict[int, int]
    resolution: int
    dim: int
    resize_dims: tuple[int, int]
    range_policy: str
    skipped: list[str] = field(default_factory=list)


def _extract_one(record: DatasetRecord, spec: BettiCurveSpec, dims: tuple[int, int]):
    img = load_image(record.path)
    img = resize(img, dims[0], dims[1])
    return descriptor(img, spec).astype(np.float32)


def build_index(
    records: list[DatasetRecord],
    spec: BettiCurveSpec,
    resize_dims: tuple[int, int] = (240, 240),
    workers: int = 1,
    lenient: bool = False,
) -> Index:
    """Extract descriptors for all records and assemble an Index.

    Entries keep the record order and are renumbered to dense ids. The result
    depends only on the file bytes, spec, and resize dims, never on the
    worker count. In strict mode (default) any unreadable file aborts the
    build; in lenient mode failing files are skipped with a warning.
    """
    if not records:
        raise IndexBuildError("no records to index")
    workers = max(1, int(workers))

    def job(rec):
        try:
            return rec, _extract_one(rec, spec, resize_dims), None
        except Exception as exc:  # collected, re-raised by the caller in strict mode
            return rec, None, exc

    if workers == 1:
        results = [job(rec) for rec in records]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, records))

    kept_records: list[DatasetRecord] = []
    vectors: list[np.ndarray] = []
    for rec, vec, err in results:
        if err is not None:
            if not lenient:
                raise IndexBuildError(f"failed to extract {rec.path}: {err}") from err
            log.warning("skipping %s: %s", rec.path, err)
            continue
        kept_records.append(rec)
        vectors.append(vec)
    if not kept_records:
        raise IndexBuildError("every file failed extraction")

    renumbered = [
        DatasetRecord(id=i, path=r.path, label=r.label, magnification=r.magnification)
        for i, r in enumerate(kept_records)
    ]
    matrix = np.vstack(vectors).astype(np.float32)
    return Index(spec=spec, resize_dims=resize_dims, records=renumbered, descriptors=matrix)


def save_index(index: Index, path) -> None:
    """Write an index to ``path`` in the binary format above."""
    n = len(index.records)
    dim = index.dim
    if index.descriptors.shape != (n, dim):
        raise DimensionMismatchError(
            f"descriptor matrix {index.descriptors.shape} does not match {n} x {dim}"
        )
    buf = io.BytesIO()
    buf.write(
        _HEADER.pack(
            _MAGIC,
            _VERSION,
            0,
            index.spec.resolution,
            dim,
            index.resize_dims[0],
            index.resize_dims[1],
            _POLICY_CODES[index.spec.range_policy],
            n,
        )
    )
    for rec in index.records:
        raw = rec.path.encode("utf-8")
        buf.write(_ENTRY_FIXED.pack(rec.id, rec.label, rec.magnification, len(raw)))
        buf.write(raw)
    buf.write(np.ascontiguousarray(index.descriptors, dtype="<f4").tobytes())
    Path(path).write_bytes(buf.getvalue())


def load_index(path) -> Index:
    """Read an index file; inverse of :func:`save_index`."""
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise IndexFormatError(f"file too short for header ({len(data)} bytes)")
    magic, version, _flags, resolution, dim, rw, rh, policy, count = _HEADER.unpack_from(data, 0)
    if magic != _MAGIC:
        raise IndexFormatError(f"bad magic {magic!r}")
    if version != _VERSION:
        raise IndexFormatError(f"unsupported version {version}")
    if policy not in _POLICY_NAMES:
        raise IndexFormatError(f"unknown range policy code {policy}")
    if dim != 3 * resolution:
        raise DimensionMismatchError(f"dim {dim} does not equal 3 x resolution {resolution}")

    offset = _HEADER.size
    records = []
    for _ in range(count):
        if offset + _ENTRY_FIXED.size > len(data):
            raise IndexFormatError(f"truncated entry table at offset {offset}")
        rid, label, mag, path_len = _ENTRY_FIXED.unpack_from(data, offset)
        offset += _ENTRY_FIXED.size
        if offset + path_len > len(data):
            raise IndexFormatError(f"truncated path at offset {offset}")
        rec_path = data[offset : offset + path_len].decode("utf-8")
        offset += path_len
        records.append(DatasetRecord(id=rid, path=rec_path, label=label, magnification=mag))

    need = count * dim * 4
    if len(data) - offset < need:
        raise IndexFormatError(
            f"truncated descriptor block at offset {offset}: need {need} bytes, "
            f"have {len(data) - offset}"
        )
    matrix = np.frombuffer(data, dtype="<f4", count=count * dim, offset=offset)
    matrix = matrix.reshape(count, dim).copy()

    spec = BettiCurveSpec(resolution=resolution, range_policy=_POLICY_NAMES[policy])
    return Index(spec=spec, resize_dims=(rw, rh), records=records, descriptors=matrix)


def stats(index: Index) -> IndexStats:
    """Entry counts per label and magnification plus the index parameters."""
    labels: dict[str, int] = {}
    mags: dict[int, int] = {}
    for rec in index.records:
        name = label_name(rec.label)
        labels[name] = labels.get(name, 0) + 1
        mags[rec.magnification] = mags.get(rec.magnification, 0) + 1
    return IndexStats(
        total=len(index.records),
        labels=labels,
        magnifications=dict(sorted(mags.items())),
        resolution=index.spec.resolution,
        dim=index.dim,
        resize_dims=index.resize_dims,
        range_policy=index.spec.range_policy,
    )
