"""Detection / trajectory CSV files and binary PPM frames."""
from __future__ import annotations

import re
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .core import BoundingBox, Detection
from .errors import FormatError, NonMonotonicFrame, ParseError
from .metrics import TrajectorySet

TRAJECTORY_HEADER = "frame,track_id,x,y,w,h,state"
DETECTION_HEADER = "frame,x,y,w,h,score"
GT_HEADER = "frame,id,x,y,w,h"

_PPM_NAME = re.compile(r"^(\d+)\.ppm$")


def _is_header(fields) -> bool:
    try:
        float(fields[0])
    except ValueError:
        return True
    return False


def _rows(path):
    """Yield ``(line_number, fields)`` for non-blank lines, skipping a header."""
    text = Path(path).read_text()
    first = True
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split(",")]
        if first and _is_header(fields):
            first = False
            continue
        first = False
        yield lineno, fields


def _box(fields, lineno, path) -> BoundingBox:
    try:
        x, y, w, h = (float(v) for v in fields)
    except ValueError:
        raise ParseError(f"non-numeric box field in {fields}", lineno, path) from None
    if not (w > 0 and h > 0):
        raise ParseError(f"box width and height must be positive, got w={w}, h={h}", lineno, path)
    return BoundingBox(x, y, w, h)


def _frame_number(text, lineno, path) -> int:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"bad frame index {text!r}", lineno, path) from None
    if value != int(value) or value < 1:
        raise ParseError(f"frame index must be a positive integer, got {text!r}", lineno, path)
    return int(value)


def read_detections(path) -> dict[int, list[Detection]]:
    """Parse ``frame,x,y,w,h,score`` lines into ``{frame: [Detection, ...]}``."""
    out: dict[int, list[Detection]] = {}
    last = 0
    for lineno, fields in _rows(path):
        if len(fields) != 6:
            raise ParseError(f"expected 6 fields, got {len(fields)}", lineno, path)
        frame = _frame_number(fields[0], lineno, path)
        if frame < last:
            raise NonMonotonicFrame(f"frame {frame} follows frame {last}", lineno, path)
        last = frame
        box = _box(fields[1:5], lineno, path)
        try:
            score = float(fields[5])
        except ValueError:
            raise ParseError(f"bad score {fields[5]!r}", lineno, path) from None
        if not 0.0 <= score <= 1.0:
            raise ParseError(f"score must lie in [0, 1], got {score}", lineno, path)
        out.setdefault(frame, []).append(Detection(frame, box, score))
    return out


def read_trajectories(path) -> TrajectorySet:
    """Read ``frame,id,x,y,w,h[,...]`` rows (ground truth or tracker output)."""
    traj = TrajectorySet()
    for lineno, fields in _rows(path):
        if len(fields) < 6:
            raise ParseError(f"expected at least 6 fields, got {len(fields)}", lineno, path)
        frame = _frame_number(fields[0], lineno, path)
        try:
            tid = int(float(fields[1]))
        except ValueError:
            raise ParseError(f"bad track id {fields[1]!r}", lineno, path) from None
        try:
            traj.add(tid, frame, _box(fields[2:6], lineno, path))
        except ValueError as exc:
            raise ParseError(str(exc), lineno, path) from None
    return traj


def _fmt(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _write_lines(path, header, lines) -> None:
    path = Path(path)
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(header + "\n")
            for line in lines:
                fh.write(line + "\n")
    except OSError as exc:
        raise OSError(f"{path}: {exc.strerror or exc}") from exc


def write_trajectories(results, path) -> None:
    """Write tracker output as ``frame,track_id,x,y,w,h,state`` rows."""
    rows = []
    for res in results:
        for label, box, state in res.outputs:
            rows.append((res.frame, label, box, state))
    rows.sort(key=lambda r: (r[0], r[1]))
    _write_lines(
        path,
        TRAJECTORY_HEADER,
        (f"{f},{lab},{_fmt(b.x)},{_fmt(b.y)},{_fmt(b.w)},{_fmt(b.h)},{s}" for f, lab, b, s in rows),
    )


def write_detections(detections: Mapping[int, Iterable[Detection]], path) -> None:
    lines = []
    for frame in sorted(detections):
        for d in detections[frame]:
            b = d.box
            lines.append(f"{frame},{_fmt(b.x)},{_fmt(b.y)},{_fmt(b.w)},{_fmt(b.h)},{_fmt(d.score)}")
    _write_lines(path, DETECTION_HEADER, lines)


def write_ground_truth(gt: Mapping, path) -> None:
    rows = []
    for tid, boxes in gt.items():
        for frame, b in boxes.items():
            rows.append((frame, tid, b))
    rows.sort(key=lambda r: (r[0], r[1]))
    _write_lines(
        path,
        GT_HEADER,
        (f"{f},{t},{_fmt(b.x)},{_fmt(b.y)},{_fmt(b.w)},{_fmt(b.h)}" for f, t, b in rows),
    )


# -- PPM frames ---------------------------------------------------------------

def _ppm_tokens(data: bytes, count: int):
    """Read ``count`` whitespace-separated header tokens; return them and the data offset."""
    tokens, pos = [], 0
    while len(tokens) < count:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise FormatError("truncated PPM header")
        tokens.append(data[start:pos])
    # exactly one whitespace byte separates the header from the raster
    return tokens, pos + 1


def decode_ppm(data: bytes) -> np.ndarray:
    tokens, offset = _ppm_tokens(data, 4)
    if tokens[0] != b"P6":
        raise FormatError(f"not a binary PPM (magic {tokens[0]!r})")
    try:
        width, height, depth = (int(t) for t in tokens[1:])
    except ValueError:
        raise FormatError("non-numeric PPM header field") from None
    if depth != 255:
        raise FormatError(f"only 8-bit PPM supported, got max value {depth}")
    if width < 1 or height < 1:
        raise FormatError(f"bad PPM size {width}x{height}")
    raster = data[offset:offset + 3 * width * height]
    if len(raster) != 3 * width * height:
        raise FormatError("truncated PPM raster")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3).copy()


def read_ppm(path) -> np.ndarray:
    try:
        return decode_ppm(Path(path).read_bytes())
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None


def write_ppm(path, pixels: np.ndarray) -> None:
    pixels = np.ascontiguousarray(pixels, dtype=np.uint8)
    h, w = pixels.shape[:2]
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())


class FrameDirectory:
    """Frames stored as ``NNNNNN.ppm`` files, decoded on access.

    Indexable by position (``frames[0]``) and by frame number (``frames.get(1)``).
    """

    def __init__(self, paths: dict[int, Path]):
        self._paths = dict(sorted(paths.items()))
        self.numbers = list(self._paths)

    def __len__(self):
        return len(self._paths)

    def __getitem__(self, i):
        return read_ppm(self._paths[self.numbers[i]])

    def __iter__(self):
        for n in self.numbers:
            yield read_ppm(self._paths[n])

    def get(self, number, default=None):
        path = self._paths.get(number)
        return read_ppm(path) if path is not None else default

    def path(self, number) -> Path:
        return self._paths[number]


def read_frames(directory) -> FrameDirectory:
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"frame directory not found: {directory}")
    paths = {}
    for p in directory.iterdir():
        m = _PPM_NAME.match(p.name)
        if m:
            paths[int(m.group(1))] = p
    return FrameDirectory(paths)
