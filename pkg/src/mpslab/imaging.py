"""Grey-image compression by bond truncation.

Pixels of a 2**n x 2**n image are addressed telescopically by quadrant:
digit q_1 names the quadrant of the full frame, q_2 the sub-quadrant
inside it, and so on for n levels. Labels are fixed as 1 = top-left,
2 = top-right, 3 = bottom-left, 4 = bottom-right. Reading the digits as
a big-endian base-4 string turns the image into a local-dimension-4
state whose amplitudes are the grey levels; capping the bond dimension
of its MPS is the lossy codec.

Non-square or non-power-of-two inputs are zero-padded up front and
cropped on the way back; the pre-padding size rides along in the report.
"""

import json
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import mps as mpslib
from .errors import InvalidInput
from .states import DenseState

MAX_GREY = 255


@dataclass
class GrayImage:
    """Grey raster plus the pre-padding dimensions it came from."""

    pixels: np.ndarray  # (height, width), integer grey levels
    max_value: int = MAX_GREY
    orig_width: Optional[int] = None
    orig_height: Optional[int] = None

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.size == 0:
            raise InvalidInput(f"pixels must be a non-empty 2-D array, got {px.shape}")
        if px.min() < 0 or px.max() > self.max_value:
            raise InvalidInput(f"grey levels must lie in 0..{self.max_value}")
        self.pixels = px.astype(np.int64)
        if self.orig_width is None:
            self.orig_width = self.width
        if self.orig_height is None:
            self.orig_height = self.height

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass
class CodecReport:
    chi: int
    levels: int
    params_stored: int
    params_raw: int
    truncation_error: float
    psnr: float  # dB; math.inf marks an exact reconstruction
    orig_width: int
    orig_height: int

    @property
    def lossless(self) -> bool:
        return math.isinf(self.psnr)

    def to_json(self) -> str:
        doc = asdict(self)
        psnr_db = doc.pop("psnr")
        doc["psnr_db"] = None if self.lossless else psnr_db
        doc["lossless"] = self.lossless
        return json.dumps(doc, indent=2, sort_keys=True)


def quad_levels(size: int) -> int:
    levels = max(1, (size - 1).bit_length())
    return levels


def quad_index(row: int, col: int, levels: int) -> str:
    """Quadrant digits q_1..q_n in {1,2,3,4} locating one pixel."""
    size = 2**levels
    if not (0 <= row < size and 0 <= col < size):
        raise InvalidInput(f"pixel ({row}, {col}) outside a {size} x {size} frame")
    digits = []
    for level in range(levels - 1, -1, -1):
        q = 1 + 2 * ((row >> level) & 1) + ((col >> level) & 1)
        digits.append(str(q))
    return "".join(digits)


def quad_to_rowcol(digits: str) -> tuple[int, int]:
    """Inverse of quad_index."""
    row = col = 0
    for ch in digits:
        if ch not in "1234":
            raise InvalidInput(f"quadrant digit {ch!r} outside 1..4")
        q = int(ch) - 1
        row = (row << 1) | (q >> 1)
        col = (col << 1) | (q & 1)
    return row, col


def _flat_indices(levels: int) -> np.ndarray:
    """Flat state index of every pixel, as a (2**levels, 2**levels) table."""
    size = 2**levels
    rows, cols = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
    flat = np.zeros_like(rows)
    for level in range(levels):
        flat |= ((rows >> level) & 1) << (2 * level + 1)
        flat |= ((cols >> level) & 1) << (2 * level)
    return flat


def pad_image(img: GrayImage) -> GrayImage:
    """Zero-pad to the smallest 2**n square holding the image."""
    levels = quad_levels(max(img.width, img.height))
    size = 2**levels
    if img.width == size and img.height == size:
        return img
    px = np.zeros((size, size), dtype=np.int64)
    px[: img.height, : img.width] = img.pixels
    return GrayImage(px, img.max_value, orig_width=img.width, orig_height=img.height)


def image_to_state(img: GrayImage) -> tuple[DenseState, float]:
    """Quadrant-addressed amplitudes, normalized; returns (state, norm)."""
    img = pad_image(img)
    levels = quad_levels(img.width)
    amps = np.zeros(4**levels, dtype=np.complex128)
    amps[_flat_indices(levels)] = img.pixels
    norm = float(np.linalg.norm(amps))
    if norm == 0.0:
        raise InvalidInput("all-black image maps to the zero vector")
    return DenseState(levels, 4, amps / norm), norm


def state_to_image(
    state: DenseState,
    norm: float,
    orig_width: int,
    orig_height: int,
    max_value: int = MAX_GREY,
) -> GrayImage:
    """Round amplitudes back to clamped grey levels and crop the padding."""
    if state.d != 4:
        raise InvalidInput(f"image states need local dimension 4, got {state.d}")
    levels = state.n
    grid = (state.amplitudes.real * norm)[_flat_indices(levels)]
    px = np.clip(np.rint(grid), 0, max_value).astype(np.int64)
    return GrayImage(
        px[:orig_height, :orig_width], max_value,
        orig_width=orig_width, orig_height=orig_height,
    )


def psnr(a: GrayImage, b: GrayImage, max_value: int = MAX_GREY) -> float:
    if a.pixels.shape != b.pixels.shape:
        raise InvalidInput("PSNR needs images of identical shape")
    mse = float(np.mean((a.pixels - b.pixels) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(max_value**2 / mse)


def compress(img: GrayImage, chi: int) -> tuple[GrayImage, CodecReport]:
    """state -> MPS -> cap bonds at chi -> state -> image, with metrics."""
    if chi < 1:
        raise InvalidInput(f"chi must be >= 1, got {chi}")
    state, norm = image_to_state(img)
    exact = mpslib.to_mps(state)
    truncated, err = mpslib.truncate(exact, chi)
    rebuilt = mpslib.from_mps(truncated)
    out = state_to_image(rebuilt, norm, img.width, img.height, img.max_value)
    report = CodecReport(
        chi=chi,
        levels=state.n,
        params_stored=truncated.parameter_count(),
        params_raw=4**state.n,
        truncation_error=err,
        psnr=psnr(img, out, img.max_value),
        orig_width=img.orig_width,
        orig_height=img.orig_height,
    )
    return out, report


# -- PGM reader/writer ----------------------------------------------------------

def read_pgm(path) -> GrayImage:
    """Binary (P5) or ASCII (P2) PGM with max grey value up to 255."""
    with open(path, "rb") as fh:
        data = fh.read()

    tokens = []
    pos = 0
    while len(tokens) < 4 and pos < len(data):
        if data[pos : pos + 1].isspace():
            pos += 1
        elif data[pos : pos + 1] == b"#":
            nl = data.find(b"\n", pos)
            pos = len(data) if nl < 0 else nl + 1
        else:
            end = pos
            while end < len(data) and not data[end : end + 1].isspace():
                end += 1
            tokens.append(data[pos:end])
            pos = end
    if len(tokens) < 4:
        raise InvalidInput(f"{path}: truncated PGM header")
    magic = tokens[0]
    if magic not in (b"P2", b"P5"):
        raise InvalidInput(f"{path}: not a PGM file (magic {magic!r})")
    try:
        width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    except ValueError as exc:
        raise InvalidInput(f"{path}: malformed PGM header") from exc
    if width < 1 or height < 1 or not 0 < maxval <= MAX_GREY:
        raise InvalidInput(f"{path}: unsupported PGM geometry or depth")

    if magic == b"P5":
        pos += 1  # single whitespace byte after maxval
        body = data[pos : pos + width * height]
        if len(body) != width * height:
            raise InvalidInput(f"{path}: expected {width * height} pixel bytes")
        px = np.frombuffer(body, dtype=np.uint8).astype(np.int64)
    else:
        try:
            values = [int(tok) for tok in data[pos:].split()]
        except ValueError as exc:
            raise InvalidInput(f"{path}: non-numeric ASCII pixel data") from exc
        if len(values) != width * height:
            raise InvalidInput(f"{path}: expected {width * height} pixel values")
        px = np.asarray(values, dtype=np.int64)
    if px.max(initial=0) > maxval:
        raise InvalidInput(f"{path}: pixel exceeds declared max value {maxval}")
    return GrayImage(px.reshape(height, width), max_value=maxval)


def write_pgm(img: GrayImage, path, binary: bool = True):
    header = f"{'P5' if binary else 'P2'}\n{img.width} {img.height}\n{img.max_value}\n"
    if binary:
        with open(path, "wb") as fh:
            fh.write(header.encode("ascii"))
            fh.write(img.pixels.astype(np.uint8).tobytes())
    else:
        with open(path, "w") as fh:
            fh.write(header)
            for row in img.pixels:
                fh.write(" ".join(str(int(v)) for v in row) + "\n")
