"""Height-field geometry of the gel surface: clipping, gradients, normals.

Grid convention: row-major arrays indexed ``values[row, col]``, origin at the
top-left pixel, x rightward (columns), y downward (rows), z toward the
internal camera. Heights are penetration depths in meters measured from the
undeformed rest surface (0 = no contact).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import uniform_filter

STSD_MAGIC = b"STSD"
_STSD_HEADER = struct.Struct("<4sIIf")

# Relative gap below which the two smallest covariance eigenvalues count as
# tied and the z-preferring tie-break kicks in.
_EIG_TIE_RTOL = 1e-10


@dataclass(frozen=True)
class HeightField:
    """Gel surface z = f(x, y) on a regular pixel grid, in meters."""

    width: int
    height: int
    pixel_pitch: float
    values: np.ndarray

    def __post_init__(self):
        if self.width < 3 or self.height < 3:
            raise ValueError(
                f"height field must be at least 3x3, got {self.width}x{self.height}"
            )
        if self.pixel_pitch <= 0:
            raise ValueError(f"pixel_pitch must be positive, got {self.pixel_pitch}")
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (self.height, self.width):
            raise ValueError(
                f"values shape {values.shape} does not match "
                f"(height, width)=({self.height}, {self.width})"
            )
        _reject_nonfinite(values)
        if np.any(values < 0):
            idx = np.argwhere(values < 0)[0]
            raise ValueError(f"negative height at pixel (row={idx[0]}, col={idx[1]})")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, values: np.ndarray, pixel_pitch: float) -> "HeightField":
        values = np.asarray(values, dtype=np.float64)
        return cls(values.shape[1], values.shape[0], pixel_pitch, values)


@dataclass(frozen=True)
class GradientField:
    """Dimensionless surface slopes df/dx, df/dy on the height-field grid."""

    dx: np.ndarray
    dy: np.ndarray


def _reject_nonfinite(values: np.ndarray) -> None:
    bad = ~np.isfinite(values)
    if np.any(bad):
        idx = np.argwhere(bad)[0]
        raise ValueError(
            f"non-finite depth value at pixel (row={idx[0]}, col={idx[1]}): "
            f"{values[idx[0], idx[1]]}"
        )


def clip_depth(raw_depth: np.ndarray, gel_thickness: float, pixel_pitch: float) -> HeightField:
    """Clip a raw penetration-depth grid to the gel thickness.

    Values beyond the gel thickness saturate at the thickness; everything else
    passes through unchanged. Idempotent.
    """
    if gel_thickness <= 0:
        raise ValueError(f"gel_thickness must be positive, got {gel_thickness}")
    raw = np.asarray(raw_depth, dtype=np.float64)
    _reject_nonfinite(raw)
    if np.any(raw < 0):
        idx = np.argwhere(raw < 0)[0]
        raise ValueError(f"negative depth at pixel (row={idx[0]}, col={idx[1]})")
    return HeightField.from_values(np.minimum(raw, gel_thickness), pixel_pitch)


def gradients(hf: HeightField) -> GradientField:
    """Finite-difference slopes: central in the interior, one-sided at borders."""
    dy, dx = np.gradient(hf.values, hf.pixel_pitch)
    return GradientField(dx=dx, dy=dy)


def _window_moments(grid: np.ndarray, size: int) -> np.ndarray:
    # Clamp-to-edge replication == scipy's "nearest" border mode.
    return uniform_filter(grid, size=size, mode="nearest")


def normals_covariance(hf: HeightField, radius: int = 1) -> np.ndarray:
    """Per-pixel unit normals from covariance analysis of window neighborhoods.

    For every pixel the 3D points (x*pitch, y*pitch, f) inside the
    (2*radius+1)^2 window are gathered (borders clamp to the edge), their
    covariance is formed, and the eigenvector of the smallest eigenvalue is
    returned, sign-fixed so the z component is >= 0. A tie between the two
    smallest eigenvalues is broken in favor of the candidate with the larger
    |z|; fully degenerate windows fall back to (0, 0, 1).

    Returns an (H, W, 3) array of unit vectors.
    """
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    if hf.width <= 2 * radius or hf.height <= 2 * radius:
        raise ValueError(
            f"field dimensions {hf.width}x{hf.height} must exceed 2*radius={2 * radius}"
        )
    size = 2 * radius + 1
    pitch = hf.pixel_pitch
    z = hf.values
    x = np.broadcast_to(np.arange(hf.width, dtype=np.float64) * pitch, z.shape)
    y = np.broadcast_to((np.arange(hf.height, dtype=np.float64) * pitch)[:, None], z.shape)

    mx = _window_moments(x, size)
    my = _window_moments(y, size)
    mz = _window_moments(z, size)
    cov = np.empty(z.shape + (3, 3), dtype=np.float64)
    cov[..., 0, 0] = _window_moments(x * x, size) - mx * mx
    cov[..., 1, 1] = _window_moments(y * y, size) - my * my
    cov[..., 2, 2] = _window_moments(z * z, size) - mz * mz
    cov[..., 0, 1] = cov[..., 1, 0] = _window_moments(x * y, size) - mx * my
    cov[..., 0, 2] = cov[..., 2, 0] = _window_moments(x * z, size) - mx * mz
    cov[..., 1, 2] = cov[..., 2, 1] = _window_moments(y * z, size) - my * mz

    return _smallest_eigenvectors(cov)


def _smallest_eigenvectors(cov: np.ndarray) -> np.ndarray:
    """Batched smallest-eigenvalue eigenvectors with z-preferring tie-break."""
    # Exact-zero z row means the window is height-constant: (0, 0, 1) is then
    # an exact eigenvector of the smallest eigenvalue (0). Short-circuiting it
    # keeps flat regions bit-reproducible instead of LAPACK-noise dependent.
    zflat = (cov[..., 2, 2] == 0) & (cov[..., 0, 2] == 0) & (cov[..., 1, 2] == 0)

    eigvals, eigvecs = np.linalg.eigh(cov)
    normals = eigvecs[..., :, 0]
    # Tie between the two smallest eigenvalues: prefer the larger |z|.
    scale = np.maximum(np.abs(eigvals[..., 2]), np.finfo(np.float64).tiny)
    tied = (eigvals[..., 1] - eigvals[..., 0]) <= _EIG_TIE_RTOL * scale
    alt = eigvecs[..., :, 1]
    swap = tied & (np.abs(alt[..., 2]) > np.abs(normals[..., 2]))
    normals = np.where(swap[..., None], alt, normals)
    # Degenerate window (all points identical): covariance ~ 0.
    degenerate = np.abs(eigvals).max(axis=-1) <= np.finfo(np.float64).tiny
    normals = np.where((zflat | degenerate)[..., None], np.array([0.0, 0.0, 1.0]), normals)

    normals = np.where(normals[..., 2:3] < 0, -normals, normals)
    norms = np.linalg.norm(normals, axis=-1, keepdims=True)
    return normals / norms


def write_stsd(path, values: np.ndarray, pixel_pitch: float) -> None:
    """Write a raw depth grid in the STSD binary format.

    16-byte little-endian header (magic "STSD", u32 width, u32 height,
    f32 pixel_pitch) followed by width*height little-endian f32 meters,
    row-major.
    """
    values = np.asarray(values, dtype=np.float64)
    header = _STSD_HEADER.pack(STSD_MAGIC, values.shape[1], values.shape[0], pixel_pitch)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(values.astype("<f4").tobytes())


def read_stsd(path) -> tuple[np.ndarray, float]:
    """Read an STSD file; returns (depth grid in meters, pixel_pitch)."""
    with open(path, "rb") as fh:
        header = fh.read(_STSD_HEADER.size)
        if len(header) < _STSD_HEADER.size:
            raise ValueError(f"{path}: truncated STSD header")
        magic, width, height, pitch = _STSD_HEADER.unpack(header)
        if magic != STSD_MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}, expected {STSD_MAGIC!r}")
        payload = fh.read(4 * width * height)
    if len(payload) != 4 * width * height:
        raise ValueError(f"{path}: truncated STSD payload")
    grid = np.frombuffer(payload, dtype="<f4").reshape(height, width).astype(np.float64)
    return grid, float(pitch)


def read_pgm16(path, meters_per_level: float) -> np.ndarray:
    """Read a 16-bit binary PGM (P5) depth image, scaled to meters per level."""
    with open(path, "rb") as fh:
        data = fh.read()
    fields: list[bytes] = []
    pos = 0
    while len(fields) < 4:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        fields.append(data[start:pos])
    if fields[0] != b"P5":
        raise ValueError(f"{path}: not a binary PGM (P5) file")
    width, height, maxval = int(fields[1]), int(fields[2]), int(fields[3])
    if maxval != 65535:
        raise ValueError(f"{path}: expected 16-bit PGM (maxval 65535), got {maxval}")
    pos += 1  # single whitespace after maxval
    payload = data[pos : pos + 2 * width * height]
    if len(payload) != 2 * width * height:
        raise ValueError(f"{path}: truncated PGM payload")
    levels = np.frombuffer(payload, dtype=">u2").reshape(height, width)
    return levels.astype(np.float64) * meters_per_level
