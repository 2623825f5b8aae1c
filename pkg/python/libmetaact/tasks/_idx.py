"""IDX image and label files"""
import pathlib
from typing import Optional, Union

import numpy as np

from libmetaact.metaglobal import ConfigError, DatasetError
from libmetaact.tasks._Dataset import Dataset

IMAGES_MAGIC = 0x0803
LABELS_MAGIC = 0x0801

CropSpec = Union[int, tuple]
"""Pixels removed from the border: an int for every side, or
``(top, bottom, left, right)``"""


def read_idx(path: Union[str, pathlib.Path], magic: int) -> np.ndarray:
    """Read an unsigned-byte IDX file

    Parameters
    ----------
    path: Union[str, pathlib.Path]
        The file.
    magic: int
        Expected magic number, 0x0803 for images or 0x0801 for labels.

    Returns
    -------
    data: np.ndarray[np.uint8]
        Array with the dimensions given in the header.
    """
    raw = pathlib.Path(path).read_bytes()
    if len(raw) < 4:
        raise DatasetError(f"Error in read_idx: truncated header in {path}")
    found = int.from_bytes(raw[:4], "big")
    if found != magic:
        raise DatasetError(
            f"Error in read_idx: bad magic number {found:#06x} in {path}, "
            f"expected {magic:#06x}"
        )
    ndim = magic & 0xFF
    header = 4 + 4 * ndim
    if len(raw) < header:
        raise DatasetError(f"Error in read_idx: truncated header in {path}")
    dims = tuple(int(d) for d in np.frombuffer(raw, dtype=">u4", count=ndim, offset=4))
    size = int(np.prod(dims))
    if len(raw) - header < size:
        raise DatasetError(
            f"Error in read_idx: truncated data in {path}, expected {size} bytes, "
            f"found {len(raw) - header}"
        )
    return np.frombuffer(raw, dtype=np.uint8, count=size, offset=header).reshape(dims)


def write_idx(path: Union[str, pathlib.Path], data: np.ndarray) -> pathlib.Path:
    """Write an unsigned-byte array as an IDX file (3d images or 1d labels)"""
    data = np.asarray(data, dtype=np.uint8)
    if data.ndim not in (1, 3):
        raise ConfigError("Error in write_idx: data must be 1d (labels) or 3d (images)")
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = (0x0800 | data.ndim).to_bytes(4, "big")
    header += np.array(data.shape, dtype=">u4").tobytes()
    path.write_bytes(header + data.tobytes())
    return path


def _crop_margins(crop: CropSpec) -> tuple[int, int, int, int]:
    if isinstance(crop, int):
        return (crop, crop, crop, crop)
    margins = tuple(int(c) for c in crop)
    if len(margins) != 4:
        raise ConfigError("Error in load_idx_images: crop must be an int or 4 values")
    return margins


def load_idx_images(
    images_path: Union[str, pathlib.Path],
    labels_path: Union[str, pathlib.Path],
    crop: CropSpec = 0,
    class_count: Optional[int] = None,
) -> Dataset:
    """Load IDX images and labels as a classification dataset

    Pixels are scaled to [0, 1], `crop` pixels are removed from the borders,
    and each image is flattened row-major.

    Parameters
    ----------
    images_path: Union[str, pathlib.Path]
        IDX file of images, shape ``(n, rows, cols)``.
    labels_path: Union[str, pathlib.Path]
        IDX file of ``n`` labels.
    crop: CropSpec = 0
        Border pixels to remove, e.g. 5 for MNIST or ``(0, 0, 8, 8)`` for SVHN.
    class_count: Optional[int] = None
        Number of classes. Default is ``max(label) + 1``.
    """
    images = read_idx(images_path, IMAGES_MAGIC)
    labels = read_idx(labels_path, LABELS_MAGIC).astype(np.int64)
    if labels.shape[0] != images.shape[0]:
        raise DatasetError(
            f"Error in load_idx_images: {labels.shape[0]} labels for "
            f"{images.shape[0]} images"
        )
    top, bottom, left, right = _crop_margins(crop)
    n, rows, cols = images.shape
    if top + bottom >= rows or left + right >= cols:
        raise ConfigError("Error in load_idx_images: crop removes the whole image")
    cropped = images[:, top : rows - bottom, left : cols - right]
    X = cropped.reshape(n, -1).astype(np.float64) / 255.0
    if class_count is None:
        class_count = int(labels.max()) + 1 if n else 0
    return Dataset(
        X=X,
        y=labels,
        kind="classification",
        class_count=class_count,
        metadata={
            "source": "idx_images",
            "images": str(images_path),
            "labels": str(labels_path),
            "crop": [top, bottom, left, right],
            "image_shape": list(cropped.shape[1:]),
        },
    )
