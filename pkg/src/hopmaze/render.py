"""Visual panels: colored digit sprites scattered on a black canvas.

Each displayed digit becomes one grayscale exemplar from a digit bank,
tinted with its meaning-bearing color, scaled by a uniform factor, and
placed uniformly at random so that sprite boxes never touch. Junction
hints render as white geometric glyphs. The result is a 128 x 128 x 3
float image in [0, 1].
"""

from __future__ import annotations

import numpy as np

from .core import Color, HintSymbol, PanelDescription

CANVAS_SIZE = 128
DIGIT_SIZE = 28
HINT_SIZE = 20
SCALE_RANGE = (0.75, 1.5)

_IDX_UBYTE = 0x08


def load_idx(path: str) -> np.ndarray:
    """Read an IDX-encoded unsigned-byte tensor; errors name byte offsets."""
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 4:
        raise ValueError(f"{path}: truncated magic at byte 0")
    if data[0] or data[1]:
        raise ValueError(f"{path}: bad magic {data[:4].hex()} at byte 0")
    if data[2] != _IDX_UBYTE:
        raise ValueError(f"{path}: unsupported type code {data[2]:#04x} at byte 2")
    ndim = data[3]
    if ndim == 0:
        raise ValueError(f"{path}: zero dimensions at byte 3")
    dims = []
    for i in range(ndim):
        off = 4 + 4 * i
        if len(data) < off + 4:
            raise ValueError(f"{path}: truncated dimension {i} at byte {off}")
        dims.append(int.from_bytes(data[off : off + 4], "big"))
    payload_at = 4 + 4 * ndim
    expected = int(np.prod(dims, dtype=np.int64))
    if len(data) - payload_at != expected:
        raise ValueError(
            f"{path}: expected {expected} data bytes at byte {payload_at}, "
            f"found {len(data) - payload_at}"
        )
    return np.frombuffer(data, dtype=np.uint8, offset=payload_at).reshape(dims).copy()


def write_idx(path: str, array: np.ndarray) -> None:
    """Write an unsigned-byte tensor in IDX encoding."""
    arr = np.ascontiguousarray(array, dtype=np.uint8)
    header = bytes([0, 0, _IDX_UBYTE, arr.ndim])
    header += b"".join(int(d).to_bytes(4, "big") for d in arr.shape)
    with open(path, "wb") as fh:
        fh.write(header + arr.tobytes())


class DigitBank:
    """Grayscale exemplars for digits 1-9 with a train/heldout split.

    Zero-labelled exemplars are dropped (no digit slot ever shows 0). Per
    digit, the first half of the exemplars in file order is the training
    pool and the rest the heldout pool.
    """

    def __init__(self, images: np.ndarray, labels: np.ndarray):
        images = np.asarray(images, dtype=np.uint8)
        labels = np.asarray(labels)
        if images.ndim != 3 or images.shape[1:] != (DIGIT_SIZE, DIGIT_SIZE):
            raise ValueError(f"images must be (n, {DIGIT_SIZE}, {DIGIT_SIZE}), got {images.shape}")
        if labels.shape != (images.shape[0],):
            raise ValueError("labels must be one per image")
        self._train: dict[int, np.ndarray] = {}
        self._heldout: dict[int, np.ndarray] = {}
        for digit in range(1, 10):
            idx = np.flatnonzero(labels == digit)
            if idx.size < 2:
                raise ValueError(f"need at least 2 exemplars of digit {digit}, found {idx.size}")
            half = idx.size // 2
            self._train[digit] = images[idx[:half]]
            self._heldout[digit] = images[idx[half:]]

    @classmethod
    def from_idx(cls, images_path: str, labels_path: str) -> DigitBank:
        return cls(load_idx(images_path), load_idx(labels_path))

    @classmethod
    def synthetic(cls, per_class: int = 8, seed: int = 0) -> DigitBank:
        """Stand-in bank of thick rectangular glyphs; stays connected under
        any downscaling the renderer applies, so it suits pipelines that
        count components."""
        rng = np.random.default_rng(seed)
        images = []
        labels = []
        for digit in range(1, 10):
            for _ in range(per_class):
                images.append(_synthetic_glyph(digit, rng))
                labels.append(digit)
        return cls(np.stack(images), np.array(labels))

    def pool_sizes(self) -> dict[int, tuple[int, int]]:
        return {d: (len(self._train[d]), len(self._heldout[d])) for d in range(1, 10)}

    def sample(self, digit: int, rng: np.random.Generator, heldout: bool = False) -> np.ndarray:
        if digit not in self._train:
            raise ValueError(f"no exemplars for digit {digit}")
        pool = self._heldout[digit] if heldout else self._train[digit]
        return pool[int(rng.integers(pool.shape[0]))]


def _synthetic_glyph(digit: int, rng: np.random.Generator) -> np.ndarray:
    w = 6 + digit
    h = 21 - digit // 2
    x0 = int(rng.integers(2, DIGIT_SIZE - w - 1))
    y0 = int(rng.integers(2, DIGIT_SIZE - h - 1))
    img = np.zeros((DIGIT_SIZE, DIGIT_SIZE), dtype=np.uint8)
    yy, xx = np.mgrid[0:h, 0:w]
    texture = 160 + 60 * np.sin(xx / 2.5 + digit) * np.cos(yy / 3.0)
    img[y0 : y0 + h, x0 : x0 + w] = np.clip(texture, 90, 255).astype(np.uint8)
    return img


def _polygon_mask(vertices: list[tuple[float, float]], size: int) -> np.ndarray:
    yy, xx = np.mgrid[0:size, 0:size] + 0.5
    cx = sum(v[0] for v in vertices) / len(vertices)
    cy = sum(v[1] for v in vertices) / len(vertices)
    mask = np.ones((size, size), dtype=bool)
    for i, (x1, y1) in enumerate(vertices):
        x2, y2 = vertices[(i + 1) % len(vertices)]
        edge = (xx - x1) * (y2 - y1) - (yy - y1) * (x2 - x1)
        ref = (cx - x1) * (y2 - y1) - (cy - y1) * (x2 - x1)
        mask &= edge * np.sign(ref) >= 0
    return mask


def hint_glyph(symbol: HintSymbol) -> np.ndarray:
    """20 x 20 binary mask of the hint shape (white when composited)."""
    n = HINT_SIZE
    c = n / 2
    r = c - 1
    if symbol is HintSymbol.CIRCLE:
        yy, xx = np.mgrid[0:n, 0:n] + 0.5
        return ((xx - c) ** 2 + (yy - c) ** 2 <= r**2).astype(np.float32)
    if symbol is HintSymbol.SQUARE:
        mask = np.zeros((n, n), dtype=np.float32)
        mask[2 : n - 2, 2 : n - 2] = 1.0
        return mask
    if symbol is HintSymbol.TRIANGLE:
        angles = [-np.pi / 2, np.pi / 6, 5 * np.pi / 6]
    else:  # pentagon
        angles = [-np.pi / 2 + 2 * np.pi * k / 5 for k in range(5)]
    vertices = [(c + r * np.cos(a), c + r * np.sin(a)) for a in angles]
    return _polygon_mask(vertices, n).astype(np.float32)


def _scale_sprite(img: np.ndarray, scale: float) -> np.ndarray:
    """Nearest-neighbour rescale to round(28 * scale); identity at 1.0."""
    n = max(1, round(DIGIT_SIZE * scale))
    idx = np.minimum((np.arange(n) / scale).astype(int), DIGIT_SIZE - 1)
    return img[np.ix_(idx, idx)].astype(np.float32) / 255.0


def _boxes_clear(x: int, y: int, size: int, placed: list[tuple[int, int, int]]) -> bool:
    # require a 1 px moat so sprites never touch, even diagonally
    for px, py, ps in placed:
        if x < px + ps + 1 and px < x + size + 1 and y < py + ps + 1 and py < y + size + 1:
            return False
    return True


class PlacementError(RuntimeError):
    pass


def render_panel(
    desc: PanelDescription,
    bank: DigitBank,
    rng: np.random.Generator,
    heldout: bool = False,
    scale_range: tuple[float, float] = SCALE_RANGE,
) -> np.ndarray:
    """Compose one panel image; see the module docstring for the scheme."""
    sprites: list[tuple[np.ndarray, tuple[float, float, float]]] = []
    for value, color in desc.digits():
        exemplar = bank.sample(value, rng, heldout)
        scale = float(rng.uniform(scale_range[0], scale_range[1]))
        sprites.append((_scale_sprite(exemplar, scale), color.rgb))
    if desc.hint is not None:
        sprites.append((hint_glyph(desc.hint), Color.WHITE.rgb))
    order = sorted(range(len(sprites)), key=lambda i: -sprites[i][0].shape[0])
    for _restart in range(100):
        placed: list[tuple[int, int, int]] = []
        spots: dict[int, tuple[int, int]] = {}
        for i in order:
            size = sprites[i][0].shape[0]
            for _attempt in range(200):
                x = int(rng.integers(0, CANVAS_SIZE - size + 1))
                y = int(rng.integers(0, CANVAS_SIZE - size + 1))
                if _boxes_clear(x, y, size, placed):
                    placed.append((x, y, size))
                    spots[i] = (x, y)
                    break
            else:
                break
        if len(spots) == len(sprites):
            canvas = np.zeros((CANVAS_SIZE, CANVAS_SIZE, 3), dtype=np.float32)
            for i, (sprite, rgb) in enumerate(sprites):
                x, y = spots[i]
                s = sprite.shape[0]
                canvas[y : y + s, x : x + s, :] = sprite[:, :, None] * np.asarray(
                    rgb, dtype=np.float32
                )
            return canvas
    raise PlacementError(
        f"could not place {len(sprites)} sprites without overlap after 100 layouts"
    )
