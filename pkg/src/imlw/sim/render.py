"""Tiny deterministic rasterizer for the virtual cameras."""

from __future__ import annotations

import numpy as np

from .types import SHAPE_DISC, SHAPE_SQUARE, SHAPE_TRIANGLE, CameraConfig, WorldState

# fixed palette indexed by color_index; background is black
PALETTE = np.array([
    [0.9, 0.1, 0.1],   # 0 red
    [0.1, 0.8, 0.1],   # 1 green
    [0.15, 0.3, 0.9],  # 2 blue
    [0.9, 0.85, 0.1],  # 3 yellow
    [0.7, 0.15, 0.8],  # 4 magenta
    [0.1, 0.8, 0.8],   # 5 cyan
    [1.0, 1.0, 1.0],   # 6 white
    [0.5, 0.5, 0.5],   # 7 gray
], dtype=np.float64)

BACKGROUND = np.zeros(3)

RECEPTACLE_COLOR = 7
ARM_COLOR = 6
ARM_MARKER_SIZE = 0.03


def _pixel_centers(camera: CameraConfig, world: WorldState) -> tuple[np.ndarray, np.ndarray]:
    if camera.kind == "wrist":
        cx, cy = world.arm.x, world.arm.y
    else:
        cx, cy = camera.center_x, camera.center_y
    half = 0.5 / camera.zoom
    res = camera.resolution
    coords = np.arange(res) + 0.5
    xs = cx - half + coords * (2.0 * half / res)
    ys = cy - half + coords * (2.0 * half / res)
    # row index increases with y; column with x
    return np.meshgrid(xs, ys)


def _shape_mask(px: np.ndarray, py: np.ndarray, x: float, y: float,
                size: float, shape_index: int) -> np.ndarray:
    dx, dy = px - x, py - y
    h = size / 2.0
    if shape_index == SHAPE_SQUARE:
        return (np.abs(dx) <= h) & (np.abs(dy) <= h)
    if shape_index == SHAPE_DISC:
        return dx * dx + dy * dy <= h * h
    if shape_index == SHAPE_TRIANGLE:
        # upward triangle: full width at the base, zero at the apex
        inside_y = (dy >= -h) & (dy <= h)
        width = h * (1.0 - (dy + h) / size)
        return inside_y & (np.abs(dx) <= width)
    raise ValueError(f"unknown shape index: {shape_index}")


def render(world: WorldState, camera: CameraConfig) -> np.ndarray:
    """Painter's-order raster: receptacles, then objects, then the arm marker."""
    res = camera.resolution
    px, py = _pixel_centers(camera, world)
    img = np.broadcast_to(BACKGROUND, (res, res, 3)).copy()

    for rec in world.receptacles:
        d2 = (px - rec.x) ** 2 + (py - rec.y) ** 2
        img[d2 <= rec.radius**2] = PALETTE[RECEPTACLE_COLOR]

    for obj in world.objects:
        mask = _shape_mask(px, py, obj.x, obj.y, obj.size, obj.shape_index)
        img[mask] = PALETTE[obj.color_index % len(PALETTE)]

    arm_mask = _shape_mask(px, py, world.arm.x, world.arm.y, ARM_MARKER_SIZE, SHAPE_DISC)
    img[arm_mask] = PALETTE[ARM_COLOR]
    return img
