"""Rasterizer: geometry, painter's order, palette, camera framing."""

import numpy as np
import pytest

from imlw.sim.render import ARM_COLOR, PALETTE, RECEPTACLE_COLOR, render
from imlw.sim.types import (
    SHAPE_DISC,
    SHAPE_SQUARE,
    SHAPE_TRIANGLE,
    CameraConfig,
    GripperState,
    Pose2,
    Receptacle,
    SceneObject,
    WorldState,
)


def world_with(objects=(), receptacles=(), arm=(0.9, 0.9, 0.0)):
    return WorldState(arm=Pose2(*arm), gripper=GripperState(),
                      objects=tuple(objects), receptacles=tuple(receptacles))


def pixel_center(i, j, res=32):
    # row i maps to y, column j to x (global camera, zoom 1)
    return ((j + 0.5) / res, (i + 0.5) / res)


CAM32 = CameraConfig(kind="global", resolution=32)


def brute_force(world, camera):
    """Independent per-pixel oracle for the global camera at zoom 1."""
    res = camera.resolution
    img = np.zeros((res, res, 3))
    for i in range(res):
        for j in range(res):
            x, y = pixel_center(i, j, res)
            color = np.zeros(3)
            for rec in world.receptacles:
                if (x - rec.x) ** 2 + (y - rec.y) ** 2 <= rec.radius**2:
                    color = PALETTE[RECEPTACLE_COLOR]
            for obj in world.objects:
                h = obj.size / 2
                dx, dy = x - obj.x, y - obj.y
                if obj.shape_index == SHAPE_SQUARE:
                    hit = abs(dx) <= h and abs(dy) <= h
                elif obj.shape_index == SHAPE_DISC:
                    hit = dx * dx + dy * dy <= h * h
                else:
                    hit = (-h <= dy <= h) and abs(dx) <= h * (1 - (dy + h) / obj.size)
                if hit:
                    color = PALETTE[obj.color_index % len(PALETTE)]
            if (x - world.arm.x) ** 2 + (y - world.arm.y) ** 2 <= 0.015**2:
                color = PALETTE[ARM_COLOR]
            img[i, j] = color
    return img


def test_matches_brute_force_oracle():
    # [DERIVED] full-frame agreement with an independent per-pixel rasterizer
    world = world_with(
        objects=[
            SceneObject(id="a", x=0.3, y=0.6, size=0.15, color_index=0, shape_index=SHAPE_SQUARE),
            SceneObject(id="b", x=0.62, y=0.35, size=0.12, color_index=2, shape_index=SHAPE_DISC),
            SceneObject(id="c", x=0.75, y=0.7, size=0.14, color_index=3, shape_index=SHAPE_TRIANGLE),
        ],
        receptacles=[Receptacle(id="r", x=0.4, y=0.4, radius=0.2)],
        arm=(0.55, 0.8, 0.0),
    )
    np.testing.assert_array_equal(render(world, CAM32), brute_force(world, CAM32))


def test_background_black():
    img = render(world_with(arm=(0.02, 0.02, 0.0)), CAM32)
    assert np.array_equal(img[16, 16], np.zeros(3))


def test_painters_order():
    # object drawn after (over) the receptacle; arm over everything
    c = 16.5 / 32  # exact center of pixel [16, 16] so the small arm disc covers it
    rec = Receptacle(id="r", x=c, y=c, radius=0.3)
    obj = SceneObject(id="a", x=c, y=c, size=0.1, color_index=1, shape_index=SHAPE_SQUARE)
    img = render(world_with(objects=[obj], receptacles=[rec], arm=(c, c, 0.0)), CAM32)
    # dead center: arm marker wins
    assert np.array_equal(img[16, 16], PALETTE[ARM_COLOR])
    # inside the object but outside the arm disc
    assert np.array_equal(img[16, 17], PALETTE[1])
    # inside the receptacle but outside the object
    assert np.array_equal(img[16, 24], PALETTE[RECEPTACLE_COLOR])


def test_color_index_wraps_palette():
    obj = SceneObject(id="a", x=0.5, y=0.5, size=0.1, color_index=9, shape_index=SHAPE_SQUARE)
    img = render(world_with(objects=[obj]), CAM32)
    assert np.array_equal(img[16, 16], PALETTE[9 % len(PALETTE)])


def test_wrist_camera_centers_on_arm():
    obj = SceneObject(id="a", x=0.3, y=0.7, size=0.04, color_index=4, shape_index=SHAPE_DISC)
    cam = CameraConfig(kind="wrist", resolution=16, zoom=4.0)
    img = render(world_with(objects=[obj], arm=(0.3, 0.7, 0.0)), cam)
    # the arm marker sits dead center regardless of where the arm is
    assert np.array_equal(img[8, 8], PALETTE[ARM_COLOR])
    # zoomed field of view is 1/zoom wide: content 0.25 away is out of frame
    far = SceneObject(id="b", x=0.6, y=0.7, size=0.04, color_index=5, shape_index=SHAPE_DISC)
    img2 = render(world_with(objects=[far], arm=(0.3, 0.7, 0.0)), cam)
    assert not np.any(np.all(img2 == PALETTE[5], axis=-1))


def test_zoom_field_of_view():
    # [DERIVED] zoom 2 frames exactly the central half of the workspace
    obj = SceneObject(id="a", x=0.5, y=0.5, size=0.06, color_index=0, shape_index=SHAPE_SQUARE)
    world = world_with(objects=[obj], arm=(0.02, 0.02, 0.0))
    wide = render(world, CameraConfig(kind="global", resolution=32, zoom=1.0))
    tight = render(world, CameraConfig(kind="global", resolution=32, zoom=2.0))
    frac = lambda img: np.mean(np.all(img == PALETTE[0], axis=-1))
    assert frac(tight) == pytest.approx(4 * frac(wide), rel=0.3)


def test_supported_resolutions():
    world = world_with()
    for res in (16, 24, 32):
        assert render(world, CameraConfig(kind="global", resolution=res)).shape == (res, res, 3)
    with pytest.raises(ValueError):
        CameraConfig(kind="global", resolution=20)


def test_determinism():
    world = world_with(objects=[SceneObject(id="a", x=0.4, y=0.4, size=0.08,
                                            color_index=2, shape_index=SHAPE_TRIANGLE)])
    np.testing.assert_array_equal(render(world, CAM32), render(world, CAM32))
