"""Synthetic structured-light depth camera.

Renders ground-truth depth and flat-shaded guidance frames from a 2.5-D
scene (vertical boxes on a flat floor inside a rectangular room) by
raycasting a pinhole model, then degrades the result with the artifact
families real sensors exhibit: speckle dropouts, holes at depth
discontinuities, dropouts on problematic materials, and range-dependent
Gaussian noise.

Conventions: depth is perpendicular z-distance along the camera's forward
axis, so a frontal wall renders at constant depth. Rays that hit nothing,
or hit outside [z_min, z_max], are invalid. The floor is not rendered; only
obstacle sides/tops and room walls return depth.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np
from scipy import ndimage

from .core import DepthFrame, GuidanceFrame, Pose, SensorModel
from .errors import PreconditionError


class Material(IntEnum):
    """Surface classes; all but DIFFUSE are hole-prone for SL sensors."""

    DIFFUSE = 1
    REFLECTIVE = 2
    TRANSPARENT = 3
    ABSORBING = 4


MATERIAL_NONE = -1  # material-map code for pixels with no surface hit
PROBLEM_MATERIALS = (Material.REFLECTIVE, Material.TRANSPARENT, Material.ABSORBING)

# Flat-shading palette: one color per object, well separated in RGB so the
# guidance image cleanly segments objects for the bilateral fill.
WALL_COLOR = (180, 180, 180)
OBSTACLE_PALETTE = [
    (220, 50, 47),
    (38, 139, 210),
    (133, 153, 0),
    (181, 137, 0),
    (211, 54, 130),
    (42, 161, 152),
    (108, 113, 196),
    (203, 75, 22),
]


@dataclass(frozen=True)
class Obstacle:
    """Axis-aligned box obstacle: floor footprint (m) plus height (m)."""

    x: float
    y: float
    w: float
    h: float
    height: float
    material: Material = Material.DIFFUSE

    def __post_init__(self):
        if self.w <= 0 or self.h <= 0:
            raise PreconditionError("obstacle footprint must be non-degenerate")
        if self.height <= 0:
            raise PreconditionError("obstacle height must be positive")


@dataclass(frozen=True)
class Scene:
    """2.5-D room: rectangular floor plan, box obstacles, start pose, goal disc."""

    room_w: float
    room_h: float
    obstacles: tuple = ()
    start: Pose = Pose(0.5, 0.5, 0.0)
    goal_x: float = 1.0
    goal_y: float = 1.0
    goal_r: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        if self.room_w <= 0 or self.room_h <= 0:
            raise PreconditionError("room must be non-degenerate")
        for p, name in ((self.start, "start"), (Pose(self.goal_x, self.goal_y, 0), "goal")):
            if not (0 <= p.x <= self.room_w and 0 <= p.y <= self.room_h):
                raise PreconditionError(f"{name} must lie inside the room")
        for ob in self.obstacles:
            if ob.x < 0 or ob.y < 0 or ob.x + ob.w > self.room_w or ob.y + ob.h > self.room_h:
                raise PreconditionError("obstacle footprint must lie inside the room")

    def inside(self, x: float, y: float) -> bool:
        return 0 <= x <= self.room_w and 0 <= y <= self.room_h


@dataclass(frozen=True)
class ArtifactModel:
    """Phenomenological sensor-degradation model; deterministic given seed.

    noise sigma = noise_scale * sensor.noise_sigma_at_1m * (z/1000)^2, the
    accepted quadratic range dependence of structured-light depth noise.
    """

    hole_rate_speckle: float = 0.02
    discontinuity_hole_width: int = 2
    problem_material_hole_rate: float = 0.6
    noise_scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not (0 <= self.hole_rate_speckle <= 1 and 0 <= self.problem_material_hole_rate <= 1):
            raise PreconditionError("hole probabilities must lie in [0, 1]")
        if self.discontinuity_hole_width < 0:
            raise PreconditionError("discontinuity_hole_width must be >= 0")


def _ray_dirs(sensor: SensorModel, pose: Pose):
    """Unnormalized world-space ray directions; parameter t equals z-depth (m)."""
    u = np.arange(sensor.width, dtype=np.float64)
    v = np.arange(sensor.height, dtype=np.float64)
    a = (u - sensor.cx) / sensor.fx  # image right
    b = (v - sensor.cy) / sensor.fy  # image down
    fwd = np.array([np.cos(pose.heading), np.sin(pose.heading)])
    right = np.array([np.sin(pose.heading), -np.cos(pose.heading)])
    dx = (fwd[0] + a * right[0])[None, :]  # (1, W)
    dy = (fwd[1] + a * right[1])[None, :]  # (1, W)
    dz = -b[:, None]  # (H, 1); positive b points below the horizon
    return dx, dy, dz


def _trace(scene: Scene, pose: Pose, sensor: SensorModel):
    """Cast all pixel rays once.

    Returns (t_depth, id_depth, id_appearance): per-pixel nearest-hit depth
    parameter in meters skipping transparent obstacles, the id of that hit,
    and the id of the nearest hit counting every obstacle (for guidance and
    material maps). Ids: -1 none, 0 wall, i+1 obstacle i.
    """
    if not scene.inside(pose.x, pose.y):
        raise PreconditionError(f"pose ({pose.x}, {pose.y}) outside room")
    H, W = sensor.height, sensor.width
    ox, oy, oz = pose.x, pose.y, sensor.mounted_height
    dx, dy, dz = _ray_dirs(sensor, pose)

    with np.errstate(divide="ignore", invalid="ignore"):
        # Room walls: the exit point of the ray through the rectangle, valid
        # only if it lies at or above floor level (walls extend upward).
        tx = np.where(dx > 0, (scene.room_w - ox) / dx, np.where(dx < 0, -ox / dx, np.inf))
        ty = np.where(dy > 0, (scene.room_h - oy) / dy, np.where(dy < 0, -oy / dy, np.inf))
        t_wall = np.minimum(tx, ty)  # (1, W)
        wall_z = oz + t_wall * dz  # (H, W)
        t_wall = np.where(wall_z >= 0, np.broadcast_to(t_wall, (H, W)), np.inf)

        t_depth = t_wall.copy()
        id_depth = np.where(np.isfinite(t_wall), 0, MATERIAL_NONE).astype(np.int16)
        t_app = t_wall.copy()
        id_app = id_depth.copy()

        eps = 1e-9
        for i, ob in enumerate(scene.obstacles):
            t1x = (ob.x - ox) / dx
            t2x = (ob.x + ob.w - ox) / dx
            t1y = (ob.y - oy) / dy
            t2y = (ob.y + ob.h - oy) / dy
            t1z = (0.0 - oz) / dz
            t2z = (ob.height - oz) / dz
            # dz == 0 rows: horizontal rays are inside the z-slab iff the
            # camera height lies within the box's vertical extent.
            horiz = np.broadcast_to(dz == 0, (H, 1))
            in_slab = 0.0 <= oz <= ob.height
            lo_z = np.where(horiz, -np.inf if in_slab else np.inf, np.minimum(t1z, t2z))
            hi_z = np.where(horiz, np.inf if in_slab else -np.inf, np.maximum(t1z, t2z))
            tmin = np.maximum(np.maximum(np.minimum(t1x, t2x), np.minimum(t1y, t2y)), lo_z)
            tmax = np.minimum(np.minimum(np.maximum(t1x, t2x), np.maximum(t1y, t2y)), hi_z)
            hit = (tmax >= tmin) & (tmin > eps)

            closer = hit & (tmin < t_app)
            t_app = np.where(closer, tmin, t_app)
            id_app = np.where(closer, np.int16(i + 1), id_app)
            if ob.material != Material.TRANSPARENT:
                closer = hit & (tmin < t_depth)
                t_depth = np.where(closer, tmin, t_depth)
                id_depth = np.where(closer, np.int16(i + 1), id_depth)

    return t_depth, id_depth, id_app


def render_views(scene: Scene, pose: Pose, sensor: SensorModel, timestamp: float = 0.0):
    """Render (DepthFrame, GuidanceFrame, material map) in one trace."""
    t_depth, id_depth, id_app = _trace(scene, pose, sensor)

    mm = np.where(np.isfinite(t_depth), np.round(t_depth * 1000.0), 0.0)
    valid = (id_depth >= 0) & (mm >= sensor.z_min) & (mm <= sensor.z_max)
    depth = np.where(valid, mm, 0).astype(np.uint16)
    frame = DepthFrame(sensor.width, sensor.height, depth, valid, timestamp)

    palette = np.zeros((len(scene.obstacles) + 2, 3), np.uint8)
    palette[0] = (0, 0, 0)  # no hit
    palette[1] = WALL_COLOR
    for i in range(len(scene.obstacles)):
        palette[i + 2] = OBSTACLE_PALETTE[i % len(OBSTACLE_PALETTE)]
    rgb = palette[id_app + 1]
    guidance = GuidanceFrame(sensor.width, sensor.height, rgb)

    materials = np.full(id_app.shape, MATERIAL_NONE, np.int8)
    materials[id_app == 0] = Material.DIFFUSE
    for i, ob in enumerate(scene.obstacles):
        materials[id_app == i + 1] = int(ob.material)
    return frame, guidance, materials


def raycast_depth(scene: Scene, pose: Pose, sensor: SensorModel, timestamp: float = 0.0) -> DepthFrame:
    """Ground-truth depth frame; all-valid wherever a hit exists in range."""
    return render_views(scene, pose, sensor, timestamp)[0]


def render_guidance(scene: Scene, pose: Pose, sensor: SensorModel) -> GuidanceFrame:
    """Flat-shaded per-object color frame, pixel-aligned with raycast_depth."""
    return render_views(scene, pose, sensor)[1]


def inject_artifacts(
    frame: DepthFrame,
    materials: np.ndarray,
    model: ArtifactModel,
    sensor: SensorModel,
) -> DepthFrame:
    """Degrade a ground-truth frame with sensor-style artifacts.

    Deterministic in model.seed (PCG64 generator, fixed draw order: speckle,
    material dropouts, noise). Never turns an invalid pixel valid; never
    moves a valid depth outside [z_min, z_max].
    """
    if materials.shape != (frame.height, frame.width):
        raise PreconditionError("material map dimensions must match the frame")
    rng = np.random.default_rng(model.seed)
    H, W = frame.height, frame.width
    valid = frame.valid.copy()

    speckle = rng.random((H, W)) < model.hole_rate_speckle
    problem = np.isin(materials, PROBLEM_MATERIALS)
    material_holes = problem & (rng.random((H, W)) < model.problem_material_hole_rate)

    drop = speckle | material_holes
    w = model.discontinuity_hole_width
    if w > 0:
        d = frame.depth.astype(np.int32)
        jump_h = (np.abs(np.diff(d, axis=1)) > 200) & frame.valid[:, 1:] & frame.valid[:, :-1]
        jump_v = (np.abs(np.diff(d, axis=0)) > 200) & frame.valid[1:, :] & frame.valid[:-1, :]
        edges = np.zeros((H, W), bool)
        edges[:, 1:] |= jump_h
        edges[:, :-1] |= jump_h
        edges[1:, :] |= jump_v
        edges[:-1, :] |= jump_v
        drop |= ndimage.binary_dilation(edges, np.ones((2 * w + 1, 2 * w + 1), bool))

    valid &= ~drop

    depth = frame.depth.astype(np.float64)
    sigma = model.noise_scale * sensor.noise_sigma_at_1m * (depth / 1000.0) ** 2
    noisy = depth + rng.standard_normal((H, W)) * sigma
    noisy = np.clip(np.round(noisy), sensor.z_min, sensor.z_max)
    depth_out = np.where(valid, noisy, 0).astype(np.uint16)
    return DepthFrame(W, H, depth_out, valid, frame.timestamp)
