import math

import numpy as np
import pytest

from depthnav.core import Pose, SensorModel
from depthnav.errors import PreconditionError
from depthnav.simsensor import (
    ArtifactModel,
    Material,
    Obstacle,
    Scene,
    inject_artifacts,
    raycast_depth,
    render_guidance,
    render_views,
)

SENSOR = SensorModel()


def empty_room(w=6.0, h=4.0):
    return Scene(w, h, (), Pose(0.5, h / 2, 0.0), w - 0.5, h / 2, 0.5)


class TestRaycast:
    def test_frontal_wall_constant_depth(self):
        # Camera 2.0 m from the far wall of a small room: every pixel whose
        # wall hit is in range reads exactly 2000 mm (perpendicular z-depth).
        scene = Scene(3.0, 3.0, (), Pose(1.0, 1.5, 0.0), 2.5, 1.5, 0.2)
        frame = raycast_depth(scene, Pose(1.0, 1.5, 0.0), SENSOR)
        hits = frame.depth[frame.valid]
        assert hits.size > 0
        front = frame.depth[frame.valid & (np.abs(frame.depth.astype(int) - 2000) < 5)]
        # The far wall is 2 m ahead; side walls are closer than z_min or
        # farther, so restrict to pixels that actually see the far wall.
        u = np.arange(SENSOR.width)
        lateral = (u - SENSOR.cx) / SENSOR.fx * 2.0  # offset at 2 m
        sees_far_wall = np.abs(lateral + 1.5 - 1.5) <= 1.5
        center = frame.depth[SENSOR.height // 2, sees_far_wall]
        valid_center = frame.valid[SENSOR.height // 2, sees_far_wall]
        assert np.all(center[valid_center] == 2000)
        assert front.size > 0

    def test_walls_beyond_range_all_invalid(self):
        scene = Scene(20.0, 20.0, (), Pose(10.0, 10.0, 0.0), 19.0, 10.0, 0.5)
        frame = raycast_depth(scene, Pose(10.0, 10.0, 0.0), SENSOR)
        assert not frame.valid.any()
        assert np.all(frame.depth == 0)

    def test_box_projection_matches_geometric_oracle(self):
        # 0.5 m-wide box with its front face 1.5 m ahead. Independent
        # projection oracle: half-extent in columns is fx * 0.25 / 1.5.
        box = Obstacle(2.5, 1.75, 0.3, 0.5, 1.5)
        scene = Scene(8.0, 4.0, (box,), Pose(1.0, 2.0, 0.0), 7.0, 2.0, 0.5)
        frame = raycast_depth(scene, Pose(1.0, 2.0, 0.0), SENSOR)
        center_row = frame.depth[int(SENSOR.cy), :]
        assert center_row[int(SENSOR.cx)] == 1500
        on_box = np.nonzero(center_row == 1500)[0]
        u_left = SENSOR.cx + SENSOR.fx * (-0.25) / 1.5
        u_right = SENSOR.cx + SENSOR.fx * (0.25) / 1.5
        expected = math.floor(u_right) - math.ceil(u_left) + 1
        assert expected == pytest.approx(SENSOR.fx * 0.5 / 1.5, abs=2)
        assert on_box.size == expected

    def test_pose_outside_room_rejected(self):
        with pytest.raises(PreconditionError):
            raycast_depth(empty_room(), Pose(-1.0, 0.0, 0.0), SENSOR)

    def test_deterministic(self):
        scene = Scene(6.0, 4.0, (Obstacle(2.0, 1.0, 0.5, 0.5, 1.0),))
        a = raycast_depth(scene, Pose(0.5, 2.0, 0.1), SENSOR)
        b = raycast_depth(scene, Pose(0.5, 2.0, 0.1), SENSOR)
        assert np.array_equal(a.depth, b.depth)
        assert np.array_equal(a.valid, b.valid)

    def test_ground_truth_hole_free_in_range(self):
        scene = Scene(3.0, 3.0, (Obstacle(2.0, 1.0, 0.4, 0.4, 1.0),), Pose(0.5, 1.5, 0))
        frame = raycast_depth(scene, Pose(0.5, 1.5, 0.0), SENSOR)
        # every pixel is either valid or carries depth 0
        assert np.all(frame.depth[~frame.valid] == 0)
        assert np.all(frame.depth[frame.valid] >= SENSOR.z_min)
        assert np.all(frame.depth[frame.valid] <= SENSOR.z_max)

    def test_transparent_skipped_by_depth_ray(self):
        glass = Obstacle(2.0, 1.0, 0.2, 2.0, 2.0, Material.TRANSPARENT)
        scene = Scene(3.5, 4.0, (glass,), Pose(1.0, 2.0, 0.0), 3.0, 2.0, 0.2)
        frame, _, materials = render_views(scene, Pose(1.0, 2.0, 0.0), SENSOR)
        cy, cx = int(SENSOR.cy), int(SENSOR.cx)
        assert frame.depth[cy, cx] == 2500  # wall behind the glass
        assert materials[cy, cx] == Material.TRANSPARENT


class TestGuidance:
    def test_empty_room_single_wall_color(self):
        scene = Scene(3.0, 3.0, (), Pose(1.0, 1.5, 0.0))
        g = render_guidance(scene, Pose(1.0, 1.5, 0.0), SENSOR)
        colors = {tuple(c) for c in g.rgb.reshape(-1, 3)[::37]}
        colors.discard((0, 0, 0))
        assert len(colors) == 1

    def test_one_obstacle_two_colors(self):
        scene = Scene(3.0, 3.0, (Obstacle(2.0, 1.2, 0.4, 0.6, 1.5),), Pose(0.5, 1.5, 0))
        g = render_guidance(scene, Pose(0.5, 1.5, 0.0), SENSOR)
        colors = {tuple(c) for c in g.rgb.reshape(-1, 3)}
        colors.discard((0, 0, 0))
        assert len(colors) == 2

    def test_color_boundary_matches_depth_discontinuity(self):
        scene = Scene(4.0, 3.0, (Obstacle(2.0, 1.2, 0.4, 0.6, 1.5),), Pose(0.5, 1.5, 0))
        pose = Pose(0.5, 1.5, 0.0)
        frame, g, _ = render_views(scene, pose, SENSOR)
        row = int(SENSOR.cy)
        d = frame.depth[row].astype(int)
        depth_edges = set(np.nonzero(np.abs(np.diff(d)) > 200)[0])
        color_edges = set(np.nonzero(np.any(np.diff(g.rgb[row].astype(int), axis=0) != 0, axis=1))[0])
        assert depth_edges == color_edges


class TestArtifacts:
    def scene_frame(self):
        box = Obstacle(2.0, 1.5, 0.5, 0.5, 1.2, Material.REFLECTIVE)
        scene = Scene(3.5, 4.0, (box,), Pose(0.5, 2.0, 0.0), 3.0, 2.0, 0.2)
        return render_views(scene, Pose(0.5, 2.0, 0.0), SENSOR)

    def test_identity_when_disabled(self):
        frame, _, materials = self.scene_frame()
        model = ArtifactModel(0.0, 0, 0.0, 0.0, seed=7)
        out = inject_artifacts(frame, materials, model, SENSOR)
        assert np.array_equal(out.depth, frame.depth)
        assert np.array_equal(out.valid, frame.valid)

    def test_full_speckle_invalidates_everything(self):
        frame, _, materials = self.scene_frame()
        out = inject_artifacts(frame, materials, ArtifactModel(hole_rate_speckle=1.0), SENSOR)
        assert not out.valid.any()
        assert np.all(out.depth == 0)

    def test_same_seed_bit_identical(self):
        frame, _, materials = self.scene_frame()
        model = ArtifactModel(seed=42)
        a = inject_artifacts(frame, materials, model, SENSOR)
        b = inject_artifacts(frame, materials, model, SENSOR)
        assert np.array_equal(a.depth, b.depth)
        assert np.array_equal(a.valid, b.valid)

    def test_different_seeds_differ(self):
        frame, _, materials = self.scene_frame()
        a = inject_artifacts(frame, materials, ArtifactModel(seed=1), SENSOR)
        b = inject_artifacts(frame, materials, ArtifactModel(seed=2), SENSOR)
        assert not np.array_equal(a.valid, b.valid)

    def test_never_revives_or_escapes_range(self):
        frame, _, materials = self.scene_frame()
        out = inject_artifacts(frame, materials, ArtifactModel(noise_scale=10.0, seed=3), SENSOR)
        assert not np.any(out.valid & ~frame.valid)
        assert np.all(out.depth[out.valid] >= SENSOR.z_min)
        assert np.all(out.depth[out.valid] <= SENSOR.z_max)

    def test_problem_material_holes_cluster_on_material(self):
        frame, _, materials = self.scene_frame()
        model = ArtifactModel(0.0, 0, 1.0, 0.0, seed=5)
        out = inject_artifacts(frame, materials, model, SENSOR)
        on_material = materials == Material.REFLECTIVE
        assert not out.valid[on_material & frame.valid].any()
        assert out.valid[~on_material & frame.valid].all()

    def test_dimension_mismatch_rejected(self):
        frame, _, materials = self.scene_frame()
        with pytest.raises(PreconditionError):
            inject_artifacts(frame, materials[:-1], ArtifactModel(), SENSOR)
