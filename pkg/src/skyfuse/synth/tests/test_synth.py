"""
Tests for the synthetic scene generator.
"""

import math

import numpy as np
import pytest

from skyfuse.appearance import (
    load_categorized,
    load_detections,
    load_ground_truth,
    rasterize_boxes,
)
from skyfuse.core import BBox, Category, DetectionSet, list_sequence
from skyfuse.fusion import aggregate_buildings
from skyfuse.georeg import (
    load_poses,
    parallax_displacement,
    project_to_plane,
    stabilize_sequence,
)
from skyfuse.synth import (
    BuildingSpec,
    CameraSpec,
    InvalidSpec,
    OrbitSpec,
    ParkedSpec,
    SceneSpec,
    TextureSpec,
    VehicleSpec,
    building_roof_boxes,
    elevated_rect_to_box,
    oracle_appearance,
    orbit_poses,
    render_sequence,
    world_rect_to_box,
    write_scene,
)
from skyfuse.synth.render import WALL_SHADE

ROOF = (0.8, 0.15, 0.2)
WHITE = (0.95, 0.95, 0.95)
GROUND = (0.42, 0.45, 0.38)
WALL = (0.55, 0.55, 0.58)
FLAT = TextureSpec(contrast=0.0, base_color=GROUND)


def tight_orbit(frame_count=4, **kwargs):
    """An orbit close enough to nadir that a 320 px camera covers the plane."""
    settings = dict(
        radius=600.0,
        altitude=1500.0,
        angular_rate=0.025,
        start_angle=math.pi / 4,
        frame_count=frame_count,
    )
    settings.update(kwargs)
    return OrbitSpec(**settings)


def coverage_centroid(result, target, background, others=()):
    """
    Coverage-weighted centroid (col, row) of ``target``-colored surface.

    On a flat background every pixel is a linear mix of the scene colors, so
    solving for the mixing weights gives the exact target coverage.
    """
    background = np.asarray(background)
    offsets = np.column_stack([np.asarray(c) - background for c in (target, *others)])
    unmix = np.linalg.pinv(offsets)[0]
    weights = ((result.frame.data - background) @ unmix) * result.valid.bits
    assert weights.sum() > 20
    rows, cols = np.indices(weights.shape)
    return np.array([(weights * cols).sum(), (weights * rows).sum()]) / weights.sum()


class TestSceneSpec:
    """Test SceneSpec validation and persistence."""

    def test_demo_is_valid(self):
        """Test the demo scene passes the render checks."""
        spec = SceneSpec.demo()
        spec.check(5)
        assert spec.support_height(spec.parked[1]) == 30.0
        assert spec.support_height(spec.parked[0]) == 0.0

    def test_yaml_round_trip(self, tmp_path):
        """Test a scene written to YAML loads back equal."""
        spec = SceneSpec.demo()
        assert SceneSpec.from_yaml(spec.to_yaml(tmp_path / "scene.yaml")) == spec

    def test_bad_files(self, tmp_path):
        """Test missing, malformed and invalid scene files raise InvalidSpec."""
        with pytest.raises(InvalidSpec):
            SceneSpec.from_yaml(tmp_path / "absent.yaml")
        broken = tmp_path / "broken.yaml"
        broken.write_text("vehicles: [unclosed\n")
        with pytest.raises(InvalidSpec):
            SceneSpec.from_yaml(broken)
        invalid = tmp_path / "invalid.yaml"
        invalid.write_text("parked:\n  - position: [0, 0]\n    color: [2.0, 0, 0]\n")
        with pytest.raises(InvalidSpec):
            SceneSpec.from_yaml(invalid)

    def test_altitude_above_roofs(self):
        """Test a camera at roof height is rejected."""
        spec = SceneSpec(
            buildings=[BuildingSpec(footprint=(0, 0, 10, 10), height=200.0)],
            orbit=OrbitSpec(altitude=200.0),
        )
        with pytest.raises(InvalidSpec):
            spec.check()

    def test_sequence_shorter_than_window(self):
        """Test fewer frames than the temporal window are rejected."""
        spec = SceneSpec(orbit=OrbitSpec(frame_count=4))
        spec.check(3)
        with pytest.raises(InvalidSpec):
            spec.check(5)

    def test_parked_on_roof_edge(self):
        """Test a parked vehicle straddling a roof edge is rejected."""
        spec = SceneSpec(
            parked=[ParkedSpec(position=(10.0, 5.0))],
            buildings=[BuildingSpec(footprint=(0, 0, 10, 10), height=20.0)],
        )
        with pytest.raises(InvalidSpec):
            spec.check()

    def test_plane_centered_on_orbit(self):
        """Test the plane raster's center pixel sits on the orbit center."""
        spec = SceneSpec(orbit=OrbitSpec(center=(100.0, -40.0)), plane_width=65, plane_height=33)
        center = spec.plane_config().world_to_pixels(np.array([[100.0, -40.0]]))[0]
        assert center == pytest.approx((32.0, 16.0))

    def test_focal_matches_gsd(self):
        """Test the default focal length gives the plane GSD at the aim point."""
        spec = SceneSpec(orbit=OrbitSpec(radius=0.0, altitude=1000.0), gsd=0.5)
        assert spec.focal_length() == pytest.approx(2000.0)
        fixed = SceneSpec(camera=CameraSpec(focal=1234.0))
        assert fixed.focal_length() == 1234.0


class TestTruth:
    """Test the plane-raster truth boxes."""

    def test_world_rect_pixels(self):
        """Test a 1 m square covers exactly the plane pixels whose centers lie inside it."""
        spec = SceneSpec(plane_width=256, plane_height=256, gsd=0.25)
        plane = spec.plane_config()
        box = world_rect_to_box((0.0, 0.0, 1.0, 1.0), plane)
        assert (box.x, box.y, box.w, box.h) == pytest.approx((128.0, 124.0, 4.0, 4.0))
        rows, cols = np.nonzero(rasterize_boxes([box], 256, 256).bits)
        world = np.column_stack(
            [plane.plane_origin[0] + 0.25 * cols, plane.plane_origin[1] - 0.25 * rows]
        )
        assert np.all((world >= 0.0) & (world <= 1.0))
        assert rows.size == 16

    def test_ground_level_is_exact(self):
        """Test an elevated box at height 0 is the on-plane box, whatever the pose."""
        spec = SceneSpec(orbit=tight_orbit())
        plane = spec.plane_config()
        pose = orbit_poses(spec)[2]
        rect = (-3.0, 1.0, 2.0, 4.0)
        flat = elevated_rect_to_box(rect, 0.0, pose, plane, Category.GROUND_TRUTH, 0)
        barely = elevated_rect_to_box(rect, 1e-6, pose, plane, Category.GROUND_TRUTH, 0)
        assert flat == world_rect_to_box(rect, plane)
        assert (barely.x, barely.y, barely.w, barely.h) == pytest.approx(
            (flat.x, flat.y, flat.w, flat.h), abs=1e-3
        )

    def test_nadir_roof_magnification(self):
        """Test a nadir roof is scaled about the nadir by altitude / (altitude - height)."""
        spec = SceneSpec(
            buildings=[BuildingSpec(footprint=(-2.0, -2.0, 2.0, 2.0), height=100.0)],
            orbit=OrbitSpec(radius=0.0, altitude=1000.0, frame_count=3),
        )
        roof = building_roof_boxes(spec, orbit_poses(spec), spec.plane_config()).for_frame(0)[0]
        assert roof.category == Category.BUILDING
        assert roof.w == pytest.approx(16.0 * 1000.0 / 900.0)
        assert roof.h == pytest.approx(roof.w)
        assert roof.center == pytest.approx((128.0, 128.0))

    def test_on_plane_points_do_not_drift(self):
        """Test points on the ground stay put on the plane over a full orbit."""
        frames = 64
        spec = SceneSpec(orbit=tight_orbit(frames, angular_rate=2 * math.pi / frames))
        poses = orbit_poses(spec)
        plane = spec.plane_config()
        for point in [(5.0, -3.0, 0.0), (-20.0, 14.0, 0.0)]:
            drift = [
                np.linalg.norm(parallax_displacement(point, poses[0], poses[k], plane))
                for k in range(1, frames)
            ]
            assert max(drift) < 1e-6

    def test_taller_building_spreads_more(self):
        """Test roof-track spread grows strictly with building height."""
        spreads = []
        for height in (10.0, 20.0, 40.0):
            spec = SceneSpec(
                buildings=[BuildingSpec(footprint=(-8.0, -8.0, 8.0, 8.0), height=height)],
                orbit=tight_orbit(12),
            )
            roofs = building_roof_boxes(spec, orbit_poses(spec), spec.plane_config())
            tracks = aggregate_buildings([(k, roofs.for_frame(k)) for k in roofs.frame_indices])
            assert len(tracks) == 1
            spreads.append(tracks[0].spread())
        assert spreads[0] < spreads[1] < spreads[2]


class TestOracleAppearance:
    """Test oracle_appearance."""

    @pytest.fixture
    def thousand(self):
        """1000 distinct boxes over 100 frames."""
        boxes = [
            BBox(float(20 * (i % 10)), 5.0, 18.0, 8.0, Category.GROUND_TRUTH, 1.0, i // 10)
            for i in range(1000)
        ]
        return DetectionSet.from_boxes(boxes)

    def test_identity(self, thousand):
        """Test no dropout, jitter or false boxes returns the truth boxes."""
        out = oracle_appearance(thousand)
        assert [(b.frame_index, b.x, b.y, b.w, b.h) for b in out] == [
            (b.frame_index, b.x, b.y, b.w, b.h) for b in thousand
        ]
        assert {b.category for b in out} == {Category.VEHICLE}

    def test_full_dropout(self, thousand):
        """Test dropout 1 removes everything."""
        assert len(oracle_appearance(thousand, dropout=1.0)) == 0

    def test_binomial_dropout(self, thousand):
        """Test dropout 0.2 keeps a count inside the binomial 99% interval of 800."""
        kept = len(oracle_appearance(thousand, dropout=0.2, seed=3))
        assert 768 <= kept <= 833

    def test_deterministic(self, thousand):
        """Test equal seeds give equal detections."""
        first = oracle_appearance(thousand, dropout=0.3, jitter=2.0, false_positive_rate=0.5)
        second = oracle_appearance(thousand, dropout=0.3, jitter=2.0, false_positive_rate=0.5)
        assert list(first) == list(second)

    def test_pad_and_jitter(self):
        """Test padding grows boxes and jitter stays within bounds."""
        truth = DetectionSet.from_boxes([BBox(10.0, 10.0, 20.0, 10.0)])
        padded = list(oracle_appearance(truth, pad=2.0))[0]
        assert (padded.x, padded.y, padded.w, padded.h) == (8.0, 8.0, 24.0, 14.0)
        jittered = list(oracle_appearance(truth, jitter=1.5, seed=9))[0]
        assert abs(jittered.x - 10.0) <= 1.5
        assert abs(jittered.x2 - 30.0) <= 1.5

    def test_false_boxes(self, thousand):
        """Test rate 1 adds one false box inside the frame on every frame."""
        out = oracle_appearance(thousand, false_positive_rate=1.0, frame_size=(256, 64))
        assert len(out) == 1000 + 100
        assert all(b.x >= 0 and b.x2 <= 256 and b.y >= 0 and b.y2 <= 64 for b in out)

    def test_rates_checked(self, thousand):
        """Test rates outside [0, 1] are rejected."""
        with pytest.raises(ValueError):
            oracle_appearance(thousand, dropout=1.5)
        with pytest.raises(ValueError):
            oracle_appearance(thousand, false_positive_rate=-0.1)


@pytest.mark.slow
class TestRenderSequence:
    """Test rendering against the projection geometry."""

    def test_static_empty_scene(self):
        """Test a static camera over an empty scene renders identical frames."""
        spec = SceneSpec(
            orbit=tight_orbit(3, angular_rate=0.0), camera=CameraSpec(width=64, height=48)
        )
        scene = render_sequence(spec)
        assert len(scene.frames) == 3
        for frame in scene.frames[1:]:
            np.testing.assert_array_equal(frame.data, scene.frames[0].data)
        assert len(scene.ground_truth) == 0

    def test_deterministic_and_parallel(self):
        """Test rerendering and threaded rendering are bit-identical."""
        spec = SceneSpec.demo(frame_count=3).model_copy(
            update={"camera": CameraSpec(width=96, height=96)}
        )
        first = render_sequence(spec)
        second = render_sequence(spec, jobs=3)
        for a, b in zip(first.frames, second.frames):
            assert a.index == b.index
            np.testing.assert_array_equal(a.data, b.data)

    def test_background_static_after_stabilization(self):
        """Test only the moving vehicle changes between stabilized frames."""
        spec = SceneSpec(
            vehicles=[VehicleSpec(start=(-6.0, 4.0), velocity=(4.0, 0.0), color=WHITE)],
            orbit=tight_orbit(3),
        )
        scene = render_sequence(spec)
        warped = stabilize_sequence(scene.frames, [scene.poses[k] for k in range(3)], scene.plane)
        valid = warped[0].valid.bits & warped[1].valid.bits
        grown = [
            BBox(b.x - 4, b.y - 4, b.w + 8, b.h + 8)
            for b in scene.ground_truth
            if b.frame_index < 2
        ]
        vehicle = rasterize_boxes(grown, scene.plane.output_width, scene.plane.output_height).bits
        change = np.abs(warped[1].frame.data - warped[0].frame.data).max(axis=2)
        assert change[valid & ~vehicle].max() < 0.02
        assert change[valid & vehicle].max() > 0.3

    def test_parked_vehicle_stays_on_truth(self):
        """Test a parked car's stabilized centroid matches its truth box in every frame."""
        spec = SceneSpec(
            texture=FLAT,
            parked=[ParkedSpec(position=(12.0, 12.0), size=(4.5, 2.0), color=WHITE)],
            orbit=tight_orbit(),
        )
        scene = render_sequence(spec)
        warped = stabilize_sequence(scene.frames, [scene.poses[k] for k in range(4)], scene.plane)
        for k, result in enumerate(warped):
            truth = scene.parked_truth.for_frame(k)[0]
            # raster pixel centers sit half a pixel inside the box coordinates
            expected = np.array(truth.center) - 0.5
            centroid = coverage_centroid(result, WHITE, GROUND)
            assert np.linalg.norm(centroid - expected) < 0.5

    def test_roof_follows_parallax(self):
        """Test the stabilized roof moves by the parallax of the roof center."""
        building = BuildingSpec(
            footprint=(-10.0, -10.0, 10.0, 10.0), height=50.0, roof_color=ROOF, wall_color=WALL
        )
        spec = SceneSpec(texture=FLAT, buildings=[building], orbit=tight_orbit())
        scene = render_sequence(spec)
        poses = [scene.poses[k] for k in range(4)]
        warped = stabilize_sequence(scene.frames, poses, scene.plane)
        walls = [tuple(shade * c for c in WALL) for shade in WALL_SHADE]
        centroids = [coverage_centroid(result, ROOF, GROUND, walls) for result in warped]
        roof_center = (0.0, 0.0, 50.0)
        for k in range(3):
            expected = parallax_displacement(roof_center, poses[k], poses[k + 1], scene.plane)
            assert np.linalg.norm(expected) > 1.0
            assert np.linalg.norm((centroids[k + 1] - centroids[k]) - expected) < 0.5
        assert np.linalg.norm(
            centroids[0] - project_to_plane(roof_center, poses[0], scene.plane)
        ) < 0.5

    def test_write_scene(self, tmp_path):
        """Test the written scene files load with the pipeline readers."""
        small = SceneSpec.demo(frame_count=3).model_copy(
            update={"camera": CameraSpec(width=64, height=64)}
        )
        scene = render_sequence(small)
        oracle = oracle_appearance(scene.ground_truth.merged(scene.parked_truth), pad=2.0)
        written = write_scene(scene, tmp_path, appearance=oracle)
        assert list(list_sequence(written["frames"])) == [0, 1, 2]
        assert sorted(load_poses(written["poses"])) == [0, 1, 2]
        assert len(load_ground_truth(written["ground_truth"])) == len(scene.ground_truth)
        assert len(load_detections(written["detections"])) == len(oracle)
        assert len(load_categorized(written["building_truth"])) == 3
        assert SceneSpec.from_yaml(written["scene"]) == scene.spec
