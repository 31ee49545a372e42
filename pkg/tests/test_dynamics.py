import math

import numpy as np
import pytest

from circummap.dynamics import (
    DegenerateOrbitError,
    calibrate_ratio_convention,
    descriptor_distance,
    detect_period,
    extract_similarity,
    hausdorff_distance,
    iterate,
    random_nondegenerate_instance,
    random_orbit_safe_instance,
    repeat_similarity_check,
    shape_descriptor,
    triangle_cos_alpha_closed_form,
    triangle_ratio_closed_form,
    triangle_ratio_raw,
)
from circummap.geometry import Polygon, regular_ngon, rotate_about

S3 = math.sqrt(3.0)
K1 = (1.0 + S3, 0.0)
K2 = (1.0 - S3, 0.0)


class TestIterate:
    def test_records_all_iterates(self):
        p = regular_ngon(5)
        rec = iterate(p, (2.0, 0.0), 7)
        assert rec.failure is None
        assert len(rec.iterates) == 8
        assert rec.iterates[0] is p

    def test_failure_recorded_not_raised(self):
        p = regular_ngon(4)
        mid = (p.vertices[0] + p.vertices[1]) / 2
        rec = iterate(p, mid, 3)
        assert rec.failure == (0, 0)
        assert len(rec.iterates) == 1

    def test_equilateral_centroid_two_periodic(self):
        p = regular_ngon(3)
        rec = iterate(p, (0.0, 0.0), 2)
        assert hausdorff_distance(p, rec.iterates[2]) < 1e-12

    def test_k1_three_periodic_vertexwise(self):
        p = regular_ngon(3)
        rec = iterate(p, K1, 3)
        assert np.abs(rec.iterates[3].vertices - p.vertices).max() < 1e-10


class TestSimilarity:
    def test_square_center(self):
        sp = extract_similarity(regular_ngon(4), (0.0, 0.0))
        assert abs(sp.s - 0.25) < 1e-12
        assert abs(abs(sp.alpha) - math.pi) < 1e-12
        assert sp.residual < 1e-12

    def test_equilateral_centroid(self):
        sp = extract_similarity(regular_ngon(3), (0.0, 0.0))
        assert abs(sp.s - 1.0) < 1e-12
        assert abs(abs(sp.alpha) - math.pi) < 1e-12

    def test_k_points_unit_similarity(self):
        p = regular_ngon(3)
        for base in (K1, K2):
            for rot in (0.0, 2 * math.pi / 3, -2 * math.pi / 3):
                c, s = math.cos(rot), math.sin(rot)
                m = (c * base[0] - s * base[1], s * base[0] + c * base[1])
                sp = extract_similarity(p, m)
                assert abs(sp.s - 1.0) < 1e-9
                assert abs(sp.alpha) < 1e-9

    def test_residual_small_on_random_instances(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            n = int(rng.integers(3, 8))
            p, m = random_nondegenerate_instance(rng, n=n)
            sp = extract_similarity(p, m)
            assert sp.residual < 1e-8

    def test_block_stationarity(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            p, m = random_orbit_safe_instance(rng, n=int(rng.integers(3, 7)))
            a, b = repeat_similarity_check(p, m)
            assert abs(a.s - b.s) < 1e-8 * max(1.0, a.s)
            da = abs(a.alpha - b.alpha)
            assert min(da, 2 * math.pi - da) < 1e-8

    def test_degenerate_raises(self):
        p = regular_ngon(4)
        mid = (p.vertices[0] + p.vertices[1]) / 2
        with pytest.raises(DegenerateOrbitError):
            extract_similarity(p, mid)


class TestCanonicalOrbits:
    def check_orbit(self, m, it1_expected, it2_expected):
        p = regular_ngon(3)
        rec = iterate(p, m, 3)
        for expected, got in ((it1_expected, rec.iterates[1]),
                              (it2_expected, rec.iterates[2])):
            exp = np.array(expected)
            d = np.sqrt(((exp[:, None, :] - got.vertices[None, :, :]) ** 2
                         ).sum(-1))
            # set-wise match of the printed radical coordinates
            assert d.min(axis=1).max() < 1e-12
        angles = {self.angle_multiset(rec.iterates[1]),
                  self.angle_multiset(rec.iterates[2])}
        assert angles == {(15.0, 15.0, 150.0), (30.0, 75.0, 75.0)}

    @staticmethod
    def angle_multiset(t: Polygon):
        v = t.vertices
        out = []
        for i in range(3):
            a = v[i - 1] - v[i]
            b = v[(i + 1) % 3] - v[i]
            cosang = np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b))
            out.append(round(math.degrees(math.acos(np.clip(cosang, -1, 1))), 9))
        return tuple(sorted(out))

    def test_k1_coordinates(self):
        self.check_orbit(K1, [
            (1.0, 0.0),
            (1.0 + S3 / 2, 1.5 + S3),
            (1.0 + S3 / 2, -1.5 - S3),
        ], [
            (-2.0 - S3, 0.0),
            (1.0 + S3 / 2, 1.5),
            (1.0 + S3 / 2, -1.5),
        ])

    def test_k2_coordinates(self):
        self.check_orbit(K2, [
            (1.0, 0.0),
            (1.0 - S3 / 2, -1.5 + S3),
            (1.0 - S3 / 2, 1.5 - S3),
        ], [
            (S3 - 2.0, 0.0),
            (1.0 - S3 / 2, 1.5),
            (1.0 - S3 / 2, -1.5),
        ])


class TestPeriods:
    def test_centroid_period_two(self):
        assert detect_period(regular_ngon(3), (0.0, 0.0), 6) == 2

    def test_k_points_period_three(self):
        for m in (K1, K2):
            assert detect_period(regular_ngon(3), m, 6, tol=1e-9) == 3

    def test_generic_point_aperiodic(self):
        assert detect_period(regular_ngon(3), (0.4, 0.2), 8) is None


class TestClosedForms:
    def test_calibration_constant(self):
        constant, errors = calibrate_ratio_convention()
        assert constant == 8.0
        assert errors[8.0] < 1e-9
        assert min(errors[c] for c in (1.0, 2.0, 4.0)) > 1e-3

    def test_raw_value_at_equilateral_centroid(self):
        assert abs(triangle_ratio_raw(regular_ngon(3), (0.0, 0.0)) - 8.0) < 1e-12

    def test_ratio_matches_oracle(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            t, m = random_nondegenerate_instance(rng)
            sp = extract_similarity(t, m)
            assert abs(triangle_ratio_closed_form(t, m) - sp.s) < 1e-9

    def test_cos_alpha_matches_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            t, m = random_nondegenerate_instance(rng)
            sp = extract_similarity(t, m)
            assert abs(triangle_cos_alpha_closed_form(t, m)
                       - math.cos(sp.alpha)) < 1e-9

    def test_triangle_only(self):
        with pytest.raises(ValueError):
            triangle_ratio_closed_form(regular_ngon(4), (0.0, 0.0))


class TestDescriptors:
    def test_similarity_invariance(self):
        rng = np.random.default_rng(4)
        p, _ = random_nondegenerate_instance(rng, n=6)
        d0 = shape_descriptor(p)
        scaled = Polygon(3.0 * p.vertices + [1.0, -2.0])
        rotated = rotate_about(p, (0.3, 0.4), 1.1)
        mirrored = Polygon((p.vertices * [1.0, -1.0])[::-1].copy())
        reversed_tr = Polygon(p.vertices[::-1].copy())
        shifted = Polygon(np.roll(p.vertices, 2, axis=0))
        for q in (scaled, rotated, mirrored, reversed_tr, shifted):
            assert descriptor_distance(d0, shape_descriptor(q)) < 1e-12

    def test_different_vertex_counts(self):
        a = shape_descriptor(regular_ngon(4))
        b = shape_descriptor(regular_ngon(5))
        assert descriptor_distance(a, b) == 2.0

    def test_distinct_shapes_separate(self):
        a = shape_descriptor(regular_ngon(4))
        b = shape_descriptor(Polygon([[0, 0], [3, 0], [3, 1], [0, 1]]))
        assert descriptor_distance(a, b) > 0.01

    def test_pentagon_orbit_mod_five(self):
        p = regular_ngon(5)
        rec = iterate(p, (2.0, 0.0), 10)
        assert rec.failure is None
        descs = [shape_descriptor(q) for q in rec.iterates]
        for i in range(11):
            for j in range(i + 1, 11):
                d = descriptor_distance(descs[i], descs[j])
                if (i - j) % 5 == 0:
                    assert d < 1e-6
                else:
                    assert d > 0.01
