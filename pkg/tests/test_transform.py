import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cpai import parse
from cpai._intlinalg import det_int, matmul
from cpai._projective import chordal_distance
from cpai.laurent import evaluate, monomial_map_point, mul_monomial, to_text
from cpai.polytope import newton_polytope, scale_to_normal
from cpai.transform import (
    CompletionInfeasible,
    MonomialTransform,
    StructuralWarning,
    build_face_transform,
    hermite_normal_form,
    pullback_direction,
    pure_axis_gaps,
    pushforward_direction,
    reduce_to_full_dimension,
    transform_polynomial,
    unimodular_completion,
)

from conftest import VARS2, VARS3, random_torus_point


class TestHermiteNormalForm:
    def test_identity(self):
        H, U = hermite_normal_form([[1, 0], [0, 1]])
        assert H == [[1, 0], [0, 1]]
        assert U == [[1, 0], [0, 1]]

    def test_two_by_two(self):
        M = [[2, 4], [1, 3]]
        H, U = hermite_normal_form(M)
        assert matmul(M, U) == H
        assert abs(det_int(U)) == 1
        assert abs(det_int(H)) == 2
        assert H[0][1] == 0  # lower triangular

    def test_single_row_gcd(self):
        H, U = hermite_normal_form([[6, 10]])
        assert H == [[2, 0]]
        assert abs(det_int(U)) == 1

    @given(
        st.integers(1, 4),
        st.integers(1, 4),
        st.data(),
    )
    @settings(max_examples=60, deadline=None)
    def test_random_properties(self, m, n, data):
        M = [
            [data.draw(st.integers(-9, 9)) for _ in range(n)] for _ in range(m)
        ]
        H, U = hermite_normal_form(M)
        assert matmul(M, U) == H
        assert abs(det_int(U)) == 1


def _saturation_index(cols):
    """Independent oracle: gcd of all maximal minors of the column matrix."""
    import math

    d = len(cols[0])
    k = len(cols)
    g = 0
    for rows in itertools.combinations(range(d), k):
        minor = det_int([[cols[j][i] for j in range(k)] for i in rows])
        g = math.gcd(g, abs(minor))
    return g


class TestUnimodularCompletion:
    def test_last_basis_vector(self):
        N = unimodular_completion([(0, 0, 1)])
        assert [row[2] for row in N] == [0, 0, 1]
        assert abs(det_int(N)) == 1

    def test_axis_normals_give_identity(self):
        N = unimodular_completion([(0, 1, 0), (0, 0, 1)])
        assert N == ((1, 0, 0), (0, 1, 0), (0, 0, 1))

    def test_apex_normal_choice(self):
        N = unimodular_completion([(1, 0, 0), (0, 1, 0), (-1, 0, -1)])
        NT = tuple(tuple(r) for r in zip(*N))
        assert NT == ((1, 0, 0), (0, 1, 0), (-1, 0, -1))

    def test_non_primitive_column_infeasible(self):
        with pytest.raises(CompletionInfeasible) as err:
            unimodular_completion([(2, 0)])
        assert err.value.saturation_index == 2

    def test_primitive_column_succeeds(self):
        N = unimodular_completion([(2, 1)])
        assert abs(det_int(N)) == 1
        assert [row[1] for row in N] == [2, 1]

    def test_dependent_columns_rejected(self):
        with pytest.raises(ValueError, match="dependent"):
            unimodular_completion([(1, 2), (2, 4)])

    def test_random_against_minor_gcd_oracle(self):
        rng = np.random.default_rng(41)
        feasible = infeasible = 0
        for _ in range(300):
            d = int(rng.integers(2, 5))
            k = int(rng.integers(1, d + 1))
            cols = [
                tuple(int(v) for v in rng.integers(-4, 5, size=d))
                for _ in range(k)
            ]
            index = _saturation_index(cols)
            if index == 0:
                continue
            if index == 1:
                N = unimodular_completion(cols)
                assert abs(det_int(N)) == 1
                for j, c in enumerate(cols):
                    assert tuple(row[d - k + j] for row in N) == c
                feasible += 1
            else:
                with pytest.raises(CompletionInfeasible) as err:
                    unimodular_completion(cols)
                assert err.value.saturation_index == index
                infeasible += 1
        assert feasible > 50 and infeasible > 10


def _face_by_vertices(P, vertices):
    return P.face_by_vertices(vertices)


class TestBuildFaceTransform:
    def test_axis_edge_gets_identity(self, pinched_edge):
        P = newton_polytope(pinched_edge)
        F = _face_by_vertices(P, [(0, 0, 0), (2, 0, 0)])
        T = build_face_transform(F)
        assert T.matrix == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        assert T.unimodular and T.codim == 2

    def test_apex_fails_modified_simple(self, pyramid):
        P = newton_polytope(pyramid)
        Q, kappa = scale_to_normal(P)
        apex = next(f for f in P.face_lattice() if f.vertices == ((0, 0, 1),))
        with pytest.raises(ValueError, match="modified simple"):
            build_face_transform(apex)

    def test_facet_transform_last_column_is_normal(self, paraboloid, pinched_edge):
        for H in (paraboloid, pinched_edge):
            P = newton_polytope(H)
            for F in P.face_lattice():
                if F.codim != 1:
                    continue
                T = build_face_transform(F)
                normal = F.inward_normals()[0]
                assert tuple(row[-1] for row in T.matrix) == normal
                anchor = F.vertex_anchor
                for m in P.lattice_points():
                    value = sum(
                        n * (a - b) for n, a, b in zip(normal, m, anchor)
                    )
                    assert value >= 0
                    assert (value == 0) == (m in set(F.lattice_points))

    def test_transformed_exponents_vanish_exactly_on_face(self, pinched_edge):
        P = newton_polytope(pinched_edge)
        for F in P.face_lattice():
            if not F.is_proper or F.dim < 1:
                continue
            T = build_face_transform(F)
            k = T.codim
            NT = np.array(T.matrix_transpose)
            face_points = set(F.lattice_points)
            for m in P.lattice_points():
                image = NT @ (np.array(m) - np.array(F.vertex_anchor))
                tail = image[-k:]
                assert (tail >= 0).all()
                assert (not tail.any()) == (m in face_points)


class TestTransformPolynomial:
    def test_pyramid_apex_shift(self, pyramid):
        n_t = ((1, 0, 0), (0, 1, 0), (-1, 0, -1))
        N = tuple(tuple(r) for r in zip(*n_t))
        T = MonomialTransform.from_matrix(N, codim=3)
        with pytest.warns(StructuralWarning, match="y_2"):
            hbar = transform_polynomial(pyramid, (0, 0, 1), T)
        assert hbar == parse("z + x + y*z + x*y + 1", VARS3)
        assert pure_axis_gaps(hbar, 3) == [2]

    def test_identity_no_shift(self, pinched_edge):
        T = MonomialTransform.from_matrix(
            ((1, 0, 0), (0, 1, 0), (0, 0, 1)), codim=2
        )
        assert transform_polynomial(pinched_edge, (0, 0, 0), T) == pinched_edge

    def test_commutes_with_evaluation(self, pinched_edge):
        P = newton_polytope(pinched_edge)
        F = _face_by_vertices(P, [(0, 0, 0), (2, 0, 0)])
        T = build_face_transform(F)
        hbar = transform_polynomial(pinched_edge, F.vertex_anchor, T)
        shifted = mul_monomial(
            pinched_edge, tuple(-v for v in F.vertex_anchor)
        )
        rng = np.random.default_rng(7)
        for _ in range(25):
            w = random_torus_point(rng, 3)
            lhs = evaluate(hbar, w)
            rhs = evaluate(shifted, monomial_map_point(T.matrix, w))
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))

    def test_anchor_must_be_supported(self, pyramid):
        T = MonomialTransform.from_matrix(
            ((1, 0, 0), (0, 1, 0), (0, 0, 1)), codim=1
        )
        with pytest.raises(ValueError, match="anchor"):
            transform_polynomial(pyramid, (5, 5, 5), T)


class TestDirections:
    def test_identity_pushforward(self):
        T = MonomialTransform.from_matrix(((1, 0), (0, 1)), codim=1)
        assert pushforward_direction(T, (3, 4j)) == (3, 4j)

    def test_pyramid_direction(self):
        n_t = ((1, 0, 0), (0, 1, 0), (-1, 0, -1))
        N = tuple(tuple(r) for r in zip(*n_t))
        T = MonomialTransform.from_matrix(N, codim=3)
        image = pushforward_direction(T, (0, 0, 1))
        assert chordal_distance(image, (0, 0, 1)) <= 1e-15

    def test_pullback_inverts_pushforward(self):
        rng = np.random.default_rng(9)
        N = ((2, 1, 0), (1, 1, 0), (3, 0, 1))
        T = MonomialTransform.from_matrix(N, codim=1)
        for _ in range(100):
            r = tuple(rng.normal(size=3) + 1j * rng.normal(size=3))
            round_trip = pullback_direction(T, pushforward_direction(T, r))
            assert chordal_distance(round_trip, r) <= 1e-12

    def test_zero_direction_rejected(self):
        T = MonomialTransform.from_matrix(((1, 0), (0, 1)), codim=1)
        with pytest.raises(ValueError):
            pushforward_direction(T, (0, 0))


class TestReduction:
    def test_full_dimensional_unchanged(self, quadrilateral):
        H, info = reduce_to_full_dimension(quadrilateral)
        assert info is None and H == quadrilateral

    def test_line_support_reduces_to_one_variable(self):
        H = parse("1 + x*y + x^2*y^2", VARS2)
        reduced, info = reduce_to_full_dimension(H)
        assert reduced.dimension == 1
        assert reduced == parse("1 + t + t^2", ["t"])
        assert info["basis"] == ((1, 1),)
        assert info["anchor"] == (0, 0)

    def test_monomial_rejected(self):
        with pytest.raises(ValueError):
            reduce_to_full_dimension(parse("x*y", VARS2))
