#include <gtest/gtest.h>

#include <cmath>

#include "fluxdiff/geometry.hpp"

namespace fluxdiff {
namespace {

template <int Dim>
StructuredMesh<Dim> single_element(std::function<Vec<Dim>(const Vec<Dim>&)> mapping = {}) {
  Vec<Dim> lo, hi;
  lo.fill(-1.0);
  hi.fill(1.0);
  std::array<int, Dim> dims;
  dims.fill(1);
  StructuredMesh<Dim> mesh = cartesian_mesh<Dim>(dims, lo, hi);
  mesh.mapping = std::move(mapping);
  return mesh;
}

TEST(Geometry, IdentityMap) {
  const auto op = lgl_operator(3);
  const auto m2 = compute_metrics_2d(single_element<2>(), op, 0);
  const auto m3 = compute_metrics_3d(single_element<3>(), op, 0);
  for (std::size_t i = 0; i < m2.J.size(); ++i) {
    EXPECT_NEAR(m2.J[i], 1.0, 1e-14);
    for (int n = 0; n < 2; ++n)
      for (int j = 0; j < 2; ++j) EXPECT_NEAR(m2.Ja[i][n][j], n == j ? 1.0 : 0.0, 1e-14);
  }
  for (std::size_t i = 0; i < m3.J.size(); ++i) {
    EXPECT_NEAR(m3.J[i], 1.0, 1e-14);
    for (int n = 0; n < 3; ++n)
      for (int j = 0; j < 3; ++j) EXPECT_NEAR(m3.Ja[i][n][j], n == j ? 1.0 : 0.0, 1e-13);
  }
}

TEST(Geometry, AffineMap2D) {
  // A = [[2, 0.5], [0.3, 1.5]], det = 2.85, (Ja)^n_j = J (A^{-1})_{nj}
  const auto mesh = single_element<2>([](const Vec<2>& X) {
    return Vec<2>{2.0 * X[0] + 0.5 * X[1] + 1.0, 0.3 * X[0] + 1.5 * X[1] - 2.0};
  });
  const auto m = compute_metrics_2d(mesh, lgl_operator(4), 0);
  const double expected[2][2] = {{1.5, -0.5}, {-0.3, 2.0}};
  for (std::size_t i = 0; i < m.J.size(); ++i) {
    EXPECT_NEAR(m.J[i], 2.85, 1e-13);
    for (int n = 0; n < 2; ++n)
      for (int j = 0; j < 2; ++j) EXPECT_NEAR(m.Ja[i][n][j], expected[n][j], 1e-13);
  }
}

TEST(Geometry, RotationMap3D) {
  const double c = std::cos(0.7), s = std::sin(0.7);
  // rotation about the z axis followed by rotation about x
  const double ca = std::cos(0.3), sa = std::sin(0.3);
  const double R[3][3] = {{c, -s, 0.0}, {ca * s, ca * c, -sa}, {sa * s, sa * c, ca}};
  const auto mesh = single_element<3>([R](const Vec<3>& X) {
    Vec<3> x{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) x[i] += R[i][j] * X[j];
    return x;
  });
  const auto m = compute_metrics_3d(mesh, lgl_operator(3), 0);
  for (std::size_t i = 0; i < m.J.size(); ++i) {
    EXPECT_NEAR(m.J[i], 1.0, 1e-13);
    // (Ja)^n_j = J (A^{-1})_{nj} = R_{jn}
    for (int n = 0; n < 3; ++n)
      for (int j = 0; j < 3; ++j) EXPECT_NEAR(m.Ja[i][n][j], R[j][n], 1e-13);
  }
}

TEST(Geometry, MetricIdentityForPolynomialMaps) {
  for (int p = 2; p <= 6; ++p) {
    const auto op = lgl_operator(p);
    const auto m2 = compute_metrics_2d(single_element<2>([](const Vec<2>& X) {
                                         return Vec<2>{X[0] + 0.1 * X[0] * X[1] * X[1], X[1] + 0.05 * X[0] * X[0]};
                                       }),
                                       op, 0);
    EXPECT_LT(metric_identity_residual<2>(m2, op), 1e-12);
    const auto m3 = compute_metrics_3d(single_element<3>([](const Vec<3>& X) {
                                         return Vec<3>{X[0] + 0.1 * X[1] * X[2], X[1] + 0.1 * X[0] * X[0] * X[2],
                                                       X[2] + 0.05 * X[0] * X[1]};
                                       }),
                                       op, 0);
    EXPECT_LT(metric_identity_residual<3>(m3, op), 1e-12);
  }
}

template <int Dim>
void check_sine_mesh(NodeFamily family) {
  std::array<int, Dim> dims;
  dims.fill(4);
  Vec<Dim> lo, hi;
  lo.fill(-5.0);
  hi.fill(5.0);
  const auto mesh = sine_perturbed_mesh<Dim>(dims, lo, hi, 0.1);
  for (int p : {3, 4}) {
    const auto op = make_operator(p, family);
    const auto g = build_geometry<Dim>(mesh, op);
    const int n1d = p + 1;
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const auto& el = g.elements[e];
      EXPECT_LT(metric_identity_residual<Dim>(el.metrics, op), 1e-12);
      for (double J : el.metrics.J) EXPECT_GT(J, 0.0);
      for (int dir = 0; dir < Dim; ++dir) {
        const int nb = mesh.neighbor(e, dir, 1);
        const auto& other = g.elements[nb];
        const bool wraps = mesh.element_index(e)[dir] == dims[dir] - 1;
        for (int f = 0; f < g.nodes_per_face(); ++f) {
          const auto& a = el.face_normals[dir][1][f];
          const auto& b = other.face_normals[dir][0][f];
          for (int j = 0; j < Dim; ++j) EXPECT_NEAR(a[j], -b[j], 1e-13);
          if (family == NodeFamily::lgl) {
            const auto& xa = el.x[face_volume_node<Dim>(dir, 1, f, n1d)];
            const auto& xb = other.x[face_volume_node<Dim>(dir, 0, f, n1d)];
            for (int j = 0; j < Dim; ++j) {
              const double shift = (wraps && j == dir) ? mesh.length(dir) : 0.0;
              EXPECT_NEAR(xa[j], xb[j] + shift, 1e-13);
            }
          }
        }
      }
    }
  }
}

TEST(Geometry, SineMeshLgl2D) { check_sine_mesh<2>(NodeFamily::lgl); }
TEST(Geometry, SineMeshLgl3D) { check_sine_mesh<3>(NodeFamily::lgl); }
TEST(Geometry, SineMeshGauss2D) { check_sine_mesh<2>(NodeFamily::gauss); }
TEST(Geometry, SineMeshGauss3D) { check_sine_mesh<3>(NodeFamily::gauss); }

TEST(Geometry, DeterminantMatchesDiagonalProductOnCartesian) {
  const auto mesh = cartesian_mesh<2>({3, 5}, {0.0, 0.0}, {1.0, 2.0});
  const auto g = build_geometry<2>(mesh, lgl_operator(3));
  for (const auto& el : g.elements)
    for (std::size_t i = 0; i < el.metrics.J.size(); ++i)
      EXPECT_NEAR(el.metrics.J[i], el.metrics.Ja[i][0][0] * el.metrics.Ja[i][1][1], 1e-13);
}

TEST(Geometry, AveragedDirection) {
  const auto mesh = cartesian_mesh<3>({2, 2, 2}, {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
  const auto g = build_geometry<3>(mesh, lgl_operator(3));
  const auto& m = g.elements[0].metrics;
  const double scale = 0.25 * 0.25;  // (h/2)^{d-1}, h = 1/2
  for (int i = 0; i < 64; i += 7)
    for (int k = 0; k < 64; k += 5)
      for (int n = 0; n < 3; ++n) {
        const auto a = averaged_direction<3>(m, i, k, n);
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(a[j], n == j ? scale : 0.0, 1e-15);
      }
  const auto curved = build_geometry<3>(sine_perturbed_mesh<3>({2, 2, 2}, {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}),
                                        lgl_operator(3));
  const auto& mc = curved.elements[1].metrics;
  for (int i = 0; i < 64; ++i)
    for (int k = 0; k < 64; ++k) {
      EXPECT_EQ(averaged_direction<3>(mc, i, k, 1), averaged_direction<3>(mc, k, i, 1));
      if (i == k) EXPECT_EQ(averaged_direction<3>(mc, i, i, 2), mc.Ja[i][2]);
    }
}

TEST(Geometry, Errors) {
  const auto reflected = single_element<2>([](const Vec<2>& X) { return Vec<2>{-X[0], X[1]}; });
  try {
    compute_metrics_2d(reflected, lgl_operator(2), 0);
    FAIL();
  } catch (const MeshError& e) {
    EXPECT_NE(std::string(e.what()).find("element 0"), std::string::npos);
  }
  EXPECT_THROW(cartesian_mesh<2>({0, 2}, {0.0, 0.0}, {1.0, 1.0}), MeshError);
  EXPECT_THROW(compute_metrics_2d(single_element<2>(), lgl_operator(2), 3), MeshError);
}

TEST(Geometry, Neighbours) {
  const auto mesh = cartesian_mesh<2>({3, 4}, {0.0, 0.0}, {1.0, 1.0});
  EXPECT_EQ(mesh.neighbor(0, 0, 0), 2);
  EXPECT_EQ(mesh.neighbor(0, 1, 0), 9);
  EXPECT_EQ(mesh.neighbor(11, 0, 1), 9);
  EXPECT_EQ(mesh.neighbor(11, 1, 1), 2);
}

}  // namespace
}  // namespace fluxdiff
