#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fracfem/mesh.hpp"

using namespace fracfem;

TEST_CASE("interval mesh is uniform and conforming") {
  const auto m = build_quasi_uniform(Domain::interval(-1.0, 1.0), 0.25);
  CHECK(m.dim == 1);
  CHECK(m.n_elements() == 8);
  CHECK(m.vertices.size() == 9);
  CHECK(m.h_mesh == doctest::Approx(0.25).epsilon(1e-14));
  for (const auto& e : m.elements)
    CHECK(m.vertices[e[1]][0] - m.vertices[e[0]][0] == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(!m.check_conforming().has_value());
  // exactly the two endpoints are boundary vertices
  CHECK(std::count(m.boundary_vertex.begin(), m.boundary_vertex.end(), 1) == 2);
}

TEST_CASE("unit square mesh covers the domain and respects h") {
  for (const double h : {0.5, 0.25, 0.125}) {
    const auto m = build_quasi_uniform(Domain::unit_square(), h);
    CHECK(m.dim == 2);
    CHECK(m.h_mesh <= h * (1 + 1e-12));
    CHECK(!m.check_conforming().has_value());
    const double area =
        std::accumulate(m.elem_measure.begin(), m.elem_measure.end(), 0.0);
    CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.shape_regularity() < 5.0);
  }
}

TEST_CASE("polygon meshing: L-shape works, degenerate input throws") {
  const std::vector<Vec2> ell{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  const auto m = build_quasi_uniform(Domain::make_polygon(ell), 0.4);
  CHECK(!m.check_conforming().has_value());
  const double area = std::accumulate(m.elem_measure.begin(), m.elem_measure.end(), 0.0);
  CHECK(area == doctest::Approx(3.0).epsilon(1e-12));

  CHECK_THROWS(Domain::make_polygon({{0, 0}, {1, 0}, {2, 0}}));              // zero area
  CHECK_THROWS(Domain::make_polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}));      // self-intersecting
}

TEST_CASE("grading bound: h_T <= max(h dist^{(mu-1)/mu}, h^mu)") {
  for (const int dim : {1, 2}) {
    const Domain dom = dim == 1 ? Domain::interval(-1, 1) : Domain::unit_square();
    for (const double h : {0.25, 0.125}) {
      const double mu = 2.0;
      const auto m = build_graded(dom, GradingSpec{h, mu, 1.0});
      CHECK(!m.check_conforming().has_value());
      for (std::size_t e = 0; e < m.n_elements(); ++e) {
        const double cap =
            std::max(h * std::pow(m.elem_boundary_dist[e], (mu - 1) / mu), std::pow(h, mu));
        CHECK(m.elem_diameter[e] <= cap * (1 + 1e-9));
      }
      CHECK(m.shape_regularity() < 5.0);
    }
  }
}

TEST_CASE("mu = 1 grading reproduces the quasi-uniform mesh size") {
  CHECK(build_graded(Domain::unit_square(), GradingSpec{0.25, 1.0, 1.0}).n_elements() ==
        build_quasi_uniform(Domain::unit_square(), 0.25).n_elements());
  CHECK(build_graded(Domain::interval(-1, 1), GradingSpec{0.25, 1.0, 1.0}).n_elements() ==
        build_quasi_uniform(Domain::interval(-1, 1), 0.25).n_elements());
}

TEST_CASE("graded dof count grows like h^-n up to a log factor") {
  // N(h/2)/N(h) -> 4 |log| -> the log2-ratio must decrease toward 2
  std::vector<double> logratio;
  std::size_t prev = 0;
  for (const double h : {0.5, 0.25, 0.125, 0.0625}) {
    const auto m = build_graded(Domain::unit_square(), GradingSpec{h, 2.0, 1.0});
    const std::size_t nv = m.vertices.size();
    if (prev) logratio.push_back(std::log2(double(nv) / double(prev)));
    prev = nv;
  }
  for (std::size_t k = 1; k < logratio.size(); ++k) CHECK(logratio[k] < logratio[k - 1]);
  CHECK(logratio.back() < 2.6);
}

TEST_CASE("point location and P1 evaluation reproduce affine functions") {
  const auto m = build_graded(Domain::unit_square(), GradingSpec{0.25, 2.0, 1.0});
  auto lin = [](const Vec2& p) { return 0.3 + 1.7 * p[0] - 0.4 * p[1]; };
  std::vector<double> vals(m.vertices.size());
  for (std::size_t v = 0; v < m.vertices.size(); ++v) vals[v] = lin(m.vertices[v]);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const Vec2 p{(i + 0.5) / 20.0, (j + 0.5) / 20.0};
      REQUIRE(m.locate(p).has_value());
      CHECK(m.eval_p1(vals, p) == doctest::Approx(lin(p)).epsilon(1e-12));
    }
  CHECK(!m.locate({1.5, 0.5}).has_value());
  CHECK(m.eval_p1(vals, {1.5, 0.5}) == 0.0);
}

TEST_CASE("mesh JSON round trip") {
  const auto m = build_quasi_uniform(Domain::unit_square(), 0.5);
  const auto m2 = SimplicialMesh::from_json(m.to_json());
  REQUIRE(m2.n_elements() == m.n_elements());
  REQUIRE(m2.vertices.size() == m.vertices.size());
  for (std::size_t v = 0; v < m.vertices.size(); ++v) {
    CHECK(m2.vertices[v][0] == m.vertices[v][0]);
    CHECK(m2.vertices[v][1] == m.vertices[v][1]);
  }
  for (std::size_t e = 0; e < m.n_elements(); ++e) CHECK(m2.elements[e] == m.elements[e]);
  CHECK(m2.h_mesh == doctest::Approx(m.h_mesh).epsilon(1e-14));
}

TEST_CASE("pair classification") {
  const auto m = build_quasi_uniform(Domain::interval(0, 1), 0.25);
  CHECK(m.pair_classification(0, 0) == PairClass::identical);
  CHECK(m.pair_classification(0, 1) == PairClass::shared_vertex);
  CHECK(m.pair_classification(0, 2) == PairClass::disjoint);
  const auto sq = build_quasi_uniform(Domain::unit_square(), 0.5);
  int n_facet = 0, n_vertex = 0;
  for (std::size_t e = 1; e < sq.n_elements(); ++e) {
    const auto c = sq.pair_classification(0, int(e));
    n_facet += c == PairClass::shared_facet;
    n_vertex += c == PairClass::shared_vertex;
    CHECK(c == sq.pair_classification(int(e), 0));
  }
  CHECK(n_facet >= 2);
  CHECK(n_vertex >= 1);
}
