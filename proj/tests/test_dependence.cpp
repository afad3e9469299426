#include <cmath>

#include "dbnad/dependence.hpp"
#include "dbnad/error.hpp"
#include "dbnad/partial_corr.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace dbnad;

TEST_SUITE("dependence") {
  TEST_CASE("recursion agrees with the precision matrix") {
    Rng rng(5);
    for (int rep = 0; rep < 100; ++rep) {
      const int n = 3 + rep % 4;
      const Matrix R = oracle::random_correlation(n, rng);
      std::vector<int> given;
      for (int k = 2; k < n; ++k) given.push_back(k);
      CHECK(std::abs(partial_corr_recursive(R, 0, 1, given) - long_run_partial(R, 0, 1, given)) < 1e-10);
    }
  }

  TEST_CASE("drop and add are inverse") {
    const double r = 0.3, a = -0.4, b = 0.6;
    CHECK(recursion_drop(recursion_add(r, a, b), a, b) == doctest::Approx(r).epsilon(1e-14));
    CHECK_THROWS(recursion_add(0.1, 1.0, 0.2));
  }

  TEST_CASE("partial of a 2x2 matrix is the correlation") {
    Matrix R(2, 2);
    R << 1.0, 0.35, 0.35, 1.0;
    CHECK(long_run_partial(R, 0, 1, {}) == doctest::Approx(0.35));
  }

  TEST_CASE("assembly matches the structural-equation oracle") {
    Rng rng(17);
    for (int rep = 0; rep < 50; ++rep) {
      const int n = 2 + rep % 5;
      const Dag g = oracle::random_dag(n, 0.6, rng);
      std::vector<double> vol(n);
      for (auto& v : vol) v = uniform01(rng);
      const auto ordering = topological_order(g, vol);
      auto partials = partial_layout(g, ordering);
      for (auto& np : partials) {
        np.rho.resize(np.parents.size());
        for (auto& c : np.rho) c = -0.85 + 1.7 * uniform01(rng);
      }
      const Matrix R = assemble_correlation(g, ordering, partials);
      const Matrix O = oracle::sem_correlation(g, ordering, partials);
      CHECK((R - O).cwiseAbs().maxCoeff() < 1e-8);
      // The requested partials are reproduced.
      for (int i = 0; i < n; ++i)
        for (std::size_t k = 0; k < partials[i].parents.size(); ++k) {
          const std::span<const int> given(partials[i].parents.data(), k);
          CHECK(long_run_partial(R, i, partials[i].parents[k], given) ==
                doctest::Approx(partials[i].rho[k]).epsilon(1e-8));
        }
    }
  }

  TEST_CASE("empty graph assembles to the identity") {
    const Dag g(4);
    const std::vector<int> ord{0, 1, 2, 3};
    const auto partials = partial_layout(g, ord);
    CHECK(assemble_correlation(g, ord, partials).isIdentity());
  }

  TEST_CASE("assembly rejects partials that do not match the graph") {
    const std::vector<Edge> e{{0, 1}};
    const Dag g = Dag::from_edges(2, e);
    const std::vector<int> ord{0, 1};
    auto partials = partial_layout(g, ord);
    CHECK_THROWS_AS(assemble_correlation(g, ord, partials), StructuralError);
    partials[1].rho = {1.5};
    CHECK_THROWS_AS(assemble_correlation(g, ord, partials), NumericError);
  }

  TEST_CASE("GARCH and DCC steps") {
    const GarchParams gp{0.1, 0.8, 2.0};
    CHECK(garch_step(1.5, 1.0, gp) == doctest::Approx(0.1 * 2.0 + 0.1 * 2.25 + 0.8 * 1.0));
    DccParams dp;
    dp.a_c = 0.2;
    dp.b_c = 0.7;
    CHECK(dcc_step(0.5, -0.2, 0.3, dp) == doctest::Approx(0.1 * 0.3 + 0.2 * -0.2 + 0.7 * 0.5));
    dp.a_c = 1.0;
    dp.b_c = 0.0;
    CHECK(dcc_step(0.0, 1.0, 0.0, dp) == 1.0 - kPartialFloor);
  }

  TEST_CASE("sample partial correlation without conditioning is the uncentred correlation") {
    Vector x1(2), x2(2);
    x1 << 1.0, 2.0;
    x2 << -1.0, 0.5;
    const Matrix S = Matrix::Identity(2, 2);
    const std::vector<ReturnObservation> w{{&x1, &S}, {&x2, &S}};
    const double expected = (1.0 * 2.0 - 1.0 * 0.5) / std::sqrt((1.0 + 1.0) * (4.0 + 0.25));
    CHECK(sample_partial_corr(w, 0, 1, {}) == doctest::Approx(expected));
  }

  TEST_CASE("sample partial correlation removes the conditioning variable") {
    // With Sigma = I the regression coefficients vanish and conditioning does
    // nothing; with x_j = x_k the residual of j is 0.
    Vector x(3);
    x << 1.0, 0.5, 0.5;
    Matrix S = Matrix::Identity(3, 3);
    const std::vector<ReturnObservation> w{{&x, &S}};
    const std::vector<int> given{2};
    CHECK(sample_partial_corr(w, 0, 1, given) == doctest::Approx(1.0));
    S(1, 2) = S(2, 1) = 0.999999;
    S(1, 1) = S(2, 2) = 1.0;
    CHECK(std::abs(sample_partial_corr(w, 0, 1, given)) <= 1.0);
  }

  TEST_CASE("static dynamics reproduce the long-run correlation") {
    Rng rng(9);
    const int n = 4;
    const Matrix Rbar = oracle::random_correlation(n, rng);
    Dag g(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
    std::vector<GarchParams> garch(n, GarchParams{0.0, 0.0, 1.0});
    LongRunPartials lr(Rbar);
    const CorrState s1 = initial_dependence(g, garch, lr);
    CHECK((s1.R - Rbar).cwiseAbs().maxCoeff() < 1e-7);
    DccParams dcc;
    dcc.a_c = 0.0;
    dcc.b_c = 0.0;
    dcc.r_bar = Rbar;
    Vector x = Vector::Ones(n);
    const std::vector<ReturnObservation> w{{&x, &s1.sigma}, {&x, &s1.sigma}};
    const CorrState s2 = evolve_dependence(s1, g, w, garch, dcc, lr);
    CHECK((s2.R - Rbar).cwiseAbs().maxCoeff() < 1e-7);
  }

  TEST_CASE("coordinates carry over and new ones start at their long-run value") {
    Rng rng(21);
    const int n = 3;
    const Matrix Rbar = oracle::random_correlation(n, rng);
    const std::vector<Edge> e1{{0, 1}};
    const Dag g1 = Dag::from_edges(n, e1);
    std::vector<GarchParams> garch(n, GarchParams{0.0, 0.0, 1.0});
    LongRunPartials lr(Rbar);
    CorrState prev = initial_dependence(g1, garch, lr);
    prev.nodes[1].rho[0] = 0.123;  // pretend the coordinate has drifted
    DccParams dcc;
    dcc.a_c = 0.0;
    dcc.b_c = 1.0;
    dcc.r_bar = Rbar;
    Vector x = Vector::Ones(n);
    const std::vector<ReturnObservation> w{{&x, &prev.sigma}};
    const std::vector<Edge> e2{{0, 1}, {2, 1}};
    const Dag g2 = Dag::from_edges(n, e2);
    const CorrState next = evolve_dependence(prev, g2, w, garch, dcc, lr);
    const auto& np = next.nodes[1];
    REQUIRE(np.parents.size() == 2);
    // Equal volatilities: node 0 precedes node 2 in the order.
    CHECK(np.parents[0] == 0);
    CHECK(np.rho[0] == doctest::Approx(0.123));
    const std::vector<int> given{0};
    CHECK(np.rho[1] == doctest::Approx(long_run_partial(Rbar, 1, 2, given)));
    const CorrState reset = evolve_dependence(prev, g2, w, garch, dcc, lr, true);
    CHECK(reset.nodes[1].rho[0] == doctest::Approx(Rbar(0, 1)));
  }

  TEST_CASE("long-run partial cache returns identical values") {
    Rng rng(2);
    const Matrix R = oracle::random_correlation(5, rng);
    LongRunPartials lr(R);
    const std::vector<int> g1{2, 3}, g2{3, 2};
    const double a = lr.get(0, 1, g1);
    CHECK(lr.get(1, 0, g2) == a);
    CHECK(a == doctest::Approx(long_run_partial(R, 0, 1, g1)));
  }
}
