// Entropic quantities against eigendecomposition and entropy-combination
// oracles computed directly in the test.
#include <cmath>

#include <doctest.h>

#include "qdf/entropy.hpp"
#include "qdf/state.hpp"

using namespace qdf;

namespace {

double entropy_oracle(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  double s = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam > 1e-12) s -= lam * std::log2(lam);
  }
  return s;
}

double marginal_entropy(const DensityOperator& rho, const std::vector<int>& keep) {
  return entropy_oracle(partial_trace(rho, keep).matrix());
}

}  // namespace

TEST_CASE("von Neumann entropy matches the eigenvalue oracle") {
  const DensityOperator pure = random_state({2, 2}, Ensemble::HaarPure, 1);
  CHECK(von_neumann(pure) == doctest::Approx(0.0).epsilon(1e-10));

  const DensityOperator mixed({2}, Mat::Identity(2, 2) * 0.5);
  CHECK(von_neumann(mixed) == doctest::Approx(1.0).epsilon(1e-12));

  for (int seed : {2, 3, 4}) {
    const DensityOperator rho = random_state({2, 3}, Ensemble::HilbertSchmidt, seed);
    CHECK(von_neumann(rho) == doctest::Approx(entropy_oracle(rho.matrix())).epsilon(1e-10));
  }
}

TEST_CASE("relative entropy identities") {
  const DensityOperator rho = random_state({2, 2}, Ensemble::HilbertSchmidt, 5);
  const DensityOperator sigma = random_state({2, 2}, Ensemble::HilbertSchmidt, 6);

  const RelEntropy self = relative_entropy(rho, rho);
  CHECK_FALSE(self.infinite);
  CHECK(std::abs(self.bits) < 1e-9);

  // D(rho || I/d) = log2 d - S(rho)
  const DensityOperator mixed({2, 2}, Mat::Identity(4, 4) / 4.0);
  const RelEntropy vs_mixed = relative_entropy(rho, mixed);
  CHECK_FALSE(vs_mixed.infinite);
  CHECK(vs_mixed.bits == doctest::Approx(2.0 - von_neumann(rho)).epsilon(1e-9));

  const RelEntropy gen = relative_entropy(rho, sigma);
  CHECK_FALSE(gen.infinite);
  CHECK(gen.bits > 0.0);  // distinct states

  // support violation: orthogonal pure states
  Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  const RelEntropy inf = relative_entropy(DensityOperator({2}, p0), DensityOperator({2}, p1));
  CHECK(inf.infinite);
}

TEST_CASE("classical entropies") {
  RVec p(2), q(2);
  p << 0.5, 0.5;
  q << 0.25, 0.75;
  CHECK(shannon(p) == doctest::Approx(1.0).epsilon(1e-12));
  const double want = 0.5 * std::log2(0.5 / 0.25) + 0.5 * std::log2(0.5 / 0.75);
  CHECK(classical_relative_entropy(p, q).bits == doctest::Approx(want).epsilon(1e-12));

  RVec supp(2);
  supp << 1.0, 0.0;
  CHECK_FALSE(classical_relative_entropy(supp, p).infinite);
  CHECK(classical_relative_entropy(p, supp).infinite);
}

TEST_CASE("mutual information against the entropy-combination oracle") {
  const DensityOperator prod =
      tensor(random_state({2}, Ensemble::HilbertSchmidt, 7),
             random_state({2}, Ensemble::HilbertSchmidt, 8));
  CHECK(mutual_information(prod, {0}) == doctest::Approx(0.0).epsilon(1e-10));

  CHECK(mutual_information(max_entangled(2), {0}) == doctest::Approx(2.0).epsilon(1e-9));

  const DensityOperator rho = random_state({2, 2, 2}, Ensemble::HilbertSchmidt, 9);
  const double want = marginal_entropy(rho, {0}) + marginal_entropy(rho, {1, 2}) -
                      entropy_oracle(rho.matrix());
  CHECK(mutual_information(rho, {0}) == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("conditional mutual information oracle and nonnegativity") {
  for (int seed : {10, 11, 12, 13}) {
    const DensityOperator rho = random_state({2, 2, 2}, Ensemble::HilbertSchmidt, seed);
    const double got = conditional_mutual_information(rho, {0}, {1}, {2});
    // I(A;B|C) = S(AC) + S(BC) - S(ABC) - S(C)
    const double want = marginal_entropy(rho, {0, 2}) + marginal_entropy(rho, {1, 2}) -
                        entropy_oracle(rho.matrix()) - marginal_entropy(rho, {2});
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
    CHECK(got >= -1e-9);  // strong subadditivity
  }
}

TEST_CASE("multipartite mutual information oracle") {
  const DensityOperator rho = random_state({2, 2, 2}, Ensemble::HilbertSchmidt, 14);
  const double got = multipartite_mutual_information(rho, {{0}, {1}, {2}});
  const double want = marginal_entropy(rho, {0}) + marginal_entropy(rho, {1}) +
                      marginal_entropy(rho, {2}) - entropy_oracle(rho.matrix());
  CHECK(got == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("pinsker inequality report") {
  for (int seed : {15, 16, 17}) {
    const DensityOperator rho = random_state({2, 2}, Ensemble::HilbertSchmidt, seed);
    const DensityOperator sigma = random_state({2, 2}, Ensemble::HilbertSchmidt, seed + 100);
    const PinskerReport rep = pinsker_check(rho, sigma);
    CHECK(rep.holds);
    // independent recomputation of the right-hand side
    const double td = trace_distance(rho, sigma);
    CHECK(rep.rhs_bits == doctest::Approx(td * td / (2.0 * std::log(2.0))).epsilon(1e-10));
  }
}
