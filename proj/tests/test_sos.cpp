// Sphere-optimization relaxations: eigenvalue values against closed forms and
// the power-iteration path, product ascent against known optima, gap formula.
#include <cmath>

#include <doctest.h>

#include "qdf/sos.hpp"
#include "qdf/state.hpp"

using namespace qdf;

namespace {

SphereProblem swap_problem(SphereVariant variant) {
  // objective: the projector onto the maximally entangled state of two qubits
  SphereProblem p;
  p.objective = max_entangled(2).matrix();
  p.local_dim = 2;
  p.fold = 2;
  p.variant = variant;
  return p;
}

SphereProblem diagonal_problem(SphereVariant variant) {
  // objective |00><00|: best product value is exactly 1 at alpha_j = e_0
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = 1.0;
  SphereProblem p;
  p.objective = m;
  p.local_dim = 2;
  p.fold = 2;
  p.variant = variant;
  return p;
}

}  // namespace

TEST_CASE("problem validation") {
  SphereProblem p = swap_problem(SphereVariant::SingleSphere);
  CHECK_NOTHROW(p.validate());

  SphereProblem bad = p;
  bad.objective(0, 1) = Cplx(0.0, 0.4);  // not Hermitian
  CHECK_THROWS_AS(bad.validate(), ArgumentError);

  SphereProblem big = p;
  big.objective *= 2.0;  // eigenvalue above one
  CHECK_THROWS_AS(big.validate(), ArgumentError);

  SphereProblem mismatched = p;
  mismatched.local_dim = 3;
  CHECK_THROWS_AS(mismatched.validate(), ArgumentError);
}

TEST_CASE("diagonal objective: relaxation and ascent both reach one") {
  for (SphereVariant v : {SphereVariant::IndependentSpheres, SphereVariant::SingleSphere}) {
    const SphereProblem p = diagonal_problem(v);
    for (int level : {2, 3}) {
      const RelaxResult r = relax(p, level);
      CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(validate_density(r.optimizer.matrix()).ok());
    }
    ProductOracleOptions opts;
    opts.restarts = 8;
    opts.iters = 100;
    opts.seed = 2;
    const OracleResult o = product_oracle(p, opts);
    CHECK(o.value == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("entangled projector: independent spheres cap at one half") {
  // max over product vectors of <ab|Phi><Phi|ab> = 1/2 (the largest Schmidt
  // coefficient squared of the maximally entangled state)
  const SphereProblem p = swap_problem(SphereVariant::IndependentSpheres);
  ProductOracleOptions opts;
  opts.restarts = 12;
  opts.iters = 200;
  opts.seed = 3;
  const OracleResult o = product_oracle(p, opts);
  CHECK(o.value == doctest::Approx(0.5).epsilon(1e-7));
  REQUIRE(o.unit_vectors.size() == 2);
  for (const Vec& v : o.unit_vectors) CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("entangled projector: single-sphere i.i.d. value is one half") {
  const SphereProblem p = swap_problem(SphereVariant::SingleSphere);
  ProductOracleOptions opts;
  opts.restarts = 20;
  opts.iters = 200;
  opts.seed = 4;
  const OracleResult o = product_oracle(p, opts);
  // tr(Phi (sigma x sigma)) = tr(sigma sigma^T)/2, maximized at 1/2 by real
  // pure states
  CHECK(o.value == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(o.sphere_state.rows() == 2);
  CHECK(std::abs(o.sphere_state.trace().real() - 1.0) < 1e-9);
}

TEST_CASE("relaxation dominates the ascent and tightens with the level") {
  const SphereProblem p = swap_problem(SphereVariant::SingleSphere);
  ProductOracleOptions opts;
  opts.restarts = 10;
  opts.iters = 150;
  opts.seed = 5;
  const OracleResult o = product_oracle(p, opts);
  double prev = std::numeric_limits<double>::infinity();
  for (int level : {2, 3, 4}) {
    const RelaxResult r = relax(p, level);
    CHECK(r.value <= prev + 1e-9);  // nonincreasing in the level
    CHECK(r.value >= o.value - 1e-8);
    prev = r.value;
  }
  // the projector lives in the symmetric subspace, so the base level is exact
  // at the unrelaxed maximum eigenvalue
  const RelaxResult base = relax(p, 2);
  CHECK(base.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("power iteration agrees with the dense eigenvalue") {
  const SphereProblem p = swap_problem(SphereVariant::SingleSphere);
  for (int level : {2, 3}) {
    const double dense = relax(p, level).value;
    const double slow = relax_power_value(p, level);
    CHECK(slow == doctest::Approx(dense).epsilon(1e-7));
  }
  const SphereProblem q = diagonal_problem(SphereVariant::IndependentSpheres);
  CHECK(relax_power_value(q, 2) == doctest::Approx(relax(q, 2).value).epsilon(1e-7));
}

TEST_CASE("gap bound formula") {
  CHECK(gap_bound(2, 2, 4) ==
        doctest::Approx(std::sqrt(std::log(2.0) / 4.0)).epsilon(1e-12));
  CHECK(gap_bound(3, 4, 5) ==
        doctest::Approx(std::sqrt(4.0 * std::log(4.0) / 4.0)).epsilon(1e-12));
  CHECK_THROWS_AS(gap_bound(2, 2, 2), ArgumentError);  // no slack at the base level
}

TEST_CASE("sandwich report wires the checks together") {
  const SphereProblem p = swap_problem(SphereVariant::SingleSphere);
  ProductOracleOptions opts;
  opts.restarts = 15;
  opts.iters = 150;
  opts.seed = 6;
  const SandwichReport rep = sandwich_check(p, 4, opts);
  CHECK(rep.level == 4);
  CHECK(rep.lower_ok);
  CHECK(rep.gap_ok);
  CHECK_FALSE(rep.guarantee_conditional);
  CHECK(rep.relax_value >= rep.oracle_value - 1e-8);
  CHECK(rep.relax_value - rep.oracle_value <= rep.gap_bound_value + 1e-6);

  SphereProblem flagged = p;
  flagged.locc_flag = true;
  const SandwichReport rep2 = sandwich_check(flagged, 3, opts);
  CHECK(rep2.guarantee_conditional);
}

TEST_CASE("oracle determinism in the seed") {
  const SphereProblem p = swap_problem(SphereVariant::SingleSphere);
  ProductOracleOptions opts;
  opts.restarts = 5;
  opts.iters = 80;
  opts.seed = 9;
  const OracleResult a = product_oracle(p, opts);
  const OracleResult b = product_oracle(p, opts);
  CHECK(a.value == b.value);
}

TEST_CASE("relaxation dimension cap") {
  const SphereProblem p = swap_problem(SphereVariant::SingleSphere);
  CHECK_THROWS_AS(relax(p, 13), ResourceError);
}
