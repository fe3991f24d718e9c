#include <doctest.h>

#include <cmath>
#include <random>

#include "riccati/core.hpp"
#include "riccati/error.hpp"

using namespace riccati;

namespace {

Sl2Element random_sl2(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (;;) {
    Sl2Element m{u(rng), u(rng), u(rng), u(rng)};
    const double d = m.det();
    if (d > 0.1) return m.renormalized();
    if (d < -0.1) return Sl2Element{m.beta, m.alpha, m.delta, m.gamma}.renormalized();
  }
}

ProjectivePoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  return ProjectivePoint::finite(u(rng));
}

}  // namespace

TEST_CASE("projective point canonical form") {
  const ProjectivePoint a(3.0, 1.0);
  CHECK(a.p() * a.p() + a.q() * a.q() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(a.value() == doctest::Approx(3.0).epsilon(1e-15));
  const ProjectivePoint b(-6.0, -2.0);
  CHECK(a.approx_equal(b));
  const ProjectivePoint inf(-5.0, 0.0);
  CHECK(inf.p() == 1.0);
  CHECK(inf.q() == 0.0);
  CHECK(std::isinf(inf.value()));
  CHECK(inf.to_string() == "inf");
  CHECK_THROWS_AS(ProjectivePoint(0.0, 0.0), Error);
}

TEST_CASE("canonicalization is idempotent") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const ProjectivePoint a(u(rng), u(rng));
    const ProjectivePoint b(a.p(), a.q());
    CHECK(a.p() == b.p());
    CHECK(a.q() == b.q());
  }
}

TEST_CASE("moebius action examples") {
  CHECK(moebius_apply(Sl2Element::identity(), ProjectivePoint::finite(3.0)).value() ==
        doctest::Approx(3.0).epsilon(1e-15));
  const Sl2Element a{2.0, 3.0, 1.0, 2.0};
  CHECK(moebius_apply(a, ProjectivePoint::infinity()).value() == doctest::Approx(2.0));
  CHECK(moebius_apply(a, ProjectivePoint::finite(-2.0)).is_infinite());
  const double eps = 0.3;
  const Sl2Element l2{1.0, 0.0, -eps, 1.0};
  for (double x : {-2.0, 0.5, 1.7}) {
    CHECK(moebius_apply(l2, ProjectivePoint::finite(x)).value() ==
          doctest::Approx(x / (1.0 - x * eps)).epsilon(1e-14));
  }
}

TEST_CASE("one-parameter subgroups") {
  const Sl2Element id = Sl2Element::identity();
  CHECK(sl2_exp_generator(Generator::L0, 0.0).max_abs_diff(id) == 0.0);
  for (double s : {-1.3, 0.2, 2.5}) {
    CHECK(moebius_apply(sl2_exp_generator(Generator::L1, s), ProjectivePoint::finite(1.0)).value() ==
          doctest::Approx(std::exp(s)).epsilon(1e-14));
    CHECK(moebius_apply(sl2_exp_generator(Generator::L0, s), ProjectivePoint::finite(2.0)).value() ==
          doctest::Approx(2.0 + s).epsilon(1e-14));
    CHECK(sl2_exp_generator(Generator::L0, s).det() == 1.0);
    CHECK(sl2_exp_generator(Generator::L2, s).det() == 1.0);
    CHECK(std::abs(sl2_exp_generator(Generator::L1, s).det() - 1.0) <= 1e-14);
  }
  const double s = 0.4, r = -1.1;
  const auto composed = sl2_exp_generator(Generator::L2, s) * sl2_exp_generator(Generator::L2, r);
  const auto direct = sl2_exp_generator(Generator::L2, s + r);
  for (double x : {-0.7, 0.1, 3.0}) {
    CHECK(moebius_apply(composed, ProjectivePoint::finite(x))
              .approx_equal(moebius_apply(direct, ProjectivePoint::finite(x)), 1e-14));
  }
}

TEST_CASE("left action law including infinity") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_sl2(rng);
    const auto b = random_sl2(rng);
    const auto x = i % 10 == 0 ? ProjectivePoint::infinity() : random_point(rng);
    const auto lhs = moebius_apply(a * b, x);
    const auto rhs = moebius_apply(a, moebius_apply(b, x));
    CHECK(projective_distance(lhs, rhs) <= 1e-10);
  }
}

TEST_CASE("cross ratio values") {
  const auto inf = ProjectivePoint::infinity();
  const auto zero = ProjectivePoint::finite(0.0);
  const auto one = ProjectivePoint::finite(1.0);
  CHECK(cross_ratio(ProjectivePoint::finite(5.0), inf, zero, one) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(cross_ratio(inf, inf, zero, one) == 0.0);
  CHECK(cross_ratio(one, inf, zero, one) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(cross_ratio(zero, inf, zero, one), Error);
  try {
    cross_ratio(zero, inf, zero, one);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PoleValue);
  }
  try {
    cross_ratio(one, zero, zero, inf);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateTriple);
  }
  CHECK(cross_ratio_point(zero, inf, zero, one).is_infinite());
  // The superposition convention vanishes at x2 and is 1 at x3.
  const auto x1 = ProjectivePoint::finite(-1.0);
  const auto x2 = ProjectivePoint::finite(2.0);
  const auto x3 = ProjectivePoint::finite(4.0);
  CHECK(superposition_constant(x2, x1, x2, x3) == 0.0);
  CHECK(superposition_constant(x3, x1, x2, x3) == doctest::Approx(1.0).epsilon(1e-15));
  const auto x = ProjectivePoint::finite(0.5);
  CHECK(superposition_constant(x, x1, x2, x3) ==
        doctest::Approx((0.5 - 2.0) * (4.0 + 1.0) / ((0.5 + 1.0) * (4.0 - 2.0))).epsilon(1e-14));
}

TEST_CASE("cross ratio is invariant under the action") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_sl2(rng);
    const auto x = random_point(rng), x1 = random_point(rng), x2 = random_point(rng),
               x3 = random_point(rng);
    if (std::min({projective_distance(x1, x2), projective_distance(x1, x3),
                  projective_distance(x2, x3), projective_distance(x, x2)}) < 0.05) {
      continue;
    }
    const double before = cross_ratio(x, x1, x2, x3);
    const double after = cross_ratio(moebius_apply(a, x), moebius_apply(a, x1),
                                     moebius_apply(a, x2), moebius_apply(a, x3));
    CHECK(std::abs(after - before) <= 1e-9 * std::max(1.0, std::abs(before)));
  }
}

TEST_CASE("riccati system validates coefficient domains") {
  const auto table = CoefficientFn::table({0.0, 1.0}, {1.0, 2.0});
  CHECK_NOTHROW(RiccatiSystem::make(table, CoefficientFn::constant(0.0),
                                    CoefficientFn::constant(0.0), {0.0, 1.0}));
  CHECK_THROWS_AS(RiccatiSystem::make(table, CoefficientFn::constant(0.0),
                                      CoefficientFn::constant(0.0), {0.0, 2.0}),
                  Error);
  const auto sys = RiccatiSystem::make(CoefficientFn::constant(1.0), CoefficientFn::constant(2.0),
                                       CoefficientFn::constant(3.0), {0.0, 1.0});
  CHECK(sys.rhs(0.0, 2.0) == 1.0 + 4.0 + 12.0);
  CHECK(sys.rhs_reciprocal(0.0, 0.5) == -(3.0 + 0.5 * 2.0 + 0.25 * 1.0));
}
