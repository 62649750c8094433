#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "slpi/oscillation.hpp"
#include "slpi/shoot.hpp"

using namespace slpi;

namespace {

constexpr double kPi = 3.14159265358979323846;

Problem box(double b = kPi) {
  Problem p;
  p.interval = {0.0, b};
  p.potential = ConstantPotential{0.0};
  p.bc = {0.0, 0.0};
  return p;
}

Problem with_deltas(Problem p, const std::vector<double>& xs) {
  std::vector<std::pair<double, InteractionKind>> ps;
  for (double x : xs) ps.emplace_back(x, InteractionKind::Delta);
  p.interactions = InteractionSet::at_positions(ps);
  return p;
}

}  // namespace

TEST_CASE("lyapunov window arithmetic") {
  CHECK(lyapunov_window(0.0, 4.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lyapunov_window(3.0, -1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::isinf(lyapunov_window(0.0, 0.0)));
  CHECK_THROWS_AS((void)lyapunov_window(-1.0, 0.0), std::domain_error);
}

TEST_CASE("lyapunov certificate distinguishes tight and sparse site pairs") {
  // E = 4, V = 0: window is exactly 1
  auto tight = lyapunov_certificate(with_deltas(box(), {1.0, 1.5}), 4.0);
  CHECK(tight.tag == OscillationCertificate::Tag::LyapunovDisconjugate);
  REQUIRE(tight.min_gap.has_value());
  CHECK(*tight.min_gap == doctest::Approx(0.5).epsilon(1e-15));
  REQUIRE(tight.window.has_value());
  CHECK(*tight.window == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(tight.conclusive());

  auto sparse = lyapunov_certificate(with_deltas(box(), {0.5, 2.5}), 4.0);
  CHECK(sparse.tag == OscillationCertificate::Tag::Inconclusive);
  CHECK_FALSE(sparse.conclusive());

  auto single = lyapunov_certificate(with_deltas(box(), {1.0}), 4.0);
  CHECK(single.tag == OscillationCertificate::Tag::Inconclusive);
  REQUIRE(single.reason.has_value());
}

TEST_CASE("zero-count bound arithmetic") {
  CHECK(zero_count_bound(kPi, 0.0, 4.0) == doctest::Approx(kPi + 1.0).epsilon(1e-15));
  CHECK(zero_count_bound(2.0, 5.0, -1.0) ==
        doctest::Approx(2.0 * std::sqrt(6.0) / 2.0 + 1.0).epsilon(1e-15));
  CHECK_THROWS_AS((void)zero_count_bound(-1.0, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS((void)zero_count_bound(1.0, -2.0, 1.0), std::domain_error);
}

TEST_CASE("interaction-count certificate") {
  // bound at E=4 on [0,pi] is pi+1 ~ 4.14: five sites exceed it
  auto many =
      measure_zero_by_interaction_count(with_deltas(box(), {0.4, 0.9, 1.4, 1.9, 2.4}), 4.0);
  CHECK(many.tag == OscillationCertificate::Tag::ZeroCountBound);
  REQUIRE(many.site_count.has_value());
  CHECK(*many.site_count == 5);
  REQUIRE(many.bound.has_value());
  CHECK(*many.bound == doctest::Approx(kPi + 1.0).epsilon(1e-12));

  auto few = measure_zero_by_interaction_count(with_deltas(box(), {1.0, 2.0}), 4.0);
  CHECK(few.tag == OscillationCertificate::Tag::Inconclusive);
}

TEST_CASE("zero counts actually respect the bound") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> uv(-6.0, 6.0);
  std::uniform_real_distribution<double> ue(0.5, 40.0);
  for (int i = 0; i < 12; ++i) {
    Problem p = box();
    double v = uv(rng);
    p.potential = ConstantPotential{v};
    double e = ue(rng);
    auto t = shoot(p, {}, Complex(e, 0.0), ShootDirection::FromLeft);
    int zeros = pruefer_zero_count(t, 0.0, kPi);
    double bound = zero_count_bound(kPi, std::abs(v), e);
    CHECK(zeros < bound);
  }
}

TEST_CASE("hille certificate on an inverse-square tail") {
  PotentialSpec small = BuiltinPotential{BuiltinForm::InverseSquareTail, {0.0, 0.2}};
  auto good = hille_nonoscillatory(small, 0.0, 1.0, 50.0, 128);
  CHECK(good.tag == OscillationCertificate::Tag::Nonoscillatory);
  REQUIRE(good.sup_value.has_value());
  CHECK(*good.sup_value == doctest::Approx(0.2).epsilon(1e-9));
  REQUIRE(good.method.has_value());
  CHECK(*good.method == "hille");
  REQUIRE(good.tail_form.has_value());
  CHECK(*good.tail_form == "inverse-square");

  PotentialSpec big = BuiltinPotential{BuiltinForm::InverseSquareTail, {0.0, 0.5}};
  auto bad = hille_nonoscillatory(big, 0.0, 1.0, 50.0, 128);
  CHECK(bad.tag == OscillationCertificate::Tag::Inconclusive);
  REQUIRE(bad.sup_value.has_value());
  CHECK(*bad.sup_value == doctest::Approx(0.5).epsilon(1e-9));

  // doubling the truncation leaves the verdict and the sup untouched
  auto good2 = hille_nonoscillatory(small, 0.0, 1.0, 100.0, 128);
  CHECK(good2.tag == good.tag);
  CHECK(*good2.sup_value == doctest::Approx(*good.sup_value).epsilon(1e-9));
}

TEST_CASE("hille hypothesis violations are typed errors") {
  PotentialSpec isq = BuiltinPotential{BuiltinForm::InverseSquareTail, {0.0, 0.2}};
  // E must match the tail level, else E - V is not integrable
  CHECK_THROWS_AS((void)hille_nonoscillatory(isq, 0.5, 1.0, 50.0, 64),
                  std::runtime_error);
  // c < 0 makes V > E somewhere in the tail
  PotentialSpec neg = BuiltinPotential{BuiltinForm::InverseSquareTail, {0.0, -0.3}};
  CHECK_THROWS_AS((void)hille_nonoscillatory(neg, 0.0, 1.0, 50.0, 64),
                  std::runtime_error);
  // a tabulated table declares no analytic tail
  TabulatedPotential t;
  t.grid = {0.0, 1.0};
  t.values = {0.0, 0.0};
  CHECK_THROWS_AS((void)hille_nonoscillatory(PotentialSpec{t}, 0.0, 0.0, 1.0, 64),
                  std::domain_error);
  // a harmonic well has no integrable tail either
  PotentialSpec h = BuiltinPotential{BuiltinForm::Harmonic, {1.0, 0.0}};
  CHECK_THROWS_AS((void)hille_nonoscillatory(h, 0.0, 0.0, 10.0, 64),
                  std::runtime_error);
}

TEST_CASE("hille accepts constant and piecewise tails at the exact level") {
  PotentialSpec c = ConstantPotential{2.0};
  auto cert = hille_nonoscillatory(c, 2.0, 0.0, 20.0, 64);
  CHECK(cert.tag == OscillationCertificate::Tag::Nonoscillatory);
  CHECK(*cert.sup_value == doctest::Approx(0.0));

  PiecewiseConstantPotential pw;
  pw.breakpoints = {1.0};
  pw.values = {1.5, 2.0};  // below the level on the body, equal on the tail
  auto cert2 = hille_nonoscillatory(PotentialSpec{pw}, 2.0, 0.0, 20.0, 64);
  CHECK(cert2.tag == OscillationCertificate::Tag::Nonoscillatory);
  CHECK(*cert2.sup_value > 0.0);
  CHECK(*cert2.sup_value < 0.25);
}

TEST_CASE("cross-checking a certificate against the classifier") {
  Problem p = with_deltas(box(), {1.0, 1.5});
  double e = 2.5;  // not an eigenvalue of the free box
  auto cert = lyapunov_certificate(p, e);
  REQUIRE(cert.conclusive());
  auto rep = cross_check_certificate(p, e, cert);
  CHECK(rep.consistent);
  CHECK(rep.verdict.tag == DichotomyTag::MeasureZero);

  auto inconclusive = lyapunov_certificate(with_deltas(box(), {1.0}), e);
  CHECK_THROWS_AS((void)cross_check_certificate(p, e, inconclusive),
                  std::domain_error);
}
