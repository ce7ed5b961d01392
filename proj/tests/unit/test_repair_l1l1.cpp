// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

using namespace bpb;
using fx::dens;
using fx::kernel;
using fx::q;

namespace {

const fx::List half{"1/2", "1/2"};

}  // namespace

TEST_CASE("density step leaves unit-density kernels alone") {
  const auto T = kernel(half, half, {{"1/2", "0"}, {"0", "1/2"}});
  auto r = normalize_density_step(T, dens({"1", "1"}), q("1/2"));
  CHECK(r.kernel == T);
  CHECK(r.f == dens({"1", "1"}));
  CHECK(r.dist_operator == 0);
  CHECK(r.dist_vector == 0);
}

TEST_CASE("density step on the 511/1024 kernel") {
  const auto T = kernel(half, half, {{"1/2", "0"}, {"0", "511/1024"}});
  CHECK(image_norm(T, dens({"1", "1"})) == q("1023/1024"));
  auto r = normalize_density_step(T, dens({"1", "1"}), q("1/2"));
  CHECK(r.threshold == q("511/512"));
  CHECK(r.kernel.mass() == fx::mat({{"1/2", "0"}, {"0", "1/2"}}));
  CHECK(r.f == dens({"1", "1"}));
  CHECK(r.dist_operator == q("1/512"));
  CHECK(operator_distance(T, r.kernel) == q("1/512"));
  CHECK(certify_pi(r.f, r.kernel).attained);
  CHECK(r.steps.find("D") == std::optional<std::string>("{0,1}"));
}

TEST_CASE("density step gate is strict") {
  // ‖Tf₀‖ = 1/2 + 255/512 = 1 − (1/2)³/2⁶
  const auto T = kernel(half, half, {{"1/2", "0"}, {"0", "255/512"}});
  CHECK(image_norm(T, dens({"1", "1"})) == 1 - density_step_defect(q("1/2")));
  CHECK_THROWS_AS(normalize_density_step(T, dens({"1", "1"}), q("1/2")), GateError);
  CHECK_THROWS_WITH(normalize_density_step(T, dens({"1", "1"}), q("1/2")), doctest::Contains("ε³/2⁶"));
}

TEST_CASE("density step preconditions") {
  const auto T = kernel(half, half, {{"1/2", "0"}, {"0", "1/2"}});
  CHECK_THROWS_AS(normalize_density_step(T, dens({"3", "-1"}), q("1/2")), PreconditionError);
  CHECK_THROWS_AS(normalize_density_step(T, dens({"1", "1"}), q("1")), PreconditionError);
  CHECK_THROWS_AS(normalize_density_step(T, dens({"1", "1/2"}), q("1/2")), PreconditionError);
  const auto big = kernel(half, half, {{"1", "0"}, {"0", "1/2"}});
  CHECK_THROWS_AS(normalize_density_step(big, dens({"1", "1"}), q("1/2")), PreconditionError);
}

TEST_CASE("align step on already aligned kernels") {
  const auto T = kernel(half, half, {{"1/2", "0"}, {"0", "1/2"}});
  auto a = align_mass_step(T, dens({"1", "1"}), q("1/2"));
  CHECK(a.kernel == T);
  CHECK(a.f == dens({"1", "1"}));
  CHECK(a.witness.values == fx::qs({"1", "1"}));
  CHECK(pairing(a.kernel, a.f, a.witness) == 1);

  const auto U = kernel(half, half, {{"1/2", "0"}, {"0", "-1/2"}});
  auto b = align_mass_step(U, dens({"1", "1"}), q("1/2"));
  CHECK(b.kernel == U);
  CHECK(b.f == dens({"1", "1"}));
  CHECK(b.witness.values == fx::qs({"1", "-1"}));
  CHECK(pairing(b.kernel, b.f, b.witness) == 1);
}

TEST_CASE("align step requires unit density on the support") {
  const auto T = kernel(half, half, {{"1/2", "0"}, {"0", "1/4"}});
  CHECK_THROWS_AS(align_mass_step(T, dens({"0", "2"}), q("1/2")), PreconditionError);
}

TEST_CASE("full pipeline on attaining inputs") {
  const auto T = kernel(half, half, {{"1/2", "0"}, {"0", "1/2"}});
  auto r = repair_l1l1(T, dens({"2", "0"}), q("9/10"));
  CHECK(r.g == dens({"2", "0"}));
  CHECK(r.op == T);
  CHECK(r.dist_vector == 0);
  CHECK(r.dist_operator == 0);
  CHECK(r.law == Law::l1l1);

  auto s = repair_l1l1(T, dens({"-2", "0"}), q("9/10"));
  CHECK(s.g == dens({"-2", "0"}));
  CHECK(s.op == T);
  CHECK(s.witness.functional.has_value());
  CHECK(pairing(s.op, s.g, *s.witness.functional) == 1);
}

TEST_CASE("full pipeline on the δ-perturbed diagonal kernel") {
  const Rational eps = q("9/10");
  const Rational delta = power(eps, 18) / Rational(mpz_class("33554432000"));  // 5³·2²⁸
  Matrix<Rational> m = fx::mat({{"1/2", "0"}, {"0", "1/2"}});
  m(1, 1) = Rational(1, 2) * (1 - delta);
  const KernelMeasure<Rational> T(fx::space(half), fx::space(half), m);
  CHECK(image_norm(T, dens({"1", "1"})) > 1 - l1l1_defect(eps));
  auto r = repair_l1l1(T, dens({"1", "1"}), eps);
  const auto cert = certify_pi(r.g, r.op);
  CHECK(cert.attained);
  CHECK(r.dist_vector < 4 * eps);
  CHECK(below_sqrt(r.dist_operator, Rational(16 * eps)));
  CHECK(r.threshold == 1 - l1l1_defect(eps));
  CHECK(r.steps.find("eps1") == std::optional<std::string>(to_string(Rational(power(eps, 6) / 640))));
}

TEST_CASE("full pipeline gate") {
  const auto T = kernel(half, half, {{"1/2", "0"}, {"0", "1/4"}});
  CHECK_THROWS_AS(repair_l1l1(T, dens({"1", "1"}), q("9/10")), GateError);
  CHECK_THROWS_WITH(repair_l1l1(T, dens({"1", "1"}), q("9/10")), doctest::Contains("5³·2²⁷"));
}

TEST_CASE("property: gated random instances repair into attaining pairs") {
  Rng rng(2024);
  for (int it = 0; it < 30; ++it) {
    const std::size_t rows = 1 + rng.index(6), cols = 1 + rng.index(6);
    const Rational eps = fx::frac(static_cast<long>(rng.integer(5, 9)), 10);
    auto [T, f] = gated_l1_instance(rng, rows, cols, l1l1_defect(eps));
    CAPTURE(it);
    auto r = repair_l1l1(T, f, eps);
    CHECK(certify_pi(r.g, r.op).attained);
    CHECK(r.dist_vector < 4 * eps);
    CHECK(below_sqrt(r.dist_operator, Rational(16 * eps)));
    CHECK(r.dist_vector == l1_distance(T.domain(), f, r.g));
    CHECK(r.dist_operator == operator_distance(T, r.op));
    auto again = repair_l1l1(T, f, eps);
    CHECK(again.op == r.op);
    CHECK(again.g == r.g);
    CHECK(again.steps == r.steps);
  }
}

TEST_CASE("property: inner steps on gated nonnegative instances") {
  Rng rng(77);
  GenOptions unit{true, true};
  for (int it = 0; it < 60; ++it) {
    const Rational eps = fx::frac(static_cast<long>(rng.integer(1, 3)), 4);
    const std::size_t rows = 1 + rng.index(4), cols = 1 + rng.index(4);
    auto [T, f] = gated_l1_instance(rng, rows, cols, density_step_defect(eps), GenOptions{true, false});
    auto d = normalize_density_step(T, f, eps);
    const auto dens1 = marginal_density(d.kernel);
    for (std::size_t i : support_of(d.f)) CHECK(dens1[i] == 1);
    CHECK(kernel_norm(d.kernel) == 1);
    CHECK(d.dist_operator < eps);
    CHECK(d.dist_vector < 3 * eps);

    const Rational e2(1, 2);
    auto [U, g] = gated_l1_instance(rng, rows, cols, align_step_defect(e2), unit);
    auto a = align_mass_step(U, g, e2);
    CHECK(pairing(a.kernel, a.f, a.witness) == 1);
    CHECK(certify_pi(a.f, a.kernel).attained);
    CHECK(below_sqrt(a.dist_operator, Rational(9 * e2)));
    CHECK(a.dist_vector < 3 * e2);
  }
}

TEST_CASE("approx mode runs the shallow steps") {
  const auto T = scalar_cast<double>(kernel(half, half, {{"1/2", "0"}, {"0", "511/1024"}}));
  auto r = normalize_density_step(T, scalar_cast<double>(dens({"1", "1"})), 0.5);
  CHECK(r.dist_operator == doctest::Approx(1.0 / 512));
  CHECK(kernel_norm(r.kernel) == doctest::Approx(1.0));
}
