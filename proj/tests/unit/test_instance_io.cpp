// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

#include <filesystem>

#include <json.hpp>

#include "bpb/instance_io.hpp"

using namespace bpb;
using fx::dens;
using fx::q;

namespace {

const char* kValid = R"({
  "scalar_mode": "exact",
  "domain_weights": ["1/2", "1/2"],
  "codomain": {"kind": "l1", "weights": ["1/2", "1/2"]},
  "operator": [["1/2", "0"], ["0", "1/2"]],
  "vector": ["1", "1"],
  "epsilon": "1/2"
})";

std::string with(const std::string& from, const std::string& to) {
  std::string s = kValid;
  auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("parse a valid instance") {
  const Instance inst = parse_instance(kValid);
  CHECK(inst.scalar_mode == ScalarMode::exact);
  CHECK(inst.domain_weights == fx::qs({"1/2", "1/2"}));
  CHECK(inst.codomain_kind == CodomainKind::l1);
  CHECK(inst.matrix == fx::mat({{"1/2", "0"}, {"0", "1/2"}}));
  CHECK(inst.vector == fx::qs({"1", "1"}));
  CHECK(inst.epsilon == q("1/2"));
  CHECK(kernel_of<Rational>(inst) == fx::kernel({"1/2", "1/2"}, {"1/2", "1/2"}, {{"1/2", "0"}, {"0", "1/2"}}));
  CHECK_THROWS_AS(sup_kernel_of<Rational>(inst), PreconditionError);
}

TEST_CASE("parse errors name the field") {
  CHECK_THROWS_WITH_AS(parse_instance(with(R"(["1/2", "1/2"],
  "codomain")", R"(["1/2", "0"],
  "codomain")")),
                       doctest::Contains("domain_weights[1]: nonpositive atom weight"), ParseError);
  CHECK_THROWS_WITH_AS(parse_instance(with(R"([["1/2", "0"])", R"([["1/2", "1/x"])")),
                       doctest::Contains("operator[0][1]: malformed rational"), ParseError);
  CHECK_THROWS_WITH_AS(parse_instance(with(R"([["1/2", "0"], ["0", "1/2"]])", R"([["1/2", "0"], ["0"]])")),
                       doctest::Contains("ragged matrix"), ParseError);
  CHECK_THROWS_WITH_AS(parse_instance(with(R"("vector")", R"("vectr")")), doctest::Contains("vector: missing field"),
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_instance(with(R"("l1")", R"("l2")")), doctest::Contains("codomain.kind"), ParseError);
  CHECK_THROWS_WITH_AS(parse_instance("{\n  \"scalar_mode\": \"exact\",\n  oops\n}"), doctest::Contains("line 3"),
                       ParseError);
  CHECK_THROWS_AS(parse_instance(with(R"(["1", "1"])", R"(["1"])")), ParseError);
}

TEST_CASE("numbers are accepted in either mode") {
  const Instance a = parse_instance(with(R"(["1", "1"])", R"([1, 1.0])"));
  CHECK(a.vector == fx::qs({"1", "1"}));
  const Instance b = parse_instance(with(R"("epsilon": "1/2")", R"("epsilon": 0.1)"));
  CHECK(b.epsilon == q("1/10"));
}

TEST_CASE("property: parse and serialize are inverse") {
  Rng rng(4);
  for (int it = 0; it < 50; ++it) {
    const ScalarMode mode = it % 2 ? ScalarMode::approx : ScalarMode::exact;
    Instance inst;
    if (it % 3 == 0) {
      auto [T, f] = attaining_l1_pair(rng, 1 + rng.index(4), 1 + rng.index(4));
      inst = make_instance(T, f, Rational(1, 2), mode);
    } else {
      auto [T, f] = attaining_sup_pair(rng, 1 + rng.index(4), 1 + rng.index(4));
      inst = make_instance(T, f, Rational(3, 10), it % 3 == 1 ? CodomainKind::linf : CodomainKind::ck, mode);
    }
    const std::string text = serialize_instance(inst);
    const Instance back = parse_instance(text);
    CHECK(serialize_instance(back) == text);
    if (mode == ScalarMode::exact) CHECK(back == inst);
  }
}

TEST_CASE("result files certify and detect tampering") {
  const auto T = fx::sup({"1/2", "1/2"}, {{"1", "0"}, {"23/24", "0"}});
  const Instance inst = make_instance(T, dens({"1", "1"}), q("1/2"), CodomainKind::ck, ScalarMode::exact);
  const auto rep = clamp_repair(sup_kernel_of<Rational>(inst), vector_of<Rational>(inst), q("1/2"));
  const std::string text = serialize_result(inst, rep);
  auto j = nlohmann::json::parse(text);
  CHECK(j["dist_operator"] == "1/24");
  CHECK(j["law"] == "ck-clamp");
  CHECK(j["witness"]["atom"] == 0);
  CHECK(certify_result(text).empty());
  CHECK(certify_result(text, ScalarMode::approx).empty());

  j["g"] = {"2", "2"};
  const auto failures = certify_result(j.dump());
  REQUIRE_FALSE(failures.empty());
  CHECK(failures.front().find("‖g‖₁ ≠ 1") != std::string::npos);

  auto k = nlohmann::json::parse(text);
  k["dist_operator"] = "0";
  const auto f2 = certify_result(k.dump());
  REQUIRE(f2.size() == 1);
  CHECK(f2.front().find("recorded ‖T − S‖") != std::string::npos);

  auto m = nlohmann::json::parse(text);
  m["bounds"]["dist_vector"] = "1";
  CHECK_FALSE(certify_result(m.dump()).empty());
}

TEST_CASE("L1 result files carry the functional witness") {
  const auto T = fx::kernel({"1/2", "1/2"}, {"1/2", "1/2"}, {{"1/2", "0"}, {"0", "-1/2"}});
  const Instance inst = make_instance(T, dens({"-2", "0"}), q("9/10"), ScalarMode::exact);
  const auto rep = repair_l1l1(kernel_of<Rational>(inst), vector_of<Rational>(inst), q("9/10"));
  const std::string text = serialize_result(inst, rep);
  auto j = nlohmann::json::parse(text);
  CHECK(j["witness"]["functional"].size() == 2);
  CHECK(j["bounds"]["dist_operator_sqrt"] == true);
  CHECK(certify_result(text).empty());
  j["witness"]["functional"] = {"1", "1"};
  CHECK_FALSE(certify_result(j.dump()).empty());
}

TEST_CASE("law tables") {
  CHECK(gate_defect(Law::ck_clamp, q("1/2")) == q("1/24"));
  CHECK(gate_defect(Law::l1linf, q("3/10")) == power(q("3/10"), 8));
  const auto b = distance_bounds(Law::l1l1, q("1/2"));
  CHECK(b.vector == 2);
  CHECK(b.operator_bound == 8);
  CHECK(b.operator_sqrt);
  CHECK(codomain_for(Law::ck_bump) == CodomainKind::ck);
}

TEST_CASE("atomic writes") {
  const auto dir = std::filesystem::temp_directory_path() / "bpb_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "x.json").string();
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  CHECK(read_file(path) == "second");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  CHECK_THROWS_AS(read_file((dir / "missing.json").string()), ParseError);
  std::filesystem::remove_all(dir);
}
