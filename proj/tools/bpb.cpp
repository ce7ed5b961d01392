// SPDX-License-Identifier: Apache-2.0
//
// bpb: repair near-attaining (f, T) pairs from JSON instance files, generate
// gated instances, replay certificates and run modulus experiments.
//
// Exit codes: 0 success, 1 IO or parse error, 2 gate or precondition failure,
// 3 invariant violation or failed certification.
#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bpb/generate.hpp"
#include "bpb/instance_io.hpp"
#include "bpb/oracle.hpp"
#include "bpb/repair_l1ck.hpp"
#include "bpb/repair_l1l1.hpp"
#include "bpb/repair_l1linf.hpp"

namespace {

using namespace bpb;

std::optional<ScalarMode> env_mode() {
  const char* v = std::getenv("BPB_SCALAR_MODE");
  if (!v || !*v) return std::nullopt;
  return parse_mode(v);
}

std::pair<std::size_t, std::size_t> parse_dims(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw ParseError("--dims: expected MxN, got '" + text + "'");
  try {
    std::size_t used = 0;
    const unsigned long m = std::stoul(text.substr(0, x), &used);
    if (used != x) throw std::invalid_argument("m");
    const std::string rest = text.substr(x + 1);
    const unsigned long n = std::stoul(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("n");
    if (m == 0 || n == 0 || m > 64 || n > 64) throw ParseError("--dims: sizes must lie in [1, 64]");
    return {m, n};
  } catch (const std::logic_error&) {
    throw ParseError("--dims: expected MxN, got '" + text + "'");
  }
}

template <Scalar S>
std::string run_repair(Law law, const Instance& inst) {
  const Density<S> f = vector_of<S>(inst);
  const S eps = scalar_cast<S>(inst.epsilon);
  if (codomain_for(law) != inst.codomain_kind)
    throw PreconditionError("law " + std::string(law_name(law)) + " needs a " +
                            std::string(codomain_name(codomain_for(law))) + " codomain, the instance has " +
                            std::string(codomain_name(inst.codomain_kind)));
  switch (law) {
    case Law::l1l1: return serialize_result(inst, repair_l1l1(kernel_of<S>(inst), f, eps));
    case Law::l1linf: return serialize_result(inst, repair_l1linf(sup_kernel_of<S>(inst), f, eps));
    case Law::ck_clamp: return serialize_result(inst, clamp_repair(sup_kernel_of<S>(inst), f, eps));
    case Law::ck_bump: return serialize_result(inst, bump_repair(sup_kernel_of<S>(inst), f, eps));
    case Law::linf_sum: break;
  }
  throw PreconditionError("repair: unsupported law");
}

int cmd_repair(const std::string& law_text, const std::string& input, const std::string& output) {
  const Law law = parse_law(law_text);
  if (law == Law::linf_sum) throw ParseError("--law: linf-sum is library-only");
  Instance inst = parse_instance(read_file(input));
  if (auto m = env_mode()) inst.scalar_mode = *m;
  const std::string out =
      inst.scalar_mode == ScalarMode::exact ? run_repair<Rational>(law, inst) : run_repair<double>(law, inst);
  write_file_atomic(output, out);
  std::cout << "repaired (" << law_name(law) << ", " << mode_name(inst.scalar_mode) << ") -> " << output << "\n";
  return 0;
}

int cmd_gen(const std::string& law_text, const std::string& dims, const std::string& eps_text, std::uint64_t seed,
            const std::string& output) {
  const Law law = parse_law(law_text);
  if (law == Law::linf_sum) throw ParseError("--law: linf-sum is library-only");
  const auto [rows, cols] = parse_dims(dims);
  const Rational eps = parse_rational(eps_text);
  const Rational hi = law == Law::l1linf ? Rational(1, 3) : Rational(1);
  if (!(eps > 0 && eps < hi)) throw PreconditionError("--eps: requires 0 < ε < " + to_string(hi));
  const ScalarMode mode = env_mode().value_or(ScalarMode::exact);
  const Rational eta = gate_defect(law, eps);

  Rng rng(seed);
  Instance inst;
  if (law == Law::l1l1) {
    auto [T, f] = gated_l1_instance(rng, rows, cols, eta);
    inst = make_instance(T, f, eps, mode);
  } else {
    auto [T, f] = gated_sup_instance(rng, rows, cols, eta);
    inst = make_instance(T, f, eps, codomain_for(law), mode);
  }
  write_file_atomic(output, serialize_instance(inst));
  std::cout << "generated " << rows << "x" << cols << " " << law_name(law) << " instance -> " << output << "\n";
  return 0;
}

int cmd_certify(const std::string& input) {
  const std::vector<std::string> failures = certify_result(read_file(input), env_mode());
  if (failures.empty()) {
    std::cout << "certified: " << input << "\n";
    return 0;
  }
  for (const auto& f : failures) std::cout << "FAIL " << f << "\n";
  return 3;
}

template <Scalar S>
int run_modulus(Law law, const Rational& eps_q, std::size_t rows, std::size_t cols, std::size_t samples,
                std::uint64_t seed, std::size_t budget, const std::string& csv) {
  const S eps = scalar_cast<S>(eps_q);
  const ModulusEstimate<S> est = empirical_modulus(law, eps, rows, cols, samples, seed, budget);
  std::ostringstream out;
  out << "epsilon,sample,defect,est_dist,accepted\n";
  for (const auto& r : est.rows)
    out << to_string(eps) << "," << r.index << "," << r.defect << "," << r.est_dist << "," << (r.accepted ? 1 : 0)
        << "\n";
  write_file_atomic(csv, out.str());

  std::cout << "law " << law_name(law) << ", epsilon " << to_string(eps) << "\n"
            << "samples " << est.samples << ", accepted " << est.accepted << ", certified_far " << est.certified_far
            << "\n"
            << "min_defect " << (est.min_defect ? to_string(*est.min_defect) : std::string("none")) << "\n"
            << "proven_bound " << to_string(est.proven_bound) << "\n";
  if (!est.min_defect) {
    std::cout << "sampling failure: no sample reached distance ε\n";
    return 2;
  }
  if (*est.min_defect < est.proven_bound) {
    std::cout << "FAIL sampled defect below the proven bound\n";
    return 3;
  }
  return 0;
}

int cmd_modulus(const std::string& law_text, const std::string& eps_text, const std::string& dims,
                std::size_t samples, std::uint64_t seed, std::size_t budget, const std::string& csv) {
  const Law law = parse_law(law_text);
  if (law == Law::linf_sum) throw ParseError("--law: linf-sum has no sampled family");
  const auto [rows, cols] = parse_dims(dims);
  const Rational eps = parse_rational(eps_text);
  const ScalarMode mode = env_mode().value_or(ScalarMode::exact);
  return mode == ScalarMode::exact ? run_modulus<Rational>(law, eps, rows, cols, samples, seed, budget, csv)
                                   : run_modulus<double>(law, eps, rows, cols, samples, seed, budget, csv);
}

template <Scalar S>
int run_norm(const Instance& inst) {
  const Density<S> f = vector_of<S>(inst);
  const MeasureSpace<S> dom = domain_of<S>(inst);
  S formula, brute, image;
  if (inst.codomain_kind == CodomainKind::l1) {
    const KernelMeasure<S> T = kernel_of<S>(inst);
    formula = kernel_norm(T);
    brute = brute_norm(T);
    image = image_norm(T, f);
  } else {
    const SupKernel<S> T = sup_kernel_of<S>(inst);
    formula = sup_norm(T);
    brute = brute_norm(T);
    image = image_norm(T, f);
  }
  std::cout << "operator_norm " << to_string(formula) << "\n"
            << "brute_norm " << to_string(brute) << "\n"
            << "vector_norm " << to_string(l1_norm(dom, f)) << "\n"
            << "image_norm " << to_string(image) << "\n";
  return 0;
}

int cmd_norm(const std::string& input) {
  Instance inst = parse_instance(read_file(input));
  if (auto m = env_mode()) inst.scalar_mode = *m;
  return inst.scalar_mode == ScalarMode::exact ? run_norm<Rational>(inst) : run_norm<double>(inst);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"repairs of near norm-attaining pairs on finite atomic measure spaces"};
  app.require_subcommand(1);

  std::string law, input, output, dims, eps, csv;
  std::uint64_t seed = 0;
  std::size_t samples = 0, budget = 16;

  auto* repair = app.add_subcommand("repair", "repair a gated instance");
  repair->add_option("--law", law, "l1l1 | l1linf | ck-clamp | ck-bump")->required();
  repair->add_option("--input", input)->required();
  repair->add_option("--output", output)->required();

  auto* gen = app.add_subcommand("gen", "generate a gated instance");
  gen->add_option("--law", law)->required();
  gen->add_option("--dims", dims, "MxN")->required();
  gen->add_option("--eps", eps)->required();
  gen->add_option("--seed", seed)->required();
  gen->add_option("--output", output)->required();

  auto* certify = app.add_subcommand("certify", "replay the checks on a result file");
  certify->add_option("--input", input)->required();

  auto* modulus = app.add_subcommand("modulus", "sample the modulus of a family");
  modulus->add_option("--law", law)->required();
  modulus->add_option("--eps", eps)->required();
  modulus->add_option("--dims", dims, "MxN")->required();
  modulus->add_option("--samples", samples)->required();
  modulus->add_option("--seed", seed)->required();
  modulus->add_option("--budget", budget, "local-search iterations per sample");
  modulus->add_option("--csv", csv)->required();

  auto* norm = app.add_subcommand("norm", "print norms of an instance");
  norm->add_option("--input", input)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*repair) return cmd_repair(law, input, output);
    if (*gen) return cmd_gen(law, dims, eps, seed, output);
    if (*certify) return cmd_certify(input);
    if (*modulus) return cmd_modulus(law, eps, dims, samples, seed, budget, csv);
    if (*norm) return cmd_norm(input);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const ConstructionFailure& e) {
    std::cerr << "construction failure: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
