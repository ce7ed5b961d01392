// SPDX-License-Identifier: Apache-2.0
#include "bpb/instance_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bpb/oracle.hpp"
#include "bpb/repair_l1ck.hpp"
#include "bpb/repair_l1l1.hpp"
#include "bpb/repair_l1linf.hpp"

namespace bpb {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ParseError(field + ": " + what);
}

const json& member(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where.empty() ? key : where + "." + key, "missing field");
  return *it;
}

Rational read_rational(const json& j, const std::string& field) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(mpz_class(j.dump()));
    if (j.is_number_float()) return parse_rational(j.dump());
  } catch (const ParseError& e) {
    fail(field, std::string("malformed rational (") + e.what() + ")");
  } catch (const std::invalid_argument&) {
    fail(field, "malformed rational");
  }
  fail(field, "expected a number or a \"p/q\" string");
}

std::vector<Rational> read_list(const json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array");
  std::vector<Rational> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(read_rational(j[k], field + "[" + std::to_string(k) + "]"));
  return out;
}

Matrix<Rational> read_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(field, "expected a nonempty array of rows");
  std::vector<std::vector<Rational>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    rows.push_back(read_list(j[i], field + "[" + std::to_string(i) + "]"));
    if (rows.back().size() != rows.front().size())
      fail(field + "[" + std::to_string(i) + "]",
           "ragged matrix: " + std::to_string(rows.back().size()) + " entries, expected " +
               std::to_string(rows.front().size()));
  }
  if (rows.front().empty()) fail(field, "rows must be nonempty");
  return Matrix<Rational>::from_rows(rows);
}

std::vector<Rational> read_weights(const json& j, const std::string& field) {
  std::vector<Rational> w = read_list(j, field);
  if (w.empty()) fail(field, "needs at least one atom");
  for (std::size_t k = 0; k < w.size(); ++k)
    if (sgn(w[k]) <= 0) fail(field + "[" + std::to_string(k) + "]", "nonpositive atom weight");
  return w;
}

json write_scalar(const Rational& x, ScalarMode mode) {
  if (mode == ScalarMode::exact) return to_string(x);
  return to_double(x);
}

json write_scalar(double x, ScalarMode) { return x; }

template <class Range>
json write_list(const Range& xs, ScalarMode mode) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(write_scalar(x, mode));
  return out;
}

template <Scalar S>
json write_matrix(const Matrix<S>& m, ScalarMode mode) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(write_list(m.row(i), mode));
  return out;
}

json instance_json(const Instance& inst) {
  const ScalarMode mode = inst.scalar_mode;
  json cod = json::object();
  cod["kind"] = std::string(codomain_name(inst.codomain_kind));
  if (inst.codomain_kind == CodomainKind::l1) cod["weights"] = write_list(inst.codomain_weights, mode);
  else cod["atoms"] = inst.codomain_atoms;
  json j = json::object();
  j["scalar_mode"] = std::string(mode_name(mode));
  j["domain_weights"] = write_list(inst.domain_weights, mode);
  j["codomain"] = cod;
  j["operator"] = write_matrix(inst.matrix, mode);
  j["vector"] = write_list(inst.vector, mode);
  j["epsilon"] = write_scalar(inst.epsilon, mode);
  return j;
}

Instance instance_from_json(const json& j, const std::string& where) {
  auto at = [&](const std::string& key) { return where.empty() ? key : where + "." + key; };
  Instance inst;
  try {
    inst.scalar_mode = parse_mode(member(j, "scalar_mode", where).get<std::string>());
  } catch (const ParseError& e) {
    fail(at("scalar_mode"), e.what());
  } catch (const json::exception&) {
    fail(at("scalar_mode"), "expected a string");
  }
  inst.domain_weights = read_weights(member(j, "domain_weights", where), at("domain_weights"));

  const json& cod = member(j, "codomain", where);
  const json& kind = member(cod, "kind", at("codomain"));
  if (!kind.is_string()) fail(at("codomain.kind"), "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "l1") inst.codomain_kind = CodomainKind::l1;
  else if (k == "linf") inst.codomain_kind = CodomainKind::linf;
  else if (k == "ck") inst.codomain_kind = CodomainKind::ck;
  else fail(at("codomain.kind"), "unknown codomain kind '" + k + "' (expected l1|linf|ck)");
  if (inst.codomain_kind == CodomainKind::l1) {
    inst.codomain_weights = read_weights(member(cod, "weights", at("codomain")), at("codomain.weights"));
  } else {
    const json& atoms = member(cod, "atoms", at("codomain"));
    if (!atoms.is_number_unsigned() || atoms.get<std::size_t>() == 0)
      fail(at("codomain.atoms"), "expected a positive integer");
    inst.codomain_atoms = atoms.get<std::size_t>();
  }

  inst.matrix = read_matrix(member(j, "operator", where), at("operator"));
  const std::size_t cols =
      inst.codomain_kind == CodomainKind::l1 ? inst.codomain_weights.size() : inst.codomain_atoms;
  if (inst.matrix.rows() != inst.domain_weights.size())
    fail(at("operator"), "has " + std::to_string(inst.matrix.rows()) + " rows, expected " +
                             std::to_string(inst.domain_weights.size()));
  if (inst.matrix.cols() != cols)
    fail(at("operator"), "has " + std::to_string(inst.matrix.cols()) + " columns, expected " + std::to_string(cols));
  inst.vector = read_list(member(j, "vector", where), at("vector"));
  if (inst.vector.size() != inst.domain_weights.size())
    fail(at("vector"), "has " + std::to_string(inst.vector.size()) + " entries, expected " +
                           std::to_string(inst.domain_weights.size()));
  inst.epsilon = read_rational(member(j, "epsilon", where), at("epsilon"));
  return inst;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

template <Scalar S>
std::vector<S> read_typed_list(const json& j, const std::string& field) {
  std::vector<S> out;
  for (const auto& q : read_list(j, field)) out.push_back(scalar_cast<S>(q));
  return out;
}

template <Scalar S>
Matrix<S> read_typed_matrix(const json& j, const std::string& field) {
  return scalar_cast<S>(read_matrix(j, field));
}

template <Scalar S>
json steps_json(const StepLog& steps) {
  json out = json::array();
  for (const auto& e : steps.entries()) out.push_back(json::array({e.name, e.value}));
  return out;
}

template <Scalar S, class Operator>
json result_json(const Instance& inst, const RepairReport<S, Operator>& rep, const Matrix<S>& op) {
  constexpr ScalarMode mode = mode_of<S>();
  const DistanceBounds<S> b = distance_bounds(rep.law, rep.epsilon);
  json j = json::object();
  j["law"] = std::string(law_name(rep.law));
  j["scalar_mode"] = std::string(mode_name(mode));
  j["instance"] = instance_json(inst);
  j["g"] = write_list(rep.g.values, mode);
  j["S"] = write_matrix(op, mode);
  json w = json::object();
  if (rep.witness.functional) w["functional"] = write_list(rep.witness.functional->values, mode);
  if (rep.witness.atom) w["atom"] = *rep.witness.atom;
  w["value"] = write_scalar(rep.witness.value, mode);
  j["witness"] = w;
  j["dist_vector"] = write_scalar(rep.dist_vector, mode);
  j["dist_operator"] = write_scalar(rep.dist_operator, mode);
  j["epsilon"] = write_scalar(rep.epsilon, mode);
  j["threshold"] = write_scalar(rep.threshold, mode);
  j["bounds"] = json{{"dist_vector", write_scalar(b.vector, mode)},
                     {"dist_operator", write_scalar(b.operator_bound, mode)},
                     {"dist_operator_sqrt", b.operator_sqrt}};
  j["steps"] = steps_json<S>(rep.steps);
  return j;
}

template <Scalar S>
void check_distance(std::vector<std::string>& failures, const json& j, const std::string& key, const S& actual,
                    const S& bound, bool sqrt, const std::string& label) {
  const S recorded = scalar_cast<S>(read_rational(member(j, key, ""), key));
  if (!equals(recorded, actual))
    failures.push_back("recorded " + label + " = " + to_string(recorded) + " but replay gives " + to_string(actual));
  const bool ok = sqrt ? below_sqrt(actual, bound) : below(actual, bound);
  if (!ok)
    failures.push_back(label + " = " + to_string(actual) + " violates the bound " + (sqrt ? "√" : "") +
                       to_string(bound));
}

template <Scalar S, class Operator>
void check_common(std::vector<std::string>& failures, const json& j, Law law, const Operator& T,
                  const Density<S>& f, const Density<S>& g, const Operator& Sop, const S& eps) {
  const PiCertificate<S> cert = certify_pi(g, Sop);
  if (!equals(cert.norm_vector, S(1))) failures.push_back("‖g‖₁ ≠ 1 (" + to_string(cert.norm_vector) + ")");
  if (!equals(cert.norm_operator, S(1))) failures.push_back("‖S‖ ≠ 1 (" + to_string(cert.norm_operator) + ")");
  if (!equals(cert.norm_image, S(1))) failures.push_back("‖Sg‖ ≠ 1 (" + to_string(cert.norm_image) + ")");

  const S recorded_eps = scalar_cast<S>(read_rational(member(j, "epsilon", ""), "epsilon"));
  if (!equals(recorded_eps, eps)) failures.push_back("result epsilon differs from the instance epsilon");
  const S threshold = S(1) - gate_defect(law, eps);
  const S recorded_threshold = scalar_cast<S>(read_rational(member(j, "threshold", ""), "threshold"));
  if (!equals(recorded_threshold, threshold))
    failures.push_back("recorded threshold " + to_string(recorded_threshold) + " ≠ 1 − η(ε) = " + to_string(threshold));
  if (!exceeds(image_norm(T, f), threshold))
    failures.push_back("input does not pass the gate: ‖Tf‖ = " + to_string(image_norm(T, f)) +
                       " ≤ " + to_string(threshold));

  const DistanceBounds<S> b = distance_bounds(law, eps);
  const json& rb = member(j, "bounds", "");
  const S rv = scalar_cast<S>(read_rational(member(rb, "dist_vector", "bounds"), "bounds.dist_vector"));
  const S ro = scalar_cast<S>(read_rational(member(rb, "dist_operator", "bounds"), "bounds.dist_operator"));
  const json& rs = member(rb, "dist_operator_sqrt", "bounds");
  if (!equals(rv, b.vector) || !equals(ro, b.operator_bound) || !rs.is_boolean() || rs.get<bool>() != b.operator_sqrt)
    failures.push_back("recorded bounds differ from the bounds of law " + std::string(law_name(law)));
  check_distance(failures, j, "dist_vector", l1_distance(T.domain(), f, g), b.vector, false, "‖f − g‖₁");
  check_distance(failures, j, "dist_operator", operator_distance(T, Sop), b.operator_bound, b.operator_sqrt,
                 "‖T − S‖");
}

template <Scalar S>
std::vector<std::string> certify_typed(const json& j) {
  std::vector<std::string> failures;
  const Law law = parse_law(member(j, "law", "").get<std::string>());
  if (law == Law::linf_sum) throw ParseError("law: ℓ∞-sum results are not stored in files");
  const Instance inst = instance_from_json(member(j, "instance", ""), "instance");
  const Density<S> f = vector_of<S>(inst);
  const S eps = scalar_cast<S>(inst.epsilon);
  const Density<S> g(read_typed_list<S>(member(j, "g", ""), "g"));
  const Matrix<S> m = read_typed_matrix<S>(member(j, "S", ""), "S");
  const json& w = member(j, "witness", "");
  const S value = scalar_cast<S>(read_rational(member(w, "value", "witness"), "witness.value"));
  if (g.size() != inst.domain_weights.size()) throw ParseError("g: wrong length");
  if (m.rows() != inst.matrix.rows() || m.cols() != inst.matrix.cols()) throw ParseError("S: wrong shape");

  if (law == Law::l1l1) {
    const KernelMeasure<S> T = kernel_of<S>(inst);
    const KernelMeasure<S> Sop(T.domain(), T.codomain(), m);
    check_common(failures, j, law, T, f, g, Sop, eps);
    const DualVector<S> fn(read_typed_list<S>(member(w, "functional", "witness"), "witness.functional"));
    if (fn.values.size() != m.cols()) throw ParseError("witness.functional: wrong length");
    for (const auto& x : fn.values)
      if (!at_most(abs_of(x), S(1))) failures.push_back("witness functional leaves the unit ball");
    const S paired = pairing(Sop, g, fn);
    if (!equals(paired, value)) failures.push_back("recorded witness value differs from ⟨Sg, g̃⟩ = " + to_string(paired));
    if (!equals(paired, S(1))) failures.push_back("⟨Sg, g̃⟩ ≠ 1 (" + to_string(paired) + ")");
  } else {
    const SupKernel<S> T = sup_kernel_of<S>(inst);
    const SupKernel<S> Sop(T.domain(), m, T.codomain());
    check_common(failures, j, law, T, f, g, Sop, eps);
    const json& atom = member(w, "atom", "witness");
    if (!atom.is_number_unsigned() || atom.get<std::size_t>() >= m.cols())
      throw ParseError("witness.atom: expected a codomain atom index");
    const S at = apply_l1linf(Sop, g)[atom.get<std::size_t>()];
    if (!equals(at, value)) failures.push_back("recorded witness value differs from (Sg)(s) = " + to_string(at));
    if (!equals(abs_of(at), S(1))) failures.push_back("|(Sg)(s)| ≠ 1 (" + to_string(at) + ")");
  }
  return failures;
}

}  // namespace

std::string_view codomain_name(CodomainKind kind) {
  switch (kind) {
    case CodomainKind::l1: return "l1";
    case CodomainKind::linf: return "linf";
    case CodomainKind::ck: return "ck";
  }
  return "?";
}

CodomainKind codomain_for(Law law) {
  switch (law) {
    case Law::l1l1: return CodomainKind::l1;
    case Law::l1linf: return CodomainKind::linf;
    case Law::ck_clamp:
    case Law::ck_bump: return CodomainKind::ck;
    case Law::linf_sum: break;
  }
  throw PreconditionError("ℓ∞-sums have no single codomain kind");
}

Instance parse_instance(std::string_view text) { return instance_from_json(parse_json(text), ""); }

std::string serialize_instance(const Instance& inst) { return dump(instance_json(inst)); }

Instance make_instance(const KernelMeasure<Rational>& T, const Density<Rational>& f, const Rational& eps,
                       ScalarMode mode) {
  Instance inst;
  inst.scalar_mode = mode;
  inst.domain_weights = T.domain().weights();
  inst.codomain_kind = CodomainKind::l1;
  inst.codomain_weights = T.codomain().weights();
  inst.matrix = T.mass();
  inst.vector = f.values;
  inst.epsilon = eps;
  return inst;
}

Instance make_instance(const SupKernel<Rational>& T, const Density<Rational>& f, const Rational& eps,
                       CodomainKind kind, ScalarMode mode) {
  if (kind == CodomainKind::l1) throw PreconditionError("make_instance: sup kernels need a linf or ck codomain");
  Instance inst;
  inst.scalar_mode = mode;
  inst.domain_weights = T.domain().weights();
  inst.codomain_kind = kind;
  inst.codomain_atoms = T.codomain_atoms();
  inst.matrix = T.values();
  inst.vector = f.values;
  inst.epsilon = eps;
  return inst;
}

template <Scalar S>
MeasureSpace<S> domain_of(const Instance& inst) {
  return scalar_cast<S>(MeasureSpace<Rational>(inst.domain_weights));
}

template <Scalar S>
KernelMeasure<S> kernel_of(const Instance& inst) {
  if (inst.codomain_kind != CodomainKind::l1)
    throw PreconditionError("instance codomain is " + std::string(codomain_name(inst.codomain_kind)) +
                            ", this law needs l1");
  return KernelMeasure<S>(domain_of<S>(inst), scalar_cast<S>(MeasureSpace<Rational>(inst.codomain_weights)),
                          scalar_cast<S>(inst.matrix));
}

template <Scalar S>
SupKernel<S> sup_kernel_of(const Instance& inst) {
  if (inst.codomain_kind == CodomainKind::l1)
    throw PreconditionError("instance codomain is l1, this law needs linf or ck");
  return SupKernel<S>(domain_of<S>(inst), scalar_cast<S>(inst.matrix));
}

template <Scalar S>
Density<S> vector_of(const Instance& inst) {
  return scalar_cast<S>(Density<Rational>(inst.vector));
}

template <Scalar S>
DistanceBounds<S> distance_bounds(Law law, const S& eps) {
  switch (law) {
    case Law::l1l1: return {S(4 * eps), S(16 * eps), true};
    case Law::l1linf: return {S(10 * eps), S(2 * eps), false};
    case Law::ck_clamp:
    case Law::ck_bump:
    case Law::linf_sum: return {eps, eps, false};
  }
  throw PreconditionError("distance_bounds: unknown law");
}

template <Scalar S>
S gate_defect(Law law, const S& eps) {
  switch (law) {
    case Law::l1l1: return l1l1_defect(eps);
    case Law::l1linf: return l1linf_defect(eps);
    case Law::ck_clamp: return clamp_defect(eps);
    case Law::ck_bump: return bump_defect(eps);
    case Law::linf_sum: break;
  }
  throw PreconditionError("gate_defect: ℓ∞-sum gates depend on the components");
}

template <Scalar S>
std::string serialize_result(const Instance& inst, const L1Report<S>& rep) {
  return dump(result_json(inst, rep, rep.op.mass()));
}

template <Scalar S>
std::string serialize_result(const Instance& inst, const SupReport<S>& rep) {
  return dump(result_json(inst, rep, rep.op.values()));
}

std::vector<std::string> certify_result(std::string_view text, std::optional<ScalarMode> mode) {
  const json j = parse_json(text);
  ScalarMode m;
  try {
    m = mode ? *mode : parse_mode(member(j, "scalar_mode", "").get<std::string>());
    return m == ScalarMode::exact ? certify_typed<Rational>(j) : certify_typed<double>(j);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed result file: ") + e.what());
  } catch (const DomainError& e) {
    throw ParseError(std::string("malformed result file: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot write '" + tmp + "'");
    out << content;
    out.flush();
    if (!out) throw ParseError("write to '" + tmp + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw ParseError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
  }
}

#define BPB_INSTANTIATE_IO(S)                                                      \
  template MeasureSpace<S> domain_of(const Instance&);                             \
  template KernelMeasure<S> kernel_of(const Instance&);                            \
  template SupKernel<S> sup_kernel_of(const Instance&);                            \
  template Density<S> vector_of(const Instance&);                                  \
  template DistanceBounds<S> distance_bounds(Law, const S&);                       \
  template S gate_defect(Law, const S&);                                           \
  template std::string serialize_result(const Instance&, const L1Report<S>&);      \
  template std::string serialize_result(const Instance&, const SupReport<S>&);

BPB_INSTANTIATE_IO(Rational)
BPB_INSTANTIATE_IO(double)

}  // namespace bpb
