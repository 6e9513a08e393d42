// SPDX-License-Identifier: Apache-2.0
#include "rwre/environment.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rwre/error.hpp"

namespace rwre {

std::string to_string(ChildrenModel model) {
  return model == ChildrenModel::kCommonChild ? "common_child" : "iid_children";
}

ChildrenModel children_model_from_string(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "iid_children" || s == "iid") return ChildrenModel::kIidChildren;
  if (s == "common_child" || s == "common") return ChildrenModel::kCommonChild;
  throw Error(ErrorCode::kConfig, "unknown children_model '" + name + "'");
}

EnvSpec make_env_spec(int b, std::vector<Atom> atoms, ChildrenModel model,
                      bool require_nondegenerate) {
  if (b < 2) throw Error(ErrorCode::kBadBranching, "b must be >= 2, got " + std::to_string(b));
  if (atoms.empty()) throw Error(ErrorCode::kProbSum, "atom list is empty");

  double total = 0.0;
  std::set<double> distinct;
  for (const auto& atom : atoms) {
    if (!(atom.value > 0.0) || !std::isfinite(atom.value)) {
      throw Error(ErrorCode::kNonpositiveAtom,
                  "atom value must lie in (0, inf), got " + std::to_string(atom.value));
    }
    if (!(atom.prob > 0.0) || atom.prob > 1.0) {
      throw Error(ErrorCode::kProbSum,
                  "atom probability must lie in (0, 1], got " + std::to_string(atom.prob));
    }
    total += atom.prob;
    distinct.insert(atom.value);
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::kProbSum, "probabilities sum to " + std::to_string(total));
  }

  EnvSpec spec;
  spec.b_ = b;
  spec.model_ = model;
  spec.degenerate_ = distinct.size() < 2;
  if (require_nondegenerate && spec.degenerate_) {
    throw Error(ErrorCode::kDegenerate, "law of A has a single distinct value");
  }

  double acc = 0.0;
  spec.cdf_.reserve(atoms.size());
  for (const auto& atom : atoms) {
    acc += atom.prob;
    spec.cdf_.push_back(acc);
    spec.mean_ += atom.prob * atom.value;
  }
  spec.cdf_.back() = 1.0;
  spec.a_min_ = *distinct.begin();
  spec.a_max_ = *distinct.rbegin();
  spec.atoms_ = std::move(atoms);

  const double bd = b;
  const double lo = spec.a_min_;
  const double hi = spec.a_max_;
  const double to_parent = 1.0 / (1.0 + bd * hi);
  if (model == ChildrenModel::kCommonChild) {
    spec.eps0_ = std::min({to_parent, lo / (1.0 + bd * lo), 1.0 / bd});
  } else {
    // A non-root child edge is smallest when that child draws a_min and its
    // siblings draw a_max; the root's A/S form dominates it.
    spec.eps0_ = std::min(to_parent, lo / (1.0 + lo + (bd - 1.0) * hi));
  }
  return spec;
}

EnvSpec make_critical_spec(int b, std::vector<Atom> atoms, ChildrenModel model) {
  EnvSpec raw = make_env_spec(b, atoms, model, true);
  const double scale = 1.0 / (b * raw.mean());
  double e_a = 0.0;
  double e_alog = 0.0;
  for (auto& atom : atoms) {
    atom.value *= scale;
    e_a += atom.prob * atom.value;
    e_alog += atom.prob * atom.value * std::log(atom.value);
  }
  if (!(e_alog / e_a < 0.0)) {
    throw Error(ErrorCode::kNotCritical, "rescaled law has psi'(1) >= 0");
  }
  EnvSpec spec = make_env_spec(b, std::move(atoms), model, true);
  spec.exact_critical_ = true;
  return spec;
}

std::uint64_t root_key(std::uint64_t seed) noexcept { return derive_key(seed, kEnvDomain); }

std::uint64_t vertex_key(std::uint64_t seed, const VertexPath& path) noexcept {
  std::uint64_t key = root_key(seed);
  for (auto i : path.indices) key = child_key(key, i);
  return key;
}

VertexEnv vertex_env(const EnvSpec& spec, std::uint64_t seed, const VertexPath& path) {
  VertexEnv env;
  env.a_children.resize(spec.b());
  const double sum = spec.sample_children(vertex_key(seed, path), env.a_children);
  env.omega_children.resize(spec.b());
  if (path.is_root()) {
    env.omega_parent = 0.0;
    for (int i = 0; i < spec.b(); ++i) env.omega_children[i] = env.a_children[i] / sum;
  } else {
    const double denom = 1.0 + sum;
    env.omega_parent = 1.0 / denom;
    for (int i = 0; i < spec.b(); ++i) env.omega_children[i] = env.a_children[i] / denom;
  }
  return env;
}

std::vector<double> transition_probs(const VertexEnv& env, bool is_root) {
  std::vector<double> probs;
  probs.reserve(env.omega_children.size() + 1);
  probs.push_back(is_root ? 0.0 : env.omega_parent);
  probs.insert(probs.end(), env.omega_children.begin(), env.omega_children.end());
  return probs;
}

void to_json(nlohmann::json& j, const EnvSpec& spec) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& atom : spec.atoms()) atoms.push_back({atom.value, atom.prob});
  j = nlohmann::json{{"b", spec.b()},
                     {"atoms", atoms},
                     {"children_model", to_string(spec.children_model())}};
  if (spec.exact_critical()) j["exact_critical"] = true;
}

EnvSpec env_spec_from_json(const nlohmann::json& j) {
  try {
    const int b = j.at("b").get<int>();
    std::vector<Atom> atoms;
    for (const auto& pair : j.at("atoms")) {
      if (!pair.is_array() || pair.size() != 2) {
        throw Error(ErrorCode::kConfig, "each atom must be a [value, prob] pair");
      }
      atoms.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    ChildrenModel model = ChildrenModel::kIidChildren;
    if (j.contains("children_model")) {
      model = children_model_from_string(j.at("children_model").get<std::string>());
    }
    if (j.value("exact_critical", false)) return make_critical_spec(b, std::move(atoms), model);
    return make_env_spec(b, std::move(atoms), model);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
}

}  // namespace rwre
