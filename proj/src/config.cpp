// SPDX-License-Identifier: Apache-2.0
#include "rwre/config.hpp"

#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "rwre/error.hpp"

namespace rwre {

namespace {

nlohmann::json to_value(const std::string& raw) {
  std::string s = raw;
  const auto hash = s.find(" #");
  if (hash != std::string::npos) s.erase(hash);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  auto parsed = nlohmann::json::parse(s, nullptr, false);
  if (!parsed.is_discarded()) return parsed;
  return s;
}

}  // namespace

nlohmann::json parse_config(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw Error(ErrorCode::kConfig, "key '" + section + "' outside of a section");
    }
    nlohmann::json& sec = out[section];
    sec = nlohmann::json::object();
    for (const auto& [key, value] : body) sec[key] = to_value(value.data());
  }
  return out;
}

nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

EnvSpec env_from_config(const nlohmann::json& config) {
  if (!config.contains("env")) throw Error(ErrorCode::kConfig, "missing [env] section");
  return env_spec_from_json(config.at("env"));
}

}  // namespace rwre
