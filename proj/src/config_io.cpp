#include "trustrpl/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>

namespace trustrpl::config {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::Config, msg); }

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) config_error(path + " must be a JSON object");
  const std::set<std::string_view> keys(allowed);
  for (const auto& [key, value] : obj.items()) {
    if (!keys.contains(key)) {
      config_error("unknown key '" + (path.empty() ? key : path + "." + key) + "'");
    }
  }
}

std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

template <typename T>
void read(const json& obj, const std::string& path, const std::string& key, T& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  const std::string field = join_path(path, key);
  if constexpr (std::is_same_v<T, double>) {
    if (!it->is_number()) config_error(field + " must be a number");
    out = it->template get<double>();
  } else if constexpr (std::is_same_v<T, std::uint64_t>) {
    if (!it->is_number_unsigned()) config_error(field + " must be a non-negative integer");
    out = it->template get<std::uint64_t>();
  } else if constexpr (std::is_same_v<T, int>) {
    if (!it->is_number_integer()) config_error(field + " must be an integer");
    out = it->template get<int>();
  } else {
    static_assert(std::is_same_v<T, std::string>);
    if (!it->is_string()) config_error(field + " must be a string");
    out = it->template get<std::string>();
  }
}

}  // namespace

json to_json(const sim::ScenarioConfig& c) {
  return json{
      {"seed", c.seed},
      {"n_initial_nodes", c.n_initial_nodes},
      {"environment",
       {{"name", behavior::to_string(c.environment.name)},
        {"malicious_fraction", c.environment.malicious_fraction},
        {"honest_share", c.environment.honest_share}}},
      {"trust",
       {{"A", c.trust.a},
        {"B", c.trust.b},
        {"C", c.trust.c},
        {"theta", c.trust.theta},
        {"alpha", c.trust.alpha}}},
      {"marl",
       {{"gamma", c.marl.gamma},
        {"epsilon", c.marl.epsilon},
        {"value_iteration_tolerance", c.marl.value_iteration_tolerance}}},
      {"episodes_per_epoch", c.marl.episodes_per_epoch},
      {"n_epochs", c.n_epochs},
      {"ops_per_episode", c.ops_per_episode},
      {"join_attempts_per_episode", c.join_attempts_per_episode},
      {"parent_change_probability", c.parent_change_probability},
      {"rejoin_probability", c.rejoin_probability},
      {"dio_neighbors", c.dio_neighbors},
      {"rank_factor", c.rank_factor},
  };
}

sim::ScenarioConfig from_json(const json& doc) {
  reject_unknown(doc, "", {"seed", "n_initial_nodes", "environment", "trust", "marl",
                           "episodes_per_epoch", "n_epochs", "ops_per_episode",
                           "join_attempts_per_episode", "parent_change_probability", "rejoin_probability",
                           "dio_neighbors", "rank_factor"});
  sim::ScenarioConfig c;
  read(doc, "", "seed", c.seed);
  read(doc, "", "n_initial_nodes", c.n_initial_nodes);
  read(doc, "", "episodes_per_epoch", c.marl.episodes_per_epoch);
  read(doc, "", "n_epochs", c.n_epochs);
  read(doc, "", "ops_per_episode", c.ops_per_episode);
  read(doc, "", "join_attempts_per_episode", c.join_attempts_per_episode);
  read(doc, "", "parent_change_probability", c.parent_change_probability);
  read(doc, "", "rejoin_probability", c.rejoin_probability);
  read(doc, "", "dio_neighbors", c.dio_neighbors);
  read(doc, "", "rank_factor", c.rank_factor);

  if (auto it = doc.find("environment"); it != doc.end()) {
    std::string name;
    if (it->is_string()) {
      name = it->get<std::string>();
    } else {
      reject_unknown(*it, "environment", {"name", "malicious_fraction", "honest_share"});
      if (!it->contains("name")) config_error("environment.name is required");
      read(*it, "environment", "name", name);
    }
    try {
      c.environment = behavior::EnvironmentProfile::preset(behavior::parse_environment(name));
    } catch (const Error& e) {
      config_error(std::string("environment.name: ") + e.what());
    }
    if (it->is_object()) {
      read(*it, "environment", "malicious_fraction", c.environment.malicious_fraction);
      read(*it, "environment", "honest_share", c.environment.honest_share);
    }
  }
  if (auto it = doc.find("trust"); it != doc.end()) {
    reject_unknown(*it, "trust", {"A", "B", "C", "theta", "alpha"});
    read(*it, "trust", "A", c.trust.a);
    read(*it, "trust", "B", c.trust.b);
    read(*it, "trust", "C", c.trust.c);
    read(*it, "trust", "theta", c.trust.theta);
    read(*it, "trust", "alpha", c.trust.alpha);
  }
  if (auto it = doc.find("marl"); it != doc.end()) {
    reject_unknown(*it, "marl", {"gamma", "epsilon", "value_iteration_tolerance"});
    read(*it, "marl", "gamma", c.marl.gamma);
    read(*it, "marl", "epsilon", c.marl.epsilon);
    read(*it, "marl", "value_iteration_tolerance", c.marl.value_iteration_tolerance);
  }
  c.validate();
  return c;
}

sim::ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Config, "config file '" + path.string() + "' is not valid JSON: " +
                                       e.what());
  }
  return from_json(doc);
}

std::string config_digest(const sim::ScenarioConfig& config) {
  json doc = to_json(config);
  doc.erase("seed");
  // FNV-1a over the canonical (key-sorted) dump.
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : doc.dump()) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace trustrpl::config
