#include "trustrpl/output.hpp"

#include <string>

#include "trustrpl/config_io.hpp"

namespace trustrpl::output {

namespace {

std::vector<std::string> prefix(const sim::RunResult& r) {
  return {r.metadata.config_digest, std::to_string(r.metadata.seed)};
}

csv::Table with_header(std::initializer_list<const char*> columns) {
  csv::Table t;
  t.header = {"config_digest", "seed"};
  for (const char* c : columns) t.header.emplace_back(c);
  return t;
}

std::string join_ids(const std::vector<NodeId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ';';
    out += to_string(ids[i]);
  }
  return out;
}

}  // namespace

csv::Table metadata_table(const sim::RunResult& result, const sim::ScenarioConfig& config) {
  auto t = with_header({"key", "value"});
  auto add = [&](std::string key, std::string value) {
    auto row = prefix(result);
    row.push_back(std::move(key));
    row.push_back(std::move(value));
    t.add_row(std::move(row));
  };
  add("generator", result.metadata.generator);
  add("environment", result.metadata.environment);
  add("n_epochs", std::to_string(result.metadata.n_epochs));
  add("episodes_per_epoch", std::to_string(result.metadata.episodes_per_epoch));
  add("config", config::to_json(config).dump());
  return t;
}

csv::Table epochs_table(const sim::RunResult& result) {
  auto t = with_header({"epoch", "return", "n_nonroot", "threshold", "state", "chosen_state",
                        "chosen_action", "explored", "decision", "optimal", "removed_count",
                        "removed_nodes", "failure_rate"});
  for (std::size_t i = 0; i < result.epochs.size(); ++i) {
    const auto& e = result.epochs[i];
    auto row = prefix(result);
    row.insert(row.end(),
               {std::to_string(e.epoch), std::to_string(e.return_value),
                std::to_string(e.n_nonroot), std::to_string(marl::return_threshold(e.n_nonroot)),
                std::string(marl::to_string(e.state)), std::string(marl::to_string(e.chosen.state)),
                std::string(marl::to_string(e.chosen.action)), e.explored ? "1" : "0",
                marl::label(e.decision()), marl::is_optimal(e.decision()) ? "1" : "0",
                std::to_string(e.removed_nodes.size()), join_ids(e.removed_nodes),
                csv::format_double(result.epoch_failure_rate.at(i))});
    t.add_row(std::move(row));
  }
  return t;
}

csv::Table trust_series_table(const sim::RunResult& result) {
  auto t = with_header({"episode", "node", "class", "parent", "trust", "reward"});
  t.rows.reserve(result.trust_series.size());
  for (const auto& s : result.trust_series) {
    auto row = prefix(result);
    row.insert(row.end(), {std::to_string(s.episode), to_string(s.node),
                           std::string(to_string(s.node_class)), to_string(s.parent),
                           csv::format_double(s.trust), std::to_string(s.reward)});
    t.add_row(std::move(row));
  }
  return t;
}

csv::Table action_distribution_table(const sim::RunResult& result) {
  auto t = with_header({"kind", "pair", "state", "action", "count", "proportion"});
  const double total = static_cast<double>(result.epochs.size());
  auto emit = [&](const char* kind, const std::array<std::uint64_t, 4>& tally) {
    for (const auto& pair : marl::kPairOrder) {
      const auto count = tally[pair.index()];
      auto row = prefix(result);
      row.insert(row.end(), {kind, marl::label(pair), std::string(marl::to_string(pair.state)),
                             std::string(marl::to_string(pair.action)), std::to_string(count),
                             csv::format_double(total == 0 ? 0.0 : count / total)});
      t.add_row(std::move(row));
    }
  };
  emit("decision", result.decision_tally);
  emit("chosen", result.chosen_tally);
  return t;
}

void write_bundle(const std::filesystem::path& dir, const sim::RunResult& result,
                  const sim::ScenarioConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create '" + dir.string() + "': " + ec.message());
  csv::write(dir / "metadata.csv", metadata_table(result, config));
  csv::write(dir / "epochs.csv", epochs_table(result));
  csv::write(dir / "trust_series.csv", trust_series_table(result));
  csv::write(dir / "action_distribution.csv", action_distribution_table(result));
}

}  // namespace trustrpl::output
