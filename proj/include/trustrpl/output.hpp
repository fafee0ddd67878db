#pragma once

#include <filesystem>

#include "trustrpl/csv.hpp"
#include "trustrpl/simulation.hpp"

namespace trustrpl::output {

// Column layouts. Every table starts with config_digest and seed.
//
// metadata.csv             config_digest,seed,key,value
// epochs.csv               config_digest,seed,epoch,return,n_nonroot,threshold,state,
//                          chosen_state,chosen_action,explored,decision,optimal,
//                          removed_count,removed_nodes,failure_rate
// trust_series.csv         config_digest,seed,episode,node,class,parent,trust,reward
// action_distribution.csv  config_digest,seed,kind,pair,state,action,count,proportion

csv::Table metadata_table(const sim::RunResult& result, const sim::ScenarioConfig& config);
csv::Table epochs_table(const sim::RunResult& result);
csv::Table trust_series_table(const sim::RunResult& result);
csv::Table action_distribution_table(const sim::RunResult& result);

/// Writes the four tables of one run into `dir`, creating it if needed.
void write_bundle(const std::filesystem::path& dir, const sim::RunResult& result,
                  const sim::ScenarioConfig& config);

}  // namespace trustrpl::output
