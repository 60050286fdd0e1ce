#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "citenet/pipeline.hpp"

namespace citenet {

/// Figure ids understood by emit_plot_data.
const std::vector<std::string_view>& figure_ids();

/// Writes figures/fig_<id>.csv under the output directory from the stage
/// outputs of a previous run and returns its path. Throws Error for an
/// unknown id or when an input file is missing (naming the stage that
/// produces it).
///
///   2B, 2C, 2D  self-citation/-reference rates at journal, group, publisher level
///               (group,year,kind,mean,ci_low,ci_high,n)
///   2E          market share of the ten largest publishers (publisher_id,year,market_share)
///   2F          qj_id,psi_ratio,relative_publisher_size,qj_impact
///   3           metric,qj_id,uj_id,qj_score,uj_score,log_difference (first configured network)
///   4A          paper_id,group,citations
///   4B          paper_id,group,median_z,p10_z
///   4C          group,author_count,mean_d,n
///   4D          author_stats.csv
///   S15         synth_psi_scenarios.csv
///   S16         synth_degrees.csv
///   S18         synth_psi_rewire.csv
///   S19         group,year,mean_d,n
std::filesystem::path emit_plot_data(const RunConfig& config, std::string_view figure_id);

}  // namespace citenet
