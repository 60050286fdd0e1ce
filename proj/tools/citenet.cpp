#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <optional>
#include <string>

#include "citenet/pipeline.hpp"
#include "citenet/report.hpp"

namespace {

using citenet::RunConfig;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kInvalid = 2;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::string out;
};

void add_common(CLI::App* cmd, Overrides& o, bool config_required) {
  auto* opt = cmd->add_option("--config", o.config, "run configuration (JSON)");
  if (config_required) opt->required();
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "output directory");
}

RunConfig make_config(const Overrides& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : RunConfig::load(o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.threads) c.threads = *o.threads;
  if (!o.out.empty()) c.output = o.out;
  return c;
}

bool report_problems(const RunConfig& c) {
  const auto problems = c.problems();
  for (const auto& p : problems) fmt::print(stderr, "config: {}\n", p);
  return problems.empty();
}

int run_stages(const RunConfig& c) {
  if (!report_problems(c)) return kInvalid;
  const auto report = citenet::run_pipeline(c);
  for (const auto& s : report.stages) {
    if (s.status == citenet::StageStatus::disabled) continue;
    fmt::print("{:<10} {:<8} {:8.2f}s", s.name, citenet::stage_status_name(s.status), s.seconds);
    if (!s.error.empty()) fmt::print("  {}", s.error);
    fmt::print("\n");
    for (const auto& w : s.warnings) fmt::print("           warning: {}\n", w);
  }
  fmt::print("config hash {:016x}, outputs in {}\n", report.config_hash, c.output.string());
  return report.partial() ? kFailure : kOk;
}

int validate(const RunConfig& c) {
  bool ok = report_problems(c);
  const bool needs_corpus =
      std::any_of(c.stages.begin(), c.stages.end(), [](const auto& s) { return s != "synth"; });
  if (ok && needs_corpus) {
    const auto corpus = citenet::load_corpus(c.corpus, c.format, c.years);
    const auto v = citenet::validate_corpus(corpus);
    for (const auto& violation : v.violations)
      fmt::print(stderr, "{}: {}: {}\n", violation.kind, violation.subject, violation.message);
    fmt::print("{} papers, {} journals, {} violations\n", corpus.papers().size(), corpus.journals().size(),
               v.violations.size());
    ok = v.clean();
  }
  return ok ? kOk : kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Citation-network analysis of journals, publishers and authors"};
  app.require_subcommand(1);

  Overrides o;
  std::string figure;
  bool diagnostic = false;

  auto* validate_cmd = app.add_subcommand("validate", "check the configuration and the corpus");
  add_common(validate_cmd, o, true);
  auto* run_cmd = app.add_subcommand("run", "run every enabled stage");
  add_common(run_cmd, o, true);
  auto* synth_cmd = app.add_subcommand("synth", "synthetic solidarity experiments only");
  add_common(synth_cmd, o, false);
  auto* match_cmd = app.add_subcommand("match", "impact and control matching only");
  add_common(match_cmd, o, true);
  match_cmd->add_flag("--diagnostic", diagnostic, "also report mean gaps for each binning scheme");
  auto* net_cmd = app.add_subcommand("net", "journal networks and centralities only");
  add_common(net_cmd, o, true);
  auto* report_cmd = app.add_subcommand("report", "emit figure tables from previous outputs");
  add_common(report_cmd, o, true);
  report_cmd->add_option("--figure", figure, "figure id, or 'all'")->required();

  CLI11_PARSE(app, argc, argv);

  RunConfig c;
  try {
    c = make_config(o);
  } catch (const std::exception& e) {
    fmt::print(stderr, "config: {}\n", e.what());
    return kInvalid;
  }
  try {
    if (*validate_cmd) return validate(c);
    if (*run_cmd) return run_stages(c);
    if (*synth_cmd) {
      c.stages = {"synth"};
      return run_stages(c);
    }
    if (*net_cmd) {
      c.stages = {"jnet"};
      return run_stages(c);
    }
    if (*match_cmd) {
      c.stages = {"impact", "matching"};
      const int rc = run_stages(c);
      if (rc != kOk || !diagnostic) return rc;
      citenet::write_binning_diagnostic(c);
      fmt::print("binning diagnostic written to {}\n", (c.output / "binning_diagnostic.csv").string());
      return kOk;
    }
    if (*report_cmd) {
      if (figure != "all") {
        fmt::print("{}\n", citenet::emit_plot_data(c, figure).string());
        return kOk;
      }
      int rc = kOk;
      for (auto id : citenet::figure_ids()) {
        try {
          fmt::print("{}\n", citenet::emit_plot_data(c, id).string());
        } catch (const citenet::Error& e) {
          fmt::print(stderr, "fig {}: {}\n", id, e.what());
          rc = kFailure;
        }
      }
      return rc;
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kFailure;
  }
  return kOk;
}
