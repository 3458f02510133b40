#pragma once

/**
 * Experiment orchestration: seeded single runs, Monte Carlo aggregation,
 * algorithm comparison, the bounds report, and artifact emission.
 *
 * Determinism contract: given equal configuration, every entry point
 * produces bit-identical results regardless of thread count and of the
 * SIMD backend in use. Monte Carlo reduction is blocked in fixed-size
 * run-index order, so the summation tree never depends on scheduling.
 */

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "towbandit/analysis.hpp"
#include "towbandit/config.hpp"
#include "towbandit/trace.hpp"

namespace towbandit {

struct McOptions {
  /// 0 = automatic (hardware concurrency, capped by TOW_BANDIT_THREADS).
  unsigned threads = 0;
};

/// One seeded run with a full per-play trace. Deterministic in
/// (config, run_index). voltage may be null; it is filled only for the
/// tug-of-war algorithm.
RunTrace run_single(const ExperimentConfig& cfg, std::uint64_t run_index,
                    std::vector<VoltageRecord>* voltage = nullptr);

/// Plain-operation scalar reference for one run's curves (cumulative
/// reward and suboptimal plays after each step; both length cfg.plays).
/// This is the reference the SIMD engines are equivalence-tested against,
/// and the fallback path for configurations the engines do not cover.
void run_curve_reference(const ExperimentConfig& cfg, std::uint64_t run_index,
                         double* out_cum, double* out_sub);

/// Mean curves over cfg.samples runs.
AggregateCurve monte_carlo(const ExperimentConfig& cfg, McOptions opts = {});

/// Aligned per-play mean-cumulative-reward columns, one per config. All
/// configs must share machines, master_seed, plays and samples.
struct CompareTable {
  std::vector<std::string> names;            // one per column
  std::vector<std::vector<double>> columns;  // mean cumulative reward
  std::uint64_t plays = 0;
  std::uint64_t samples = 0;
};
CompareTable compare(const std::vector<ExperimentConfig>& configs,
                     McOptions opts = {});

/// Closed-form bound chain for a two-machine problem; n = play horizon.
/// Requires mu_a > mu_b and positive sigmas.
RegretReport bounds_report(const BoundParams& params, std::uint64_t plays);

/// key=value rendering of a bounds report (one pair per line).
std::string bounds_report_text(const BoundParams& params, std::uint64_t plays,
                               const RegretReport& report);

// --- artifact emission (bit-identical for identical inputs) ---------------

/// Doubles are rendered as shortest round-trip decimals, so emitted files
/// are lossless and byte-stable.
std::string format_double(double value);

void emit_csv(const AggregateCurve& curve, const std::filesystem::path& dest);
void emit_csv(const RunTrace& trace, const std::filesystem::path& dest);
void emit_voltage_csv(const std::vector<VoltageRecord>& rows,
                      const std::filesystem::path& dest);
void emit_compare_csv(const CompareTable& table,
                      const std::filesystem::path& dest);

/// Reads back a curve CSV written by emit_csv.
AggregateCurve read_curve_csv(const std::filesystem::path& path);

/// gnuplot script plotting mean cumulative reward vs play for each CSV.
/// csv_paths are written into the script verbatim (keep them relative).
void emit_plot_script(const std::vector<std::string>& csv_paths,
                      const std::vector<std::string>& titles,
                      const std::filesystem::path& dest);

/// Thread count the harness will actually use for `blocks` work items.
unsigned effective_threads(unsigned requested, std::size_t blocks);

}  // namespace towbandit
