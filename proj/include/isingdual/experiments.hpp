#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isingdual/dynamics.hpp"
#include "isingdual/estimation.hpp"
#include "isingdual/model.hpp"

// One-command regeneration of the worked examples: the two-variable fit, the
// potentials/probabilities tables, the transform example, the activation-count
// histograms and the penalized path study. Each writes its tables to a directory
// and compares against embedded reference values.
namespace isingdual::experiments {

struct Check {
  std::string name;
  std::string detail;
  bool pass = false;
};

struct Report {
  std::string experiment;
  std::vector<Check> checks;
  std::vector<std::filesystem::path> files;

  bool passed() const;
  std::string render() const;
};

/// The example data set: 1000 observations with relative frequencies (0.14, 0.18, 0.18, 0.50)
/// over (low,low), (low,high), (high,low), (high,high).
Dataset example_counts(Domain domain);

/// The example's displayed (3-decimal) parameters: {0,1}: a* = 0.251, b* = 0.77;
/// {-1,1}: a = 0.318, b = 0.193.
IsingModel example_model_rounded(Domain domain);

struct Figure2Cell {
  Domain domain;
  double coupling;
  TrajectoryStats stats;
  double mean_se;
  double variance_se;
};

/// p = 10, fully connected, zero thresholds, coupling in {0, 0.1, 0.2}, both domains.
/// Cells are ordered (pm_one, 0), (pm_one, 0.1), (pm_one, 0.2), (zero_one, 0), ...
/// and use streams 0..5 of `seed`.
std::vector<Figure2Cell> run_figure2(std::int64_t steps, std::uint64_t seed,
                                     UpdateRule rule = UpdateRule::Synchronous);

/// Sampling error of a trajectory statistic: max(batch-means SE, iid SE).
double mean_standard_error(const TrajectoryStats& stats);
double variance_standard_error(const TrajectoryStats& stats);

/// The p = 4 {0,1} model used to generate the penalized-path study data.
IsingModel path_study_model();

Report figure1(const std::filesystem::path& out_dir);
Report appendix_a(const std::filesystem::path& out_dir);
Report transform_example(const std::filesystem::path& out_dir);
inline constexpr std::uint64_t kFigure2Seed = 20180101;
inline constexpr std::uint64_t kPathStudySeed = 500;

Report figure2(const std::filesystem::path& out_dir, std::int64_t steps = 100000, std::uint64_t seed = kFigure2Seed);
Report appendix_d(const std::filesystem::path& out_dir, std::uint64_t seed = kPathStudySeed);

/// Names accepted by run(): figure1, appendixA, transform_example, figure2, appendixD.
const std::vector<std::string>& names();
/// `seed` overrides the default seed of the sampling experiments (figure2, appendixD).
Report run(std::string_view name, const std::filesystem::path& out_dir, std::optional<std::uint64_t> seed = {});

}  // namespace isingdual::experiments
