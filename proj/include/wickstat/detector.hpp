#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wickstat/dynamics.hpp"
#include "wickstat/renorm.hpp"
#include "wickstat/stats.hpp"

namespace wickstat {

enum class Normalization { Power, Log };
std::string to_string(Normalization n);

struct DetectorSpec {
  ModelParams params;
  double alpha = 0.0;
  double gamma = 0.0;
  Normalization normalization = Normalization::Power;
  std::vector<int> Ns;  // geometric
  double epsilon = 0.0;               // alpha - alpha0
  double gamma_lo = 0.0, gamma_hi = 0.0;  // admissible open window

  double delta() const;
  // N^{-gamma} or (log N)^{-gamma}
  double normalize(double raw, int N) const;
  // Throws when gamma or alpha violate the constraints of the chosen mode.
  void validate() const;
};

class DetectorInapplicable : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// int H_{k+1}(<grad>^alpha P_N phi; c1) dx + (2pi)^d (k+1) c2 with N = c.N.
double statistic(const SpectralField& phi, const DetectorSpec& s, const RenormConstants& c);

// Strict singular case: alpha = alpha0 + epsilon (halved up to ten times until
// the gamma window is nonempty), power normalization, gamma at the window
// midpoint. Borderline case: alpha = alpha0, log normalization, gamma = 3/4.
DetectorSpec choose_spec(const ModelParams& p, const std::vector<int>& Ns, double epsilon = 0.05);

enum class Law { Z, U };
std::string to_string(Law l);

struct StatisticTrace {
  Law law = Law::Z;
  int N = 0;
  std::uint64_t replica = 0;
  double raw = 0.0;
  double normalized = 0.0;
};

// Where the two ensembles come from.
enum class ExperimentMode {
  Coupled,      // Z-law draws against the coupled u(t)
  NullZ,        // both ensembles drawn from the Z law, independent streams
  NullLinear,   // u-law simulated with the nonlinearity switched off
};
std::string to_string(ExperimentMode m);

struct LawSummary {
  std::vector<double> median, iqr;          // signed normalized statistic
  std::vector<double> median_abs, iqr_abs;  // |normalized statistic|
  MannKendall trend;                        // on median_abs over the N grid
  bool strictly_increasing = false;         // median_abs
  bool strictly_decreasing = false;
};

struct SeparationReport {
  DetectorSpec spec;
  ExperimentMode mode = ExperimentMode::Coupled;
  int replicas = 0;
  std::vector<RenormConstants> constants;
  LawSummary z, u;
  double separation = 0.0;  // median |T_Z| / median |T_u| at the largest N
  double min_separation = 5.0;
  // separation >= min_separation and Z growth: Mann-Kendall p < 0.05 upward,
  // or strictly increasing medians on grids too short for the test
  bool achieved = false;
};

// Summaries from traces for every N in spec.Ns and both laws.
SeparationReport run_experiment(const DetectorSpec& spec, const std::vector<RenormConstants>& constants,
                                const std::vector<StatisticTrace>& traces, double min_separation = 5.0);

struct ExperimentConfig {
  SimConfig sim;  // N is ignored; the grid of spec.Ns is used
  int replicas = 200;
  ExperimentMode mode = ExperimentMode::Coupled;
  double min_separation = 5.0;
  int workers = 1;
};

std::vector<RenormConstants> detector_constants(const DetectorSpec& spec, int workers = 1);
// Samples both ensembles at every N and evaluates the statistic.
std::vector<StatisticTrace> sample_traces(const DetectorSpec& spec, const std::vector<RenormConstants>& constants,
                                          const ExperimentConfig& e);
SeparationReport detect(const DetectorSpec& spec, const ExperimentConfig& e, std::vector<StatisticTrace>* traces = nullptr);

nlohmann::ordered_json to_json(const DetectorSpec& s);
nlohmann::ordered_json to_json(const SeparationReport& r);
// law,N,replica,raw,normalized,manifest_hash
void write_traces_csv(std::ostream& os, const std::vector<StatisticTrace>& t, const std::string& manifest_hash);

}  // namespace wickstat
