#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nuq/dynamics.hpp"
#include "nuq/mlp.hpp"
#include "nuq/models.hpp"

namespace nuq {

/// Full Cartesian grid over (chi, sigma, lambda); axis k runs over
/// points_per_axis values spanning ranges[k]. 21 points on [0,2]^3 gives
/// the 9261-point reference lattice.
std::vector<AgassiParams> generate_lattice(
    const std::array<std::pair<double, double>, 3>& ranges,
    int points_per_axis, double epsilon = 1.0, int j = 2);

std::vector<AgassiParams> default_lattice(int points_per_axis = 21);

/// One labeled record of the phase pipeline.
struct PhaseSample {
  AgassiParams params;
  CorrelationSeries series;
  PhaseLabel label = PhaseLabel::kSymmetric;
  EvolutionMode mode;
};

struct DatasetOptions {
  EvolutionMode mode = EvolutionMode::exact();
  int n_samples = kDefaultSeriesSamples;
  double horizon = kDefaultSeriesHorizon;
  std::pair<int, int> pair{0, 1};
  int jobs = 1;
};

/// Labels and C_z series for every lattice point. The Hamiltonian
/// conserves particle number, so the evolution runs in the probe state's
/// half-filled block with per-group eigendecompositions shared across
/// points (couplings only scale the fixed group operators). Output order
/// follows the lattice regardless of worker count.
std::vector<PhaseSample> build_dataset(
    const std::vector<AgassiParams>& lattice, const AgassiEngine& engine,
    const PhaseCuts& cuts, const DatasetOptions& options,
    const std::function<void(std::size_t done, std::size_t total)>& progress =
        {});

/// Shared fixed-operator machinery behind build_dataset, usable point by
/// point (e.g. for scan lines).
class AgassiSeriesEngine {
 public:
  AgassiSeriesEngine(int j, double epsilon, std::vector<double> times,
                     std::pair<int, int> pair);

  CorrelationSeries series(double chi, double sigma, double lambda,
                           const EvolutionMode& mode) const;

  const std::vector<double>& times() const { return times_; }

 private:
  int j_;
  double epsilon_;
  std::vector<double> times_;
  std::pair<int, int> pair_;
  std::vector<std::uint64_t> basis_;     // half-filled sector
  Eigen::VectorXcd probe_;               // probe state inside the sector
  // fixed group operators at unit coupling: J0 diag, and eigensystems of
  // the V / g-same / g-cross / h pieces
  Eigen::VectorXd j0_diag_;
  struct FixedGroup {
    Eigen::VectorXd evals;
    Eigen::MatrixXcd evecs;
  };
  std::array<FixedGroup, 4> fixed_;
  Eigen::MatrixXcd h_block(double chi, double sigma, double lambda) const;
  std::array<Eigen::VectorXd, 2> z_signs_;  // per-site Z sign over the basis
};

/// Dataset CSV: header then one row per sample:
///   chi,sigma,lambda,label,mode,cz_0,...,cz_{n-1}
std::string dataset_to_csv(const std::vector<PhaseSample>& samples);
struct ParsedDataset {
  LabeledData data;                    // inputs: series rows, labels: phases
  std::vector<AgassiParams> params;
  std::vector<std::string> modes;
};
ParsedDataset parse_dataset_csv(const std::string& text);

/// points CSV manifest: epsilon,chi,sigma,lambda,j (header optional)
std::vector<AgassiParams> parse_points_csv(const std::string& text);

std::string series_to_csv(const CorrelationSeries& series);

}  // namespace nuq
