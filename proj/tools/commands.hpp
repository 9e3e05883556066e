#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace nuq::cli {

// exit codes shared by every subcommand
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNoConvergence = 3;

struct CommonOutput {
  std::string output;
  bool force = false;
};

/// Resolve against NUQ_OUTPUT_DIR when the path is relative.
std::filesystem::path resolve_output(const std::string& path);

/// Refuses to overwrite without force; writes through a .partial file and
/// renames, so an interrupted run never leaves a truncated final file.
void write_output_file(const std::filesystem::path& path,
                       const std::string& content, bool force);

void write_manifest(const std::filesystem::path& primary_output,
                    const std::string& command,
                    const std::map<std::string, std::string>& config,
                    std::uint64_t seed,
                    const std::map<std::string, std::string>& digests,
                    const std::string& started_at);

struct EvolveArgs {
  std::string model = "agassi";
  double epsilon = 1.0, chi = 0.0, sigma = 0.0, lambda = 0.0;
  int j = 2;
  int n_sites = 6;
  double kappa = 0.0, h_field = 0.0;
  std::string mode = "exact";
  int samples = 64;
  double horizon = 10.0;
  std::string pair = "1,2";  // 1-based site labels
  std::string dump_hamiltonian;
  CommonOutput out;
};
int cmd_evolve(const EvolveArgs& args);

struct DatasetArgs {
  int points_per_axis = 21;
  double range_lo = 0.0, range_hi = 2.0;
  double epsilon = 1.0;
  int j = 2;
  std::string mode = "exact";
  int samples = 64;
  double horizon = 10.0;
  std::string points_file;
  int jobs = 0;  // 0 = hardware concurrency
  int calibration_points = 101;
  double d_cut = -1.0, pg_cut = -1.0, ph_cut = -1.0;  // <0 = calibrate
  CommonOutput out;
};
int cmd_dataset(const DatasetArgs& args);

struct TrainArgs {
  std::string data;
  std::string model_out;
  std::string log_out;
  std::uint64_t seed = 12345;
  double learning_rate = 1e-2;
  double momentum = 0.9;
  int batch_size = 32;
  int epochs = 200;
  double split_fraction = 0.10;
  bool force = false;
};
int cmd_train(const TrainArgs& args);

struct EvalArgs {
  std::string data;
  std::string model;
  std::string split = "test";  // test | train | all
};
int cmd_eval(const EvalArgs& args);

struct ScanArgs {
  std::string model;
  std::string axis = "chi";
  std::string fixed = "0.5,0.5";
  int points = 21;
  std::string mode = "exact";
  double epsilon = 1.0;
  int j = 2;
  CommonOutput out;
};
int cmd_scan(const ScanArgs& args);

struct VqeArgs {
  double epsilon = 1.0;
  double chi = 0.0;
  int n_particles = 4;
  double theta0 = 0.1;
  std::string dump_hamiltonian;
  std::string output;  // optional report file
  bool force = false;
};
int cmd_vqe(const VqeArgs& args);

struct AdaptArgs {
  double epsilon = 1.0, chi = 0.0, sigma = 0.0, lambda = 0.0;
  int j = 1;
  std::string pool = "number";  // number | agassi-pairs
  int max_iters = 30;
  double grad_tol = 1e-6;
  std::string hamiltonian_file;  // optional custom H (serialized PauliSum)
  std::string trace_out;
  std::string dump_hamiltonian;
  std::string output;
  bool force = false;
};
int cmd_adapt(const AdaptArgs& args);

}  // namespace nuq::cli
