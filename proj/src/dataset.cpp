#include "nuq/dataset.hpp"

#include <Eigen/Eigenvalues>
#include <atomic>
#include <bit>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "nuq/dense.hpp"
#include "nuq/io.hpp"

namespace nuq {

namespace {

constexpr cplx kImag{0.0, 1.0};

}  // namespace

std::vector<AgassiParams> generate_lattice(
    const std::array<std::pair<double, double>, 3>& ranges,
    int points_per_axis, double epsilon, int j) {
  if (points_per_axis < 2) {
    throw std::invalid_argument("generate_lattice: need >= 2 points per axis");
  }
  for (const auto& [lo, hi] : ranges) {
    if (!(hi > lo)) {
      throw std::invalid_argument("generate_lattice: empty axis range");
    }
  }
  auto axis_value = [&](int axis, int k) {
    const auto& [lo, hi] = ranges[axis];
    return lo + (hi - lo) * k / (points_per_axis - 1);
  };
  std::vector<AgassiParams> out;
  out.reserve(static_cast<std::size_t>(points_per_axis) * points_per_axis *
              points_per_axis);
  for (int a = 0; a < points_per_axis; ++a) {
    for (int b = 0; b < points_per_axis; ++b) {
      for (int c = 0; c < points_per_axis; ++c) {
        AgassiParams p;
        p.epsilon = epsilon;
        p.j = j;
        p.chi = axis_value(0, a);
        p.sigma = axis_value(1, b);
        p.lambda = axis_value(2, c);
        out.push_back(p);
      }
    }
  }
  return out;
}

std::vector<AgassiParams> default_lattice(int points_per_axis) {
  return generate_lattice({{{0.0, 2.0}, {0.0, 2.0}, {0.0, 2.0}}},
                          points_per_axis);
}

AgassiSeriesEngine::AgassiSeriesEngine(int j, double epsilon,
                                       std::vector<double> times,
                                       std::pair<int, int> pair)
    : j_(j), epsilon_(epsilon), times_(std::move(times)), pair_(pair) {
  const int n = 4 * j;
  basis_ = number_sector_basis(n, 2 * j);

  const StateVector probe_full = probe_state(n);
  Eigen::Index probe_pos = -1;
  probe_ = Eigen::VectorXcd::Zero(basis_.size());
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    if (std::norm(probe_full.amplitudes(basis_[k])) > 0.5) probe_pos = k;
  }
  if (probe_pos < 0) {
    throw std::logic_error("AgassiSeriesEngine: probe not in half-filled block");
  }
  probe_(probe_pos) = 1.0;

  const CollectiveOps ops = build_collective_ops(j);
  const PauliSum jm = ops.j_plus.adjoint();
  const PauliSum a1 = ops.a1_dag.adjoint();
  const PauliSum am1 = ops.am1_dag.adjoint();
  const PauliSum a0 = ops.a0_dag.adjoint();

  PauliSum kv(n), ksame(n), kcross(n), kh(n);
  kv.add(multiply(ops.j_plus, ops.j_plus));
  kv.add(multiply(jm, jm));
  ksame.add(multiply(ops.a1_dag, a1));
  ksame.add(multiply(ops.am1_dag, am1));
  kcross.add(multiply(ops.a1_dag, am1));
  kcross.add(multiply(ops.am1_dag, a1));
  kh.add(multiply(ops.a0_dag, a0));

  const Eigen::MatrixXcd j0_block = sector_matrix(ops.j_zero, basis_);
  j0_diag_ = j0_block.diagonal().real();

  const std::array<const PauliSum*, 4> fixed_ops{&kv, &ksame, &kcross, &kh};
  for (std::size_t g = 0; g < fixed_.size(); ++g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        sector_matrix(*fixed_ops[g], basis_));
    fixed_[g].evals = es.eigenvalues();
    fixed_[g].evecs = es.eigenvectors();
  }

  for (int which = 0; which < 2; ++which) {
    const int site = which == 0 ? pair_.first : pair_.second;
    Eigen::VectorXd signs(basis_.size());
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      signs(k) = ((basis_[k] >> site) & 1) ? -1.0 : 1.0;
    }
    z_signs_[which] = std::move(signs);
  }
}

Eigen::MatrixXcd AgassiSeriesEngine::h_block(double chi, double sigma,
                                             double lambda) const {
  const double denom = 2.0 * j_ - 1.0;
  const double v = epsilon_ * chi / denom;
  const double g = epsilon_ * sigma / denom;
  const double h = epsilon_ * lambda / denom;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(basis_.size(), basis_.size());
  m.diagonal() = (epsilon_ * j0_diag_).cast<cplx>();
  const std::array<double, 4> scales{-0.5 * v, -g, -g, -2.0 * h};
  for (std::size_t k = 0; k < fixed_.size(); ++k) {
    m += scales[k] * (fixed_[k].evecs *
                      fixed_[k].evals.asDiagonal().toDenseMatrix().cast<cplx>() *
                      fixed_[k].evecs.adjoint());
  }
  return m;
}

CorrelationSeries AgassiSeriesEngine::series(double chi, double sigma,
                                             double lambda,
                                             const EvolutionMode& mode) const {
  const std::size_t nt = times_.size();
  const std::size_t dim = basis_.size();
  Eigen::MatrixXcd states(dim, nt);

  const double denom = 2.0 * j_ - 1.0;
  const std::array<double, 4> scales{-0.5 * epsilon_ * chi / denom,
                                     -epsilon_ * sigma / denom,
                                     -epsilon_ * sigma / denom,
                                     -2.0 * epsilon_ * lambda / denom};

  if (mode.kind == EvolutionMode::kExact) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        h_block(chi, sigma, lambda));
    const Eigen::VectorXcd c = es.eigenvectors().adjoint() * probe_;
    Eigen::MatrixXcd coeffs(dim, nt);
    for (std::size_t s = 0; s < nt; ++s) {
      coeffs.col(s) = c.array() * (-kImag * times_[s] *
                                   es.eigenvalues().array().cast<cplx>())
                                      .exp();
    }
    states.noalias() = es.eigenvectors() * coeffs;
  } else {
    for (std::size_t s = 0; s < nt; ++s) states.col(s) = probe_;
    std::vector<double> dts(nt);
    for (std::size_t s = 0; s < nt; ++s) dts[s] = times_[s] / mode.n_trotter;
    Eigen::MatrixXcd work(dim, nt);
    for (int step = 0; step < mode.n_trotter; ++step) {
      for (std::size_t s = 0; s < nt; ++s) {
        states.col(s).array() *=
            (-kImag * (epsilon_ * dts[s]) * j0_diag_.array().cast<cplx>())
                .exp();
      }
      for (std::size_t g = 0; g < fixed_.size(); ++g) {
        work.noalias() = fixed_[g].evecs.adjoint() * states;
        for (std::size_t s = 0; s < nt; ++s) {
          work.col(s).array() *= (-kImag * (scales[g] * dts[s]) *
                                  fixed_[g].evals.array().cast<cplx>())
                                     .exp();
        }
        states.noalias() = fixed_[g].evecs * work;
      }
    }
  }

  CorrelationSeries series;
  series.pair = pair_;
  series.times = times_;
  series.values.resize(nt);
  for (std::size_t s = 0; s < nt; ++s) {
    const Eigen::ArrayXd p = states.col(s).array().abs2();
    const double ei = (z_signs_[0].array() * p).sum();
    const double ej = (z_signs_[1].array() * p).sum();
    const double eij = (z_signs_[0].array() * z_signs_[1].array() * p).sum();
    series.values[s] = eij - ei * ej;
  }
  return series;
}

std::vector<PhaseSample> build_dataset(
    const std::vector<AgassiParams>& lattice, const AgassiEngine& engine,
    const PhaseCuts& cuts, const DatasetOptions& options,
    const std::function<void(std::size_t, std::size_t)>& progress) {
  if (lattice.empty()) {
    throw std::invalid_argument("build_dataset: empty lattice");
  }
  for (const auto& p : lattice) {
    p.validate();
    if (p.j != engine.j() || p.epsilon != engine.epsilon()) {
      throw std::invalid_argument(
          "build_dataset: lattice point does not match the engine");
    }
  }
  const AgassiSeriesEngine series_engine(
      engine.j(), engine.epsilon(),
      make_time_grid(options.n_samples, options.horizon), options.pair);

  std::vector<PhaseSample> out(lattice.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= lattice.size()) return;
      try {
        const AgassiParams& p = lattice[idx];
        PhaseSample sample;
        sample.params = p;
        sample.mode = options.mode;
        sample.label =
            classify(engine.ground_info(p.chi, p.sigma, p.lambda).order, cuts);
        sample.series =
            series_engine.series(p.chi, p.sigma, p.lambda, options.mode);
        out[idx] = std::move(sample);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
      const std::size_t d = done.fetch_add(1) + 1;
      if (progress && (d % 500 == 0 || d == lattice.size())) {
        std::lock_guard lock(progress_mutex);
        progress(d, lattice.size());
      }
    }
  };

  const int jobs = std::max(1, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::string dataset_to_csv(const std::vector<PhaseSample>& samples) {
  if (samples.empty()) throw std::invalid_argument("dataset_to_csv: empty");
  std::ostringstream out;
  out << "chi,sigma,lambda,label,mode";
  const std::size_t width = samples.front().series.values.size();
  for (std::size_t k = 0; k < width; ++k) out << ",cz_" << k;
  out << "\n";
  for (const auto& s : samples) {
    out << format_double(s.params.chi) << ',' << format_double(s.params.sigma)
        << ',' << format_double(s.params.lambda) << ',' << phase_name(s.label)
        << ',' << s.mode.to_string();
    for (double v : s.series.values) out << ',' << format_double(v);
    out << "\n";
  }
  return out.str();
}

ParsedDataset parse_dataset_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("dataset CSV: empty file");
  }
  const auto header = split_csv_line(line);
  if (header.size() < 6 || header[0] != "chi" || header[3] != "label") {
    throw std::runtime_error("dataset CSV: unrecognized header");
  }
  const std::size_t width = header.size() - 5;

  ParsedDataset parsed;
  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error("dataset CSV: line " + std::to_string(line_no) +
                               ": expected " + std::to_string(header.size()) +
                               " fields, got " + std::to_string(fields.size()));
    }
    try {
      AgassiParams p;
      p.chi = parse_double(fields[0]);
      p.sigma = parse_double(fields[1]);
      p.lambda = parse_double(fields[2]);
      parsed.params.push_back(p);
      parsed.data.labels.push_back(
          static_cast<int>(phase_from_name(fields[3])));
      parsed.modes.push_back(fields[4]);
      std::vector<double> row(width);
      for (std::size_t k = 0; k < width; ++k) {
        row[k] = parse_double(fields[5 + k]);
      }
      rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      throw std::runtime_error("dataset CSV: line " + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  parsed.data.inputs.resize(rows.size(), width);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      parsed.data.inputs(r, c) = rows[r][c];
    }
  }
  return parsed;
}

std::vector<AgassiParams> parse_points_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<AgassiParams> out;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("epsilon", 0) == 0) continue;  // header
    const auto fields = split_csv_line(line);
    if (fields.size() != 5) {
      throw std::runtime_error("points CSV: line " + std::to_string(line_no) +
                               ": expected epsilon,chi,sigma,lambda,j");
    }
    try {
      AgassiParams p;
      p.epsilon = parse_double(fields[0]);
      p.chi = parse_double(fields[1]);
      p.sigma = parse_double(fields[2]);
      p.lambda = parse_double(fields[3]);
      p.j = std::stoi(fields[4]);
      p.validate();
      out.push_back(p);
    } catch (const std::exception& e) {
      throw std::runtime_error("points CSV: line " + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return out;
}

std::string series_to_csv(const CorrelationSeries& series) {
  std::ostringstream out;
  out << "t,cz\n";
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    out << format_double(series.times[k]) << ','
        << format_double(series.values[k]) << "\n";
  }
  return out.str();
}

}  // namespace nuq
