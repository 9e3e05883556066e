#include "nuq/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "nuq/dense.hpp"

namespace nuq {

namespace {

constexpr cplx kImag{0.0, 1.0};

std::uint64_t dim_of(int n_sites) { return std::uint64_t{1} << n_sites; }

// Distribute the low bits of `value` over the given bit positions.
std::uint64_t deposit_bits(std::uint64_t value, const std::vector<int>& bits) {
  std::uint64_t out = 0;
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if ((value >> k) & 1) out |= std::uint64_t{1} << bits[k];
  }
  return out;
}

}  // namespace

StateVector::StateVector(int n, Eigen::VectorXcd amps)
    : n_sites(n), amplitudes(std::move(amps)) {
  if (n < 1 || n > 24 ||
      static_cast<std::uint64_t>(amplitudes.size()) != dim_of(n)) {
    throw std::invalid_argument("StateVector: bad dimension");
  }
  check_normalized();
}

void StateVector::check_normalized(double tol) const {
  if (std::abs(norm() - 1.0) > tol) {
    throw std::invalid_argument("StateVector: not normalized");
  }
}

StateVector StateVector::basis_state(int n_sites, std::uint64_t index) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(dim_of(n_sites));
  if (index >= dim_of(n_sites)) {
    throw std::out_of_range("basis_state: index out of range");
  }
  amps(index) = 1.0;
  return StateVector(n_sites, std::move(amps));
}

StateVector probe_state(int n_sites) {
  if (n_sites < 2 || n_sites % 2 != 0) {
    throw std::invalid_argument("probe_state: n_sites must be even");
  }
  // lower half down (bit 0), upper half up (bit 1)
  const std::uint64_t index = (dim_of(n_sites) - 1) ^ (dim_of(n_sites / 2) - 1);
  return StateVector::basis_state(n_sites, index);
}

ExactPropagator::ExactPropagator(const PauliSum& h) : n_sites_(h.n_sites()) {
  Eigen::MatrixXcd m = to_dense_matrix(h);
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermTol) {
    throw std::invalid_argument("ExactPropagator: Hamiltonian not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  eigenvalues_ = es.eigenvalues();
  eigenvectors_ = es.eigenvectors();
}

StateVector ExactPropagator::evolve(const StateVector& psi0, double t) const {
  if (psi0.n_sites != n_sites_) {
    throw std::invalid_argument("ExactPropagator: dimension mismatch");
  }
  Eigen::VectorXcd c = eigenvectors_.adjoint() * psi0.amplitudes;
  c.array() *= (-kImag * t * eigenvalues_.array().cast<cplx>()).exp();
  return StateVector(n_sites_, eigenvectors_ * c);
}

Eigen::MatrixXcd ExactPropagator::evolve_batch(
    const StateVector& psi0, const std::vector<double>& times) const {
  if (psi0.n_sites != n_sites_) {
    throw std::invalid_argument("ExactPropagator: dimension mismatch");
  }
  const Eigen::VectorXcd c = eigenvectors_.adjoint() * psi0.amplitudes;
  Eigen::MatrixXcd coeffs(c.size(), times.size());
  for (std::size_t s = 0; s < times.size(); ++s) {
    coeffs.col(s) =
        c.array() * (-kImag * times[s] * eigenvalues_.array().cast<cplx>()).exp();
  }
  return eigenvectors_ * coeffs;
}

StateVector evolve_exact(const PauliSum& h, const StateVector& psi0,
                         double t) {
  return ExactPropagator(h).evolve(psi0, t);
}

TrotterPlan TrotterPlan::create(const PauliSum& h,
                                std::vector<PauliSum> groups, int n_steps,
                                double total_time) {
  if (n_steps < 1) throw std::invalid_argument("TrotterPlan: n_steps < 1");
  PauliSum sum(h.n_sites());
  for (const auto& g : groups) sum.add(g);
  if (!(sum == h)) {
    throw std::invalid_argument("TrotterPlan: groups do not sum to H");
  }
  return {std::move(groups), n_steps, total_time};
}

TrotterStepper::TrotterStepper(const std::vector<PauliSum>& groups,
                               int n_sites)
    : n_sites_(n_sites) {
  const std::uint64_t dim = dim_of(n_sites);
  for (const auto& g : groups) {
    if (g.n_sites() != n_sites) {
      throw std::invalid_argument("TrotterStepper: group size mismatch");
    }
    if (g.max_abs_imag() > 1e-10) {
      throw std::invalid_argument("TrotterStepper: group not Hermitian");
    }
    Group out;
    std::uint64_t mask = 0;
    bool diagonal = true;
    for (const auto& [key, c] : g.terms()) {
      mask |= key.first | key.second;
      if (key.first != 0) diagonal = false;
    }
    if (diagonal) {
      out.diagonal = true;
      out.diag_values = Eigen::VectorXd::Zero(dim);
      for (const auto& [key, c] : g.terms()) {
        for (std::uint64_t b = 0; b < dim; ++b) {
          out.diag_values(b) +=
              (std::popcount(key.second & b) & 1) ? -c.real() : c.real();
        }
      }
    } else {
      for (int q = 0; q < n_sites; ++q) {
        if ((mask >> q) & 1) out.support.push_back(q);
      }
      const int k = static_cast<int>(out.support.size());
      if (k > kDenseSiteCap) {
        throw std::length_error("TrotterStepper: group support above cap");
      }
      // remap the group onto its support qubits
      PauliSum sub(k);
      for (const auto& [key, c] : g.terms()) {
        std::uint64_t x = 0, z = 0;
        for (int b = 0; b < k; ++b) {
          if ((key.first >> out.support[b]) & 1) x |= std::uint64_t{1} << b;
          if ((key.second >> out.support[b]) & 1) z |= std::uint64_t{1} << b;
        }
        sub.add({x, z}, c);
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_dense_matrix(sub));
      out.eigenvalues = es.eigenvalues();
      out.eigenvectors = es.eigenvectors();
      out.full_support = (k == n_sites);
    }
    groups_.push_back(std::move(out));
  }
}

void TrotterStepper::apply_group(const Group& g, Eigen::VectorXcd& psi,
                                 double dt) const {
  if (g.diagonal) {
    psi.array() *= (-kImag * dt * g.diag_values.array().cast<cplx>()).exp();
    return;
  }
  const Eigen::ArrayXcd phases =
      (-kImag * dt * g.eigenvalues.array().cast<cplx>()).exp();
  if (g.full_support) {
    Eigen::VectorXcd c = g.eigenvectors.adjoint() * psi;
    c.array() *= phases;
    psi = g.eigenvectors * c;
    return;
  }
  // act on the support subspace for every assignment of the other qubits
  std::vector<int> rest;
  for (int q = 0; q < n_sites_; ++q) {
    if (std::find(g.support.begin(), g.support.end(), q) == g.support.end()) {
      rest.push_back(q);
    }
  }
  const std::uint64_t sub_dim = dim_of(static_cast<int>(g.support.size()));
  Eigen::VectorXcd x(sub_dim), y;
  for (std::uint64_t r = 0; r < dim_of(static_cast<int>(rest.size())); ++r) {
    const std::uint64_t base = deposit_bits(r, rest);
    for (std::uint64_t s = 0; s < sub_dim; ++s) {
      x(s) = psi(base | deposit_bits(s, g.support));
    }
    y = g.eigenvectors.adjoint() * x;
    y.array() *= phases;
    x = g.eigenvectors * y;
    for (std::uint64_t s = 0; s < sub_dim; ++s) {
      psi(base | deposit_bits(s, g.support)) = x(s);
    }
  }
}

void TrotterStepper::apply_step(Eigen::VectorXcd& psi, double dt) const {
  for (const auto& g : groups_) apply_group(g, psi, dt);
}

void TrotterStepper::apply_step_batch(Eigen::MatrixXcd& states,
                                      const std::vector<double>& dts) const {
  if (static_cast<std::size_t>(states.cols()) != dts.size()) {
    throw std::invalid_argument("apply_step_batch: column/step mismatch");
  }
  for (const auto& g : groups_) {
    if (g.diagonal) {
      for (Eigen::Index s = 0; s < states.cols(); ++s) {
        states.col(s).array() *=
            (-kImag * dts[s] * g.diag_values.array().cast<cplx>()).exp();
      }
    } else if (g.full_support) {
      Eigen::MatrixXcd c(states.rows(), states.cols());
      c.noalias() = g.eigenvectors.adjoint() * states;
      for (Eigen::Index s = 0; s < c.cols(); ++s) {
        c.col(s).array() *=
            (-kImag * dts[s] * g.eigenvalues.array().cast<cplx>()).exp();
      }
      states.noalias() = g.eigenvectors * c;
    } else {
      Eigen::VectorXcd col;
      for (Eigen::Index s = 0; s < states.cols(); ++s) {
        col = states.col(s);
        apply_group(g, col, dts[s]);
        states.col(s) = col;
      }
    }
  }
}

StateVector evolve_trotter(const TrotterPlan& plan, const StateVector& psi0) {
  psi0.check_normalized();
  const TrotterStepper stepper(plan.groups, psi0.n_sites);
  Eigen::VectorXcd psi = psi0.amplitudes;
  const double dt = plan.total_time / plan.n_steps;
  for (int s = 0; s < plan.n_steps; ++s) stepper.apply_step(psi, dt);
  return StateVector(psi0.n_sites, std::move(psi));
}

double correlation_cz(const StateVector& psi, int site_i, int site_j) {
  if (site_i == site_j) {
    throw std::invalid_argument("correlation_cz: sites must differ");
  }
  if (site_i < 0 || site_j < 0 || site_i >= psi.n_sites ||
      site_j >= psi.n_sites) {
    throw std::out_of_range("correlation_cz: site out of range");
  }
  double ei = 0.0, ej = 0.0, eij = 0.0;
  const auto& a = psi.amplitudes;
  for (Eigen::Index b = 0; b < a.size(); ++b) {
    const double p = std::norm(a(b));
    const double si = ((static_cast<std::uint64_t>(b) >> site_i) & 1) ? -1.0 : 1.0;
    const double sj = ((static_cast<std::uint64_t>(b) >> site_j) & 1) ? -1.0 : 1.0;
    ei += si * p;
    ej += sj * p;
    eij += si * sj * p;
  }
  return eij - ei * ej;
}

EvolutionMode EvolutionMode::parse(const std::string& text) {
  if (text == "exact") return exact();
  if (text.rfind("trotter:", 0) == 0) {
    const int n = std::stoi(text.substr(8));
    if (n < 1) throw std::invalid_argument("trotter steps must be >= 1");
    return trotter(n);
  }
  throw std::invalid_argument("mode must be 'exact' or 'trotter:N'");
}

std::string EvolutionMode::to_string() const {
  return kind == kExact ? "exact" : "trotter:" + std::to_string(n_trotter);
}

std::vector<double> make_time_grid(int n_samples, double t_max) {
  if (n_samples < 2 || t_max <= 0.0) {
    throw std::invalid_argument("make_time_grid: need n >= 2, t_max > 0");
  }
  std::vector<double> t(n_samples);
  for (int s = 0; s < n_samples; ++s) {
    t[s] = t_max * s / (n_samples - 1);
  }
  return t;
}

namespace {

double cz_from_column(const Eigen::MatrixXcd& states, Eigen::Index col,
                      int n_sites, std::pair<int, int> pair) {
  StateVector tmp;
  tmp.n_sites = n_sites;
  tmp.amplitudes = states.col(col);
  return correlation_cz(tmp, pair.first, pair.second);
}

}  // namespace

CorrelationSeries correlation_series(const PauliSum& h,
                                     const StateVector& psi0,
                                     std::pair<int, int> pair,
                                     const std::vector<double>& times,
                                     const EvolutionMode& mode,
                                     const std::vector<PauliSum>* groups) {
  psi0.check_normalized();
  CorrelationSeries series;
  series.pair = pair;
  series.times = times;
  series.values.resize(times.size());

  if (mode.kind == EvolutionMode::kExact) {
    const ExactPropagator prop(h);
    const Eigen::MatrixXcd states = prop.evolve_batch(psi0, times);
    for (std::size_t s = 0; s < times.size(); ++s) {
      series.values[s] = cz_from_column(states, s, psi0.n_sites, pair);
    }
    return series;
  }

  if (groups == nullptr) {
    throw std::invalid_argument("correlation_series: trotter mode needs groups");
  }
  // validates the partition
  TrotterPlan::create(h, *groups, mode.n_trotter, 0.0);
  const TrotterStepper stepper(*groups, psi0.n_sites);
  Eigen::MatrixXcd states(psi0.amplitudes.size(), times.size());
  for (std::size_t s = 0; s < times.size(); ++s) {
    states.col(s) = psi0.amplitudes;
  }
  std::vector<double> dts(times.size());
  for (std::size_t s = 0; s < times.size(); ++s) {
    dts[s] = times[s] / mode.n_trotter;
  }
  for (int step = 0; step < mode.n_trotter; ++step) {
    stepper.apply_step_batch(states, dts);
  }
  for (std::size_t s = 0; s < times.size(); ++s) {
    series.values[s] = cz_from_column(states, s, psi0.n_sites, pair);
  }
  return series;
}

}  // namespace nuq
