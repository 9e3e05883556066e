#include "nuq/vqe.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nuq/dense.hpp"
#include "nuq/fermion.hpp"

namespace nuq {

namespace {

constexpr cplx kImag{0.0, 1.0};

}  // namespace

StateVector lmg_ansatz(double theta) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(16);
  amps(0b0000) = std::cos(theta) * std::cos(theta);
  amps(0b1111) = std::sin(theta) * std::sin(theta);
  const double pair_amp = -std::sin(2.0 * theta) / std::sqrt(12.0);
  for (int idx : {0b0011, 0b1100, 0b0101, 0b1010, 0b0110, 0b1001}) {
    amps(idx) = pair_amp;
  }
  // cos^4 + sin^4 + sin^2(2t)/2 = 1 identically, so no renormalization
  return StateVector(4, std::move(amps));
}

PauliSum lmg_hamiltonian(double epsilon, double chi, int n_particles) {
  if (n_particles < 2) {
    throw std::invalid_argument("lmg_hamiltonian: need >= 2 particles");
  }
  if (epsilon <= 0.0 || chi < 0.0) {
    throw std::invalid_argument("lmg_hamiltonian: bad couplings");
  }
  const int n = n_particles;
  PauliSum j0(n), jp(n);
  for (int k = 0; k < n; ++k) {
    j0.add(PauliString::single(n, k, 'Z'), -0.5);
    jp.add(PauliString::single(n, k, 'X'), 0.5);
    jp.add(PauliString::single(n, k, 'Y'), cplx{0.0, -0.5});
  }
  const PauliSum jm = jp.adjoint();
  const double v = epsilon * chi / (n - 1);
  PauliSum h(n);
  h.add(j0, epsilon);
  h.add(multiply(jp, jp), -0.5 * v);
  h.add(multiply(jm, jm), -0.5 * v);
  return h;
}

double expectation(const PauliSum& h, const StateVector& psi) {
  if ((std::uint64_t{1} << h.n_sites()) !=
      static_cast<std::uint64_t>(psi.amplitudes.size())) {
    throw std::invalid_argument("expectation: dimension mismatch");
  }
  const cplx val = expectation_value(h, psi.amplitudes);
  if (std::abs(val.imag()) > 1e-10) {
    throw std::invalid_argument(
        "expectation: imaginary residue above tolerance (non-Hermitian H?)");
  }
  return val.real();
}

namespace {

// Per-step cached eigendecompositions so repeated theta evaluations cost
// two matvecs per step.
class ProgramEvaluator {
 public:
  explicit ProgramEvaluator(StateVector ref) : ref_(std::move(ref)) {}

  void append(const PauliSum& gen) {
    if (gen.max_abs_imag() > 1e-10) {
      throw std::invalid_argument("ansatz generator must be Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_dense_matrix(gen));
    steps_.push_back({es.eigenvalues(), es.eigenvectors()});
  }

  std::size_t size() const { return steps_.size(); }

  Eigen::VectorXcd state(const std::vector<double>& thetas) const {
    Eigen::VectorXcd psi = ref_.amplitudes;
    for (std::size_t k = 0; k < steps_.size(); ++k) {
      Eigen::VectorXcd c = steps_[k].evecs.adjoint() * psi;
      c.array() *=
          (-kImag * thetas[k] * steps_[k].evals.array().cast<cplx>()).exp();
      psi = steps_[k].evecs * c;
    }
    return psi;
  }

 private:
  struct Step {
    Eigen::VectorXd evals;
    Eigen::MatrixXcd evecs;
  };
  StateVector ref_;
  std::vector<Step> steps_;
};

}  // namespace

StateVector AnsatzProgram::apply() const {
  ProgramEvaluator eval(reference);
  std::vector<double> thetas;
  for (const auto& s : steps) {
    eval.append(s.generator);
    thetas.push_back(s.theta);
  }
  StateVector out;
  out.n_sites = reference.n_sites;
  out.amplitudes = eval.state(thetas);
  out.check_normalized();
  return out;
}

double golden_section(const std::function<double(double)>& f, double lo,
                      double hi, double param_tol, double* fmin) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > param_tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = fc < fd ? c : d;
  if (fmin != nullptr) *fmin = std::min(fc, fd);
  return x;
}

namespace {

// One coordinate-descent pass: coarse scan around the current value, then
// golden-section inside the best bracket. Keeps the old value on a tie.
double improve_coordinate(const std::function<double(double)>& f, double x0,
                          double f0, double span, double param_tol,
                          double* fout) {
  constexpr int kScan = 32;
  double best_x = x0, best_f = f0;
  for (int k = 0; k <= kScan; ++k) {
    const double x = x0 - span + 2.0 * span * k / kScan;
    const double fx = f(x);
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  const double step = 2.0 * span / kScan;
  double gf = best_f;
  const double gx =
      golden_section(f, best_x - step, best_x + step, param_tol, &gf);
  if (gf < best_f) {
    best_f = gf;
    best_x = gx;
  }
  *fout = best_f;
  return best_x;
}

// Nelder-Mead polish with standard coefficients; returns the best vertex.
std::vector<double> nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, double ftol, int max_iters, double* fout) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> simplex{x0};
  for (std::size_t k = 0; k < n; ++k) {
    auto v = x0;
    v[k] += 0.05;
    simplex.push_back(std::move(v));
  }
  std::vector<double> fv(simplex.size());
  for (std::size_t k = 0; k < simplex.size(); ++k) fv[k] = f(simplex[k]);

  for (int it = 0; it < max_iters; ++it) {
    std::vector<std::size_t> ord(simplex.size());
    for (std::size_t k = 0; k < ord.size(); ++k) ord[k] = k;
    std::sort(ord.begin(), ord.end(),
              [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    if (fv[ord.back()] - fv[ord.front()] < ftol) break;

    const auto& worst = simplex[ord.back()];
    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k + 1 < ord.size(); ++k) {
      for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[ord[k]][d];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto blend = [&](double t) {
      std::vector<double> v(n);
      for (std::size_t d = 0; d < n; ++d) {
        v[d] = centroid[d] + t * (centroid[d] - worst[d]);
      }
      return v;
    };
    auto reflect = blend(1.0);
    const double fr = f(reflect);
    if (fr < fv[ord.front()]) {
      auto expand = blend(2.0);
      const double fe = f(expand);
      if (fe < fr) {
        simplex[ord.back()] = expand;
        fv[ord.back()] = fe;
      } else {
        simplex[ord.back()] = reflect;
        fv[ord.back()] = fr;
      }
    } else if (fr < fv[ord[ord.size() - 2]]) {
      simplex[ord.back()] = reflect;
      fv[ord.back()] = fr;
    } else {
      auto contract = blend(-0.5);
      const double fc = f(contract);
      if (fc < fv[ord.back()]) {
        simplex[ord.back()] = contract;
        fv[ord.back()] = fc;
      } else {
        for (std::size_t k = 1; k < ord.size(); ++k) {
          for (std::size_t d = 0; d < n; ++d) {
            simplex[ord[k]][d] =
                0.5 * (simplex[ord[k]][d] + simplex[ord[0]][d]);
          }
          fv[ord[k]] = f(simplex[ord[k]]);
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < simplex.size(); ++k) {
    if (fv[k] < fv[best]) best = k;
  }
  *fout = fv[best];
  return simplex[best];
}

}  // namespace

VqeResult vqe_minimize(const PauliSum& h, const StateFamily& family,
                       std::vector<double> theta0,
                       const VqeOptions& options) {
  int evals = 0;
  auto energy = [&](const std::vector<double>& t) {
    ++evals;
    return expectation(h, family(t));
  };

  VqeResult result;
  result.thetas = std::move(theta0);
  double current = energy(result.thetas);

  const double span = M_PI / 2.0;
  bool converged = false;
  for (int sweep = 0; sweep < 64 && !converged; ++sweep) {
    const double before = current;
    double max_move = 0.0;
    for (std::size_t k = 0; k < result.thetas.size(); ++k) {
      auto f1 = [&](double x) {
        auto t = result.thetas;
        t[k] = x;
        return energy(t);
      };
      double fbest = current;
      const double xbest = improve_coordinate(f1, result.thetas[k], current,
                                              span, options.param_tol, &fbest);
      if (fbest < current) {
        max_move = std::max(max_move, std::abs(xbest - result.thetas[k]));
        result.thetas[k] = xbest;
        current = fbest;
      }
      if (evals >= options.max_iters * 100) break;
    }
    if (result.thetas.size() > 1) {
      double fnm = current;
      auto polished = nelder_mead(energy, result.thetas, options.energy_tol,
                                  200, &fnm);
      if (fnm < current) {
        current = fnm;
        result.thetas = std::move(polished);
      }
    }
    converged = (before - current < options.energy_tol) &&
                (max_move < options.param_tol || before - current == 0.0);
    ++result.iterations;
    if (evals >= options.max_iters * 100) break;
  }
  result.energy = current;
  result.converged = converged;
  return result;
}

OperatorPool build_pool(int n_modes, PoolSymmetry filter) {
  if (n_modes < 2) throw std::invalid_argument("build_pool: n_modes < 2");

  // level/site decode for the Agassi filter; valid when n_modes = 4j
  const int j = n_modes / 4;
  auto decode = [&](int p) {
    const int level = (p < 2 * j) ? -1 : +1;
    const int mi = p % (2 * j);
    const int m = (mi < j) ? mi - j : mi - j + 1;
    return std::pair<int, int>(level, m);
  };
  auto pair_ok = [&](int a, int b) {
    const auto [la, ma] = decode(a);
    const auto [lb, mb] = decode(b);
    return ma == -mb;  // time-reversal partners, same or opposite level
  };
  auto hop_ok = [&](int p, int q) {
    const auto [lp, mp] = decode(p);
    const auto [lq, mq] = decode(q);
    return lp != lq && mp == mq;  // J+/J- style level change at fixed m
  };
  if (filter == PoolSymmetry::kAgassiPairs && n_modes % 4 != 0) {
    throw std::invalid_argument(
        "build_pool: Agassi filter needs n_modes divisible by 4");
  }

  OperatorPool pool;
  std::vector<PauliSum> seen;
  auto add_generator = [&](const FermionTerm& excitation,
                           const std::string& label) {
    FermionOperator op{excitation, fermion_adjoint(excitation)};
    op[1].coefficient *= -1.0;
    PauliSum tau = jordan_wigner(op, n_modes);
    PauliSum gen(n_modes);
    gen.add(tau, kImag);
    if (gen.empty()) return;
    for (const auto& s : seen) {
      if (s == gen) return;
    }
    seen.push_back(gen);
    pool.push_back({std::move(gen), label});
  };

  for (int p = 0; p < n_modes; ++p) {
    for (int q = p + 1; q < n_modes; ++q) {
      if (filter == PoolSymmetry::kAgassiPairs && !hop_ok(q, p)) continue;
      add_generator(fermion_product(fermion_dagger(q), fermion_annihilate(p)),
                    "1b " + std::to_string(q) + "<-" + std::to_string(p));
    }
  }
  std::vector<std::pair<int, int>> pairs;
  for (int p = 0; p < n_modes; ++p) {
    for (int q = p + 1; q < n_modes; ++q) pairs.emplace_back(p, q);
  }
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    for (std::size_t b = a + 1; b < pairs.size(); ++b) {
      const auto [cp, cq] = pairs[b];
      const auto [ar, as] = pairs[a];
      if (filter == PoolSymmetry::kAgassiPairs &&
          (!pair_ok(cp, cq) || !pair_ok(ar, as))) {
        continue;
      }
      FermionTerm t = fermion_product(
          fermion_product(fermion_dagger(cp), fermion_dagger(cq)),
          fermion_product(fermion_annihilate(as), fermion_annihilate(ar)));
      add_generator(t, "2b (" + std::to_string(cp) + "," + std::to_string(cq) +
                           ")<-(" + std::to_string(ar) + "," +
                           std::to_string(as) + ")");
    }
  }
  if (pool.empty()) {
    throw std::runtime_error("build_pool: empty pool after filtering");
  }
  return pool;
}

std::vector<double> adapt_gradient(const PauliSum& h, const OperatorPool& pool,
                                   const StateVector& psi) {
  std::vector<double> grads;
  grads.reserve(pool.size());
  for (const auto& op : pool) {
    const PauliSum comm = commutator(h, op.generator);
    grads.push_back(std::abs(expectation_value(comm, psi.amplitudes)));
  }
  return grads;
}

AdaptResult adapt_vqe(const PauliSum& h, const OperatorPool& pool,
                      const StateVector& reference,
                      const AdaptOptions& options) {
  reference.check_normalized();
  AdaptResult result;
  result.program.reference = reference;

  ProgramEvaluator eval(reference);
  std::vector<double> thetas;
  auto current_state = [&]() {
    StateVector s;
    s.n_sites = reference.n_sites;
    s.amplitudes = eval.state(thetas);
    return s;
  };

  result.energy = expectation(h, reference);
  for (int iter = 0; iter < options.max_iters; ++iter) {
    const StateVector psi = current_state();
    const std::vector<double> grads = adapt_gradient(h, pool, psi);
    const auto max_it = std::max_element(grads.begin(), grads.end());
    const double gmax = *max_it;
    if (gmax < options.grad_tol) {
      result.converged = true;
      break;
    }
    const int picked = static_cast<int>(max_it - grads.begin());

    eval.append(pool[picked].generator);
    thetas.push_back(0.0);
    result.program.steps.push_back(
        {pool[picked].generator, 0.0, pool[picked].label});

    StateFamily family = [&](const std::vector<double>& t) {
      StateVector s;
      s.n_sites = reference.n_sites;
      s.amplitudes = eval.state(t);
      return s;
    };
    const VqeResult vr = vqe_minimize(h, family, thetas, options.vqe);
    thetas = vr.thetas;
    for (std::size_t k = 0; k < thetas.size(); ++k) {
      result.program.steps[k].theta = thetas[k];
    }
    result.energy = std::min(result.energy, vr.energy);
    result.iterations = iter + 1;
    result.trace.push_back({picked, pool[picked].label, gmax, vr.energy});
  }
  return result;
}

}  // namespace nuq
