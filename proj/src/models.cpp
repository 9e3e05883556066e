#include "nuq/models.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nuq {

void AgassiParams::validate() const {
  if (epsilon <= 0.0) throw std::invalid_argument("Agassi: epsilon must be > 0");
  if (j < 1) throw std::invalid_argument("Agassi: j must be >= 1");
}

namespace {

// Qubit index for level xi (+1 upper / -1 lower) and site m in
// {-j..-1, 1..j}, m ascending within each level.
int mode_index(int xi, int m, int j) {
  const int mi = (m < 0) ? m + j : j + m - 1;
  return (xi < 0 ? 0 : 2 * j) + mi;
}

FermionTerm hop(int to_mode, int from_mode) {
  return fermion_product(fermion_dagger(to_mode),
                         fermion_annihilate(from_mode));
}

FermionTerm pair_create(int mode_a, int mode_b) {
  return fermion_product(fermion_dagger(mode_a), fermion_dagger(mode_b));
}

}  // namespace

CollectiveOps build_collective_ops(int j) {
  if (j < 1) throw std::invalid_argument("build_collective_ops: j must be >= 1");
  const int n = 4 * j;
  FermionOperator jp, j0, a1, am1, a0;
  for (int m = -j; m <= j; ++m) {
    if (m == 0) continue;
    const int up = mode_index(+1, m, j);
    const int lo = mode_index(-1, m, j);
    jp.push_back(hop(up, lo));
    FermionTerm nu = hop(up, up);
    nu.coefficient = 0.5;
    FermionTerm nl = hop(lo, lo);
    nl.coefficient = -0.5;
    j0.push_back(nu);
    j0.push_back(nl);
  }
  for (int m = 1; m <= j; ++m) {
    a1.push_back(pair_create(mode_index(+1, m, j), mode_index(+1, -m, j)));
    am1.push_back(pair_create(mode_index(-1, m, j), mode_index(-1, -m, j)));
    a0.push_back(pair_create(mode_index(-1, m, j), mode_index(+1, -m, j)));
    FermionTerm t = pair_create(mode_index(-1, -m, j), mode_index(+1, m, j));
    t.coefficient = -1.0;
    a0.push_back(t);
  }
  return {jordan_wigner(jp, n), jordan_wigner(j0, n), jordan_wigner(a1, n),
          jordan_wigner(am1, n), jordan_wigner(a0, n)};
}

std::array<PauliSum, 5> agassi_hamiltonian_groups(const AgassiParams& p) {
  p.validate();
  const CollectiveOps ops = build_collective_ops(p.j);
  const int n = p.n_modes();
  const PauliSum jm = ops.j_plus.adjoint();
  const PauliSum a1 = ops.a1_dag.adjoint();
  const PauliSum am1 = ops.am1_dag.adjoint();
  const PauliSum a0 = ops.a0_dag.adjoint();

  PauliSum g_eps(n);
  g_eps.add(ops.j_zero, p.epsilon);

  PauliSum g_v(n);
  g_v.add(multiply(ops.j_plus, ops.j_plus), -0.5 * p.coupling_v());
  g_v.add(multiply(jm, jm), -0.5 * p.coupling_v());

  PauliSum g_same(n);
  g_same.add(multiply(ops.a1_dag, a1), -p.coupling_g());
  g_same.add(multiply(ops.am1_dag, am1), -p.coupling_g());

  PauliSum g_cross(n);
  g_cross.add(multiply(ops.a1_dag, am1), -p.coupling_g());
  g_cross.add(multiply(ops.am1_dag, a1), -p.coupling_g());

  PauliSum g_h(n);
  g_h.add(multiply(ops.a0_dag, a0), -2.0 * p.coupling_h());

  return {std::move(g_eps), std::move(g_v), std::move(g_same),
          std::move(g_cross), std::move(g_h)};
}

PauliSum build_agassi(const AgassiParams& p) {
  const auto groups = agassi_hamiltonian_groups(p);
  PauliSum h(p.n_modes());
  for (const auto& g : groups) h.add(g);
  return h;
}

void AnnniParams::validate() const {
  if (n_sites < 3) {
    throw std::invalid_argument(
        "ANNNI: n_sites must be >= 3 for next-nearest couplings");
  }
  if (kappa < 0.0 || h_field < 0.0) {
    throw std::invalid_argument("ANNNI: kappa and h must be >= 0");
  }
}

PauliSum build_annni(const AnnniParams& p) {
  p.validate();
  const int n = p.n_sites;
  PauliSum h(n);
  for (int i = 0; i < n; ++i) {
    h.add(multiply(PauliString::single(n, i, 'X'),
                   PauliString::single(n, (i + 1) % n, 'X')),
          1.0);
    h.add(multiply(PauliString::single(n, i, 'X'),
                   PauliString::single(n, (i + 2) % n, 'X')),
          -p.kappa);
    h.add(PauliString::single(n, i, 'Z'), p.h_field);
  }
  return h;
}

const char* phase_name(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::kSymmetric: return "symmetric";
    case PhaseLabel::kHF: return "hf";
    case PhaseLabel::kBCS: return "bcs";
    case PhaseLabel::kCombinedHFBCS: return "combined";
  }
  throw std::logic_error("phase_name: bad label");
}

PhaseLabel phase_from_name(const std::string& name) {
  if (name == "symmetric") return PhaseLabel::kSymmetric;
  if (name == "hf") return PhaseLabel::kHF;
  if (name == "bcs") return PhaseLabel::kBCS;
  if (name == "combined") return PhaseLabel::kCombinedHFBCS;
  throw std::runtime_error("unknown phase label: " + name);
}

AgassiEngine::AgassiEngine(int j, double epsilon) : j_(j), epsilon_(epsilon) {
  const CollectiveOps ops = build_collective_ops(j);
  const int n = 4 * j;
  const PauliSum jm = ops.j_plus.adjoint();

  PauliSum kv(n);
  kv.add(multiply(ops.j_plus, ops.j_plus));
  kv.add(multiply(jm, jm));

  PauliSum a_sum(n);
  a_sum.add(ops.a1_dag);
  a_sum.add(ops.am1_dag);
  const PauliSum kg = multiply(a_sum, a_sum.adjoint());
  const PauliSum kh = multiply(ops.a0_dag, ops.a0_dag.adjoint());

  sectors_.reserve(n + 1);
  for (int npart = 0; npart <= n; ++npart) {
    Sector s;
    s.basis = number_sector_basis(n, npart);
    s.j0 = sector_matrix(ops.j_zero, s.basis);
    s.kv = sector_matrix(kv, s.basis);
    s.kg = sector_matrix(kg, s.basis);
    s.kh = sector_matrix(kh, s.basis);
    s.d_op = s.kv;   // deformation observable is the same operator
    s.pg_op = s.kg;  // like-level pairing
    s.ph_op = s.kh;  // cross-level pairing
    sectors_.push_back(std::move(s));
  }
}

GroundInfo AgassiEngine::ground_info(double chi, double sigma,
                                     double lambda) const {
  const double v = epsilon_ * chi / (2 * j_ - 1);
  const double g = epsilon_ * sigma / (2 * j_ - 1);
  const double h = epsilon_ * lambda / (2 * j_ - 1);

  struct Candidate {
    double energy;
    const Sector* sector;
    Eigen::VectorXcd state;
  };
  std::vector<Candidate> cands;
  double best = std::numeric_limits<double>::infinity();

  for (const auto& s : sectors_) {
    Eigen::MatrixXcd hm = epsilon_ * s.j0 - 0.5 * v * s.kv - g * s.kg -
                          2.0 * h * s.kh;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hm);
    const auto& w = es.eigenvalues();
    for (int k = 0; k < w.size(); ++k) {
      if (w(k) > best + kDegeneracyTol) break;
      cands.push_back({w(k), &s, es.eigenvectors().col(k)});
      best = std::min(best, w(k));
    }
  }

  GroundInfo info;
  info.energy = best;
  int count = 0;
  for (const auto& c : cands) {
    if (c.energy > best + kDegeneracyTol) continue;
    const auto& sec = *c.sector;
    info.order.deformation += std::real(c.state.dot(sec.d_op * c.state));
    info.order.pairing_like += std::real(c.state.dot(sec.pg_op * c.state));
    info.order.pairing_cross += std::real(c.state.dot(sec.ph_op * c.state));
    ++count;
  }
  info.degeneracy = count;
  info.order.deformation /= count;
  info.order.pairing_like /= count;
  info.order.pairing_cross /= count;
  return info;
}

double AgassiEngine::ground_energy(double chi, double sigma,
                                   double lambda) const {
  return ground_info(chi, sigma, lambda).energy;
}

std::array<double, 3> ScanLine::point(double s) const {
  switch (axis) {
    case 0: return {s, fixed_a, fixed_b};
    case 1: return {fixed_a, s, fixed_b};
    case 2: return {fixed_a, fixed_b, s};
    default: throw std::logic_error("ScanLine: bad axis");
  }
}

const std::vector<std::pair<ScanLine, int>>& calibration_lines() {
  // Axis ordering of the fixed values is (chi, sigma, lambda) minus the
  // scanned axis. The paired index names the order parameter that jumps.
  static const std::vector<std::pair<ScanLine, int>> lines = {
      {{0, 0.5, 0.5}, 0},  // symmetric -> HF        (deformation)
      {{1, 0.5, 0.5}, 1},  // symmetric -> BCS       (like-level pairing)
      {{2, 0.5, 0.5}, 2},  // symmetric -> combined  (cross-level pairing)
      {{1, 1.5, 0.5}, 1},  // HF -> BCS
      {{2, 1.5, 0.5}, 2},  // HF -> combined
      {{2, 0.5, 1.5}, 2},  // BCS -> combined
  };
  return lines;
}

PhaseCuts calibrate_phase_cuts(const AgassiEngine& engine,
                               int points_per_line) {
  if (points_per_line < 3) {
    throw std::invalid_argument("calibrate_phase_cuts: need >= 3 points");
  }
  std::array<double, 3> sum{0.0, 0.0, 0.0};
  std::array<int, 3> count{0, 0, 0};
  const double ds = 2.0 / (points_per_line - 1);

  for (const auto& [line, which] : calibration_lines()) {
    std::vector<double> y(points_per_line);
    for (int k = 0; k < points_per_line; ++k) {
      const auto [chi, sig, lam] = line.point(k * ds);
      const OrderParams op = engine.ground_info(chi, sig, lam).order;
      y[k] = (which == 0)   ? op.deformation
             : (which == 1) ? op.pairing_like
                            : op.pairing_cross;
    }
    // steepest central gradient; cut at the value centered across it
    int best = 1;
    double best_grad = -1.0;
    for (int k = 1; k + 1 < points_per_line; ++k) {
      const double grad = std::abs(y[k + 1] - y[k - 1]);
      if (grad > best_grad) {
        best_grad = grad;
        best = k;
      }
    }
    sum[which] += 0.5 * (y[best - 1] + y[best + 1]);
    count[which] += 1;
  }
  for (int k = 0; k < 3; ++k) {
    if (count[k] == 0) {
      throw std::runtime_error("calibrate_phase_cuts: missing line for cut");
    }
  }
  return {sum[0] / count[0], sum[1] / count[1], sum[2] / count[2]};
}

PhaseLabel classify(const OrderParams& order, const PhaseCuts& cuts) {
  if (order.pairing_cross > cuts.pairing_cross) {
    return PhaseLabel::kCombinedHFBCS;
  }
  if (order.pairing_like > cuts.pairing_like) return PhaseLabel::kBCS;
  if (order.deformation > cuts.deformation) return PhaseLabel::kHF;
  return PhaseLabel::kSymmetric;
}

PhaseLabel label_phase(const AgassiEngine& engine, const AgassiParams& p,
                       const PhaseCuts& cuts) {
  p.validate();
  if (p.j != engine.j()) {
    throw std::invalid_argument("label_phase: engine built for different j");
  }
  return classify(engine.ground_info(p.chi, p.sigma, p.lambda).order, cuts);
}

}  // namespace nuq
