#include "nuq/pauli.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace nuq {

namespace {

void check_sites(int n_sites) {
  if (n_sites < 1 || n_sites > 64) {
    throw std::invalid_argument("PauliString: n_sites must be in [1, 64]");
  }
}

std::uint64_t site_bit(int n_sites, int site) {
  if (site < 0 || site >= n_sites) {
    throw std::out_of_range("Pauli site index out of range");
  }
  return std::uint64_t{1} << site;
}

cplx i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

PauliString::PauliString(int n_sites)
    : n_sites_(n_sites), x_mask_(0), z_mask_(0), phase_power_(0) {
  check_sites(n_sites);
}

PauliString::PauliString(int n_sites, std::uint64_t x_mask,
                         std::uint64_t z_mask, int phase_power)
    : n_sites_(n_sites),
      x_mask_(x_mask),
      z_mask_(z_mask),
      phase_power_(((phase_power % 4) + 4) % 4) {
  check_sites(n_sites);
  if (n_sites < 64) {
    const std::uint64_t valid = (std::uint64_t{1} << n_sites) - 1;
    if ((x_mask & ~valid) || (z_mask & ~valid)) {
      throw std::invalid_argument("Pauli mask has bits beyond n_sites");
    }
  }
}

PauliString PauliString::from_label(const std::string& label) {
  PauliString s(static_cast<int>(label.size()));
  for (int k = 0; k < static_cast<int>(label.size()); ++k) {
    switch (label[k]) {
      case 'I': break;
      case 'X': s.x_mask_ |= site_bit(s.n_sites_, k); break;
      case 'Y':
        s.x_mask_ |= site_bit(s.n_sites_, k);
        s.z_mask_ |= site_bit(s.n_sites_, k);
        break;
      case 'Z': s.z_mask_ |= site_bit(s.n_sites_, k); break;
      default:
        throw std::invalid_argument("Pauli label must use only I, X, Y, Z");
    }
  }
  return s;
}

PauliString PauliString::single(int n_sites, int site, char op) {
  PauliString s(n_sites);
  const std::uint64_t bit = site_bit(n_sites, site);
  switch (op) {
    case 'I': break;
    case 'X': s.x_mask_ = bit; break;
    case 'Y': s.x_mask_ = bit; s.z_mask_ = bit; break;
    case 'Z': s.z_mask_ = bit; break;
    default: throw std::invalid_argument("Pauli op must be one of I, X, Y, Z");
  }
  return s;
}

cplx PauliString::phase() const { return i_power(phase_power_); }

char PauliString::op_at(int site) const {
  const std::uint64_t bit = site_bit(n_sites_, site);
  const bool x = x_mask_ & bit;
  const bool z = z_mask_ & bit;
  return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
}

std::string PauliString::label() const {
  std::string out(static_cast<std::size_t>(n_sites_), 'I');
  for (int k = 0; k < n_sites_; ++k) out[k] = op_at(k);
  return out;
}

PauliString multiply(const PauliString& a, const PauliString& b) {
  if (a.n_sites() != b.n_sites()) {
    throw std::invalid_argument("PauliString multiply: size mismatch");
  }
  const std::uint64_t x = a.x_mask() ^ b.x_mask();
  const std::uint64_t z = a.z_mask() ^ b.z_mask();
  // Write each site operator as i^{xz} X^x Z^z; commuting Z^za X^xb across
  // gives (-1)^{za&xb}, then fold the result back to the literal-Y form.
  int e = std::popcount(a.x_mask() & a.z_mask()) +
          std::popcount(b.x_mask() & b.z_mask()) -
          std::popcount(x & z) +
          2 * std::popcount(a.z_mask() & b.x_mask());
  e += a.phase_power() + b.phase_power();
  return PauliString(a.n_sites(), x, z, e);
}

PauliSum::PauliSum(int n_sites) : n_sites_(n_sites) { check_sites(n_sites); }

void PauliSum::add(const PauliString& s, cplx coeff) {
  if (s.n_sites() != n_sites_) {
    throw std::invalid_argument("PauliSum add: size mismatch");
  }
  add({s.x_mask(), s.z_mask()}, coeff * s.phase());
}

void PauliSum::add(Key key, cplx coeff) {
  auto [it, inserted] = terms_.try_emplace(key, coeff);
  if (!inserted) it->second += coeff;
  prune(key);
}

void PauliSum::add(const PauliSum& s, cplx coeff) {
  if (s.n_sites_ != n_sites_) {
    throw std::invalid_argument("PauliSum add: size mismatch");
  }
  for (const auto& [key, c] : s.terms_) add(key, coeff * c);
}

void PauliSum::prune(Key key) {
  auto it = terms_.find(key);
  if (it != terms_.end() && std::abs(it->second) < kPruneTol) {
    terms_.erase(it);
  }
}

cplx PauliSum::coefficient(Key key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? cplx{0.0, 0.0} : it->second;
}

PauliSum PauliSum::adjoint() const {
  PauliSum out(n_sites_);
  for (const auto& [key, c] : terms_) out.add(key, std::conj(c));
  return out;
}

bool PauliSum::is_hermitian(double tol) const { return max_abs_imag() <= tol; }

double PauliSum::max_abs_imag() const {
  double m = 0.0;
  for (const auto& [key, c] : terms_) m = std::max(m, std::abs(c.imag()));
  return m;
}

std::string PauliSum::to_string() const { return serialize(*this); }

PauliSum add_scaled(const PauliSum& target, cplx coeff, const PauliSum& s) {
  if (target.n_sites() != s.n_sites()) {
    throw std::invalid_argument("add_scaled: size mismatch");
  }
  PauliSum out = target;
  out.add(s, coeff);
  return out;
}

PauliSum multiply(const PauliSum& a, const PauliSum& b) {
  if (a.n_sites() != b.n_sites()) {
    throw std::invalid_argument("PauliSum multiply: size mismatch");
  }
  PauliSum out(a.n_sites());
  for (const auto& [ka, ca] : a.terms()) {
    const PauliString sa(a.n_sites(), ka.first, ka.second);
    for (const auto& [kb, cb] : b.terms()) {
      const PauliString sb(b.n_sites(), kb.first, kb.second);
      const PauliString p = multiply(sa, sb);
      out.add(p, ca * cb);
    }
  }
  return out;
}

PauliSum commutator(const PauliSum& a, const PauliSum& b) {
  PauliSum out = multiply(a, b);
  out.add(multiply(b, a), -1.0);
  return out;
}

bool approx_equal(const PauliSum& a, const PauliSum& b, double tol) {
  if (a.n_sites() != b.n_sites()) return false;
  PauliSum diff = add_scaled(a, -1.0, b);
  double m = 0.0;
  for (const auto& [key, c] : diff.terms()) m = std::max(m, std::abs(c));
  return m <= tol;
}

std::string serialize(const PauliSum& s) {
  std::string out;
  char buf[128];
  for (const auto& [key, c] : s.terms()) {
    const PauliString p(s.n_sites(), key.first, key.second);
    std::snprintf(buf, sizeof buf, "%.17g %.17g %s\n", c.real(), c.imag(),
                  p.label().c_str());
    out += buf;
  }
  return out;
}

PauliSum parse_pauli_sum(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<PauliString, cplx>> parsed;
  int n_sites = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double re = 0.0, im = 0.0;
    std::string label;
    if (!(ls >> re >> im >> label)) {
      throw std::runtime_error("PauliSum parse: bad line: " + line);
    }
    PauliString p = PauliString::from_label(label);
    if (n_sites < 0) n_sites = p.n_sites();
    if (p.n_sites() != n_sites) {
      throw std::runtime_error("PauliSum parse: inconsistent label lengths");
    }
    parsed.emplace_back(p, cplx{re, im});
  }
  if (n_sites < 0) throw std::runtime_error("PauliSum parse: empty input");
  PauliSum out(n_sites);
  for (const auto& [p, c] : parsed) out.add(p, c);
  return out;
}

}  // namespace nuq
