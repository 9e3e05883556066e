#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace nuq {

using cplx = std::complex<double>;

/// Signed tensor product of single-site Pauli operators.
///
/// Site k carries I/X/Y/Z decoded from the mask bits (x_k, z_k) =
/// (0,0)/(1,0)/(1,1)/(0,1). The Y at (1,1) is the literal Pauli-Y matrix;
/// the only phase is the explicit one stored here, a power of i.
class PauliString {
 public:
  explicit PauliString(int n_sites);
  PauliString(int n_sites, std::uint64_t x_mask, std::uint64_t z_mask,
              int phase_power = 0);

  /// Parse a label like "XIZY" (site 0 leftmost).
  static PauliString from_label(const std::string& label);
  /// Single-site operator, identity elsewhere. op is one of 'I','X','Y','Z'.
  static PauliString single(int n_sites, int site, char op);

  int n_sites() const { return n_sites_; }
  std::uint64_t x_mask() const { return x_mask_; }
  std::uint64_t z_mask() const { return z_mask_; }
  /// Phase as one of {1, i, -1, -i}.
  cplx phase() const;
  int phase_power() const { return phase_power_; }

  char op_at(int site) const;
  std::string label() const;

  bool operator==(const PauliString& other) const = default;

 private:
  int n_sites_;
  std::uint64_t x_mask_;
  std::uint64_t z_mask_;
  int phase_power_;  // operator = i^phase_power * tensor(I/X/Y/Z)
};

/// Group product a*b with the accumulated phase.
PauliString multiply(const PauliString& a, const PauliString& b);

/// Complex-weighted sum of Pauli strings in canonical form: at most one
/// entry per (x_mask, z_mask) key, no coefficient below the pruning
/// tolerance. Keys are ordered, so iteration is deterministic.
class PauliSum {
 public:
  using Key = std::pair<std::uint64_t, std::uint64_t>;  // (x_mask, z_mask)
  using TermMap = std::map<Key, cplx>;

  static constexpr double kPruneTol = 1e-12;

  explicit PauliSum(int n_sites);

  int n_sites() const { return n_sites_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Accumulate coeff * s (the string's phase folds into the coefficient).
  void add(const PauliString& s, cplx coeff = 1.0);
  void add(Key key, cplx coeff);
  /// Accumulate coeff * s termwise.
  void add(const PauliSum& s, cplx coeff = 1.0);

  cplx coefficient(Key key) const;

  PauliSum adjoint() const;
  /// True when every coefficient is real within tol (each Pauli string is
  /// Hermitian, so this is exactly Hermiticity of the sum).
  bool is_hermitian(double tol = 1e-10) const;
  double max_abs_imag() const;

  bool operator==(const PauliSum& other) const = default;

  std::string to_string() const;

 private:
  void prune(Key key);

  int n_sites_;
  TermMap terms_;
};

/// target + coeff * s, canonicalized and pruned.
PauliSum add_scaled(const PauliSum& target, cplx coeff, const PauliSum& s);
PauliSum multiply(const PauliSum& a, const PauliSum& b);
PauliSum commutator(const PauliSum& a, const PauliSum& b);

bool approx_equal(const PauliSum& a, const PauliSum& b, double tol);

/// One term per line: "coeff_re coeff_im pauli_label", site 0 leftmost,
/// 17 significant digits.
std::string serialize(const PauliSum& s);
PauliSum parse_pauli_sum(const std::string& text);

}  // namespace nuq
