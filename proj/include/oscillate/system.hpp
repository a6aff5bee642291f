// Fuchsian systems dx = (sum_j A_j/(t - tau_j)) x dt on the Riemann sphere,
// validation, the spectral class, and carpeting functions.
#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "exact.hpp"
#include "matrix.hpp"
#include "poly.hpp"
#include "roots.hpp"

namespace oscillate {

struct SpherePoint {
  bool infinite = false;
  GaussianRational value;  // meaningful only when finite

  SpherePoint() = default;
  SpherePoint(GaussianRational z) : value(std::move(z)) {}  // NOLINT(google-explicit-constructor)
  SpherePoint(long z) : value(z) {}                          // NOLINT
  static SpherePoint infinity() {
    SpherePoint p;
    p.infinite = true;
    return p;
  }
  bool is_finite() const { return !infinite; }
  friend bool operator==(const SpherePoint& a, const SpherePoint& b) {
    if (a.infinite || b.infinite) return a.infinite == b.infinite;
    return a.value == b.value;
  }
  friend bool operator!=(const SpherePoint& a, const SpherePoint& b) { return !(a == b); }
};

inline std::string to_string(const SpherePoint& p) { return p.infinite ? "inf" : to_string(p.value); }

struct FuchsianSystem {
  std::size_t n = 0;
  std::vector<SpherePoint> poles;
  std::vector<ExactMatrix> residues;

  std::size_t m() const { return poles.size(); }
  bool has_infinity() const {
    return std::any_of(poles.begin(), poles.end(), [](const SpherePoint& p) { return p.infinite; });
  }
  std::vector<std::size_t> finite_indices() const {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < poles.size(); ++j)
      if (poles[j].is_finite()) idx.push_back(j);
    return idx;
  }
  std::vector<GaussianRational> finite_poles() const {
    std::vector<GaussianRational> out;
    for (const auto& p : poles)
      if (p.is_finite()) out.push_back(p.value);
    return out;
  }
};

// ---------------------------------------------------------------------------
// Validation

class ValidationError : public Error {
 public:
  ValidationError(ErrorCode code, const std::string& what, std::vector<std::size_t> indices, ExactMatrix defect)
      : Error(code, what), indices_(std::move(indices)), defect_(std::move(defect)) {}
  const std::vector<std::size_t>& indices() const { return indices_; }
  const ExactMatrix& defect() const { return defect_; }

 private:
  std::vector<std::size_t> indices_;
  ExactMatrix defect_;
};

struct ValidationReport {
  std::size_t n = 0;
  std::size_t m = 0;
  /// True for the proper family (every residue nonzero); false for the partial closure.
  bool proper = true;
  std::vector<std::size_t> zero_residues;
  std::string membership() const {
    return (proper ? "F_{" : "F*_{") + std::to_string(n) + "," + std::to_string(m) + "}";
  }
};

inline ValidationReport validate(const FuchsianSystem& s) {
  if (s.n == 0) throw Error(ErrorCode::InvalidArgument, "rank must be positive");
  if (s.poles.empty()) throw Error(ErrorCode::InvalidArgument, "no poles");
  if (s.poles.size() != s.residues.size())
    throw Error(ErrorCode::InvalidArgument, "pole and residue counts differ");
  for (std::size_t j = 0; j < s.residues.size(); ++j)
    if (s.residues[j].rows() != s.n || s.residues[j].cols() != s.n)
      throw Error(ErrorCode::InvalidArgument, "residue " + std::to_string(j) + " is not " +
                                                  std::to_string(s.n) + "x" + std::to_string(s.n));
  for (std::size_t i = 0; i < s.poles.size(); ++i)
    for (std::size_t j = i + 1; j < s.poles.size(); ++j)
      if (s.poles[i] == s.poles[j])
        throw ValidationError(ErrorCode::DuplicatePoles,
                              "poles " + std::to_string(i) + " and " + std::to_string(j) + " coincide", {i, j},
                              ExactMatrix());
  ExactMatrix sum(s.n, s.n);
  for (const auto& a : s.residues) sum += a;
  if (!sum.is_zero())
    throw ValidationError(ErrorCode::ResidueSumNonzero, "residues sum to " + to_string(sum), {}, sum);
  ValidationReport r;
  r.n = s.n;
  r.m = s.m();
  for (std::size_t j = 0; j < s.residues.size(); ++j)
    if (s.residues[j].is_zero()) r.zero_residues.push_back(j);
  r.proper = r.zero_residues.empty();
  return r;
}

// ---------------------------------------------------------------------------
// Spectral class

struct ResidueSpectrum {
  std::size_t index = 0;
  Poly characteristic;
  bool real_coefficients = true;
  bool real_spectrum = true;
  std::vector<RootDisk> eigenvalues;
};

struct SpectralReport {
  bool in_class = true;
  std::vector<ResidueSpectrum> residues;
  std::optional<std::size_t> first_violation;
};

inline ResidueSpectrum residue_spectrum(const ExactMatrix& a, std::size_t index) {
  ResidueSpectrum r;
  r.index = index;
  r.characteristic = characteristic_polynomial(a);
  for (const auto& c : r.characteristic.coeffs())
    if (!c.is_real()) r.real_coefficients = false;
  r.real_spectrum = r.real_coefficients && all_roots_real(r.characteristic);
  r.eigenvalues = isolate_roots(r.characteristic);
  return r;
}

inline SpectralReport spectral_class_check(const FuchsianSystem& s) {
  SpectralReport rep;
  for (std::size_t j = 0; j < s.residues.size(); ++j) {
    rep.residues.push_back(residue_spectrum(s.residues[j], j));
    if (!rep.residues.back().real_spectrum && !rep.first_violation) {
      rep.in_class = false;
      rep.first_violation = j;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Affine-chart data: Q = prod (t - tau_j) over finite poles and the numerator
// matrix P = sum_j A_j prod_{i != j} (t - tau_i), so that Omega = (P/Q) dt.

inline Poly pole_polynomial(const FuchsianSystem& s) {
  Poly q(GaussianRational(1));
  for (const auto& p : s.poles)
    if (p.is_finite()) q *= Poly::linear_factor(p.value);
  return q;
}

inline PolyMatrix numerator_matrix(const FuchsianSystem& s) {
  PolyMatrix p(s.n, std::vector<Poly>(s.n));
  const auto idx = s.finite_indices();
  for (std::size_t j : idx) {
    Poly others(GaussianRational(1));
    for (std::size_t i : idx)
      if (i != j) others *= Poly::linear_factor(s.poles[i].value);
    for (std::size_t r = 0; r < s.n; ++r)
      for (std::size_t c = 0; c < s.n; ++c)
        if (!s.residues[j](r, c).is_zero()) p[r][c] += s.residues[j](r, c) * others;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Carpeting functions

using CarpetValue = Enclosure;

/// Squared chordal distance, exact.
inline Rational chordal_distance2(const SpherePoint& a, const SpherePoint& b) {
  if (a.infinite && b.infinite) return 0;
  if (a.infinite) return Rational(1) / (1 + b.value.norm2());
  if (b.infinite) return Rational(1) / (1 + a.value.norm2());
  return (a.value - b.value).norm2() / ((1 + a.value.norm2()) * (1 + b.value.norm2()));
}

inline Enclosure chordal_distance(const SpherePoint& a, const SpherePoint& b, unsigned bits = kDefaultSqrtBits) {
  return sqrt_enclosure(chordal_distance2(a, b), bits);
}

enum class PairConvention { Ordered, Unordered };

/// 2 + sum over pairs of reciprocal chordal distances + sum of residue norms.
inline CarpetValue r_flat(const FuchsianSystem& s, PairConvention pairs = PairConvention::Ordered,
                          unsigned bits = kDefaultSqrtBits) {
  Enclosure total(Rational(2));
  const Rational mult = pairs == PairConvention::Ordered ? 2 : 1;
  for (std::size_t i = 0; i < s.poles.size(); ++i)
    for (std::size_t j = i + 1; j < s.poles.size(); ++j) {
      Rational d2 = chordal_distance2(s.poles[i], s.poles[j]);
      if (d2 == 0) throw Error(ErrorCode::DuplicatePoles, "coincident poles in r_flat");
      total += mult * sqrt_enclosure(Rational(1) / d2, bits);
    }
  for (const auto& a : s.residues) total += matrix_norm(a, bits);
  return total;
}

/// 2 + 1/|disc Q| + ||P|| + ||Q|| for monic Q with simple roots.
inline CarpetValue r_sharp(const PolyMatrix& p, const Poly& q, unsigned bits = kDefaultSqrtBits) {
  if (q.degree() < 1 || q.leading() != GaussianRational(1))
    throw Error(ErrorCode::InvalidArgument, "r_sharp needs a monic nonconstant denominator");
  GaussianRational disc = discriminant(q);
  if (disc.is_zero()) throw Error(ErrorCode::ZeroDiscriminant, "denominator has a multiple root");
  Enclosure inv_abs = sqrt_enclosure(Rational(1) / disc.norm2(), bits);
  return Enclosure(Rational(2)) + inv_abs + poly_matrix_norm(p, bits) + poly_norm(q, bits);
}

enum class CarpetOp { Sum, Max, Radius, ShiftedProduct };

inline const char* to_string(CarpetOp op) {
  switch (op) {
    case CarpetOp::Sum: return "sum";
    case CarpetOp::Max: return "max";
    case CarpetOp::Radius: return "radius";
    case CarpetOp::ShiftedProduct: return "shifted-product";
  }
  return "?";
}

/// x (.) y for a single pair.
inline CarpetValue carpet_combine(const CarpetValue& x, const CarpetValue& y, CarpetOp op,
                                  unsigned bits = kDefaultSqrtBits) {
  switch (op) {
    case CarpetOp::Sum: return x + y;
    case CarpetOp::Max: return max(x, y);
    case CarpetOp::Radius: return sqrt_enclosure(x * x + y * y, bits);
    case CarpetOp::ShiftedProduct: {
      Enclosure two(Rational(2));
      return (two + x) * (two + y);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown carpeting operation");
}

/// Fold of a carpeting operation over a multiset.  The multiset is sorted
/// first, so the result does not depend on the order of the input.
inline CarpetValue natural_carpet(std::vector<CarpetValue> values, CarpetOp op, unsigned bits = kDefaultSqrtBits) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "natural_carpet of an empty multiset");
  for (const auto& v : values)
    if (v.lo < 2) throw Error(ErrorCode::InvalidArgument, "carpet values must be >= 2");
  std::sort(values.begin(), values.end(), [](const Enclosure& a, const Enclosure& b) {
    return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
  });
  if (op == CarpetOp::Radius) {
    Enclosure squares(Rational(0));
    for (const auto& v : values) squares += v * v;
    return sqrt_enclosure(squares, bits);
  }
  Enclosure acc = values.front();
  for (std::size_t k = 1; k < values.size(); ++k) acc = carpet_combine(acc, values[k], op, bits);
  return acc;
}

}  // namespace oscillate
