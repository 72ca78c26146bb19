#pragma once

#include <complex>
#include <vector>

namespace gradnorm {

// Real polynomial, coefficients in ascending order. Exact trailing zeros are
// trimmed, so the zero polynomial has no coefficients and degree -1.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);
  static Polynomial constant(double c) { return Polynomial({c}); }
  // 1 + r_1 y + ... + r_p y^p
  static Polynomial one_plus(const std::vector<double>& r);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<double>& coeffs() const { return c_; }
  double coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : 0.0; }

  double operator()(double y) const;
  std::complex<double> operator()(std::complex<double> z) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;

 private:
  void trim();
  std::vector<double> c_;
};

inline Polynomial operator*(double s, const Polynomial& p) { return p * s; }

// Largest absolute coefficient of a - b.
double max_coeff_diff(const Polynomial& a, const Polynomial& b);

}  // namespace gradnorm
