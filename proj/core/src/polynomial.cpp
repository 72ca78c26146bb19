#include "gradnorm/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace gradnorm {

Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::one_plus(const std::vector<double>& r) {
  std::vector<double> c(r.size() + 1);
  c[0] = 1.0;
  std::copy(r.begin(), r.end(), c.begin() + 1);
  return Polynomial(std::move(c));
}

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

double Polynomial::operator()(double y) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * y + *it;
  return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> z) const {
  std::complex<double> acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<double> c(std::max(c_.size(), o.c_.size()), 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = coeff(i) + o.coeff(i);
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * -1.0; }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (c_.empty() || o.c_.empty()) return {};
  std::vector<double> c(c_.size() + o.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    for (std::size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
  }
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(double s) const {
  std::vector<double> c = c_;
  for (double& x : c) x *= s;
  return Polynomial(std::move(c));
}

double max_coeff_diff(const Polynomial& a, const Polynomial& b) {
  const int n = std::max(a.degree(), b.degree()) + 1;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(a.coeff(i) - b.coeff(i)));
  return worst;
}

}  // namespace gradnorm
