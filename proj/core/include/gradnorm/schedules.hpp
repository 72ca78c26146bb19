#pragma once

#include <string>
#include <vector>

#include "gradnorm/kvdoc.hpp"

namespace gradnorm {

// Nesterov FGM coefficients: b_0 = B_0, b_k^2 = B_k, B_k = B_{k-1} + b_k,
// a_k = B_k / (2L). Sequences are indexed 0..K.
struct FgmSchedule {
  int K = 0;
  double L = 1.0;
  std::vector<double> B;
  std::vector<double> b;
  std::vector<double> a;
};

// OGM-G coefficients A_0 < ... < A_K = 1 with a_k = A_k - A_{k-1} (a_0 = A_0).
struct OgmgSchedule {
  int K = 0;
  std::vector<double> A;
  std::vector<double> a;
};

// Lower-triangular step table beta_{j,k}, 0 <= j <= k <= K-1.
class BetaTable {
 public:
  explicit BetaTable(int K);
  int K() const { return K_; }
  double operator()(int j, int k) const { return data_[index(j, k)]; }
  double& operator()(int j, int k) { return data_[index(j, k)]; }

 private:
  std::size_t index(int j, int k) const;
  int K_;
  std::vector<double> data_;
};

inline constexpr int kMaxBetaHorizon = 200;

FgmSchedule fgm_schedule(int K, double B0 = 1.0, double L = 1.0);
OgmgSchedule ogmg_schedule(int K);
// Wraps a caller-supplied A sequence (used to exercise the validator).
OgmgSchedule ogmg_schedule_from(std::vector<double> A);

// Table used by the algorithm: last row from cond-1 with equality, interior
// entries by the backward recursion it implies. Throws for K > kMaxBetaHorizon.
BetaTable ogmg_betas(const OgmgSchedule& s);
// Table determined by cond-2 alone for an arbitrary A sequence (beta_{k,k} = 1).
BetaTable solve_betas(const OgmgSchedule& s);

struct ValidationItem {
  std::string name;
  double residual = 0.0;  // worst residual; sign convention: <= tol passes
  double tol = 0.0;
  bool applicable = true;
  bool passed = true;
};

struct ValidationReport {
  std::vector<ValidationItem> items;
  bool passed = true;

  const ValidationItem& at(const std::string& name) const;
  std::vector<std::string> failures() const;
};

ValidationReport validate_schedule(const FgmSchedule& s);
ValidationReport validate_schedule(const OgmgSchedule& s);

KvDoc schedule_to_doc(const FgmSchedule& s);
KvDoc schedule_to_doc(const OgmgSchedule& s);
FgmSchedule fgm_schedule_from_doc(const KvDoc& doc);
OgmgSchedule ogmg_schedule_from_doc(const KvDoc& doc);

}  // namespace gradnorm
