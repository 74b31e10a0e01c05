#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "addsum/additive_function.hpp"
#include "addsum/constants.hpp"
#include "addsum/multisummers.hpp"

namespace addsum {

// Main-term models, one per asymptotic family.  Named by the function class
// and the sum shape (single sum, gcd tuples, lcm tuples):
//
//   f0-single   x llx + C_f x + x sum_{j<=N} a_j/(log x)^j
//   f0-gcd      D_{f,k} x^k
//   f0-lcm      k x^k llx + E_{f,k} x^k + k x^k sum_{j<=N} a_j/(log x)^j
//   logtau-lcm  k log2 x^k llx + A_k x^k + k log2 sum a_j x^k/(log x)^j
//   f1-single   pi^2 x^2 / (12 log x)
//   f1-gcd      x^2 llx + Dbar_{f,2} x^2 (k=2); Dbar_{f,k} x^k (k>=3)
//   f1-lcm      pi^2 k x^{k+1} / (12 log x)
//   b-single    x llsx + F x
//   b-gcd       D_{B,k} x^k
//   b-lcm       k x^k llsx + H_k x^k
//
// with llx = log log x and llsx = log log sqrt(x), computed as log(log(x)/2)
// exactly as the main terms are written.
enum class MainTermFamily {
  F0Single, F0Gcd, F0Lcm, LogTauLcm,
  F1Single, F1Gcd, F1Lcm,
  BSingle, BGcd, BLcm,
};

const char* family_name(MainTermFamily f);
MainTermFamily family_from_name(const std::string& name);

// Main-term value; requires x >= 16 and an applicable (function class, k).
// N is the correction depth for the families that carry the a_j expansion and
// is ignored elsewhere.
double main_term(MainTermFamily fam, const AdditiveFunction& f, unsigned k,
                 double x, unsigned N, const ConstantsEngine& eng,
                 double eps = ConstantsEngine::kDefaultEps);

// The error-term scale each family predicts; residual/scale is the
// normalized residual column.
double predicted_error_scale(MainTermFamily fam, unsigned k, double x, unsigned N);

struct ResidualRow {
  uint64_t x = 0;
  ExactSum exact;
  double main = 0.0;
  double residual = 0.0;    // exact - main
  double normalized = 0.0;  // residual / predicted_error_scale
};

struct ResidualReport {
  MainTermFamily family = MainTermFamily::F0Single;
  std::string function;
  unsigned k = 1;
  unsigned N = 0;
  std::vector<ResidualRow> rows;
};

// Exact sums come from the fast paths (bit-exact for integer functions).
ResidualReport residual_report(MainTermFamily fam, const AdditiveFunction& f,
                               unsigned k, std::span<const uint64_t> grid,
                               unsigned N, const ConstantsEngine& eng,
                               double eps = ConstantsEngine::kDefaultEps);

// Soft diagnostic for the single-sum expansion: does depth N beat depth N-1
// at this x?  (Reported, not asserted: no threshold is claimed for where the
// deeper expansion starts winning.)
bool improvement_check(const AdditiveFunction& f, uint64_t x, unsigned N,
                       const ConstantsEngine& eng,
                       double eps = ConstantsEngine::kDefaultEps);

// Geometric 8-point default grids: 1e4..1e7 for k = 1, 1e2..1e6 for k in
// {2,3}, 1e2..1e4 above.
std::vector<uint64_t> default_grid(unsigned k);

}  // namespace addsum
