#include "addsum/eulerian.hpp"

#include <cmath>

namespace addsum {

EulerianTable::EulerianTable(unsigned max_n) {
  if (max_n > kMaxN)
    throw DomainError("EulerianTable: rows above n = 20 overflow uint64");
  rows_.resize(max_n + 1);
  rows_[0] = {1};  // <0 0> = 1
  for (unsigned n = 1; n <= max_n; ++n) {
    rows_[n].assign(n, 0);  // k = 0 .. n-1; <n k> = 0 for k >= n
    for (unsigned k = 0; k < n; ++k) {
      // <n k> = (k+1) <n-1 k> + (n-k) <n-1 k-1>
      const uint64_t a = k < rows_[n - 1].size() ? rows_[n - 1][k] : 0;
      const uint64_t b = k >= 1 && k - 1 < rows_[n - 1].size() ? rows_[n - 1][k - 1] : 0;
      rows_[n][k] = (k + 1) * a + (n - k) * b;
    }
  }
}

uint64_t EulerianTable::at(unsigned n, long long k) const {
  if (n == 0) return k == 0 ? 1 : 0;
  if (k < 0 || k >= static_cast<long long>(n)) return 0;
  return rows_.at(n)[static_cast<size_t>(k)];
}

uint64_t eulerian(unsigned n, long long k) {
  static const EulerianTable table(EulerianTable::kMaxN);
  return table.at(n, k);
}

double power_series_closed_form(unsigned ell, double x) {
  if (!(std::abs(x) < 1.0))
    throw DomainError("power_series_closed_form: requires |x| < 1");
  if (ell == 0) return 1.0 / (1.0 - x);
  double inner = 0.0;
  for (unsigned nu = 0; nu < ell; ++nu)
    inner = inner + static_cast<double>(eulerian(ell, nu)) * std::pow(x, nu);
  return x / std::pow(1.0 - x, ell + 1) * inner;
}

double repeated_combination_series(unsigned ell, double x) {
  if (!(std::abs(x) < 1.0))
    throw DomainError("repeated_combination_series: requires |x| < 1");
  return 1.0 / std::pow(1.0 - x, ell);
}

double tail_bound(unsigned ell, unsigned k, uint64_t p, double z) {
  if (k == 0 || p < 2) throw DomainError("tail_bound: requires k >= 1, p >= 2");
  if (!(z >= 1.0)) throw DomainError("tail_bound: requires z >= 1");
  const double klogp = k * std::log(static_cast<double>(p));
  if (!(z > ell / klogp))
    throw DomainError("tail_bound: requires z > ell/(k log p)");
  return std::pow(z, ell) /
         (std::pow(static_cast<double>(p), k * z) * (klogp - ell / z));
}

}  // namespace addsum
