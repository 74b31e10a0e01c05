#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "addsum/bigint.hpp"
#include "addsum/errors.hpp"
#include "addsum/prime_engine.hpp"

namespace addsum {

// Function classes distinguished by the value at primes: F0 has f(p) = 1,
// F1 has f(p) = p, BType has f(p) = 0.  Each registered spec also carries a
// finite-range growth certificate |f(p^nu)| <= c * nu^ell (times p^nu for F1),
// checked on the first 50 primes and nu <= 20.
enum class FnClass { F0, F1, BType, Other };

enum class ValueDomain { Integer, Real };

// Closed-form valuation families.
//   OmegaEll:  f(p^nu) = nu^ell            (ell = 0 counts distinct primes,
//                                           ell = 1 counts with multiplicity)
//   TEll:      f(p^nu) = C(nu+ell-1, ell)  (combinations with repetition)
//   AEll:      f(p^nu) = nu^ell * p
//   ATildeEll: f(p^nu) = nu^ell * p^nu
//   B:         f(p^nu) = (nu - 1) * p
//   LogTau:    f(p^nu) = log2(nu + 1)      (real-valued; f(p) = 1)
//   Table:     custom valuation file, optional closed-form fallback
enum class ValuationKind { OmegaEll, TEll, AEll, ATildeEll, B, LogTau, Table };

struct MoebiusTransformValue {
  uint64_t p = 0;
  uint32_t nu = 0;
  int64_t ivalue = 0;  // f(p^nu) - f(p^{nu-1}); meaningful for Integer domain
  double rvalue = 0;   // same, as double (exact for Real domain)
};

class AdditiveFunction {
public:
  // Recognized names: omega, Omega, Omega_ell:<l>, T_ell:<l>, A, A_star,
  // A_ell:<l>, A_tilde_ell:<l>, B, log_tau.
  static AdditiveFunction builtin(const std::string& name);
  static const std::vector<std::string>& builtin_names();

  // Valuation-table file: header lines `key=value` for name, class, ell, c,
  // domain and optional fallback (a builtin name), followed by `p nu value`
  // lines.  Class invariants are validated on load.
  static AdditiveFunction from_valuation_table(std::istream& in);
  static AdditiveFunction from_valuation_file(const std::string& path);

  const std::string& name() const { return name_; }
  FnClass fn_class() const { return class_; }
  ValueDomain domain() const { return domain_; }
  ValuationKind kind() const { return kind_; }
  unsigned ell() const { return ell_; }
  double bound_c() const { return bound_c_; }

  // f(p^nu); f(p^0) = 0.  Integer domain only; throws DomainError on a Real
  // domain function and InvariantFailure if the value overflows int64.
  int64_t ivalue(uint64_t p, uint32_t nu) const;
  // Exact value of any magnitude (Integer domain).
  BigInt bvalue(uint64_t p, uint32_t nu) const;
  // Real view; exact for Real domain functions.
  double rvalue(uint64_t p, uint32_t nu) const;

  int64_t moebius_delta_i(uint64_t p, uint32_t nu) const;
  double moebius_delta_r(uint64_t p, uint32_t nu) const;
  MoebiusTransformValue moebius_transform(uint64_t p, uint32_t nu) const;

  // f(n) = sum of f(p^nu) over p^nu || n; f(1) = 0.
  int64_t eval_i(const Factorization& f) const;
  int64_t eval_i(uint64_t n) const { return eval_i(default_factorizer().factorize(n)); }
  double eval_r(const Factorization& f) const;
  double eval_r(uint64_t n) const { return eval_r(default_factorizer().factorize(n)); }

  // True iff the valuation depends on nu only (used by the constants engine
  // to pick the prime-zeta accelerated route).
  bool p_independent() const;

private:
  AdditiveFunction() = default;

  std::string name_;
  ValuationKind kind_ = ValuationKind::OmegaEll;
  FnClass class_ = FnClass::F0;
  ValueDomain domain_ = ValueDomain::Integer;
  unsigned ell_ = 0;
  double bound_c_ = 1.0;

  // Table kind only.
  std::map<std::pair<uint64_t, uint32_t>, double> table_;
  std::optional<ValuationKind> fallback_kind_;
  unsigned fallback_ell_ = 0;

  double raw_value(uint64_t p, uint32_t nu) const;
  void validate_table() const;
};

// f((m,n)) + f([m,n]) = f(m) + f(n); exact for Integer domain, within 1e-9
// relative for Real.  Holds for every additive f; the checker recomputes both
// sides independently through factored gcd/lcm.
bool check_identity_two_var(const AdditiveFunction& f, uint64_t m, uint64_t n);

}  // namespace addsum
