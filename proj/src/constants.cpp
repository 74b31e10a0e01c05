#include "addsum/constants.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

#include "addsum/bigint.hpp"
#include "addsum/eulerian.hpp"
#include "addsum/prime_engine.hpp"

namespace addsum {

namespace {

constexpr unsigned kSeriesMaxM = 160;  // P(m) ~ 2^-m; remainder bounds cover the rest

double binom_d(unsigned n, unsigned j) {
  double r = 1;
  for (unsigned i = 1; i <= j; ++i) r = r * (n - j + i) / i;
  return r;
}

unsigned env_threads() {
  static const unsigned n = [] {
    const char* s = std::getenv("ADDSUM_THREADS");
    if (!s) return 1u;
    const long v = std::atol(s);
    return v < 1 ? 1u : static_cast<unsigned>(std::min<long>(v, 64));
  }();
  return n;
}

// Deterministic blocked prime sum: block boundaries are fixed by P alone, each
// block is compensated independently, and blocks are combined in ascending
// order, so the result is bit-identical for any thread count.
double blocked_prime_sum(uint64_t P, const std::function<double(uint64_t)>& term) {
  const PrimeSieve sieve(P);
  constexpr uint64_t kBlock = uint64_t{1} << 22;
  const uint64_t nblocks = (P + kBlock - 1) / kBlock;
  auto eval_block = [&](uint64_t b) {
    Kahan acc;
    const uint64_t lo = b * kBlock + (b == 0 ? 2 : 0);
    const uint64_t hi = std::min(P, (b + 1) * kBlock - 1);
    sieve.for_each_prime_in(lo, hi, [&](uint64_t p) { acc.add(term(p)); });
    return acc.value();
  };
  const unsigned workers = std::min<uint64_t>(env_threads(), nblocks);
  std::vector<double> partial(nblocks, 0.0);
  if (workers <= 1) {
    for (uint64_t b = 0; b < nblocks; ++b) partial[b] = eval_block(b);
  } else {
    std::atomic<uint64_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (uint64_t b = next.fetch_add(1); b < nblocks; b = next.fetch_add(1))
          partial[b] = eval_block(b);
      });
    for (auto& t : pool) t.join();
  }
  Kahan total;
  for (double v : partial) total.add(v);
  return total.value();
}

// t(p) = sum_{m >= 2} coeff[m] p^{-m}, truncated at M = coeff.size()-1 with
// |c_m| <= rem_c * m^rem_ell beyond.
struct PrimeSeries {
  std::vector<double> coeff;  // index m
  double rem_c = 0.0;
  unsigned rem_ell = 0;
};

void require_eps(double eps) {
  if (eps < ConstantsEngine::kMinEps)
    throw PrecisionRefusal("eps below the supported 1e-10 floor",
                           ConstantsEngine::kMinEps);
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::DirectPrimeSum: return "direct_prime_sum";
    case Method::PrimeZetaSeries: return "prime_zeta_accelerated";
    case Method::Quadrature: return "quadrature";
    case Method::Combination: return "combination";
  }
  return "?";
}

double ConstantsEngine::zeta_minus_one(unsigned s) const {
  if (s < 2) throw DomainError("zeta: s >= 2 required");
  // Direct series plus Euler-Maclaurin corrections at the cut N.
  const unsigned N = s <= 3 ? 4000 : (s <= 8 ? 512 : 64);
  const double sd = s;
  double sum = 0.0;
  for (unsigned n = N; n >= 2; --n) sum += std::pow(n, -sd);
  const double Nd = N;
  sum += std::pow(Nd, 1.0 - sd) / (sd - 1.0);    // integral tail
  sum -= 0.5 * std::pow(Nd, -sd);                // half endpoint
  sum += sd / 12.0 * std::pow(Nd, -sd - 1.0);    // B2 term
  sum -= sd * (sd + 1) * (sd + 2) / 720.0 * std::pow(Nd, -sd - 3.0);
  return sum;
}

ConstantValue ConstantsEngine::zeta_value(unsigned s) const {
  const double zm1 = zeta_minus_one(s);
  const unsigned N = s <= 3 ? 4000 : (s <= 8 ? 512 : 64);
  const double sd = s, Nd = N;
  // twice the first omitted Euler-Maclaurin term
  const double rem =
      2.0 * sd * (sd + 1) * (sd + 2) * (sd + 3) * (sd + 4) / 30240.0 *
      std::pow(Nd, -sd - 5.0);
  return {"zeta:" + std::to_string(s), 1.0 + zm1, rem + 1e-15, 0,
          Method::PrimeZetaSeries};
}

std::pair<double, double> ConstantsEngine::pzeta(unsigned s) const {
  if (s < 2) throw DomainError("prime_zeta: s >= 2 required");
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    const auto it = pzeta_cache_.find(s);
    if (it != pzeta_cache_.end()) return it->second;
  }
  double total = 0.0;
  for (unsigned j = 1; j <= 64; ++j) {
    const int mu = moebius(j);
    if (mu == 0) continue;
    const unsigned long long arg = static_cast<unsigned long long>(s) * j;
    if (arg > 1100) break;  // log zeta underflows past here
    const double lz = std::log1p(zeta_minus_one(static_cast<unsigned>(arg)));
    if (lz == 0.0 && j > 1) break;
    total += static_cast<double>(mu) / j * lz;
  }
  // zeta evaluation errors (~1e-17 each, <= 64 terms) plus the j-truncation,
  // which is below 2^-128 for s >= 2.
  const std::pair<double, double> out{total, 1e-15};
  std::lock_guard<std::mutex> lock(cache_mutex_);
  pzeta_cache_[s] = out;
  return out;
}

ConstantValue ConstantsEngine::prime_zeta(unsigned s) const {
  const auto [v, b] = pzeta(s);
  return {"P:" + std::to_string(s), v, b, 0, Method::PrimeZetaSeries};
}

namespace {

// Evaluate gamma-style constants add_const + sum_p t(p) through P(m).
ConstantValue eval_series(const ConstantsEngine& eng, const std::string& name,
                          double add_const, const PrimeSeries& series) {
  const unsigned M = static_cast<unsigned>(series.coeff.size()) - 1;
  double value = add_const;
  double err = 0.0;
  for (unsigned m = 2; m <= M; ++m) {
    const double c = series.coeff[m];
    if (c == 0.0) continue;
    const ConstantValue p = eng.prime_zeta(m);
    value += c * p.value;
    err += std::abs(c) * p.tail_bound;
  }
  // sum_{m>M} |c_m| P(m) <= rem_c sum_{m>M} m^ell 2^{1-m}
  //                      <= 2 rem_c tail_bound(ell, 1, 2, M).
  if (series.rem_c > 0)
    err += 2.0 * series.rem_c * tail_bound(series.rem_ell, 1, 2, M);
  return {name, value, err, 0, Method::PrimeZetaSeries};
}

}  // namespace

ConstantValue ConstantsEngine::mertens_M(double eps) const {
  require_eps(eps);
  PrimeSeries s;
  s.coeff.assign(kSeriesMaxM + 1, 0.0);
  for (unsigned m = 2; m <= kSeriesMaxM; ++m) s.coeff[m] = -1.0 / m;
  s.rem_c = 1.0 / (kSeriesMaxM + 1);
  ConstantValue out = eval_series(*this, "M", kGamma, s);
  if (out.tail_bound > eps)
    throw PrecisionRefusal("mertens_M: cannot reach eps", out.tail_bound);
  return out;
}

ConstantValue ConstantsEngine::mertens_M_direct(uint64_t P) const {
  if (P < 2) throw DomainError("mertens_M_direct: P >= 2");
  const double sum =
      blocked_prime_sum(P, [](uint64_t p) {
        const double ip = 1.0 / static_cast<double>(p);
        return std::log1p(-ip) + ip;
      });
  // |log(1-1/p) + 1/p| = sum_{m>=2} p^-m / m <= 1/(2 p (p-1)); summing the
  // bound over all integers n > P gives 1/(2P).
  return {"M", kGamma + sum, 0.5 / static_cast<double>(P), P,
          Method::DirectPrimeSum};
}

ConstantValue ConstantsEngine::F_const(double eps) const {
  require_eps(eps);
  PrimeSeries s;
  s.coeff.assign(kSeriesMaxM + 1, 0.0);
  for (unsigned m = 2; m <= kSeriesMaxM; ++m) s.coeff[m] = 1.0 - 1.0 / m;
  s.rem_c = 1.0;
  return eval_series(*this, "F", kGamma, s);
}

namespace {

// v(nu) = f(p^nu) for the p-independent F0 valuations.
double nu_value(const AdditiveFunction& f, unsigned nu) {
  return nu == 0 ? 0.0 : f.rvalue(2, nu);  // p ignored by these kinds
}

}  // namespace

ConstantValue ConstantsEngine::C_f(const AdditiveFunction& f, double eps) const {
  require_eps(eps);
  if (f.fn_class() != FnClass::F0)
    throw DomainError("C_f: requires a class F0 function, got '" + f.name() + "'");
  if (!f.p_independent()) return C_f_direct(f, eps);
  // t(p) = log(1-u) + (1-u) sum_nu v(nu) u^nu  =>  c_m = v(m)-v(m-1) - 1/m.
  PrimeSeries s;
  s.coeff.assign(kSeriesMaxM + 1, 0.0);
  for (unsigned m = 2; m <= kSeriesMaxM; ++m)
    s.coeff[m] = nu_value(f, m) - nu_value(f, m - 1) - 1.0 / m;
  s.rem_c = 2.0 * f.bound_c() + 1.0;
  s.rem_ell = f.ell();
  return eval_series(*this, "C:" + f.name(), kGamma, s);
}

ConstantValue ConstantsEngine::C_f_direct(const AdditiveFunction& f, double eps) const {
  require_eps(eps);
  if (f.fn_class() != FnClass::F0)
    throw DomainError("C_f_direct: requires a class F0 function");
  const double c = f.bound_c();
  const unsigned ell = f.ell();
  // |t(p)| <= (2 + c kappa_ell)/p^2 with kappa_ell = sum_{nu>=2} nu^ell 2^{2-nu}.
  const double kappa = 4.0 * (power_series_closed_form(ell, 0.5) - 0.5);
  const double c_tail = 2.0 + c * kappa;
  const uint64_t P = std::max<uint64_t>(3, static_cast<uint64_t>(std::ceil(2.0 * c_tail / eps)));
  if (P > kMaxDirectPrimeLimit)
    throw PrecisionRefusal("C_f_direct: eps needs primes beyond the configured cap",
                           2.0 * c_tail / static_cast<double>(kMaxDirectPrimeLimit));
  const double sum = blocked_prime_sum(P, [&](uint64_t p) {
    const double ip = 1.0 / static_cast<double>(p);
    const double logp = std::log(static_cast<double>(p));
    Kahan S;
    double q = 1.0;
    // cut once the dominating term is below 1e-19 and nu log p >= 2 ell + 4 log p,
    // so tail_bound(ell,1,p,nu) <= 1e-19 / (log(2)/2) < 3e-19 per prime
    for (unsigned nu = 1;; ++nu) {
      q *= ip;
      S.add(f.rvalue(p, nu) * q);
      if (nu >= 4 && c * std::pow(nu, ell) * q < 1e-19 && nu * logp > 2.0 * ell + 4.0 * logp)
        break;
    }
    return std::log1p(-ip) + (1.0 - ip) * S.value();
  });
  const double nu_tails = 3e-19 * static_cast<double>(P);
  return {"C:" + f.name(), kGamma + sum,
          c_tail / static_cast<double>(P) + nu_tails, P, Method::DirectPrimeSum};
}

ConstantValue ConstantsEngine::D_fk(const AdditiveFunction& f, unsigned k,
                                    double eps) const {
  require_eps(eps);
  const FnClass cls = f.fn_class();
  if (cls == FnClass::F1 && k == 2)
    throw DomainError("D_fk: (F1, k=2) has a different constant; use D_bar_f2");
  if (!((cls == FnClass::F0 && k >= 2) || (cls == FnClass::F1 && k >= 3) ||
        (cls == FnClass::BType && k >= 2)))
    throw DomainError("D_fk: inapplicable (class, k) for '" + f.name() + "', k=" +
                      std::to_string(k));

  const std::string name = "D:" + f.name() + ":" + std::to_string(k);
  const double c = f.bound_c();
  const unsigned ell = f.ell();

  if (f.kind() != ValuationKind::Table) {
    // (1 - u^k) sum_nu f(p^nu) u^{nu k} expanded as a Laurent series in u.
    PrimeSeries s;
    s.coeff.assign(kSeriesMaxM + 1, 0.0);
    s.rem_c = 2.0 * c;
    s.rem_ell = ell;
    auto pow_d = [](unsigned b, unsigned e) { return std::pow(static_cast<double>(b), static_cast<double>(e)); };
    // nu^ell - (nu-1)^ell with the nu = 1 delta taken against f(p^0) = 0
    auto delta_pow = [&](unsigned nu) {
      return pow_d(nu, ell) - (nu >= 2 ? pow_d(nu - 1, ell) : 0.0);
    };
    switch (f.kind()) {
      case ValuationKind::OmegaEll:
      case ValuationKind::TEll:
      case ValuationKind::LogTau:
        for (unsigned nu = 1; nu * k <= kSeriesMaxM; ++nu)
          s.coeff[nu * k] += nu_value(f, nu) - nu_value(f, nu - 1);
        break;
      case ValuationKind::AEll:
        for (unsigned nu = 1; nu * k >= 1 && nu * k - 1 <= kSeriesMaxM; ++nu)
          s.coeff[nu * k - 1] += delta_pow(nu);
        break;
      case ValuationKind::ATildeEll:
        for (unsigned nu = 1; nu * (k - 1) <= kSeriesMaxM; ++nu) {
          s.coeff[nu * (k - 1)] += pow_d(nu, ell);
          if (nu * (k - 1) + k <= kSeriesMaxM) s.coeff[nu * (k - 1) + k] -= pow_d(nu, ell);
        }
        break;
      case ValuationKind::B:
        for (unsigned nu = 2; nu * k >= 1 && nu * k - 1 <= kSeriesMaxM; ++nu)
          s.coeff[nu * k - 1] += 1.0;
        s.rem_c = 1.0;
        s.rem_ell = 0;
        break;
      default:
        break;
    }
    return eval_series(*this, name, 0.0, s);
  }

  // Custom table: direct prime sum.  |t(p)| <= 4 c S_ell(1/2) p^{-sdecay} with
  // sdecay = k (F0), k-1 (F1), 2k-1 (BType); prime tail bounded by the
  // integer-sum comparison c_tail P^{1-s}/(s-1).
  const unsigned sdecay = cls == FnClass::F0 ? k : (cls == FnClass::F1 ? k - 1 : 2 * k - 1);
  const double c_tail = 4.0 * c * power_series_closed_form(ell, 0.5);
  const double Pd = std::pow(2.0 * c_tail / (eps * (sdecay - 1.0)), 1.0 / (sdecay - 1.0));
  const uint64_t P = std::max<uint64_t>(1000, static_cast<uint64_t>(std::ceil(Pd)));
  if (P > kMaxDirectPrimeLimit)
    throw PrecisionRefusal(
        "D_fk: eps needs primes beyond the configured cap",
        c_tail * std::pow(static_cast<double>(kMaxDirectPrimeLimit),
                          1.0 - static_cast<double>(sdecay)) / (sdecay - 1.0));
  const unsigned keff = cls == FnClass::F1 ? k - 1 : k;
  const double sum = blocked_prime_sum(P, [&](uint64_t p) {
    const double ipk = std::pow(static_cast<double>(p), -static_cast<double>(k));
    const double logp = std::log(static_cast<double>(p));
    Kahan S;
    double q = 1.0;
    for (unsigned nu = 1;; ++nu) {
      q *= ipk;
      S.add(f.rvalue(p, nu) * q);
      // dominating next term, with the p^nu factor absorbed for F1
      const double next_mag =
          c * std::pow(nu + 1, ell) *
          std::pow(static_cast<double>(p), -static_cast<double>((nu + 1)) * keff);
      if (nu >= 4 && next_mag < 1e-19 && nu * keff * logp > 2.0 * ell + 4.0 * logp)
        break;
    }
    return (1.0 - ipk) * S.value();
  });
  const double prime_tail =
      c_tail * std::pow(static_cast<double>(P), 1.0 - static_cast<double>(sdecay)) /
      (sdecay - 1.0);
  return {name, sum, prime_tail + 3e-19 * static_cast<double>(P), P,
          Method::DirectPrimeSum};
}

ConstantValue ConstantsEngine::D_bar_f2(const AdditiveFunction& f, double eps) const {
  require_eps(eps);
  if (f.fn_class() != FnClass::F1)
    throw DomainError("D_bar_f2: requires a class F1 function, got '" + f.name() + "'");
  const std::string name = "Dbar:" + f.name() + ":2";
  const unsigned ell = f.ell();
  auto pow_d = [](unsigned b, unsigned e) { return std::pow(static_cast<double>(b), static_cast<double>(e)); };

  if (f.kind() == ValuationKind::AEll) {
    // t(p) = log(1-u) + (1-u^2) sum nu^ell p u^{2 nu}:
    // c_m = -1/m + [m odd] ((m+1)/2)^ell - ((m-1)/2)^ell.
    PrimeSeries s;
    s.coeff.assign(kSeriesMaxM + 1, 0.0);
    for (unsigned m = 2; m <= kSeriesMaxM; ++m) {
      double cm = -1.0 / m;
      if (m % 2 == 1) {
        const unsigned nu = (m + 1) / 2;  // nu >= 2 here since m >= 3
        cm += pow_d(nu, ell) - pow_d(nu - 1, ell);
      }
      s.coeff[m] = cm;
    }
    s.rem_c = 2.0 * f.bound_c() + 1.0;
    s.rem_ell = ell;
    return eval_series(*this, name, kGamma, s);
  }
  if (f.kind() == ValuationKind::ATildeEll) {
    // f(p^nu) u^{2 nu} = nu^ell u^nu: c_m = -1/m + m^ell - (m-2)^ell.
    PrimeSeries s;
    s.coeff.assign(kSeriesMaxM + 1, 0.0);
    for (unsigned m = 2; m <= kSeriesMaxM; ++m) {
      double cm = -1.0 / m + pow_d(m, ell);
      if (m >= 3) cm -= pow_d(m - 2, ell);
      s.coeff[m] = cm;
    }
    s.rem_c = 2.0 * f.bound_c() + 1.0;
    s.rem_ell = ell;
    return eval_series(*this, name, kGamma, s);
  }

  // Custom F1 table: direct route; t(p) - [log(1-u) + u] decays like p^-2.
  const double c = f.bound_c();
  const double kappa = 4.0 * (power_series_closed_form(ell, 0.5) - 0.5);
  const double c_tail = 2.0 + c * kappa;
  const uint64_t P = std::max<uint64_t>(3, static_cast<uint64_t>(std::ceil(2.0 * c_tail / eps)));
  if (P > kMaxDirectPrimeLimit)
    throw PrecisionRefusal("D_bar_f2: eps needs primes beyond the configured cap",
                           2.0 * c_tail / static_cast<double>(kMaxDirectPrimeLimit));
  const double sum = blocked_prime_sum(P, [&](uint64_t p) {
    const double ip = 1.0 / static_cast<double>(p);
    const double ip2 = ip * ip;
    const double logp = std::log(static_cast<double>(p));
    Kahan S;
    double q = 1.0;
    for (unsigned nu = 1;; ++nu) {
      q *= ip2;
      S.add(f.rvalue(p, nu) * q);
      if (nu >= 4 && c * std::pow(nu, ell) * q * static_cast<double>(p) < 1e-19 &&
          nu * logp > 2.0 * ell + 4.0 * logp)
        break;
    }
    return std::log1p(-ip) + (1.0 - ip2) * S.value();
  });
  return {name, kGamma + sum,
          c_tail / static_cast<double>(P) + 3e-19 * static_cast<double>(P), P,
          Method::DirectPrimeSum};
}

ConstantValue ConstantsEngine::E_fk(const AdditiveFunction& f, unsigned k, double eps) const {
  require_eps(eps);
  if (f.fn_class() != FnClass::F0)
    throw DomainError("E_fk: requires a class F0 function");
  if (k < 1) throw DomainError("E_fk: k >= 1");
  const ConstantValue c = C_f(f, eps);
  if (k == 1) return {"E:" + f.name() + ":1", c.value, c.tail_bound, 0, Method::Combination};
  double value = k * c.value;
  double err = k * c.tail_bound;
  for (unsigned j = 2; j <= k; ++j) {
    const ConstantValue d = D_fk(f, j, eps);
    const double bj = binom_d(k, j);
    const double sign = (j % 2 == 0) ? -1.0 : 1.0;  // -(-1)^j C(k,j) D_j
    value += sign * bj * d.value;
    err += bj * d.tail_bound;
  }
  return {"E:" + f.name() + ":" + std::to_string(k), value, err, 0, Method::Combination};
}

ConstantValue ConstantsEngine::E_omega_closed(unsigned k, double eps) const {
  require_eps(eps);
  if (k < 2) throw DomainError("E_omega_closed: k >= 2");
  // k gamma + sum_p (k log(1-1/p) + 1 - (1-1/p)^k):
  // c_m = -k/m + (-1)^{m+1} C(k,m).
  PrimeSeries s;
  s.coeff.assign(std::max<unsigned>(kSeriesMaxM, k + 1) + 1, 0.0);
  const unsigned M = static_cast<unsigned>(s.coeff.size()) - 1;
  for (unsigned m = 2; m <= M; ++m) {
    double cm = -static_cast<double>(k) / m;
    if (m <= k) cm += (m % 2 == 1 ? 1.0 : -1.0) * binom_d(k, m);
    s.coeff[m] = cm;
  }
  s.rem_c = static_cast<double>(k) / (M + 1);
  return eval_series(*this, "E:omega:" + std::to_string(k), k * kGamma, s);
}

ConstantValue ConstantsEngine::E_Omega_closed(unsigned k, double eps) const {
  require_eps(eps);
  if (k < 2) throw DomainError("E_Omega_closed: k >= 2");
  // k gamma + sum_p (k log(1-1/p) + k/(p-1) - sum_{j=2}^k (-1)^j C(k,j)/(p^j-1)):
  // c_m = -k/m + k - sum_{j | m, 2<=j<=k} (-1)^j C(k,j).
  PrimeSeries s;
  s.coeff.assign(kSeriesMaxM + 1, 0.0);
  for (unsigned m = 2; m <= kSeriesMaxM; ++m) {
    double cm = -static_cast<double>(k) / m + static_cast<double>(k);
    for (unsigned j = 2; j <= std::min(k, m); ++j)
      if (m % j == 0) cm -= (j % 2 == 0 ? 1.0 : -1.0) * binom_d(k, j);
    s.coeff[m] = cm;
  }
  s.rem_c = 2.0 * static_cast<double>(k) + std::pow(2.0, static_cast<double>(k));
  return eval_series(*this, "E:Omega:" + std::to_string(k), k * kGamma, s);
}

ConstantValue ConstantsEngine::logtau_C(double eps) const {
  require_eps(eps);
  // (log 2) gamma + sum_p ((log 2) log(1-u) + (1-u) sum log(nu+1) u^nu):
  // c_m = -log(2)/m + log((m+1)/m).
  const double l2 = std::log(2.0);
  PrimeSeries s;
  s.coeff.assign(kSeriesMaxM + 1, 0.0);
  for (unsigned m = 2; m <= kSeriesMaxM; ++m)
    s.coeff[m] = -l2 / m + std::log1p(1.0 / m);
  s.rem_c = 2.0 / (kSeriesMaxM + 1);
  return eval_series(*this, "logtau:C", l2 * kGamma, s);
}

ConstantValue ConstantsEngine::logtau_D(unsigned j, double eps) const {
  require_eps(eps);
  if (j < 2) throw DomainError("logtau_D: j >= 2");
  PrimeSeries s;
  s.coeff.assign(kSeriesMaxM + 1, 0.0);
  for (unsigned nu = 1; nu * j <= kSeriesMaxM; ++nu)
    s.coeff[nu * j] = std::log1p(1.0 / nu);  // log(nu+1) - log(nu)
  s.rem_c = 1.0;
  return eval_series(*this, "logtau:D:" + std::to_string(j), 0.0, s);
}

double ConstantsEngine::logtau_D_direct(unsigned j, unsigned nu_max, uint64_t P) const {
  if (j < 2 || nu_max < 1) throw DomainError("logtau_D_direct: j >= 2, nu_max >= 1");
  return blocked_prime_sum(P, [&](uint64_t p) {
    const double y = std::pow(static_cast<double>(p), -static_cast<double>(j));
    Kahan S;
    double q = 1.0;
    for (unsigned nu = 1; nu <= nu_max; ++nu) {
      q *= y;
      S.add(std::log(static_cast<double>(nu) + 1.0) * q);
    }
    return (1.0 - y) * S.value();
  });
}

ConstantValue ConstantsEngine::A_k_logtau(unsigned k, double eps) const {
  require_eps(eps);
  if (k < 1) throw DomainError("A_k_logtau: k >= 1");
  const ConstantValue c = logtau_C(eps);
  double value = k * c.value;
  double err = k * c.tail_bound;
  for (unsigned j = 2; j <= k; ++j) {
    const ConstantValue d = logtau_D(j, eps);
    const double sign = (j % 2 == 0) ? -1.0 : 1.0;
    value += sign * binom_d(k, j) * d.value;
    err += binom_d(k, j) * d.tail_bound;
  }
  return {"Ak:" + std::to_string(k), value, err, 0, Method::Combination};
}

namespace {

// Upper incomplete gamma for integer order: Gamma(j, y) = int_y^inf u^{j-1} e^-u du.
double upper_gamma(unsigned j, double y) {
  double g = std::exp(-y);  // Gamma(1, y)
  for (unsigned a = 1; a < j; ++a) g = a * g + std::pow(y, a) * std::exp(-y);
  return g;
}

// 16-point Gauss-Legendre on [-1, 1].
constexpr double kGlNode[8] = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
constexpr double kGlWeight[8] = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

}  // namespace

ConstantValue ConstantsEngine::saffari_a(unsigned j, double tolerance) const {
  if (j < 1 || j > 10) throw DomainError("saffari_a: 1 <= j <= 10");
  require_eps(tolerance);

  // Tail past an integer T: with g(t) = (log t)^{j-1}/t^2,
  //   int_T^inf {t} g dt = (1/2) Gamma(j, log T) - g(T)/12 + R,
  //   |R| <= (max|B3|/6) int_T^inf |g''| <= 0.0481/6 * 10 * 3^-j Gamma(j, 3 log T),
  // using |g''| <= 10 (log t)^{j-1} t^-4 for log t >= j-1.
  auto rem_bound = [&](double T) {
    return 0.0481 / 6.0 * 10.0 * std::pow(3.0, -static_cast<double>(j)) *
               upper_gamma(j, 3.0 * std::log(T)) +
           1e-14;
  };
  const double candidates[] = {3e4, 1e5, 3e5, 1e6, 3e6};
  double T = 0;
  for (double cand : candidates)
    if (rem_bound(cand) <= tolerance / 2 && std::log(cand) >= j) { T = cand; break; }
  if (T == 0)
    throw PrecisionRefusal("saffari_a: tolerance unreachable", rem_bound(3e6));

  const uint64_t Ti = static_cast<uint64_t>(T);
  Kahan panels;
  for (uint64_t n = 1; n < Ti; ++n) {
    // int_n^{n+1} (t-n) (log t)^{j-1} / t^2 dt, smooth on the panel
    const double mid = n + 0.5;
    double acc = 0.0;
    for (int q = 0; q < 8; ++q) {
      for (double sgn : {-1.0, 1.0}) {
        const double t = mid + sgn * 0.5 * kGlNode[q];
        acc += 0.5 * kGlWeight[q] * (t - n) *
               std::pow(std::log(t), static_cast<double>(j - 1)) / (t * t);
      }
    }
    panels.add(acc);
  }
  const double gT = std::pow(std::log(T), static_cast<double>(j - 1)) / (T * T);
  const double integral = panels.value() + 0.5 * upper_gamma(j, std::log(T)) - gT / 12.0;
  return {"a:" + std::to_string(j), -integral, rem_bound(T), 0, Method::Quadrature};
}

ConstantValue ConstantsEngine::beta_j(unsigned j) const {
  if (j < 2) throw DomainError("beta_j: j >= 2");
  // sum_p p^{-(j-1)}/(p^j - 1) = sum_{i>=2} P(i j - 1)
  double v = 0.0, err = 0.0;
  for (unsigned i = 2;; ++i) {
    const unsigned m = i * j - 1;
    if (m > 1100) { err += std::pow(2.0, 1.0 - static_cast<double>(m)); break; }
    const auto [pv, pb] = pzeta(m);
    v += pv;
    err += pb;
    if (pv < 1e-20) { err += std::pow(2.0, -static_cast<double>(m)) * 4.0; break; }
  }
  return {"beta:" + std::to_string(j), v, err, 0, Method::PrimeZetaSeries};
}

ConstantValue ConstantsEngine::H_k(unsigned k, double eps) const {
  require_eps(eps);
  if (k < 2 || k > 16) throw DomainError("H_k: 2 <= k <= 16");
  const ConstantValue f = F_const(eps);
  double value = k * f.value;
  double err = k * f.tail_bound;
  for (unsigned j = 2; j <= k; ++j) {
    const ConstantValue b = beta_j(j);
    const double sign = (j % 2 == 0) ? -1.0 : 1.0;  // (-1)^{j-1}
    value += sign * binom_d(k, j) * b.value;
    err += binom_d(k, j) * b.tail_bound;
  }
  return {"H:" + std::to_string(k), value, err, 0, Method::PrimeZetaSeries};
}

ConstantValue ConstantsEngine::H_k_combination(unsigned k, double eps) const {
  require_eps(eps);
  if (k < 2 || k > 16) throw DomainError("H_k_combination: 2 <= k <= 16");
  static const AdditiveFunction b_fn = AdditiveFunction::builtin("B");
  const ConstantValue f = F_const(eps);
  double value = k * f.value;
  double err = k * f.tail_bound;
  for (unsigned j = 2; j <= k; ++j) {
    const ConstantValue d = D_fk(b_fn, j, eps);  // Thm-style gcd constants of B
    const double sign = (j % 2 == 0) ? -1.0 : 1.0;
    value += sign * binom_d(k, j) * d.value;
    err += binom_d(k, j) * d.tail_bound;
  }
  return {"H:" + std::to_string(k), value, err, 0, Method::Combination};
}

ConstantValue ConstantsEngine::lookup(const std::string& key, double eps) const {
  std::vector<std::string> tok;
  size_t pos = 0;
  while (pos <= key.size()) {
    const size_t next = key.find(':', pos);
    if (next == std::string::npos) { tok.push_back(key.substr(pos)); break; }
    tok.push_back(key.substr(pos, next - pos));
    pos = next + 1;
  }
  auto as_uint = [&](const std::string& s) -> unsigned {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw DomainError("constant lookup: bad integer '" + s + "' in '" + key + "'");
    return static_cast<unsigned>(std::stoul(s));
  };
  auto join = [&](size_t lo, size_t hi) {
    std::string s;
    for (size_t i = lo; i < hi; ++i) {
      if (!s.empty()) s += ':';
      s += tok[i];
    }
    return s;
  };

  const std::string& fam = tok[0];
  if (fam == "M" && tok.size() == 1) return mertens_M(eps);
  if (fam == "F" && tok.size() == 1) return F_const(eps);
  if (fam == "H" && tok.size() == 2) return H_k(as_uint(tok[1]), eps);
  if (fam == "a" && tok.size() == 2) return saffari_a(as_uint(tok[1]), eps);
  if (fam == "zeta" && tok.size() == 2) return zeta_value(as_uint(tok[1]));
  if (fam == "P" && tok.size() == 2) return prime_zeta(as_uint(tok[1]));
  if (fam == "Ak" && tok.size() == 2) return A_k_logtau(as_uint(tok[1]), eps);
  if (fam == "C" && tok.size() >= 2)
    return C_f(AdditiveFunction::builtin(join(1, tok.size())), eps);
  if ((fam == "D" || fam == "Dbar" || fam == "E") && tok.size() >= 3) {
    const unsigned k = as_uint(tok.back());
    const AdditiveFunction f = AdditiveFunction::builtin(join(1, tok.size() - 1));
    if (fam == "E") return E_fk(f, k, eps);
    if (fam == "Dbar")
      return k == 2 ? D_bar_f2(f, eps) : D_fk(f, k, eps);
    return D_fk(f, k, eps);
  }
  throw DomainError("constant lookup: unknown key '" + key + "'");
}

namespace {

struct ReferenceEntry {
  const char* key;
  const char* digits;
};

// Bundled reference digits used for comparison columns and the acceptance
// ranges (one unit in the last printed digit).
constexpr ReferenceEntry kReference[] = {
    {"M", "0.2614"},     {"Dbar:A:2", "0.4971"}, {"F", "1.0346"},
    {"H:2", "1.816"},    {"H:3", "2.435"},       {"H:4", "2.907"},
    {"H:5", "3.255"},    {"H:6", "3.5004"},      {"H:7", "3.658"},
    {"H:8", "3.74"},     {"H:9", "3.758"},       {"H:10", "3.719"},
    {"a:1", "-0.42278"},
};

}  // namespace

std::optional<std::string> ConstantsEngine::reference_digits(const std::string& key) {
  for (const auto& e : kReference)
    if (key == e.key) return std::string(e.digits);
  return std::nullopt;
}

std::optional<std::pair<double, double>> ConstantsEngine::reference_range(
    const std::string& key) {
  const auto digits = reference_digits(key);
  if (!digits) return std::nullopt;
  const double v = std::stod(*digits);
  // M, Dbar:A:2 and F carry an explicit +-5e-4 acceptance tolerance (their
  // reference digits are truncated, not rounded); the H row and a_1 use one
  // unit in the last printed digit.
  if (key == "M" || key == "Dbar:A:2" || key == "F")
    return std::make_pair(v - 5e-4, v + 5e-4);
  const size_t dot = digits->find('.');
  const size_t decimals = dot == std::string::npos ? 0 : digits->size() - dot - 1;
  const double unit = std::pow(10.0, -static_cast<double>(decimals));
  return std::make_pair(v - unit / 2, v + unit / 2);
}

double ConstantsEngine::truncated_reference_eval(const std::string& key,
                                                 uint64_t prime_limit) const {
  const PrimeSieve sieve(prime_limit);
  const std::vector<uint64_t> ps = sieve.primes();
  auto F_trunc = [&] {
    double s = kGamma;
    for (uint64_t p : ps) s += std::log1p(-1.0 / p) + 1.0 / (p - 1.0);
    return s;
  };
  auto beta_trunc = [&](unsigned j) {
    double s = 0.0;
    for (uint64_t p : ps)
      s += 1.0 / (std::pow(static_cast<double>(p), static_cast<double>(j - 1)) *
                  (std::pow(static_cast<double>(p), static_cast<double>(j)) - 1.0));
    return s;
  };
  if (key == "M") {
    double s = kGamma;
    for (uint64_t p : ps) s += std::log1p(-1.0 / p) + 1.0 / p;
    return s;
  }
  if (key == "F") return F_trunc();
  if (key == "Dbar:A:2") {
    double s = kGamma;
    for (uint64_t p : ps)
      s += std::log1p(-1.0 / p) + static_cast<double>(p) / (static_cast<double>(p) * p - 1.0);
    return s;
  }
  if (key.rfind("H:", 0) == 0) {
    const unsigned k = static_cast<unsigned>(std::stoul(key.substr(2)));
    double v = k * F_trunc();
    for (unsigned j = 2; j <= k; ++j)
      v += (j % 2 == 0 ? -1.0 : 1.0) * binom_d(k, j) * beta_trunc(j);
    return v;
  }
  throw DomainError("truncated_reference_eval: unsupported key '" + key + "'");
}

}  // namespace addsum
