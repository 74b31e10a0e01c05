#include "addsum/asymptotics.hpp"

#include <cmath>

namespace addsum {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_x(double x) {
  if (!(x >= 16.0))
    throw DomainError("main_term: x >= 16 required (log log x must be positive)");
}

void require_class(const AdditiveFunction& f, FnClass cls, const char* family) {
  if (f.fn_class() != cls)
    throw DomainError(std::string(family) + ": function class mismatch for '" +
                      f.name() + "'");
}

double correction_sum(const ConstantsEngine& eng, unsigned N, double x, double eps) {
  double s = 0.0;
  const double lx = std::log(x);
  for (unsigned j = 1; j <= N; ++j)
    s += eng.saffari_a(j, eps).value / std::pow(lx, static_cast<double>(j));
  return s;
}

}  // namespace

const char* family_name(MainTermFamily f) {
  switch (f) {
    case MainTermFamily::F0Single: return "f0-single";
    case MainTermFamily::F0Gcd: return "f0-gcd";
    case MainTermFamily::F0Lcm: return "f0-lcm";
    case MainTermFamily::LogTauLcm: return "logtau-lcm";
    case MainTermFamily::F1Single: return "f1-single";
    case MainTermFamily::F1Gcd: return "f1-gcd";
    case MainTermFamily::F1Lcm: return "f1-lcm";
    case MainTermFamily::BSingle: return "b-single";
    case MainTermFamily::BGcd: return "b-gcd";
    case MainTermFamily::BLcm: return "b-lcm";
  }
  return "?";
}

MainTermFamily family_from_name(const std::string& name) {
  for (MainTermFamily f :
       {MainTermFamily::F0Single, MainTermFamily::F0Gcd, MainTermFamily::F0Lcm,
        MainTermFamily::LogTauLcm, MainTermFamily::F1Single, MainTermFamily::F1Gcd,
        MainTermFamily::F1Lcm, MainTermFamily::BSingle, MainTermFamily::BGcd,
        MainTermFamily::BLcm})
    if (name == family_name(f)) return f;
  throw DomainError("unknown main-term family '" + name + "'");
}

double main_term(MainTermFamily fam, const AdditiveFunction& f, unsigned k,
                 double x, unsigned N, const ConstantsEngine& eng, double eps) {
  require_x(x);
  const double lx = std::log(x);
  const double llx = std::log(lx);
  const double llsx = std::log(lx / 2.0);  // log log sqrt(x), as written

  switch (fam) {
    case MainTermFamily::F0Single: {
      require_class(f, FnClass::F0, "f0-single");
      if (k != 1) throw DomainError("f0-single: k = 1 only");
      const double C = eng.C_f(f, eps).value;
      return x * llx + C * x + x * correction_sum(eng, N, x, eps);
    }
    case MainTermFamily::F0Gcd: {
      require_class(f, FnClass::F0, "f0-gcd");
      if (k < 2) throw DomainError("f0-gcd: k >= 2");
      return eng.D_fk(f, k, eps).value * std::pow(x, static_cast<double>(k));
    }
    case MainTermFamily::F0Lcm: {
      require_class(f, FnClass::F0, "f0-lcm");
      if (k < 2) throw DomainError("f0-lcm: k >= 2 (k = 1 is f0-single)");
      const double E = eng.E_fk(f, k, eps).value;
      const double xk = std::pow(x, static_cast<double>(k));
      return k * xk * llx + E * xk + k * xk * correction_sum(eng, N, x, eps);
    }
    case MainTermFamily::LogTauLcm: {
      if (f.kind() != ValuationKind::LogTau)
        throw DomainError("logtau-lcm: requires the log_tau function");
      if (k < 1) throw DomainError("logtau-lcm: k >= 1");
      const double l2 = std::log(2.0);
      const double A = eng.A_k_logtau(k, eps).value;
      const double xk = std::pow(x, static_cast<double>(k));
      return k * l2 * xk * llx + A * xk + k * l2 * xk * correction_sum(eng, N, x, eps);
    }
    case MainTermFamily::F1Single: {
      require_class(f, FnClass::F1, "f1-single");
      if (k != 1) throw DomainError("f1-single: k = 1 only");
      return kPi * kPi * x * x / (12.0 * lx);
    }
    case MainTermFamily::F1Gcd: {
      require_class(f, FnClass::F1, "f1-gcd");
      if (k < 2) throw DomainError("f1-gcd: k >= 2");
      const double xk = std::pow(x, static_cast<double>(k));
      if (k == 2) return x * x * llx + eng.D_bar_f2(f, eps).value * x * x;
      return eng.D_fk(f, k, eps).value * xk;
    }
    case MainTermFamily::F1Lcm: {
      require_class(f, FnClass::F1, "f1-lcm");
      if (k < 1) throw DomainError("f1-lcm: k >= 1");
      return kPi * kPi * k * std::pow(x, static_cast<double>(k) + 1.0) / (12.0 * lx);
    }
    case MainTermFamily::BSingle: {
      require_class(f, FnClass::BType, "b-single");
      if (k != 1) throw DomainError("b-single: k = 1 only");
      return x * llsx + eng.F_const(eps).value * x;
    }
    case MainTermFamily::BGcd: {
      require_class(f, FnClass::BType, "b-gcd");
      if (k < 2) throw DomainError("b-gcd: k >= 2");
      return eng.D_fk(f, k, eps).value * std::pow(x, static_cast<double>(k));
    }
    case MainTermFamily::BLcm: {
      require_class(f, FnClass::BType, "b-lcm");
      if (k < 2) throw DomainError("b-lcm: k >= 2");
      const double xk = std::pow(x, static_cast<double>(k));
      return k * xk * llsx + eng.H_k(k, eps).value * xk;
    }
  }
  throw InvariantFailure("main_term: unreachable");
}

double predicted_error_scale(MainTermFamily fam, unsigned k, double x, unsigned N) {
  require_x(x);
  const double lx = std::log(x);
  const double llx = std::log(lx);
  const double xk = std::pow(x, static_cast<double>(k));
  switch (fam) {
    case MainTermFamily::F0Single:
      return x / std::pow(lx, static_cast<double>(N) + 1.0);
    case MainTermFamily::F0Gcd:
      return k == 2 ? x * llx : std::pow(x, static_cast<double>(k) - 1.0);
    case MainTermFamily::F0Lcm:
    case MainTermFamily::LogTauLcm:
      return xk / std::pow(lx, static_cast<double>(N) + 1.0);
    case MainTermFamily::F1Single:
      return x * x / (lx * lx);
    case MainTermFamily::F1Gcd:
      if (k == 2) return x * x / lx;
      if (k == 3) return x * x * llx;
      return std::pow(x, static_cast<double>(k) - 1.0);
    case MainTermFamily::F1Lcm:
      return std::pow(x, static_cast<double>(k) + 1.0) / (lx * lx);
    case MainTermFamily::BSingle:
      return x / lx;
    case MainTermFamily::BGcd:
      return k == 2 ? x * llx : std::pow(x, static_cast<double>(k) - 1.0);
    case MainTermFamily::BLcm:
      return xk / lx;
  }
  throw InvariantFailure("predicted_error_scale: unreachable");
}

ResidualReport residual_report(MainTermFamily fam, const AdditiveFunction& f,
                               unsigned k, std::span<const uint64_t> grid,
                               unsigned N, const ConstantsEngine& eng, double eps) {
  for (size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1])
      throw DomainError("residual_report: grid must be strictly ascending");

  const bool lcm_shape = fam == MainTermFamily::F0Lcm ||
                         fam == MainTermFamily::F1Lcm ||
                         fam == MainTermFamily::BLcm ||
                         fam == MainTermFamily::LogTauLcm;

  ResidualReport rep{fam, f.name(), k, N, {}};
  for (uint64_t x : grid) {
    ResidualRow row;
    row.x = x;
    row.exact = lcm_shape ? fast_lcm_sum(f, k, x) : fast_gcd_sum(f, k, x);
    row.main = main_term(fam, f, k, static_cast<double>(x), N, eng, eps);
    row.residual = row.exact.as_double() - row.main;
    row.normalized = row.residual / predicted_error_scale(fam, k, static_cast<double>(x), N);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

bool improvement_check(const AdditiveFunction& f, uint64_t x, unsigned N,
                       const ConstantsEngine& eng, double eps) {
  if (x < 100000) throw DomainError("improvement_check: x >= 1e5");
  if (N == 0) return true;
  const double exact = fast_gcd_sum(f, 1, x).as_double();
  const double with_N =
      exact - main_term(MainTermFamily::F0Single, f, 1, static_cast<double>(x), N, eng, eps);
  const double with_prev =
      exact - main_term(MainTermFamily::F0Single, f, 1, static_cast<double>(x), N - 1, eng, eps);
  return std::abs(with_N) <= std::abs(with_prev);
}

std::vector<uint64_t> default_grid(unsigned k) {
  const double lo = 1e2, hi = k == 1 ? 1e7 : (k <= 3 ? 1e6 : 1e4);
  const double first = k == 1 ? 1e4 : lo;
  std::vector<uint64_t> grid;
  constexpr int kPoints = 8;
  for (int i = 0; i < kPoints; ++i) {
    const double t = static_cast<double>(i) / (kPoints - 1);
    const uint64_t x = static_cast<uint64_t>(std::llround(first * std::pow(hi / first, t)));
    if (grid.empty() || x > grid.back()) grid.push_back(x);
  }
  return grid;
}

}  // namespace addsum
