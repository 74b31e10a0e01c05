// addsum: exact gcd/lcm tuple sums of additive functions, identity checks,
// high-precision constants, Eulerian utilities, residual reports.
//
// Exit codes: 0 ok, 2 usage/validation, 3 guard refusal, 4 precision refusal,
// 5 invariant failure.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "addsum/additive_function.hpp"
#include "addsum/asymptotics.hpp"
#include "addsum/constants.hpp"
#include "addsum/eulerian.hpp"
#include "addsum/multisummers.hpp"
#include "addsum/serialize.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using addsum::AdditiveFunction;
using addsum::ConstantsEngine;
using addsum::ConstantValue;
using addsum::ExactSum;
using nlohmann::json;

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kGuardRefusal = 3,
  kPrecisionRefusal = 4,
  kInvariantFailure = 5,
};

struct Output {
  std::string format = "table";  // table | csv | json
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  long elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }

  void emit(const std::string& command, const json& inputs, const json& payload,
            const std::string& table_text, const std::string& csv_text) const {
    if (format == "json") {
      json j = payload;
      j["command"] = command;
      j["inputs"] = inputs;
      j["version"] = kVersion;
      j["elapsed_ms"] = elapsed_ms();
      std::cout << j.dump() << "\n";
    } else if (format == "csv") {
      std::cout << csv_text;
    } else {
      std::cout << table_text;
    }
  }
};

std::string full(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

std::vector<uint64_t> parse_grid(const std::string& text) {
  std::vector<uint64_t> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    grid.push_back(static_cast<uint64_t>(std::llround(std::stod(item))));
  }
  if (grid.empty()) throw addsum::DomainError("empty grid");
  return grid;
}

std::vector<uint64_t> parse_tuple(const std::string& text) { return parse_grid(text); }

json exact_payload(const ExactSum& s) {
  json j = addsum::to_json(s);
  return json{{"value", j.at("value")}, {"route", route_name(s.route)},
              {"domain", j.at("domain")}};
}

std::string exact_table(const ExactSum& s) {
  std::ostringstream out;
  out << s.function << "  k=" << s.k << "  x=" << s.x << "  route="
      << route_name(s.route) << "\n"
      << "value = "
      << (s.domain == addsum::ValueDomain::Integer ? s.ivalue.str() : full(s.rvalue))
      << "\n";
  return out.str();
}

std::string exact_csv(const ExactSum& s) {
  std::ostringstream out;
  out << "function,k,x,route,value\n"
      << s.function << ',' << s.k << ',' << s.x << ',' << route_name(s.route) << ','
      << (s.domain == addsum::ValueDomain::Integer ? s.ivalue.str() : full(s.rvalue))
      << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// selftest

struct SelftestFailure {
  std::string invariant;
};

void selftest_eulerian(const std::string& fault) {
  addsum::EulerianTable table(12);
  std::vector<std::vector<uint64_t>> rows;
  for (unsigned n = 0; n <= 12; ++n) rows.push_back(table.row(n));
  if (fault == "eulerian-row") rows[9][3] += 1;
  uint64_t factorial = 1;
  for (unsigned n = 1; n <= 12; ++n) {
    factorial *= n;
    uint64_t sum = 0;
    for (uint64_t v : rows[n]) sum += v;
    if (sum != factorial) throw SelftestFailure{"eulerian row-sum (= n!) invariant at n=" + std::to_string(n)};
    for (unsigned k = 0; k < n; ++k)
      if (rows[n][k] != rows[n][n - k - 1])
        throw SelftestFailure{"eulerian symmetry invariant at n=" + std::to_string(n)};
  }
  std::cout << "selftest: eulerian triangle invariants (n <= 12) ok\n";
}

void selftest_routes(const std::string& fault) {
  for (const char* name : {"omega", "Omega", "A", "B"}) {
    const AdditiveFunction f = AdditiveFunction::builtin(name);
    for (unsigned k : {2u, 3u}) {
      for (uint64_t x : {1, 7, 20}) {
        addsum::ExactSum fast = addsum::fast_gcd_sum(f, k, x);
        const addsum::ExactSum oracle = addsum::oracle_gcd_sum(f, k, x);
        if (fault == "route") fast.ivalue += 1;
        if (fast.ivalue != oracle.ivalue)
          throw SelftestFailure{"gcd route-equivalence invariant (" + std::string(name) +
                                ", k=" + std::to_string(k) + ", x=" + std::to_string(x) + ")"};
        const addsum::ExactSum fl = addsum::fast_lcm_sum(f, k, x);
        const addsum::ExactSum ol = addsum::oracle_lcm_sum(f, k, x);
        if (fl.ivalue != ol.ivalue)
          throw SelftestFailure{"lcm route-equivalence invariant (" + std::string(name) + ")"};
      }
    }
  }
  std::cout << "selftest: oracle/fast route equivalence (x <= 20, k in {2,3}) ok\n";
}

void selftest_identities() {
  std::mt19937_64 rng(20240607);
  std::uniform_int_distribution<uint64_t> dist(1, 10000);
  for (const char* name : {"omega", "A", "B", "log_tau"}) {
    const AdditiveFunction f = AdditiveFunction::builtin(name);
    for (int i = 0; i < 200; ++i) {
      std::vector<uint64_t> tuple(1 + static_cast<size_t>(i % 5));
      for (auto& t : tuple) t = dist(rng);
      if (!addsum::check_inclusion_exclusion(f, tuple))
        throw SelftestFailure{"inclusion-exclusion identity (" + std::string(name) + ")"};
    }
  }
  std::cout << "selftest: inclusion-exclusion identity (200 random tuples x 4 functions) ok\n";
}

void selftest_constants(const ConstantsEngine& eng) {
  const ConstantValue m_series = eng.mertens_M(1e-10);
  const ConstantValue m_direct = eng.mertens_M_direct(1'000'000);
  if (std::abs(m_series.value - m_direct.value) >
      m_series.tail_bound + m_direct.tail_bound)
    throw SelftestFailure{"mertens two-method agreement invariant"};

  const ConstantValue a1 = eng.saffari_a(1, 1e-9);
  if (std::abs(a1.value - (ConstantsEngine::kGamma - 1)) > 1e-8)
    throw SelftestFailure{"a_1 quadrature invariant"};

  const double pi = 3.14159265358979323846;
  if (std::abs(eng.zeta_value(2).value - pi * pi / 6) > 1e-12)
    throw SelftestFailure{"zeta(2) closed-form invariant"};

  const AdditiveFunction omega = AdditiveFunction::builtin("omega");
  const AdditiveFunction Omega = AdditiveFunction::builtin("Omega");
  for (unsigned k : {2u, 3u, 4u}) {
    const ConstantValue def_o = eng.E_fk(omega, k);
    const ConstantValue closed_o = eng.E_omega_closed(k);
    if (std::abs(def_o.value - closed_o.value) > def_o.tail_bound + closed_o.tail_bound)
      throw SelftestFailure{"E_omega cross-formula invariant at k=" + std::to_string(k)};
    const ConstantValue def_O = eng.E_fk(Omega, k);
    const ConstantValue closed_O = eng.E_Omega_closed(k);
    if (std::abs(def_O.value - closed_O.value) > def_O.tail_bound + closed_O.tail_bound)
      throw SelftestFailure{"E_Omega cross-formula invariant at k=" + std::to_string(k)};
  }

  const ConstantValue c_omega = eng.C_f(omega);
  if (std::abs(c_omega.value - m_series.value) > c_omega.tail_bound + m_series.tail_bound)
    throw SelftestFailure{"C_omega = M invariant"};

  const ConstantValue dbar_astar = eng.D_bar_f2(AdditiveFunction::builtin("A_star"));
  if (std::abs(dbar_astar.value - m_series.value) >
      dbar_astar.tail_bound + m_series.tail_bound)
    throw SelftestFailure{"Dbar_{A*,2} = M invariant"};

  for (unsigned k = 2; k <= 10; ++k) {
    const ConstantValue h1 = eng.H_k(k);
    const ConstantValue h2 = eng.H_k_combination(k);
    if (std::abs(h1.value - h2.value) > h1.tail_bound + h2.tail_bound + 1e-12)
      throw SelftestFailure{"H_k two-route agreement invariant at k=" + std::to_string(k)};
  }
  std::cout << "selftest: constants cross-checks (M, a_1, zeta, E, C, Dbar, H) ok\n";
}

// Compares computed constants against the bundled reference digits.  M, F and
// a_1 reproduce at full precision.  The H row and Dbar:A:2 digits do not: they
// are reproduced exactly by truncating every prime sum at p <= 7, which is
// reported here as a flag, not a failure (the two full-precision routes agree
// with each other; see the acceptance suite for the strict comparison).
void selftest_reference(const ConstantsEngine& eng) {
  for (const char* key : {"M", "F", "a:1"}) {
    const auto range = ConstantsEngine::reference_range(key);
    const double v = eng.lookup(key).value;
    if (v < range->first || v > range->second)
      throw SelftestFailure{std::string("reference digits invariant for ") + key};
  }
  std::cout << "selftest: reference digits for M, F, a:1 reproduced at full precision ok\n";

  int flagged = 0;
  for (const char* key : {"Dbar:A:2", "H:2", "H:6", "H:10"}) {
    const auto range = ConstantsEngine::reference_range(key);
    const double v = eng.lookup(key).value;
    const double trunc = eng.truncated_reference_eval(key, 7);
    const bool full_in = v >= range->first && v <= range->second;
    const bool trunc_in = trunc >= range->first && trunc <= range->second;
    if (!trunc_in)
      throw SelftestFailure{std::string("truncated reproduction invariant for ") + key};
    if (!full_in) {
      ++flagged;
      std::cout << "selftest: FLAG " << key << ": converged value " << full(v)
                << " is outside the bundled reference range [" << range->first
                << ", " << range->second
                << "]; the reference digits match the p<=7-truncated evaluation "
                << full(trunc) << "\n";
    }
  }
  std::cout << "selftest: reference H row / Dbar:A:2 reproduced by p<=7 truncation ok ("
            << flagged << " full-precision mismatches flagged)\n";
}

void selftest_json_roundtrip() {
  const AdditiveFunction f = AdditiveFunction::builtin("Omega");
  const ExactSum s = addsum::fast_gcd_sum(f, 2, 50);
  if (addsum::exact_sum_from_json(addsum::to_json(s)) != s)
    throw SelftestFailure{"JSON round-trip invariant (ExactSum)"};
  std::cout << "selftest: JSON round-trip ok\n";
}

int run_selftest(const std::string& fault) {
  const ConstantsEngine eng;
  try {
    selftest_eulerian(fault);
    selftest_routes(fault);
    selftest_identities();
    selftest_constants(eng);
    selftest_reference(eng);
    selftest_json_roundtrip();
  } catch (const SelftestFailure& fail) {
    std::cout << "selftest: FAIL — " << fail.invariant << "\n";
    return kInvariantFailure;
  }
  std::cout << "selftest: all suites passed\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact gcd/lcm tuple sums of additive arithmetic functions"};
  app.set_config("--config", "", "key=value config file (flags win)");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Output out;
  std::string fn_name = "omega";
  std::string route = "auto";
  std::string const_name = "M";
  std::string family = "f0-single";
  std::string grid_text;
  std::string tuple_text;
  std::string g_name;
  std::string fault;
  std::string table_file;
  double eps = ConstantsEngine::kDefaultEps;
  double x_arg = 100;
  unsigned k_arg = 2;
  unsigned N_arg = 0;
  unsigned ell_arg = 0;
  long long row_n = -1, val_n = -1, val_k = 0;
  double series_x = 0.5;
  std::vector<double> tail_args;

  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--output", out.format, "table|csv|json")
        ->check(CLI::IsMember({"table", "csv", "json"}));
  };
  auto add_fn = [&](CLI::App* cmd) {
    cmd->add_option("--f", fn_name,
                    "function name (omega, Omega, Omega_ell:<l>, T_ell:<l>, A, "
                    "A_star, A_ell:<l>, A_tilde_ell:<l>, B, log_tau) or @<file> "
                    "for a valuation table");
  };

  CLI::App* sum_gcd = app.add_subcommand("sum-gcd", "sum f(gcd) over k-tuples <= x");
  CLI::App* sum_lcm = app.add_subcommand("sum-lcm", "sum f(lcm) over k-tuples <= x");
  for (CLI::App* cmd : {sum_gcd, sum_lcm}) {
    add_fn(cmd);
    cmd->add_option("--k", k_arg, "tuple arity")->required();
    cmd->add_option("--x", x_arg, "bound")->required();
    cmd->add_option("--route", route, "auto|fast|oracle")
        ->check(CLI::IsMember({"auto", "fast", "oracle"}));
    add_output(cmd);
  }

  CLI::App* sum_single = app.add_subcommand("sum-single", "sum f(n) for n <= x");
  add_fn(sum_single);
  sum_single->add_option("--x", x_arg, "bound")->required();
  sum_single->add_option("--route", route, "auto|fast|oracle");
  add_output(sum_single);

  CLI::App* constant = app.add_subcommand("constant", "evaluate a named constant");
  constant->add_option("--name", const_name,
                       "M | F | H:<k> | a:<j> | zeta:<s> | P:<s> | C:<f> | "
                       "D:<f>:<k> | Dbar:<f>:<k> | E:<f>:<k> | Ak:<k>")
      ->required();
  constant->add_option("--eps", eps, "precision target");
  add_output(constant);

  CLI::App* residuals = app.add_subcommand("residuals", "exact vs main-term report");
  residuals->add_option("--family", family,
                        "f0-single|f0-gcd|f0-lcm|logtau-lcm|f1-single|f1-gcd|"
                        "f1-lcm|b-single|b-gcd|b-lcm")
      ->required();
  add_fn(residuals);
  residuals->add_option("--k", k_arg, "tuple arity");
  residuals->add_option("--grid", grid_text, "comma-separated x values (default: geometric)");
  residuals->add_option("--N", N_arg, "correction depth for the a_j expansion");
  residuals->add_option("--eps", eps, "constant precision");
  add_output(residuals);

  CLI::App* identity = app.add_subcommand("identity-check", "check the tuple identities");
  add_fn(identity);
  identity->add_option("--tuple", tuple_text, "comma-separated entries")->required();
  identity->add_option("--g", g_name, "multiplicative corollary instead: n|tau");
  add_output(identity);

  CLI::App* eulerian_cmd = app.add_subcommand("eulerian", "Eulerian numbers and series");
  eulerian_cmd->add_option("--row", row_n, "print triangle row n");
  eulerian_cmd->add_option("--n", val_n, "triangle entry row");
  eulerian_cmd->add_option("--k", val_k, "triangle entry column");
  eulerian_cmd->add_option("--series-ell", ell_arg, "closed-form power series ell");
  eulerian_cmd->add_option("--series-x", series_x, "closed-form power series x");
  eulerian_cmd->add_option("--tail", tail_args, "ell k p z: tail bound")->expected(4);
  add_output(eulerian_cmd);

  CLI::App* selftest = app.add_subcommand("selftest", "run the reduced-scale invariant suites");
  selftest->add_option("--inject-fault", fault,
                       "corrupt a named invariant to verify detection "
                       "(eulerian-row, route)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
        e.get_name() == "CallForVersion")
      return app.exit(e);
    std::cerr << json{{"error", {{"type", "usage"}, {"message", e.what()},
                                 {"exit_code", kUsage}}}}
                     .dump()
              << "\n";
    return kUsage;
  }

  try {
    const ConstantsEngine eng;
    auto load_fn = [&]() {
      if (!fn_name.empty() && fn_name[0] == '@')
        return AdditiveFunction::from_valuation_file(fn_name.substr(1));
      return AdditiveFunction::builtin(fn_name);
    };

    if (sum_gcd->parsed() || sum_lcm->parsed() || sum_single->parsed()) {
      const bool lcm = sum_lcm->parsed();
      const unsigned k = sum_single->parsed() ? 1 : k_arg;
      const uint64_t x = static_cast<uint64_t>(std::llround(x_arg));
      const AdditiveFunction f = load_fn();
      ExactSum s;
      if (route == "oracle")
        s = lcm ? addsum::oracle_lcm_sum(f, k, x) : addsum::oracle_gcd_sum(f, k, x);
      else
        s = lcm ? addsum::fast_lcm_sum(f, k, x) : addsum::fast_gcd_sum(f, k, x);
      const std::string cmd = lcm ? "sum-lcm" : (sum_single->parsed() ? "sum-single" : "sum-gcd");
      out.emit(cmd,
               json{{"f", f.name()}, {"k", k}, {"x", x}, {"route", route}},
               exact_payload(s), exact_table(s), exact_csv(s));
      return kOk;
    }

    if (constant->parsed()) {
      const ConstantValue c = eng.lookup(const_name, eps);
      json payload = addsum::to_json(c);
      std::ostringstream table;
      table << c.name << " = " << full(c.value) << "  (tail_bound " << c.tail_bound
            << ", " << method_name(c.method) << ")\n";
      if (const auto digits = ConstantsEngine::reference_digits(const_name)) {
        const auto range = ConstantsEngine::reference_range(const_name);
        const bool match = c.value >= range->first && c.value <= range->second;
        payload["reference_digits"] = *digits;
        payload["matches_reference"] = match;
        table << "reference: " << *digits << (match ? " (matches)" : " (MISMATCH)") << "\n";
        if (!match) {
          const double trunc = eng.truncated_reference_eval(const_name, 7);
          payload["reference_truncated_p7"] = trunc;
          table << "note: reference digits equal the p<=7-truncated evaluation "
                << full(trunc) << "\n";
        }
      }
      std::ostringstream csv;
      csv << "name,value,tail_bound,method,prime_limit\n"
          << c.name << ',' << full(c.value) << ',' << c.tail_bound << ','
          << method_name(c.method) << ',' << c.prime_limit << "\n";
      out.emit("constant", json{{"name", const_name}, {"eps", eps}}, payload,
               table.str(), csv.str());
      return kOk;
    }

    if (residuals->parsed()) {
      const AdditiveFunction f = load_fn();
      const addsum::MainTermFamily fam = addsum::family_from_name(family);
      const bool single = fam == addsum::MainTermFamily::F0Single ||
                          fam == addsum::MainTermFamily::F1Single ||
                          fam == addsum::MainTermFamily::BSingle;
      const unsigned k = single ? 1 : k_arg;
      const std::vector<uint64_t> grid =
          grid_text.empty() ? addsum::default_grid(k) : parse_grid(grid_text);
      const addsum::ResidualReport rep =
          addsum::residual_report(fam, f, k, grid, N_arg, eng, eps);
      std::ostringstream table;
      table << "family=" << family << " f=" << f.name() << " k=" << k
            << " N=" << N_arg << "\n";
      for (const auto& row : rep.rows)
        table << "x=" << row.x << " exact="
              << (row.exact.domain == addsum::ValueDomain::Integer
                      ? row.exact.ivalue.str()
                      : full(row.exact.rvalue))
              << " main=" << full(row.main) << " residual=" << full(row.residual)
              << " normalized=" << full(row.normalized) << "\n";
      out.emit("residuals",
               json{{"family", family}, {"f", f.name()}, {"k", k}, {"N", N_arg}},
               json{{"report", addsum::to_json(rep)}}, table.str(), addsum::to_csv(rep));
      return kOk;
    }

    if (identity->parsed()) {
      const std::vector<uint64_t> tuple = parse_tuple(tuple_text);
      bool ok;
      std::string what;
      if (!g_name.empty()) {
        what = "multiplicative corollary (g=" + g_name + ")";
        if (g_name == "n")
          ok = addsum::check_multiplicative_corollary(
              [](uint64_t n) { return addsum::BigInt(n); }, tuple);
        else if (g_name == "tau") {
          ok = addsum::check_multiplicative_corollary(
              [](uint64_t n) {
                const addsum::Factorization fc = addsum::default_factorizer().factorize(n);
                addsum::BigInt t = 1;
                for (const auto& pf : fc.factors) t *= pf.nu + 1;
                return t;
              },
              tuple);
        } else {
          throw addsum::DomainError("identity-check: --g must be n or tau");
        }
      } else {
        const AdditiveFunction f = load_fn();
        what = "inclusion-exclusion (f=" + f.name() + ")";
        ok = addsum::check_inclusion_exclusion(f, tuple);
      }
      out.emit("identity-check", json{{"tuple", tuple}, {"what", what}},
               json{{"holds", ok}}, what + (ok ? ": holds\n" : ": VIOLATED\n"),
               "holds\n" + std::string(ok ? "true" : "false") + "\n");
      return ok ? kOk : kInvariantFailure;
    }

    if (eulerian_cmd->parsed()) {
      json payload;
      std::ostringstream table, csv;
      if (row_n >= 0) {
        addsum::EulerianTable t(static_cast<unsigned>(row_n));
        payload["row"] = t.row(static_cast<unsigned>(row_n));
        csv << "k,value\n";
        for (size_t i = 0; i < t.row(row_n).size(); ++i) {
          table << t.row(row_n)[i] << (i + 1 < t.row(row_n).size() ? ' ' : '\n');
          csv << i << ',' << t.row(row_n)[i] << '\n';
        }
      } else if (val_n >= 0) {
        const uint64_t v = addsum::eulerian(static_cast<unsigned>(val_n), val_k);
        payload["value"] = v;
        table << v << "\n";
        csv << "value\n" << v << "\n";
      } else if (!tail_args.empty()) {
        const double b = addsum::tail_bound(static_cast<unsigned>(tail_args[0]),
                                            static_cast<unsigned>(tail_args[1]),
                                            static_cast<uint64_t>(tail_args[2]),
                                            tail_args[3]);
        payload["tail_bound"] = b;
        table << full(b) << "\n";
        csv << "tail_bound\n" << full(b) << "\n";
      } else {
        const double v = addsum::power_series_closed_form(ell_arg, series_x);
        payload["value"] = v;
        table << full(v) << "\n";
        csv << "value\n" << full(v) << "\n";
      }
      out.emit("eulerian", json::object(), payload, table.str(), csv.str());
      return kOk;
    }

    if (selftest->parsed()) return run_selftest(fault);

    std::cerr << app.help();
    return kUsage;
  } catch (const addsum::GuardRefusal& e) {
    std::cerr << json{{"error", {{"type", "guard_refusal"}, {"message", e.what()},
                                 {"exit_code", kGuardRefusal}}}}.dump() << "\n";
    return kGuardRefusal;
  } catch (const addsum::PrecisionRefusal& e) {
    std::cerr << json{{"error", {{"type", "precision_refusal"}, {"message", e.what()},
                                 {"achievable", e.achievable_bound},
                                 {"exit_code", kPrecisionRefusal}}}}.dump() << "\n";
    return kPrecisionRefusal;
  } catch (const addsum::InvariantFailure& e) {
    std::cerr << json{{"error", {{"type", "invariant_failure"}, {"message", e.what()},
                                 {"exit_code", kInvariantFailure}}}}.dump() << "\n";
    return kInvariantFailure;
  } catch (const addsum::DomainError& e) {
    std::cerr << json{{"error", {{"type", "domain"}, {"message", e.what()},
                                 {"exit_code", kUsage}}}}.dump() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"type", "internal"}, {"message", e.what()},
                                 {"exit_code", kInvariantFailure}}}}.dump() << "\n";
    return kInvariantFailure;
  }
}
