// ffvar: variance experiments, verification suites, sweeps and sieve caches.
//
// Exit codes: 0 ok, 1 failure (verify, corrupt cache, unwritable output),
// 2 precondition, 3 variance gap above tolerance, 4 budget.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ffvar/arith.hpp"
#include "ffvar/bounds.hpp"
#include "ffvar/errors.hpp"
#include "ffvar/field.hpp"
#include "ffvar/sieve.hpp"
#include "ffvar/variance.hpp"
#include "ffvar/verify.hpp"

namespace {

using namespace ffvar;
using Json = nlohmann::ordered_json;

enum Exit { kOk = 0, kFail = 1, kPrecondition = 2, kGap = 3, kBudget = 4 };

struct Range {
  int lo = 0;
  int hi = 0;
};

Range parse_range(const std::string& text, const char* what) {
  Range r;
  const auto colon = text.find(':');
  try {
    std::size_t used = 0;
    if (colon == std::string::npos) {
      r.lo = r.hi = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } else {
      const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
      r.lo = std::stoi(a, &used);
      if (used != a.size()) throw std::invalid_argument(text);
      r.hi = std::stoi(b, &used);
      if (used != b.size()) throw std::invalid_argument(text);
    }
  } catch (const std::logic_error&) {
    throw PreconditionError(std::string("bad ") + what + " '" + text + "': expected n or lo:hi");
  }
  if (r.lo > r.hi) throw PreconditionError(std::string("empty ") + what + " range '" + text + "'");
  return r;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt_double(*v) : std::string(); }

Json json_opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::filesystem::path cache_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("FFVAR_CACHE_DIR"); env && *env) return env;
  return "ffvar-cache";
}

/// Writes to --out when given, stdout otherwise.
int emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return kOk;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f || !(f << text) || !f.flush()) {
    std::cerr << "ffvar: cannot write " << out << "\n";
    return kFail;
  }
  return kOk;
}

struct FieldOpts {
  int p = 2;
  int k = 1;
  std::string cache;
  std::uint64_t budget = kDefaultBudget;

  void attach(CLI::App* app) {
    app->add_option("--p", p, "field characteristic")->capture_default_str();
    app->add_option("--k", k, "extension degree")->capture_default_str();
    app->add_option("--cache-dir", cache, "sieve cache directory (else FFVAR_CACHE_DIR, else ./ffvar-cache)");
    app->add_option("--budget", budget, "largest enumeration allowed")->capture_default_str();
  }

  FactorTable table(int max_degree) const {
    const FieldSpec f = make_field(p, k);
    const SieveCache s = load_or_build_sieve(f, std::max(1, max_degree), cache_dir(cache), &std::cerr, budget);
    return FactorTable(s, max_degree, budget);
  }
};

// ---------------------------------------------------------------------------

struct VarianceOpts {
  FieldOpts field;
  std::string N = "3", h = "1";
  std::string function = "liouville";
  std::string mode = "both";
  std::string format = "csv";
  std::string out;
  unsigned threads = 1;
  double tolerance = 1e-6;
};

int cmd_variance(const VarianceOpts& o) {
  const auto fn = ArithmeticFunctionHandle::parse(o.function);
  require(o.tolerance > 0, "tolerance must be positive");
  const bool direct = o.mode == "direct" || o.mode == "both";
  const bool charside = o.mode == "character" || o.mode == "both";
  require(direct || charside, "mode must be direct, character or both");
  const Range Nr = parse_range(o.N, "N"), hr = parse_range(o.h, "h");
  std::vector<std::pair<int, int>> pts;
  for (int N = Nr.lo; N <= Nr.hi; ++N)
    for (int h = hr.lo; h <= hr.hi; ++h)
      if (h >= 0 && h < N && (!charside || h <= N - 2)) pts.emplace_back(N, h);
  if (pts.empty())
    throw PreconditionError(charside ? "no (N, h) with 0 <= h <= N-2" : "no (N, h) with 0 <= h < N");

  const FactorTable t = o.field.table(Nr.hi);
  std::ostringstream csv;
  Json rows = Json::array();
  csv << "q,N,h,function,variance_direct,variance_char,abs_gap,theorem_ratio\n";
  bool gap_fail = false;
  for (const auto& [N, h] : pts) {
    const VarianceReport r = variance_report(t, fn, N, h, direct, charside, o.threads);
    std::optional<double> vd;
    if (direct) vd = to_double(r.direct);
    if (r.abs_gap && *r.abs_gap > o.tolerance * std::max(1.0, to_double(r.direct))) gap_fail = true;
    csv << r.q << ',' << N << ',' << h << ',' << fn.name() << ',' << fmt_opt(vd) << ',' << fmt_opt(r.charside)
        << ',' << fmt_opt(r.abs_gap) << ',' << fmt_opt(r.theorem_ratio) << '\n';
    rows.push_back(Json{{"q", r.q},
                        {"N", N},
                        {"h", h},
                        {"function", fn.name()},
                        {"variance_direct", json_opt(vd)},
                        {"variance_char", json_opt(r.charside)},
                        {"abs_gap", json_opt(r.abs_gap)},
                        {"theorem_ratio", json_opt(r.theorem_ratio)}});
  }
  const int rc = emit(o.out, o.format == "json" ? rows.dump(2) + "\n" : csv.str());
  if (rc != kOk) return rc;
  if (gap_fail) {
    std::cerr << "ffvar: variance gap exceeds tolerance " << fmt_double(o.tolerance) << "\n";
    return kGap;
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct VerifyOpts {
  std::optional<int> p;
  int k = 1;
  int n_max = 6;
  std::vector<std::string> suites;
  std::uint64_t seed = 1;
  int trials = 20;
  bool fault = false;
};

int cmd_verify(const VerifyOpts& o) {
  VerifyConfig cfg;
  if (o.p)
    cfg.fields = {make_field(*o.p, o.k)};
  else
    cfg.fields = {make_field(2, 1), make_field(3, 1)};
  cfg.n_max = o.n_max;
  cfg.seed = o.seed;
  cfg.trials = o.trials;
  cfg.inject_fault = o.fault;
  std::cout << "# generator " << kTrialGenerator << " seed " << o.seed << "\n";
  bool all = true;
  for (const auto& r : run_verify(cfg, o.suites)) {
    if (r.pass) {
      std::cout << "PASS " << r.name << "\n";
    } else {
      all = false;
      std::cout << "FAIL " << r.name << ": " << r.counterexample << "\n";
    }
  }
  return all ? kOk : kFail;
}

// ---------------------------------------------------------------------------

struct SweepOpts {
  FieldOpts field;
  std::string N = "3:8", h = "1:2";
  bool clip_h = false;
  std::string format = "csv";
  std::string out;
  unsigned threads = 1;
};

int cmd_sweep(const SweepOpts& o) {
  const Range Nr = parse_range(o.N, "N"), hr = parse_range(o.h, "h");
  const SweepGrid grid{Nr.lo, Nr.hi, hr.lo, hr.hi, o.clip_h};
  if (sweep_points(grid).empty()) throw PreconditionError("empty sweep grid");
  const FactorTable t = o.field.table(Nr.hi);
  const auto rows = theorem_ratio_sweep(t, grid, o.threads);

  std::ostringstream csv;
  Json js = Json::array();
  csv << "q,N,h,var_direct,var_char,bound_n5,ratio,largepf_ratio,smoothpf_ratio\n";
  double max_ratio = 0;
  for (const auto& r : rows) {
    const double vd = to_double(r.var_direct);
    max_ratio = std::max(max_ratio, r.ratio);
    csv << r.q << ',' << r.N << ',' << r.h << ',' << fmt_double(vd) << ',' << fmt_opt(r.var_char) << ','
        << fmt_double(r.bound_n5) << ',' << fmt_double(r.ratio) << ',' << fmt_opt(r.largepf_ratio) << ','
        << fmt_opt(r.smoothpf_ratio) << '\n';
    js.push_back(Json{{"q", r.q},
                      {"N", r.N},
                      {"h", r.h},
                      {"var_direct", vd},
                      {"var_char", json_opt(r.var_char)},
                      {"bound_n5", r.bound_n5},
                      {"ratio", r.ratio},
                      {"largepf_ratio", json_opt(r.largepf_ratio)},
                      {"smoothpf_ratio", json_opt(r.smoothpf_ratio)}});
  }
  const int rc = emit(o.out, o.format == "json" ? js.dump(2) + "\n" : csv.str());
  if (rc == kOk) std::cerr << "rows " << rows.size() << ", max ratio " << fmt_double(max_ratio) << "\n";
  return rc;
}

// ---------------------------------------------------------------------------

struct CacheOpts {
  FieldOpts field;
  int maxdeg = 10;
  bool check = false;
};

int cmd_cache(const CacheOpts& o, bool maxdeg_given) {
  const FieldSpec f = make_field(o.field.p, o.field.k);
  const auto dir = cache_dir(o.field.cache);
  const auto path = dir / sieve_file_name(f);
  if (o.check) {
    std::ifstream in(path);
    if (!in) {
      std::cerr << "ffvar: no cache at " << path.string() << "\n";
      return kFail;
    }
    try {
      const SieveCache c = read_sieve(in, f);
      if (auto bad = pi_q_mismatch(c)) {
        std::cerr << path.string() << ": degree " << *bad << " has " << c.degree(*bad).size()
                  << " entries, pi_q = " << pi_q(f, *bad) << "\n";
        return kFail;
      }
      if (maxdeg_given && c.max_degree < o.maxdeg) {
        std::cerr << path.string() << ": covers degree " << c.max_degree << " < " << o.maxdeg << "\n";
        return kFail;
      }
      std::cout << path.string() << ": ok, maxdeg " << c.max_degree << ", " << c.total() << " irreducibles\n";
      return kOk;
    } catch (const CacheError& e) {
      std::cerr << path.string() << ":" << e.line() << ": " << e.what() << "\n";
      return kFail;
    }
  }
  require(o.maxdeg >= 1, "maxdeg must be >= 1");
  const SieveCache c = sieve_irreducibles(f, o.maxdeg, o.field.budget);
  std::filesystem::create_directories(dir);
  std::ostringstream text;
  write_sieve(text, c);
  const int rc = emit(path.string(), text.str());
  if (rc == kOk) std::cout << path.string() << ": wrote " << c.total() << " irreducibles up to degree " << o.maxdeg << "\n";
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variance of arithmetic functions in short intervals over F_q[t]"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  VarianceOpts vo;
  auto* var = app.add_subcommand("variance", "direct and character-side variance");
  vo.field.attach(var);
  var->add_option("--N", vo.N, "degree N or range lo:hi")->capture_default_str();
  var->add_option("--h", vo.h, "interval parameter h or range lo:hi")->capture_default_str();
  var->add_option("--function", vo.function, "liouville | moebius | unit")->capture_default_str();
  var->add_option("--mode", vo.mode, "direct | character | both")->capture_default_str();
  var->add_option("--format", vo.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  var->add_option("--out", vo.out, "output file (default stdout)");
  var->add_option("--threads", vo.threads)->check(CLI::PositiveNumber)->capture_default_str();
  var->add_option("--tolerance", vo.tolerance, "relative gap tolerance")->capture_default_str();

  VerifyOpts wo;
  auto* ver = app.add_subcommand("verify", "exact-identity suites");
  ver->add_option("--p", wo.p, "restrict to one field (default: F_2 and F_3)");
  ver->add_option("--k", wo.k)->capture_default_str();
  ver->add_option("--n-max", wo.n_max, "largest degree examined")->capture_default_str();
  ver->add_option("--suite", wo.suites, "run only these suites")->check(CLI::IsMember(suite_names()));
  ver->add_option("--seed", wo.seed)->capture_default_str();
  ver->add_option("--trials", wo.trials, "MVT trials per (Q, n)")->capture_default_str();
  ver->add_flag("--self-test-fault", wo.fault, "negate one stored lambda value");

  SweepOpts so;
  auto* sw = app.add_subcommand("sweep", "theorem ratio over an (N, h) grid");
  so.field.attach(sw);
  sw->add_option("--N", so.N, "range lo:hi")->capture_default_str();
  sw->add_option("--h", so.h, "range lo:hi")->capture_default_str();
  sw->add_flag("--clip-h", so.clip_h, "keep only h <= N-2");
  sw->add_option("--format", so.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sw->add_option("--out", so.out, "output file (default stdout)");
  sw->add_option("--threads", so.threads)->check(CLI::PositiveNumber)->capture_default_str();

  CacheOpts co;
  auto* ca = app.add_subcommand("cache", "build or check the sieve cache");
  co.field.attach(ca);
  auto* maxdeg = ca->add_option("--maxdeg", co.maxdeg)->capture_default_str();
  ca->add_flag("--check", co.check, "validate the existing file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kPrecondition;
  }

  try {
    if (*var) return cmd_variance(vo);
    if (*ver) return cmd_verify(wo);
    if (*sw) return cmd_sweep(so);
    if (*ca) return cmd_cache(co, maxdeg->count() > 0);
  } catch (const BudgetError& e) {
    std::cerr << "ffvar: " << e.what() << "\n";
    return kBudget;
  } catch (const std::overflow_error& e) {
    std::cerr << "ffvar: " << e.what() << "\n";
    return kBudget;
  } catch (const CacheError& e) {
    std::cerr << "ffvar: line " << e.line() << ": " << e.what() << "\n";
    return kFail;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "ffvar: " << e.what() << "\n";
    return kFail;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ffvar: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::domain_error& e) {
    std::cerr << "ffvar: " << e.what() << "\n";
    return kPrecondition;
  }
  return kPrecondition;
}
