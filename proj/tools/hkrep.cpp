// hkrep: command-line front end.
//
//   hkrep algebra-check CONFIG
//   hkrep decomp CONFIG --r 1,2 [--k K] [--kmax K] [--samples N] [--seed S]
//   hkrep rigid CONFIG --r 1,2 [--k K] [--trials N] [--out FILE]
//   hkrep flag-count CONFIG MODULE --brseq "1,0;0,1" [--primes 2,3,5] [--format csv]
//   hkrep reduce CONFIG MODULE [--to-k K] [--out FILE]
//   hkrep bundle-check CONFIG --r 1,2 --brseq "1,0;0,2" [--kmax K] [--primes 2,3]
//
// Exit codes: 0 success, 2 validation failure, 3 budget exceeded, 4 internal error.

#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "hkrep/decomposition.hpp"
#include "hkrep/error.hpp"
#include "hkrep/flags.hpp"
#include "hkrep/homext.hpp"
#include "hkrep/io.hpp"
#include "hkrep/parallel.hpp"
#include "hkrep/random.hpp"
#include "hkrep/reduction.hpp"

using namespace hkrep;
using nlohmann::json;

namespace {

struct Common {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 1;
  int threads = 0;
  int k = 0;  // 0: from the config
};

void emit(const Common& c, const std::string& text) {
  if (c.out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    write_file(c.out_path, text);
  }
}

std::vector<std::uint32_t> parse_primes(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    long long v = 0;
    try {
      v = std::stoll(item);
    } catch (const std::exception&) {
      throw Error(Errc::InvalidInput, "not a prime: '" + item + "'");
    }
    if (v < 2 || v > (1LL << 31)) throw Error(Errc::NotPrime, "prime out of range: " + item);
    require_prime(static_cast<std::uint64_t>(v));
    out.push_back(static_cast<std::uint32_t>(v));
  }
  if (out.empty()) throw Error(Errc::NotEnoughPrimes, "empty prime list");
  return out;
}

json primes_json(const std::vector<std::uint32_t>& primes) { return json(primes); }

int cmd_algebra_check(const Common& c) {
  Config cfg = load_config(c.config_path);
  const auto& d = *cfg.datum;
  const int k = c.k > 0 ? c.k : cfg.k;
  std::ostringstream os;
  os << "Cartan datum: n = " << d.n() << ", D = diag(";
  for (int i = 0; i < d.n(); ++i) os << (i ? "," : "") << d.sym(i);
  os << "), k = " << k << ", p = " << cfg.p << "\n";
  os << "loops:";
  for (int i = 0; i < d.n(); ++i) os << " eps_" << i + 1 << "^" << d.loop_order(i, k) << "=0";
  os << "\narrows:";
  if (d.arrows().empty()) os << " none";
  for (const auto& a : d.arrows()) os << " alpha_" << a.head + 1 << a.tail + 1 << "^(" << a.g + 1 << "): " << a.tail + 1 << "->" << a.head + 1;
  os << "\n";
  for (auto [i, j] : d.omega()) {
    os << "pair (" << i + 1 << "," << j + 1 << "): g_" << i + 1 << j + 1 << "=" << d.g(i, j) << " f_" << i + 1 << j + 1
       << "=" << d.f(i, j) << " f_" << j + 1 << i + 1 << "=" << d.f(j, i) << "\n";
  }
  os << "Euler form <e_i,e_j>_H(" << k << "):\n";
  for (int i = 0; i < d.n(); ++i) {
    for (int j = 0; j < d.n(); ++j) {
      os << (j ? " " : "  ")
         << euler_form(d, k, RankVector::unit(d.n(), i), RankVector::unit(d.n(), j));
    }
    os << "\n";
  }
  os << "ok\n";
  emit(c, os.str());
  return 0;
}

int cmd_decomp(const Common& c, const std::string& r_text, std::uint64_t samples, int kmax) {
  Config cfg = load_config(c.config_path);
  const int k = c.k > 0 ? c.k : cfg.k;
  const RankVector r = parse_rank(r_text, cfg.datum->n());
  SamplingOptions opt;
  opt.samples = samples;
  opt.seed = c.seed;
  json out = config_echo(cfg);
  out["command"] = "decomp";
  out["rank"] = r.values();
  if (kmax > 0) {
    KIndependenceReport rep = k_independence_check(cfg.datum, cfg.p, r, kmax, opt);
    out["k_independence"] = to_json(rep);
  } else {
    out["report"] = to_json(canonical_decomposition(cfg.datum, k, cfg.p, r, opt));
  }
  emit(c, out.dump(2));
  return 0;
}

int cmd_rigid(const Common& c, const std::string& r_text, std::uint64_t trials) {
  Config cfg = load_config(c.config_path);
  const int k = c.k > 0 ? c.k : cfg.k;
  const RankVector r = parse_rank(r_text, cfg.datum->n());
  RigidSearch s = find_rigid(cfg.datum, k, cfg.p, r, trials, c.seed);
  if (!s.module) {
    std::cout << "none found in " << s.trials_used << " trials"
              << (s.none_exists_certain ? " (exhaustive scan: no rigid module of this rank)" : "") << "\n";
    return 0;
  }
  json m = module_to_json(*s.module);
  m["search"] = {{"trials", s.trials_used}, {"hits", s.hits}, {"exhaustive", s.exhaustive}, {"seed", c.seed}};
  emit(c, m.dump(2));
  return 0;
}

int cmd_flag_count(const Common& c, const std::string& module_path, const std::string& brseq_text,
                   const std::string& primes_text, const std::string& format, int degree_bound,
                   const EnumerationOptions& enumeration) {
  Config cfg = load_config(c.config_path);
  HModule m = load_module(cfg.datum, module_path);
  if (c.k > 0 && c.k != m.k()) throw Error(Errc::InvalidInput, "--k differs from the module file's k");
  const auto brseq = parse_brseq(brseq_text, cfg.datum->n());
  const auto primes = parse_primes(primes_text);
  PointCountTable table;
  std::string note;
  try {
    table = counting_polynomial(m, brseq, primes, degree_bound >= 0 ? std::optional<int>(degree_bound) : std::nullopt,
                                enumeration);
  } catch (const Error& e) {
    if (e.code() != Errc::NonIntegerCoefficient && e.code() != Errc::NotEnoughPrimes) throw;
    table = tabulate_counts(m, brseq, primes, enumeration);
    if (degree_bound >= 0) table.degree_bound = degree_bound;
    note = e.what();
  }
  if (format == "csv") {
    emit(c, to_csv(table));
    if (!note.empty()) std::cerr << note << "\n";
    return 0;
  }
  json out = config_echo(cfg);
  out["command"] = "flag-count";
  out["primes"] = primes_json(primes);
  out["table"] = to_json(table);
  out["chi_estimate_is_heuristic"] = true;
  if (!note.empty()) out["note"] = note;
  emit(c, out.dump(2));
  return 0;
}

int cmd_reduce(const Common& c, const std::string& module_path, int to_k) {
  Config cfg = load_config(c.config_path);
  HModule m = load_module(cfg.datum, module_path);
  if (to_k <= 0) to_k = m.k() - 1;
  if (to_k >= m.k() || to_k < 1) throw Error(Errc::KTooSmall, "--to-k must satisfy 1 <= to-k < k");
  HModule cur = m;
  while (cur.k() > to_k) cur = reduce(cur).module;
  json out = config_echo(cfg);
  out["command"] = "reduce";
  auto describe = [](const HModule& x) {
    json d;
    d["k"] = x.k();
    d["dims"] = x.dims();
    d["locally_free"] = is_locally_free(x);
    if (is_locally_free(x)) {
      d["rank"] = rank_vector(x).values();
      d["rigid"] = is_rigid(x);
    }
    return d;
  };
  out["original"] = describe(m);
  out["reduced"] = describe(cur);
  out["module"] = module_to_json(cur);
  emit(c, out.dump(2));
  return 0;
}

int cmd_bundle_check(const Common& c, const std::string& r_text, const std::string& brseq_text, int kmax,
                     const std::string& primes_text, std::uint64_t trials) {
  Config cfg = load_config(c.config_path);
  const RankVector r = parse_rank(r_text, cfg.datum->n());
  const auto brseq = parse_brseq(brseq_text, cfg.datum->n());
  const auto primes = parse_primes(primes_text);
  RankVector sum(r.size());
  for (const auto& b : brseq) sum = sum + b;
  if (sum != r) throw Error(Errc::RankTooLarge, "brseq does not add up to r");
  json out = config_echo(cfg);
  out["command"] = "bundle-check";
  out["primes"] = primes_json(primes);
  out["d"] = flag_dimension(*cfg.datum, brseq);
  json levels = json::array();
  bool ok = true;
  for (int k = 2; k <= kmax; ++k) {
    json level;
    level["k"] = k;
    RigidLiftSearch s = find_rigid_lift(cfg.datum, k, r, primes, trials, derive_seed(c.seed, k));
    level["rigid_found"] = s.structure.has_value();
    level["candidates_tried"] = s.tried;
    level["exhaustive"] = s.exhaustive;
    if (s.structure) {
      HModule m = from_structure_matrices(*s.structure, primes.front());
      level["module"] = module_to_json(m);
      BundleReport rep = bundle_ratio_check(m, brseq, primes);
      level["report"] = to_json(rep);
      ok = ok && rep.ok;
    }
    levels.push_back(level);
  }
  out["levels"] = levels;
  out["ok"] = ok;
  emit(c, out.dump(2));
  return 0;
}

int exit_code(Errc code) {
  switch (code) {
    case Errc::BudgetExceeded:
      return 3;
    case Errc::NotAHomomorphism:
      return 4;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Computations with the algebras H(C, kD, Omega) over prime fields"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--threads", common.threads, "Worker threads (0: hardware)")->check(CLI::NonNegativeNumber);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", common.config_path, "Cartan data file (JSON or TOML)")->required();
    sub->add_option("--out", common.out_path, "Write the result here instead of stdout");
    sub->add_option("--seed", common.seed, "Master seed");
    sub->add_option("--k", common.k, "Override k from the config")->check(CLI::PositiveNumber);
    sub->add_option("--threads", common.threads, "Worker threads (0: hardware)")->check(CLI::NonNegativeNumber);
  };

  auto* check = app.add_subcommand("algebra-check", "Validate a Cartan datum and print the quiver summary");
  add_common(check);

  std::string r_text, brseq_text, module_path, format = "json";
  std::string primes_text = "2,3,5,7,11,13", bundle_primes = "2,3";
  std::uint64_t samples = 200, trials = 200;
  int kmax = 0, bundle_kmax = 3, to_k = 0, degree_bound = -1;
  EnumerationOptions enumeration;

  auto* decomp = app.add_subcommand("decomp", "Sampled canonical decomposition of a rank vector");
  add_common(decomp);
  decomp->add_option("--r", r_text, "Rank vector, e.g. 1,2")->required();
  decomp->add_option("--samples", samples, "Samples when the structure space is too large to scan");
  decomp->add_option("--kmax", kmax, "Compare the decompositions for k = 1..kmax");

  auto* rigid = app.add_subcommand("rigid", "Search for a rigid locally free module");
  add_common(rigid);
  rigid->add_option("--r", r_text, "Rank vector")->required();
  rigid->add_option("--trials", trials, "Random trials before the exhaustive fallback");

  auto* flag = app.add_subcommand("flag-count", "Point counts of a flag variety and its counting polynomial");
  add_common(flag);
  flag->add_option("module", module_path, "Module file")->required();
  flag->add_option("--brseq", brseq_text, "Subquotient ranks, e.g. \"1,0;0,1\"")->required();
  flag->add_option("--primes", primes_text, "Comma-separated primes");
  flag->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  flag->add_option("--degree-bound", degree_bound, "Interpolation degree bound (default k*d)");
  flag->add_option("--candidate-limit", enumeration.candidate_limit, "Refuse vertices with more candidate submodules");
  flag->add_flag("--override-limit", enumeration.override_limit, "Enumerate past the candidate limit");

  auto* red = app.add_subcommand("reduce", "Reduce a module from k to a smaller k");
  add_common(red);
  red->add_option("module", module_path, "Module file")->required();
  red->add_option("--to-k", to_k, "Target k (default k-1)");

  auto* bundle = app.add_subcommand("bundle-check", "Compare flag counts of a rigid module across k");
  add_common(bundle);
  bundle->add_option("--r", r_text, "Rank vector")->required();
  bundle->add_option("--brseq", brseq_text, "Subquotient ranks")->required();
  bundle->add_option("--kmax", bundle_kmax, "Largest k")->capture_default_str();
  bundle->add_option("--primes", bundle_primes, "Comma-separated primes")->capture_default_str();
  bundle->add_option("--trials", trials, "Random 0/1 candidates when the space is too large to scan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    set_thread_count(common.threads > 0 ? common.threads : static_cast<int>(std::thread::hardware_concurrency()));
    if (check->parsed()) return cmd_algebra_check(common);
    if (decomp->parsed()) return cmd_decomp(common, r_text, samples, kmax);
    if (rigid->parsed()) return cmd_rigid(common, r_text, trials);
    if (flag->parsed()) return cmd_flag_count(common, module_path, brseq_text, primes_text, format, degree_bound, enumeration);
    if (red->parsed()) return cmd_reduce(common, module_path, to_k);
    if (bundle->parsed()) return cmd_bundle_check(common, r_text, brseq_text, bundle_kmax, bundle_primes, trials);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 4;
}
