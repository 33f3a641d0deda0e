#include "cli.hpp"

#include "ultrana/acceptance.hpp"
#include "ultrana/combinatorics.hpp"
#include "ultrana/errors.hpp"
#include "ultrana/holder.hpp"
#include "ultrana/kernels.hpp"
#include "ultrana/majorant.hpp"
#include "ultrana/multiindex.hpp"
#include "ultrana/propagator.hpp"
#include "ultrana/report.hpp"
#include "ultrana/sharp_example.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ultrana::cli {

namespace {

using nlohmann::json;

class UsageError : public Error {
 public:
  using Error::Error;
};

const std::vector<std::string> kCommands = {"majorant", "bootstrap-ratio", "propagate", "fit-k", "sharp",
                                            "multiindex", "kernel", "holder", "acceptance"};

// Keys accepted in a config file; flags use the same names with '-' for '_'.
const std::vector<std::string> kKeys = {"command", "precision_bits", "nmax", "c0", "kappa", "K", "grid_size",
                                        "output", "format", "falsify", "lambda", "C", "cp", "kind", "s", "d",
                                        "check", "only", "seed", "L", "beta_max", "kmax", "cases", "order", "source"};

/// Effective settings as decimal strings; lists are comma separated.
class Settings {
 public:
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string text(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }
  long integer(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    const std::string& t = values_.at(key);
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != t.size()) throw UsageError(key + " must be an integer, got '" + t + "'");
    return v;
  }
  BigReal real(const std::string& key, const std::string& fallback, Precision prec) const {
    const std::string t = text(key, fallback);
    if (t == "e") return euler_e(prec);
    try {
      return BigReal::parse(t, prec);
    } catch (const Error&) {
      throw UsageError(key + " must be a decimal number, got '" + t + "'");
    }
  }
  std::vector<std::string> list(const std::string& key, const std::string& fallback) const {
    std::vector<std::string> out;
    std::stringstream ss(text(key, fallback));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    if (out.empty()) throw UsageError(key + " must not be empty");
    return out;
  }
  std::vector<BigReal> reals(const std::string& key, const std::string& fallback, Precision prec) const {
    std::vector<BigReal> out;
    Settings one;
    for (const auto& item : list(key, fallback)) {
      one.set(key, item);
      out.push_back(one.real(key, "", prec));
    }
    return out;
  }
  json to_json() const { return json(values_); }

 private:
  std::map<std::string, std::string> values_;
};

std::string json_scalar_text(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  throw UsageError("config value for '" + key + "' must be a string or number");
}

void load_config(const std::string& path, Settings& settings) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("config file must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) throw UsageError("unknown config key '" + key + "'");
    if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) joined += (joined.empty() ? "" : ",") + json_scalar_text(item, key);
      settings.set(key, joined);
    } else {
      settings.set(key, json_scalar_text(value, key));
    }
  }
}

struct Context {
  Settings settings;
  Precision prec;
  std::string format;
  std::ostream* out = nullptr;
};

int report_status(const LemmaCheckReport& report) { return report.passed() ? kExitPass : kExitCheckFailed; }

void emit(Context& ctx, const LemmaCheckReport& report) {
  if (ctx.format == "json") {
    *ctx.out << to_json(report).dump(2) << '\n';
  } else {
    write_csv(*ctx.out, report);
  }
}

void require_kappa_above_one(const std::vector<BigReal>& kappas) {
  for (const auto& k : kappas) {
    if (!(k > 1L)) throw UsageError("kappa must exceed 1 for bound commands, got " + k.to_string(6));
  }
}

int cmd_majorant(Context& ctx) {
  const auto& s = ctx.settings;
  const std::string check = s.text("check", "monotonicity");
  const long nmax = s.integer("nmax", 1000);
  if (check == "monotonicity") {
    LemmaCheckReport rep = check_monotonicity(nmax, ctx.prec);
    if (nmax <= 5000) rep.empirical_threshold = monotonicity_threshold(3, nmax, LogTables(nmax, ctx.prec));
    emit(ctx, rep);
    return report_status(rep);
  }
  if (check == "aj") {
    LemmaCheckReport rep;
    rep.lemma_id = s.has("L") ? "aj_supergaussian" : "aj_gaussian";
    rep.n_grid = geometric_grid(2, nmax);
    rep.worst_ratio = BigReal(ctx.prec);
    const BigReal big_l = s.real("L", "3", ctx.prec);
    for (long n : rep.n_grid) {
      std::vector<long> offsets{0};
      if (!s.has("L")) offsets = {-gaussian_window_offset(n), 0, gaussian_window_offset(n)};
      for (long off : offsets) {
        BigReal v = s.has("L") ? check_aj_supergaussian(n, big_l) : check_aj_gaussian(n, off, ctx.prec);
        const bool ok = v.is_finite() && v > 0L;
        if (!ok) rep.violations.emplace_back(n, off);
        rep.worst_ratio = max(rep.worst_ratio, v);
        rep.rows.push_back(CheckRow{n, off, std::move(v), ok});
      }
    }
    emit(ctx, rep);
    return report_status(rep);
  }
  if (check == "dn") {
    const LemmaCheckReport rep = check_dn(nmax, ctx.prec);
    emit(ctx, rep);
    return report_status(rep);
  }
  if (check == "log-shift") {
    const LogShiftSweep sweep = check_log_shift(nmax, ctx.prec);
    if (ctx.format == "json") {
      *ctx.out << json{{"sup", format_cell(sweep.sup)}, {"arg_sup", sweep.arg_sup}, {"nmax", nmax},
                       {"at_nmax", format_cell(sweep.at_nmax)}}.dump(2)
               << '\n';
    } else {
      *ctx.out << "nmax,sup,arg_sup,at_nmax\n"
               << nmax << ',' << format_cell(sweep.sup) << ',' << sweep.arg_sup << ',' << format_cell(sweep.at_nmax)
               << '\n';
    }
    return sweep.sup.is_finite() ? kExitPass : kExitCheckFailed;
  }
  throw UsageError("unknown majorant check '" + check + "' (monotonicity, aj, dn, log-shift)");
}

int cmd_bootstrap(Context& ctx) {
  const auto& s = ctx.settings;
  const std::vector<BigReal> c0s = s.reals("c0", "1", ctx.prec);
  const std::vector<BigReal> kappas = s.reals("kappa", "2", ctx.prec);
  const std::vector<std::string> c0_text = s.list("c0", "1");
  const std::vector<std::string> kappa_text = s.list("kappa", "2");
  require_kappa_above_one(kappas);
  const BigReal k = s.real("K", "0", ctx.prec);
  const long nmax = s.integer("nmax", 100000);
  if (nmax < 1) throw UsageError("nmax must be at least 1");
  const std::vector<long> grid = geometric_grid(1, nmax);
  const LogTables tables(nmax + 1, ctx.prec);
  bool all = true;
  json reports = json::array();
  for (std::size_t ki = 0; ki < kappas.size(); ++ki) {
    for (std::size_t ci = 0; ci < c0s.size(); ++ci) {
      LemmaCheckReport rep = bootstrap_sweep(MajorantParams(c0s[ci], kappas[ki], k), grid, tables);
      rep.lemma_id = "bootstrap:c0=" + c0_text[ci] + ":kappa=" + kappa_text[ki];
      all = all && rep.passed();
      if (ctx.format == "json") {
        reports.push_back(to_json(rep));
      } else {
        write_csv(*ctx.out, rep);
      }
    }
  }
  if (ctx.format == "json") *ctx.out << reports.dump(2) << '\n';
  return all ? kExitPass : kExitCheckFailed;
}

BoundSequence build_sequence(const Context& ctx) {
  const auto& s = ctx.settings;
  const BigReal c0 = s.reals("c0", "1", ctx.prec).front();
  const long n = s.integer("nmax", 500);
  const std::string kind = s.text("kind", "second");
  if (kind == "second") return propagate_second_order(c0, base_case(s.real("cp", "2", ctx.prec)), n);
  if (kind == "first") return propagate_first_order(c0, n);
  throw UsageError("kind must be 'second' or 'first'");
}

int cmd_propagate(Context& ctx) {
  const BoundSequence seq = build_sequence(ctx);
  const std::vector<BigReal> kappas = ctx.settings.reals("kappa", "2", ctx.prec);
  require_kappa_above_one(kappas);
  const BigReal k = ctx.settings.has("K") ? ctx.settings.real("K", "0", ctx.prec) : fit_K(seq, kappas.front());
  if (ctx.format == "json") {
    *ctx.out << to_json(seq, kappas.front(), k).dump(2) << '\n';
  } else {
    write_bounds_csv(*ctx.out, seq, kappas.front(), k);
  }
  return k.is_finite() ? kExitPass : kExitCheckFailed;
}

int cmd_fit_k(Context& ctx) {
  const auto& s = ctx.settings;
  const std::vector<BigReal> kappas = s.reals("kappa", "2", ctx.prec);
  require_kappa_above_one(kappas);
  const std::string source = s.text("source", "propagate");
  std::vector<LogMagnitude> bounds;
  BigReal c0 = s.reals("c0", "1", ctx.prec).front();
  if (source == "propagate") {
    bounds = build_sequence(ctx).bounds;
  } else if (source == "sharp") {
    for (const auto& b : sup_norm_brackets(SharpExample(c0), s.integer("nmax", 200), s.integer("grid_size", kDefaultSharpGrid))) {
      bounds.push_back(b.upper);
    }
  } else {
    throw UsageError("source must be 'propagate' or 'sharp'");
  }
  json rows = json::array();
  bool finite = true;
  if (ctx.format != "json") *ctx.out << "source,c0,kappa,nmax,K\n";
  for (const auto& kappa : kappas) {
    const BigReal k = fit_K(bounds, kappa, c0);
    finite = finite && k.is_finite();
    if (ctx.format == "json") {
      rows.push_back({{"source", source}, {"c0", format_cell(c0)}, {"kappa", format_cell(kappa)},
                      {"nmax", static_cast<long>(bounds.size()) - 1}, {"K", format_cell(k)}});
    } else {
      *ctx.out << source << ',' << format_cell(c0) << ',' << format_cell(kappa) << ',' << bounds.size() - 1 << ','
               << format_cell(k) << '\n';
    }
  }
  if (ctx.format == "json") *ctx.out << rows.dump(2) << '\n';
  return finite ? kExitPass : kExitCheckFailed;
}

int cmd_sharp(Context& ctx) {
  const auto& s = ctx.settings;
  const SharpExample ex(s.reals("c0", "1", ctx.prec).front());
  const std::string falsify = s.text("falsify", "");
  if (!falsify.empty()) {
    FalsificationResult result;
    if (falsify == "lambda") {
      result = falsify_lambda(ex, s.real("C", "5", ctx.prec), s.real("lambda", "2", ctx.prec), s.integer("nmax", 2000));
    } else if (falsify == "kappa") {
      const BigReal kappa = s.reals("kappa", "0.5", ctx.prec).front();
      if (!(kappa > 0L && kappa < 1L)) throw UsageError("kappa must lie in (0, 1) for falsify kappa");
      result = falsify_kappa(ex, kappa, s.real("C", "1", ctx.prec), s.integer("nmax", 5000));
    } else {
      throw UsageError("falsify must be 'lambda' or 'kappa'");
    }
    *ctx.out << to_json(result).dump(2) << '\n';
    return kExitPass;
  }
  const std::vector<BigReal> kappas = s.reals("kappa", "2", ctx.prec);
  require_kappa_above_one(kappas);
  const long nmax = s.integer("nmax", 200);
  const long grid = s.integer("grid_size", kDefaultSharpGrid);
  BigReal k(ctx.prec);
  if (s.has("K")) {
    k = s.real("K", "0", ctx.prec);
  } else {
    std::vector<LogMagnitude> upper;
    for (const auto& b : sup_norm_brackets(ex, nmax, grid)) upper.push_back(b.upper);
    k = fit_K(upper, kappas.front(), ex.c0());
  }
  if (ctx.format == "json") {
    json rows = json::array();
    for (const auto& b : sup_norm_brackets(ex, nmax, grid)) {
      rows.push_back({{"n", b.n}, {"log_sup_lower", format_cell(b.lower.log_abs())},
                      {"log_sup_upper", format_cell(b.upper.log_abs())},
                      {"relative_width", format_cell(b.relative_width())}});
    }
    *ctx.out << json{{"c0", format_cell(ex.c0())}, {"kappa", format_cell(kappas.front())}, {"K", format_cell(k)},
                     {"grid_size", grid}, {"brackets", rows}}.dump(2)
             << '\n';
  } else {
    write_sharp_csv(*ctx.out, ex, nmax, kappas.front(), k, grid);
  }
  return kExitPass;
}

int cmd_multiindex(Context& ctx) {
  const auto& s = ctx.settings;
  const MultiindexSweep sweep = multiindex_sweep(s.integer("d", 4), s.integer("order", 8), s.integer("cases", 100),
                                                 static_cast<std::uint64_t>(s.integer("seed", 20240611)), ctx.prec);
  if (ctx.format == "json") {
    *ctx.out << to_json(sweep).dump(2) << '\n';
  } else {
    *ctx.out << "failure\n";
    for (const auto& f : sweep.failures) *ctx.out << f << '\n';
  }
  return sweep.passed() ? kExitPass : kExitCheckFailed;
}

double to_double_setting(const Settings& s, const std::string& key, const std::string& fallback) {
  return s.real(key, fallback, Precision(128)).to_double();
}

int cmd_kernel(Context& ctx) {
  const auto& s = ctx.settings;
  KernelParams params{to_double_setting(s, "s", "2"), static_cast<int>(s.integer("d", 1)), {}};
  validate(params);
  const LemmaCheckReport bounds = check_kernel_bounds(params);
  bool ok = bounds.passed();
  if (ctx.format == "json") {
    json j{{"s", params.s}, {"d", params.d}, {"bounds", to_json(bounds)}};
    if (params.s > 1.0) {
      const LemmaCheckReport grad = check_grad_bound(params);
      ok = ok && grad.passed();
      j["gradient"] = to_json(grad);
    }
    j["mass"] = format_cell(kernel_mass(params));
    j["grad_G2_l1"] = format_cell(grad_kernel_l1(params.d));
    *ctx.out << j.dump(2) << '\n';
  } else {
    write_kernel_csv(*ctx.out, params, kernel_sweep(params));
  }
  return ok ? kExitPass : kExitCheckFailed;
}

int cmd_holder(Context& ctx) {
  const auto& s = ctx.settings;
  const double c0 = to_double_setting(s, "c0", "1");
  const long grid = s.integer("grid_size", kHolderGrid);
  const std::string check = s.text("check", "mollifier");
  LemmaCheckReport rep;
  std::vector<HolderRow> rows;
  if (check == "coeff") {
    const long beta_max = s.integer("beta_max", 20);
    rep = check_coeff_holder(c0, beta_max, grid);
    rows = coeff_holder_rows(c0, beta_max, grid);
  } else if (check == "mollifier") {
    const long kmax = s.integer("kmax", 10);
    rep = check_mollifier_interpolation(c0, kmax, grid);
    rows = mollifier_rows(c0, kmax, grid);
  } else {
    throw UsageError("holder check must be 'coeff' or 'mollifier'");
  }
  if (ctx.format == "json") {
    *ctx.out << to_json(rep).dump(2) << '\n';
  } else {
    write_holder_csv(*ctx.out, rows);
  }
  return report_status(rep);
}

int cmd_acceptance(Context& ctx, std::ostream& err) {
  AcceptanceOptions options;
  options.precision = ctx.prec;
  options.golden_dir = ULTRANA_GOLDEN_DIR;
  if (ctx.settings.has("only")) {
    const std::string only = ctx.settings.text("only", "");
    if (!is_criterion_group(only)) throw UsageError("unknown criterion group '" + only + "'");
    options.only = only;
  }
  json results = json::array();
  bool all = true;
  run_acceptance(options, [&](const CriterionResult& r) {
    all = all && r.passed;
    if (ctx.format == "json") {
      results.push_back(to_json(r));
      err << format_result_line(r) << std::endl;
    } else {
      *ctx.out << format_result_line(r) << std::endl;
    }
  });
  if (ctx.format == "json") *ctx.out << json{{"passed", all}, {"criteria", results}}.dump(2) << '\n';
  return all ? kExitPass : kExitCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Log-type ultra-analyticity verification engine", "ultrana"};
  std::string command;
  std::string config_path;
  std::map<std::string, std::string> flags;
  std::vector<std::pair<std::string, CLI::Option*>> bound;
  auto flag = [&](const std::string& key, const std::string& name, const std::string& help) {
    bound.emplace_back(key, app.add_option(name, flags[key], help));
  };
  app.add_option("command", command, "majorant | bootstrap-ratio | propagate | fit-k | sharp | multiindex | kernel | holder | acceptance");
  app.add_option("--config", config_path, "JSON config file; flags override its values");
  flag("precision_bits", "--precision", "working precision in bits (>= 64)");
  flag("nmax", "--nmax", "largest order n");
  flag("c0", "--c0", "C0, or a comma-separated list");
  flag("kappa", "--kappa", "kappa, or a comma-separated list; 'e' is accepted");
  flag("K", "--K", "additive constant K");
  flag("grid_size", "--grid", "sample grid size");
  flag("output", "--output", "report path (default stdout)");
  flag("format", "--format", "csv or json");
  flag("falsify", "--falsify", "sharp: lambda or kappa search");
  flag("lambda", "--lambda", "exponent lambda for the lambda search");
  flag("C", "--C", "constant C for the falsification searches");
  flag("cp", "--cp", "interpolation constant c_p");
  flag("kind", "--kind", "propagate: second or first");
  flag("s", "--s", "kernel order s");
  flag("d", "--d", "dimension (kernel) or largest dimension (multiindex)");
  flag("check", "--check", "majorant: monotonicity|aj|dn|log-shift; holder: coeff|mollifier");
  flag("only", "--only", "acceptance group: majorant|sharp|propagator|multiindex|kernels|holder");
  flag("seed", "--seed", "random seed");
  flag("L", "--L", "super-Gaussian window parameter L");
  flag("beta_max", "--beta-max", "largest beta for the coefficient check");
  flag("kmax", "--kmax", "largest k for the interpolation check");
  flag("cases", "--cases", "random reduction cases");
  flag("order", "--order", "largest |alpha| for the exhaustive sweep");
  flag("source", "--source", "fit-k: propagate or sharp");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  Context ctx;
  try {
    if (!config_path.empty()) load_config(config_path, ctx.settings);
    for (const auto& [key, opt] : bound) {
      if (opt->count() > 0) ctx.settings.set(key, flags[key]);
    }
    if (!command.empty()) ctx.settings.set("command", command);
    command = ctx.settings.text("command", "");
    if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
      throw UsageError(command.empty() ? "no command given" : "unknown command '" + command + "'");
    }
    ctx.prec = ctx.settings.has("precision_bits") ? Precision(ctx.settings.integer("precision_bits", 0))
                                                  : default_precision();
    ctx.format = ctx.settings.text("format", command == "acceptance" ? "text" : "csv");
    if (ctx.format != "csv" && ctx.format != "json" && !(command == "acceptance" && ctx.format == "text")) {
      throw UsageError("format must be csv or json");
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::ofstream file;
  const std::string output = ctx.settings.text("output", "");
  if (!output.empty()) {
    file.open(output);
    if (!file) {
      err << "usage error: cannot write " << output << '\n';
      return kExitUsage;
    }
    ctx.out = &file;
  } else {
    ctx.out = &out;
  }

  int status = kExitPass;
  try {
    if (command == "majorant") status = cmd_majorant(ctx);
    else if (command == "bootstrap-ratio") status = cmd_bootstrap(ctx);
    else if (command == "propagate") status = cmd_propagate(ctx);
    else if (command == "fit-k") status = cmd_fit_k(ctx);
    else if (command == "sharp") status = cmd_sharp(ctx);
    else if (command == "multiindex") status = cmd_multiindex(ctx);
    else if (command == "kernel") status = cmd_kernel(ctx);
    else if (command == "holder") status = cmd_holder(ctx);
    else status = cmd_acceptance(ctx, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "invalid parameter: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "invalid parameter: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RangeError& e) {
    err << "invalid parameter: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceLimitError& e) {
    err << "invalid parameter: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "check failed: " << e.what() << '\n';
    return kExitCheckFailed;
  }

  if (!output.empty()) {
    json meta = run_metadata(ctx.prec);
    meta["command"] = command;
    meta["settings"] = ctx.settings.to_json();
    meta["exit_status"] = status;
    std::ofstream(output + ".meta.json") << meta.dump(2) << '\n';
  }
  return status;
}

}  // namespace ultrana::cli
