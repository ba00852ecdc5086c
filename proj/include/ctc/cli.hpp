// Copyright 2026 The ctcsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Every subcommand writes one table: `#`-prefixed
// key=value metadata lines, a header row, then data rows with %.12e numbers.
// Identical arguments give byte-identical output.

#pragma once

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "ctc/acceptance.hpp"
#include "ctc/continuum.hpp"
#include "ctc/deutsch.hpp"
#include "ctc/dispersion.hpp"
#include "ctc/pctc.hpp"

namespace ctc::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kSizeCap = 2,
  kVerificationFailed = 3,
  kNotConverged = 4,
};

inline constexpr const char* kOutputDirEnv = "CTCSIM_OUTPUT_DIR";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotConverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Output ---------------------------------------------------------------------

inline std::string fmt_value(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

inline std::string fmt_param(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ";" : "") + fmt_param(xs[i]);
  return s;
}

struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::string header;
  std::vector<std::string> rows;

  void meta(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
  }

  void write(std::ostream& os) const {
    for (const auto& [k, v] : metadata) os << "# " << k << '=' << v << '\n';
    os << header << '\n';
    for (const auto& r : rows) os << r << '\n';
  }
};

inline Table distribution_table(std::span<const double> probs) {
  Table t;
  t.header = "k,probability";
  for (std::size_t k = 0; k < probs.size(); ++k)
    t.rows.push_back(std::to_string(k) + "," + fmt_value(probs[k]));
  return t;
}

/// "-" is stdout; an empty path falls back to $CTCSIM_OUTPUT_DIR/<name>.csv,
/// then to stdout.
inline void emit(const Table& t, const std::string& path, const std::string& name,
                 std::ostream& out) {
  std::string target = path;
  if (target.empty()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
      std::filesystem::create_directories(dir);
      target = (std::filesystem::path(dir) / (name + ".csv")).string();
    }
  }
  if (target.empty() || target == "-") {
    t.write(out);
    return;
  }
  std::ofstream f(target);
  if (!f) throw ConfigError("cannot open output file '" + target + "'");
  t.write(f);
}

// Config files ----------------------------------------------------------------

struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line;
};

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Flat key=value lines; '#' starts a comment.
inline std::vector<ConfigEntry> parse_config(std::istream& is, const std::string& name) {
  std::vector<ConfigEntry> out;
  std::string raw;
  for (std::size_t line = 1; std::getline(is, raw); ++line) {
    const std::string text = trim(raw.substr(0, raw.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError(name + ":" + std::to_string(line) + ": expected key=value");
    const std::string key = trim(text.substr(0, eq));
    if (key.empty())
      throw ConfigError(name + ":" + std::to_string(line) + ": empty key");
    out.push_back({key, trim(text.substr(eq + 1)), line});
  }
  return out;
}

/// Applies config entries to options the command line left unset.
inline void apply_config(CLI::App& sub, const std::vector<ConfigEntry>& entries,
                         const std::string& name) {
  for (const ConfigEntry& e : entries) {
    const std::string where = name + ":" + std::to_string(e.line) + ": ";
    CLI::Option* opt = sub.get_option_no_throw("--" + e.key);
    if (opt == nullptr || e.key == "config")
      throw ConfigError(where + "unknown key '" + e.key + "' for '" + sub.get_name() + "'");
    if (opt->count() > 0) continue;
    try {
      if (opt->get_expected_max() == 0) {
        if (e.value == "true" || e.value == "1")
          opt->add_result("true");
        else if (e.value == "false" || e.value == "0")
          opt->add_result("false");
        else
          throw ConfigError(where + "flag '" + e.key + "' needs true or false");
      } else {
        opt->add_result(e.value);
      }
      opt->run_callback();
    } catch (const CLI::Error& err) {
      throw ConfigError(where + "bad value for '" + e.key + "': " + err.what());
    }
  }
}

// Subcommands -----------------------------------------------------------------

struct CircuitOptions {
  std::size_t modes = 2;
  std::size_t levels = 0;  // 0: M + 1
  double dt = 1.0;         // in units of t_perp
  std::vector<double> c;   // empty: uniform

  void add(CLI::App* sub) {
    sub->add_option("--M", modes, "Modes per bundle")->check(CLI::Range(1, 16));
    sub->add_option("--N", levels, "Clock levels (default M+1)");
    sub->add_option("--dt", dt, "Clock step in units of the orthogonalisation time");
    sub->add_option("--c", c, "Localisation weights, one per mode")->delimiter(',');
  }

  CircuitSpec spec() const {
    ClockSpec clock;
    clock.levels = levels == 0 ? modes + 1 : levels;
    CircuitSpec ctx = CircuitSpec::orthogonal(modes, clock);
    ctx.dt *= dt;
    ctx.validate();
    return ctx;
  }

  std::vector<double> weights() const { return c.empty() ? uniform_weights(modes) : c; }

  void describe(Table& t, const CircuitSpec& ctx) const {
    t.meta("M", std::to_string(ctx.modes));
    t.meta("N", std::to_string(ctx.clock.levels));
    t.meta("dt_over_tperp", fmt_param(dt));
    t.meta("c", join(weights()));
  }
};

struct DctcOptions {
  CircuitOptions circuit;
  bool ecp = false;
  double g = 0.5;
  std::vector<double> g_alpha;
  double tol = kEcpTolerance;
  std::size_t max_iter = kEcpMaxIterations;
  std::string output;

  Table run() const {
    const CircuitSpec ctx = circuit.spec();
    Table t;
    t.meta("model", "dctc");
    circuit.describe(t, ctx);
    if (!g_alpha.empty()) {
      require(!ecp, "--ecp and --g-alpha are exclusive");
      FixedPointCoefficients coeffs{ctx.modes, g_alpha};
      coeffs.validate();
      const auto dist = dctc_probabilities(coeffs);
      Table out = distribution_table(dist.probabilities);
      t.meta("mode", "explicit");
      t.meta("g_alpha", join(g_alpha));
      out.metadata = std::move(t.metadata);
      out.meta("version", kVersion);
      return out;
    }
    const auto run = run_dctc_ecp(ctx, EcpSeed{g, {}}, circuit.weights(), tol, max_iter);
    if (!run.ecp.converged)
      throw NotConverged("ECP did not reach tolerance " + fmt_param(tol) + " in " +
                         std::to_string(run.ecp.iterations) + " iterations (last step " +
                         fmt_param(run.ecp.last_step) + ")");
    Table out = distribution_table(run.distribution.probabilities);
    out.metadata = std::move(t.metadata);
    out.meta("mode", "ecp");
    out.meta("g", fmt_param(g));
    out.meta("tol", fmt_param(tol));
    out.meta("iterations", std::to_string(run.ecp.iterations));
    out.meta("version", kVersion);
    return out;
  }
};

struct PctcOptions {
  CircuitOptions circuit;
  std::string variant = "standard";
  double h = 0.5;
  double p = 1.0;
  std::string output;

  Table run() const {
    const CircuitSpec ctx = circuit.spec();
    PctcVariant v = PctcVariant::standard();
    if (variant == "incomplete") v = PctcVariant::incomplete(h);
    if (variant == "probabilistic") v = PctcVariant::probabilistic(p);
    const auto r = run_pctc(ctx, v, circuit.weights());
    Table out = distribution_table(r.distribution.probabilities);
    Table head;
    head.meta("model", "pctc");
    circuit.describe(head, ctx);
    head.meta("variant", variant);
    if (variant == "incomplete") head.meta("h", fmt_param(h));
    if (variant == "probabilistic") head.meta("p", fmt_param(p));
    head.meta("version", kVersion);
    out.metadata = std::move(head.metadata);
    return out;
  }
};

struct FamilyOptions {
  std::string family = "dctc";
  std::optional<double> q, h, r;

  void add(CLI::App* sub) {
    sub->add_option("--family", family, "dctc, pctc_h or pctc_beta")
        ->check(CLI::IsMember({"dctc", "pctc_h", "pctc_beta"}));
    sub->add_option("--q", q, "All-vacuum seed probability (dctc)");
    sub->add_option("--h", h, "Vacuum weight of the teleportation pair (pctc_h)");
    sub->add_option("--r", r, "Rescaled swap amplitude (pctc_beta)");
  }

  LimitLaw law() const {
    const LimitFamily f = limit_family_from_string(family);
    const std::optional<double>& v =
        f == LimitFamily::dctc ? q : (f == LimitFamily::pctc_h ? h : r);
    const char* name = f == LimitFamily::dctc ? "--q" : (f == LimitFamily::pctc_h ? "--h" : "--r");
    require(v.has_value(), std::string("family ") + family + " needs " + name);
    LimitLaw law{f, *v};
    law.scale();  // validates the parameter
    return law;
  }

  void describe(Table& t, const LimitLaw& law) const {
    t.meta("family", family);
    t.meta(law.family == LimitFamily::dctc ? "q" : (law.family == LimitFamily::pctc_h ? "h" : "r"),
           fmt_param(law.param));
  }
};

struct ContinuumOptions {
  FamilyOptions family;
  std::optional<std::size_t> modes;
  std::optional<std::size_t> kmax;
  std::string output;

  Table run() const {
    const LimitLaw law = family.law();
    std::vector<double> probs;
    if (modes) {
      probs = finite_pmf(law, *modes);
    } else if (kmax) {
      for (std::size_t k = 0; k <= *kmax; ++k) probs.push_back(law.pmf(k));
    } else {
      probs = law.table();
    }
    Table out = distribution_table(probs);
    Table head;
    head.meta("model", "continuum");
    family.describe(head, law);
    head.meta("M", modes ? std::to_string(*modes) : "limit");
    if (!modes) head.meta("expectation", fmt_value(law.expectation()));
    head.meta("version", kVersion);
    out.metadata = std::move(head.metadata);
    return out;
  }
};

struct ConvergeOptions {
  FamilyOptions family;
  std::vector<std::size_t> modes{8, 16, 32, 64, 128, 256};
  unsigned jobs = 1;
  std::string output;

  Table run() const {
    const LimitLaw law = family.law();
    require(!modes.empty(), "--M-list must not be empty");
    for (std::size_t M : modes) require(M >= 1, "--M-list entries must be >= 1");
    std::vector<ConvergenceRow> rows(modes.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
      for (std::size_t i = next++; i < modes.size(); i = next++)
        rows[i] = convergence_point(law, modes[i]);
    };
    const unsigned n = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(modes.size())));
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    pool.clear();

    ConvergenceReport report{law, rows};
    Table t;
    t.meta("model", "converge");
    family.describe(t, law);
    t.meta("monotone", report.monotone() ? "true" : "false");
    t.meta("final_distance", fmt_value(report.final_distance()));
    t.meta("version", kVersion);
    t.header = "M,distance";
    for (const auto& r : rows) t.rows.push_back(std::to_string(r.modes) + "," + fmt_value(r.distance));
    return t;
  }
};

struct DispersionOptions {
  std::vector<std::size_t> modes{2, 3};
  std::vector<double> p{0.2, 0.37, 0.8};
  std::string prescription = "both";
  std::string placement = "before_blocks";
  std::string bundle = "both";
  std::size_t levels = 0;
  double g = 0.4;
  std::string output;
  bool all_passed = true;

  Table run() {
    std::vector<Prescription> prs;
    if (prescription != "pctc") prs.push_back(Prescription::dctc_ecp);
    if (prescription != "dctc_ecp") prs.push_back(Prescription::pctc);
    Table t;
    t.meta("model", "dispersion-check");
    t.meta("placement", placement);
    t.meta("bundle", bundle);
    t.meta("g", fmt_param(g));
    t.meta("threshold", fmt_param(kDispersionThreshold));
    t.meta("version", kVersion);
    t.header = "M,p,prescription,deviation,pass";
    for (std::size_t M : modes)
      for (double pv : p)
        for (Prescription pr : prs) {
          DispersionCase dc;
          dc.modes = M;
          dc.levels = levels;
          dc.p = pv;
          dc.prescription = pr;
          dc.g = g;
          dc.placement = placement_from_string(placement);
          dc.in_cr = bundle != "cv";
          dc.in_cv = bundle != "cr";
          const DispersionRow row = dispersion_invariance_check(dc);
          all_passed = all_passed && row.passed;
          t.rows.push_back(std::to_string(M) + "," + fmt_param(pv) + "," + to_string(pr) + "," +
                           fmt_value(row.deviation) + "," + (row.passed ? "pass" : "fail"));
        }
    return t;
  }
};

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

inline int verify(const std::vector<int>& only, std::ostream& out) {
  std::ostringstream sink;
  const acceptance::CliRunner self = [&sink](const std::vector<std::string>& a) {
    return run(a, sink, sink);
  };
  const auto checks = acceptance::checklist(self);
  bool ok = true;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto o = acceptance::run_one(checks[i], id);
    ok = ok && o.passed;
    out << acceptance::format(o) << '\n' << std::flush;
  }
  return ok ? kOk : kVerificationFailed;
}

/// Runs one command; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Loop-count distributions of the clock billiard circuit", "ctcsim"};
  app.set_help_flag("--help", "Print help and exit");  // -h would clash with --h
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;
  const auto with_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Flat key=value file; flags override it");
  };
  const auto with_output = [&](CLI::App* sub, std::string& target) {
    sub->add_option("--output", target,
                    std::string("Output path, - for stdout (default: $") + kOutputDirEnv +
                        "/<command>.csv or stdout)");
  };

  DctcOptions dctc;
  CLI::App* dctc_cmd = app.add_subcommand("dctc", "Deutsch loop, ECP or explicit coefficients");
  dctc.circuit.add(dctc_cmd);
  dctc_cmd->add_flag("--ecp", dctc.ecp, "Solve by iterating from the seed (default)");
  dctc_cmd->add_option("--g", dctc.g, "Seed vacuum weight");
  dctc_cmd->add_option("--g-alpha", dctc.g_alpha, "Explicit family coefficients, 2^M values")
      ->delimiter(',');
  dctc_cmd->add_option("--tol", dctc.tol, "Trace-distance tolerance");
  dctc_cmd->add_option("--max-iter", dctc.max_iter, "Iteration budget");
  with_output(dctc_cmd, dctc.output);
  with_config(dctc_cmd);

  PctcOptions pctc;
  CLI::App* pctc_cmd = app.add_subcommand("pctc", "Postselected loop");
  pctc.circuit.add(pctc_cmd);
  pctc_cmd->add_option("--variant", pctc.variant, "standard, incomplete or probabilistic")
      ->check(CLI::IsMember({"standard", "incomplete", "probabilistic"}));
  pctc_cmd->add_option("--h", pctc.h, "Vacuum weight (incomplete)");
  pctc_cmd->add_option("--p", pctc.p, "Swap power (probabilistic)");
  with_output(pctc_cmd, pctc.output);
  with_config(pctc_cmd);

  ContinuumOptions cont;
  CLI::App* cont_cmd = app.add_subcommand("continuum", "Large-M limit laws");
  cont.family.add(cont_cmd);
  cont_cmd->add_option("--M", cont.modes, "Finite M instead of the limit");
  cont_cmd->add_option("--kmax", cont.kmax, "Last k to print (default: tail bound)");
  with_output(cont_cmd, cont.output);
  with_config(cont_cmd);

  ConvergeOptions conv;
  CLI::App* conv_cmd = app.add_subcommand("converge", "Finite-M distance to the limit law");
  conv.family.add(conv_cmd);
  conv_cmd->add_option("--M-list", conv.modes, "Mode counts")->delimiter(',');
  conv_cmd->add_option("--jobs", conv.jobs, "Worker threads")->check(CLI::Range(1U, 256U));
  with_output(conv_cmd, conv.output);
  with_config(conv_cmd);

  DispersionOptions disp;
  CLI::App* disp_cmd = app.add_subcommand("dispersion-check", "Neighbour-swap invariance");
  disp_cmd->add_option("--M", disp.modes, "Mode counts (2 or 3)")->delimiter(',');
  disp_cmd->add_option("--p", disp.p, "Swap powers")->delimiter(',');
  disp_cmd->add_option("--prescription", disp.prescription, "dctc_ecp, pctc or both")
      ->check(CLI::IsMember({"dctc_ecp", "pctc", "both"}));
  disp_cmd->add_option("--placement", disp.placement, "before_blocks, between_blocks, after_blocks")
      ->check(CLI::IsMember({"before_blocks", "between_blocks", "after_blocks"}));
  disp_cmd->add_option("--bundle", disp.bundle, "Where to disperse: cr, cv or both")
      ->check(CLI::IsMember({"cr", "cv", "both"}));
  disp_cmd->add_option("--N", disp.levels, "Clock levels (default M+1)");
  disp_cmd->add_option("--g", disp.g, "ECP seed vacuum weight");
  with_output(disp_cmd, disp.output);
  with_config(disp_cmd);

  std::vector<int> only;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Run the reproduction checklist");
  verify_cmd->add_option("--only", only, "Criterion numbers")->delimiter(',');

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("cannot open config file '" + config_path + "'");
      apply_config(*sub, parse_config(f, config_path), config_path);
    }
    if (sub == dctc_cmd) emit(dctc.run(), dctc.output, "dctc", out);
    if (sub == pctc_cmd) emit(pctc.run(), pctc.output, "pctc", out);
    if (sub == cont_cmd) emit(cont.run(), cont.output, "continuum", out);
    if (sub == conv_cmd) emit(conv.run(), conv.output, "converge", out);
    if (sub == disp_cmd) {
      emit(disp.run(), disp.output, "dispersion", out);
      return disp.all_passed ? kOk : kVerificationFailed;
    }
    if (sub == verify_cmd) return verify(only, out);
    return kOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SizeCapError& e) {
    err << "size cap: " << e.what() << '\n';
    return kSizeCap;
  } catch (const NotConverged& e) {
    err << "not converged: " << e.what() << '\n';
    return kNotConverged;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const PostselectionError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace ctc::cli
