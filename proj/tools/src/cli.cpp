// Copyright 2026 The levinv Authors. All rights reserved.
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
#include "levinv/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "levinv/csv.hpp"
#include "levinv/diagnostics.hpp"
#include "levinv/error.hpp"
#include "levinv/generator.hpp"
#include "levinv/gradient.hpp"
#include "levinv/hessian.hpp"
#include "levinv/instance.hpp"
#include "levinv/leverage.hpp"
#include "levinv/linalg.hpp"
#include "levinv/objective.hpp"
#include "levinv/oracle.hpp"
#include "levinv/parallel.hpp"
#include "levinv/solver.hpp"
#include "levinv/text_document.hpp"

#ifndef LEVINV_VERSION
#define LEVINV_VERSION "0.0.0"
#endif

namespace levinv::cli {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr double kGradientThreshold = 1e-6;
constexpr double kHessianThreshold = 1e-4;
constexpr double kSigmaThreshold = 1e-10;
constexpr double kIdentityThreshold = 1e-10;

// Thrown for bad flag values found after CLI11 parsing; maps to exit 2.
struct UsageError : Error {
  using Error::Error;
};

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// Where a command writes a table: a file, or the command's stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path.empty() || path == "-") {
      os_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw IoError("cannot open " + path + " for writing");
    os_ = file_.get();
  }

  std::ostream& stream() { return *os_; }
  bool is_file() const { return file_ != nullptr; }
  const std::string& path() const { return path_; }

  void close() {
    if (!file_) return;
    file_->close();
    if (!*file_) throw IoError("failed writing " + path_);
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

Vector parse_vector(const std::string& text, const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size() || !std::isfinite(v)) throw std::invalid_argument(item);
      values.push_back(v);
    } catch (const std::exception&) {
      throw UsageError(std::string("bad number '") + item + "' in " + what);
    }
  }
  Vector out(static_cast<Index>(values.size()));
  for (std::size_t k = 0; k < values.size(); ++k) out(static_cast<Index>(k)) = values[k];
  return out;
}

HessianMode parse_hessian_mode(const std::string& text) {
  if (text == "residual" || text == "residual-corrected") return HessianMode::ResidualCorrected;
  // "paper-literal" is accepted as an alias.
  if (text == "literal" || text == "paper-literal") return HessianMode::Literal;
  throw UsageError("unknown Hessian mode '" + text + "'");
}

// Echo every option of a subcommand, given or defaulted.
json config_echo(const CLI::App& sub) {
  json cfg = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help") continue;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      if (results.size() == 1) {
        cfg[name] = results.front();
      } else {
        cfg[name] = results;
      }
    } else {
      cfg[name] = opt->get_default_str();
    }
  }
  return cfg;
}

struct Manifest {
  json doc;
  Clock::time_point start = Clock::now();

  Manifest(const std::string& command, const CLI::App& sub, std::uint64_t seed) {
    doc["command"] = command;
    doc["config"] = config_echo(sub);
    doc["seed"] = seed;
    doc["tool_version"] = LEVINV_VERSION;
    doc["started_at"] = utc_now();
    doc["threads"] = thread_count();
    doc["outputs"] = json::array();
  }

  void output(const std::string& role, const std::string& path) {
    doc["outputs"].push_back({{"role", role}, {"path", path}});
  }

  void finish(int code, const std::string& manifest_path, std::ostream* echo) {
    doc["exit_code"] = code;
    doc["wall_clock_ms"] =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    if (!manifest_path.empty()) {
      doc["outputs"].push_back({{"role", "manifest"}, {"path", manifest_path}});
      write_file(manifest_path, doc.dump(2) + "\n");
    }
    if (echo) *echo << doc.dump(2) << '\n';
  }
};

// ---------------------------------------------------------------- gen

struct GenArgs {
  long long n = 0;
  long long d = 0;
  std::uint64_t seed = 0;
  double margin = 0.5;
  std::string mode = "pure";
  double l = 1e-3;
  double beta = 0.01;
  double noise = 0.0;
  std::string out = "instance";
  std::string manifest;
};

int cmd_gen(const GenArgs& a, const CLI::App& sub, std::ostream& out, std::ostream& err) {
  GenConfig cfg;
  cfg.n = static_cast<Index>(a.n);
  cfg.d = static_cast<Index>(a.d);
  cfg.seed = a.seed;
  cfg.margin = a.margin;
  cfg.mode = parse_gen_mode(a.mode);
  cfg.l = a.l;
  cfg.beta = a.beta;
  cfg.noise = a.noise;
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  Manifest manifest("gen", sub, a.seed);
  std::optional<GeneratedInstance> gen;
  try {
    gen.emplace(gen_instance(cfg));
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    err << "levinv gen: generation failed: " << e.what() << '\n';
    return kExitGeneration;
  }

  const std::string inst_path = a.out + ".inst";
  const std::string truth_path = a.out + ".truth";
  save_instance(gen->instance, inst_path);
  save_ground_truth(gen->truth, truth_path);
  manifest.output("instance", inst_path);
  manifest.output("ground_truth", truth_path);
  manifest.doc["min_abs_s"] = gen->truth.min_abs_s;
  manifest.doc["sigma_min_A"] = gen->truth.sigma_min_A;
  manifest.doc["attempts"] = gen->truth.attempts;
  if (cfg.mode == GenMode::Regularized) {
    manifest.doc["reg"] = {{"l", gen->reg.l},
                           {"beta", gen->reg.beta},
                           {"w_squared", gen->reg.w(0) * gen->reg.w(0)}};
  }
  manifest.finish(kExitOk, a.manifest, &out);
  return kExitOk;
}

// ---------------------------------------------------------------- shared inputs

struct Problem {
  ProblemInstance inst;
  RegConfig reg;
  std::optional<GroundTruth> truth;
};

Problem load_problem(const std::string& instance_path, const std::string& truth_path, double l,
                     double beta) {
  ProblemInstance inst = load_instance(instance_path);
  std::optional<GroundTruth> truth;
  if (!truth_path.empty()) {
    truth = load_ground_truth(truth_path);
    if (truth->x_star.size() != inst.d()) {
      throw DimensionMismatch("ground truth x_star does not match instance d");
    }
  }
  RegConfig reg = RegConfig::none(inst.n());
  if (l > 0.0) {
    reg = RegConfig::from_bounds(inst, l, beta);
  } else if (truth && truth->reg.w.size() == inst.n()) {
    reg = truth->reg;
  }
  return {std::move(inst), std::move(reg), std::move(truth)};
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string instance;
  std::string truth;
  std::string method = "newton";
  std::string x0;
  double rho = 1e-2;
  std::uint64_t seed = 0;
  int max_iters = -1;
  double tol = -1.0;
  double eta = 1e-2;
  double alpha = 0.0;
  int max_halvings = 30;
  std::string hessian_mode = "residual";
  double l = 0.0;
  double beta = 0.01;
  std::string out;
  std::string manifest;
};

int cmd_solve(const SolveArgs& a, const CLI::App& sub, std::ostream& out, std::ostream& err) {
  Problem p = load_problem(a.instance, a.truth, a.l, a.beta);
  const Index d = p.inst.d();

  Vector x0;
  if (!a.x0.empty()) {
    x0 = parse_vector(a.x0, "--x0");
  } else if (p.truth) {
    x0 = perturb_start(p.truth->x_star, a.rho * (1.0 + p.truth->x_star.norm()), a.seed);
  } else {
    x0 = Vector::Zero(d);
  }
  if (x0.size() != d) throw UsageError("--x0 must have " + std::to_string(d) + " entries");
  std::optional<Vector> x_star;
  if (p.truth) x_star = p.truth->x_star;

  Manifest manifest("solve", sub, a.seed);
  TrackedRun run;
  try {
    if (a.method == "gd") {
      GDConfig cfg;
      cfg.eta = a.eta;
      if (a.alpha > 0.0) {
        cfg.policy = StepPolicy::Schedule;
        cfg.alpha = a.alpha;
      }
      if (a.max_iters > 0) cfg.max_iters = a.max_iters;
      if (a.tol >= 0.0) cfg.grad_tol = a.tol;
      cfg.max_halvings = a.max_halvings;
      try {
        cfg.validate();
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      run = gradient_descent(p.inst, p.reg, x0, cfg, x_star);
    } else if (a.method == "newton") {
      NewtonConfig cfg;
      if (a.max_iters > 0) cfg.max_iters = a.max_iters;
      if (a.tol >= 0.0) cfg.step_tol = a.tol;
      cfg.max_halvings = a.max_halvings;
      cfg.mode = parse_hessian_mode(a.hessian_mode);
      try {
        cfg.validate();
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      run = newton(p.inst, p.reg, x0, cfg, x_star);
    } else {
      throw UsageError("--method must be gd or newton");
    }
  } catch (const InvalidStart& e) {
    err << "levinv solve: invalid start: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SingularHessian& e) {
    err << "levinv solve: " << e.what() << '\n';
    return kExitStepTrapped;
  }

  Sink sink(a.out, out);
  CsvWriter csv(sink.stream());
  csv.row({"iter", "loss_exp", "loss_reg", "loss_total", "grad_norm", "step_size", "halvings", "r_t",
           "time_ms", "note"});
  for (std::size_t k = 0; k < run.records.size(); ++k) {
    const IterationRecord& r = run.records[k];
    std::string note;
    if (k + 1 == run.records.size()) {
      note = to_string(run.status);
      if (!run.diagnostic.empty()) note += ": " + run.diagnostic;
    } else if (r.hessian_regularized) {
      note = "hessian regularized";
    }
    csv.row({num(static_cast<long long>(r.iter)), num(r.loss.loss_exp), num(r.loss.loss_reg),
             num(r.loss.loss_total), num(r.grad_norm), num(r.step_size),
             num(static_cast<long long>(r.halvings)), r.r ? num(*r.r) : std::string(),
             num(r.time_ms), note});
  }
  sink.close();
  if (sink.is_file()) manifest.output("convergence_csv", sink.path());

  int code = kExitOk;
  if (run.status == RunStatus::IterationCap) code = kExitIterationCap;
  if (run.status == RunStatus::StepTrapped) {
    code = kExitStepTrapped;
    err << "levinv solve: " << run.diagnostic << '\n';
  }
  manifest.doc["status"] = to_string(run.status);
  manifest.doc["steps"] = run.steps();
  if (!run.records.empty() && run.records.back().r) manifest.doc["final_r"] = *run.records.back().r;
  manifest.finish(code, a.manifest, nullptr);
  return code;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string instance;
  std::string truth;
  std::string x;
  std::vector<long long> random;
  std::string hessian_mode = "residual";
  std::string against = "fd";
  double l = 0.0;
  double beta = 0.01;
  std::string out;
  std::string manifest;
};

struct FormulaCheck {
  std::string formula;
  double error = 0.0;
  double threshold = 0.0;
  bool pass() const { return error <= threshold; }
};

std::vector<FormulaCheck> verify_point(const ProblemInstance& inst, const RegConfig& reg,
                                       const Vector& x, HessianMode mode, bool against_fd) {
  std::vector<FormulaCheck> checks;
  const LeverageSnapshot snap = snapshot(inst, x, true);
  const ScalarField loss = guard_scaling(inst, x, [&](const Vector& y) {
    return loss_total(inst, y, reg).loss_total;
  });

  const Vector g = grad_loss_total(inst, snap, reg).grad_total;
  checks.push_back({"gradient", normalized_error(g, fd_gradient(loss, x)), kGradientThreshold});

  if (against_fd) {
    const Matrix h = hessian_total(inst, snap, reg, mode).H_total;
    checks.push_back({std::string("hessian_") + to_string(mode),
                      normalized_error(h, fd_hessian(loss, x)), kHessianThreshold});
  } else {
    double worst = 0.0;
    for (Index i = 0; i < inst.n(); ++i) {
      const Matrix d_sum = hessian_terms(snap, i, inst.c()(i), HessianMode::Literal).sum();
      const Vector gi = grad_sigma_diag_i(snap, i);
      const Matrix c_sum = gi * gi.transpose() + snap.sigma_diag(i) * hessian_sigma_ii(snap, i);
      worst = std::max(worst, normalized_error(d_sum, c_sum));
    }
    checks.push_back({"hessian_identity", worst, kIdentityThreshold});
  }

  const double sigma_err = (*snap.sigma_full - sigma_direct(inst, x)).cwiseAbs().maxCoeff();
  checks.push_back({"sigma", sigma_err, kSigmaThreshold});
  return checks;
}

int cmd_verify(const VerifyArgs& a, const CLI::App& sub, std::ostream& out, std::ostream& err) {
  const HessianMode mode = parse_hessian_mode(a.hessian_mode);
  if (a.against != "fd" && a.against != "identity") throw UsageError("--against must be fd or identity");
  const bool against_fd = a.against == "fd";

  std::vector<VerificationCase> cases;
  std::uint64_t seed = 0;
  if (!a.random.empty()) {
    if (!a.instance.empty()) throw UsageError("give either --instance or --random, not both");
    if (a.random.size() != 4) throw UsageError("--random takes N D COUNT SEED");
    const auto& r = a.random;
    if (r[0] < 1 || r[1] < 1 || r[1] > r[0] || r[2] < 0 || r[3] < 0) {
      throw UsageError("--random needs N >= D >= 1, COUNT >= 0, SEED >= 0");
    }
    seed = static_cast<std::uint64_t>(r[3]);
    cases = verification_batch(static_cast<Index>(r[0]), static_cast<Index>(r[1]),
                               static_cast<int>(r[2]), seed);
  } else if (!a.instance.empty()) {
    Problem p = load_problem(a.instance, a.truth, a.l, a.beta);
    Vector x;
    if (!a.x.empty()) {
      x = parse_vector(a.x, "--x");
    } else if (p.truth) {
      x = perturb_start(p.truth->x_star, 0.05 * (1.0 + p.truth->x_star.norm()), 0);
    } else {
      x = Vector::Zero(p.inst.d());
    }
    if (x.size() != p.inst.d()) throw UsageError("--x must have d entries");
    cases.push_back({std::move(p.inst), std::move(p.reg), std::move(x)});
  } else {
    throw UsageError("verify needs --instance or --random");
  }

  Manifest manifest("verify", sub, seed);
  Sink sink(a.out, out);
  CsvWriter csv(sink.stream());
  csv.row({"case", "n", "d", "formula", "max_error", "threshold", "pass"});
  std::map<std::string, double> worst;
  std::vector<std::string> failing;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const VerificationCase& vc = cases[k];
    std::vector<FormulaCheck> checks;
    try {
      checks = verify_point(vc.instance, vc.reg, vc.x, mode, against_fd);
    } catch (const Error& e) {
      checks.push_back({std::string("evaluation: ") + e.what(), 1.0, 0.0});
    }
    for (const FormulaCheck& c : checks) {
      csv.row({num(static_cast<long long>(k)), num(static_cast<long long>(vc.instance.n())),
               num(static_cast<long long>(vc.instance.d())), c.formula, num(c.error),
               num(c.threshold), c.pass() ? "true" : "false"});
      worst[c.formula] = std::max(worst[c.formula], c.error);
      if (!c.pass() && std::find(failing.begin(), failing.end(), c.formula) == failing.end()) {
        failing.push_back(c.formula);
      }
    }
  }
  sink.close();
  if (sink.is_file()) manifest.output("verify_csv", sink.path());

  manifest.doc["cases"] = cases.size();
  manifest.doc["max_errors"] = worst;
  const int code = failing.empty() ? kExitOk : kExitBreach;
  for (const auto& f : failing) err << "levinv verify: threshold breached by " << f << '\n';
  manifest.doc["failing"] = failing;
  manifest.finish(code, a.manifest, nullptr);
  return code;
}

// ---------------------------------------------------------------- diag

struct DiagArgs {
  std::string instance;
  std::string truth;
  std::string x;
  std::string report = "all";
  double radius = 0.1;
  int samples = 200;
  std::uint64_t seed = 0;
  double l = 0.0;
  double beta = 0.01;
  std::string out;
  std::string manifest;
};

struct DiagRow {
  std::string report;
  std::string quantity;
  double value = 0.0;
  double bound = 0.0;
  bool asserted = true;
  bool pass = true;
};

int cmd_diag(const DiagArgs& a, const CLI::App& sub, std::ostream& out, std::ostream& err) {
  const std::vector<std::string> known = {"all", "lipschitz", "basic", "norms", "dterms"};
  if (std::find(known.begin(), known.end(), a.report) == known.end()) {
    throw UsageError("--report must be one of all, lipschitz, basic, norms, dterms");
  }
  if (a.samples < 1) throw UsageError("--samples must be >= 1");
  if (!(a.radius >= 0.0)) throw UsageError("--radius must be >= 0");

  Problem p = load_problem(a.instance, a.truth, a.l, a.beta);
  Vector centre;
  if (!a.x.empty()) {
    centre = parse_vector(a.x, "--x");
  } else if (p.truth) {
    centre = p.truth->x_star;
  } else {
    throw UsageError("diag needs --truth or --x for the region centre");
  }
  if (centre.size() != p.inst.d()) throw UsageError("--x must have d entries");

  Manifest manifest("diag", sub, a.seed);
  const Region region{centre, a.radius};
  const bool all = a.report == "all";
  std::vector<DiagRow> rows;
  auto add = [&](const std::string& report, const std::string& q, double v, double b, bool asserted) {
    rows.push_back({report, q, v, b, asserted, v <= b});
  };

  if (all || a.report == "lipschitz") {
    const LipschitzReport r = empirical_hessian_lipschitz(p.inst, p.reg, region, a.samples, a.seed);
    add("lipschitz", "beta", r.constants.beta, kBetaCap, false);
    add("lipschitz", "R", r.constants.R, std::numeric_limits<double>::infinity(), false);
    add("lipschitz", "hessian_total", r.max_ratio_total, r.bound_total, true);
    add("lipschitz", "hessian_row_literal", r.max_ratio_row, r.bound_total, true);
    for (std::size_t q = 0; q < 6; ++q) {
      add("lipschitz", "D" + std::to_string(q + 1), r.term_ratios[q], r.term_bounds[q], true);
    }
  }
  if (all || a.report == "basic") {
    const BasicLipschitzReport r = basic_lipschitz_suite(p.inst, region, a.samples, a.seed);
    for (const auto& e : r.entries) add("basic", e.name, e.max_ratio, e.bound, e.asserted);
  }
  if (all || a.report == "norms" || a.report == "dterms") {
    const LeverageSnapshot snap = snapshot(p.inst, centre, true);
    const double beta = std::min({snap.sigma_min_Ax, snap.min_abs_s, kBetaCap});
    const double R = std::max(linalg::spectral_norm(p.inst.A()), centre.norm());
    if (all || a.report == "norms") {
      const NormBoundReport r = norm_bound_suite(snap, beta, R);
      for (const auto& e : r.entries) add("norms", e.name, e.value, e.bound, e.asserted);
    }
    if (all || a.report == "dterms") {
      std::array<double, 6> worst{};
      double g_norm = 0.0;
      double g_bound = 0.0;
      for (Index i = 0; i < p.inst.n(); ++i) {
        const DTermSpectralReport r = d_term_spectral_report(snap, i, beta);
        for (std::size_t q = 0; q < 6; ++q) worst[q] = std::max(worst[q], r.norms[q]);
        g_norm = std::max(g_norm, r.g_norm);
        g_bound = r.g_bound;
      }
      for (std::size_t q = 0; q < 6; ++q) {
        add("dterms", "D" + std::to_string(q + 1), worst[q], kStrippedBounds[q] + 1e-9, true);
      }
      add("dterms", "G", g_norm, g_bound, false);
    }
  }

  Sink sink(a.out, out);
  CsvWriter csv(sink.stream());
  csv.row({"report", "quantity", "value", "bound", "gap", "asserted", "pass"});
  bool ok = true;
  for (const DiagRow& r : rows) {
    const double gap = r.value > 0.0 ? r.bound / r.value : std::numeric_limits<double>::infinity();
    csv.row({r.report, r.quantity, num(r.value), num(r.bound), num(gap), r.asserted ? "true" : "false",
             r.pass ? "true" : "false"});
    if (r.asserted && !r.pass) {
      ok = false;
      err << "levinv diag: " << r.report << "/" << r.quantity << " exceeds its bound\n";
    }
  }
  sink.close();
  if (sink.is_file()) manifest.output("diag_csv", sink.path());
  const int code = ok ? kExitOk : kExitBreach;
  manifest.finish(code, a.manifest, nullptr);
  return code;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::vector<std::string> grid;
  int reps = 5;
  std::uint64_t seed = 0;
  long long hessian_max_n = 512;
  std::string out;
  std::string slopes;
  std::string manifest;
};

std::pair<Index, Index> parse_grid_point(const std::string& text) {
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t used_n = 0;
    std::size_t used_d = 0;
    const long long n = std::stoll(text.substr(0, x), &used_n);
    const long long d = std::stoll(text.substr(x + 1), &used_d);
    if (used_n != x || used_d != text.size() - x - 1 || d < 1 || n < d) {
      throw std::invalid_argument(text);
    }
    return {static_cast<Index>(n), static_cast<Index>(d)};
  } catch (const std::exception&) {
    throw UsageError("bad grid point '" + text + "'; expected NxD with N >= D >= 1");
  }
}

int cmd_bench(const BenchArgs& a, const CLI::App& sub, std::ostream& out, std::ostream&) {
  std::vector<std::pair<Index, Index>> grid;
  for (const std::string& item : a.grid) {
    std::stringstream ss(item);
    std::string point;
    while (std::getline(ss, point, ',')) {
      if (!point.empty()) grid.push_back(parse_grid_point(point));
    }
  }
  if (grid.empty()) throw UsageError("bench needs a non-empty --grid");
  if (a.reps < 1) throw UsageError("--reps must be >= 1");

  Manifest manifest("bench", sub, a.seed);
  BenchOptions opts;
  opts.reps = a.reps;
  opts.seed = a.seed;
  opts.hessian_max_n = static_cast<Index>(a.hessian_max_n);
  const BenchReport report = timing_bench(grid, opts);

  Sink rows_sink(a.out, out);
  {
    CsvWriter csv(rows_sink.stream());
    csv.row({"n", "d", "reps", "grad_ms", "hess_ms"});
    for (const BenchRow& r : report.rows) {
      csv.row({num(static_cast<long long>(r.n)), num(static_cast<long long>(r.d)),
               num(static_cast<long long>(r.reps)), num(r.grad_ms),
               r.hess_ms < 0.0 ? std::string() : num(r.hess_ms)});
    }
  }
  rows_sink.close();
  if (rows_sink.is_file()) manifest.output("bench_csv", rows_sink.path());

  Sink slope_sink(a.slopes, out);
  if (!slope_sink.is_file()) slope_sink.stream() << '\n';
  {
    CsvWriter csv(slope_sink.stream());
    csv.row({"axis", "fixed", "quantity", "slope", "points"});
    for (const BenchSlope& s : report.slopes) {
      csv.row({s.axis, num(static_cast<long long>(s.fixed)), s.quantity, num(s.slope),
               num(static_cast<long long>(s.points))});
    }
  }
  slope_sink.close();
  if (slope_sink.is_file()) manifest.output("slopes_csv", slope_sink.path());
  manifest.finish(kExitOk, a.manifest, nullptr);
  return kExitOk;
}

int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recover x from target leverage scores; verify and benchmark the derivatives.", "levinv"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  int threads = default_threads();
  app.add_option("--threads", threads, "worker threads (1 = single-threaded)")
      ->envname("LEVINV_THREADS")
      ->check(CLI::PositiveNumber);
  app.set_version_flag("--version", LEVINV_VERSION);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate an instance with a planted solution");
  gen_cmd->add_option("--n", gen.n, "rows")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--d", gen.d, "columns")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "RNG seed");
  gen_cmd->add_option("--margin", gen.margin, "lower bound on |s(x*)_i|");
  gen_cmd->add_option("--mode", gen.mode, "pure | regularized");
  gen_cmd->add_option("--l", gen.l, "regularized mode: curvature floor l");
  gen_cmd->add_option("--beta", gen.beta, "regularized mode: beta");
  gen_cmd->add_option("--noise", gen.noise, "std-dev of Gaussian noise added to c (clipped to [0,1])");
  gen_cmd->add_option("--out", gen.out, "output prefix; writes PREFIX.inst and PREFIX.truth");
  gen_cmd->add_option("--manifest", gen.manifest, "also write the JSON manifest here");

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand(
      "solve",
      "run gradient descent or Newton; CSV columns: iter, loss_exp, loss_reg, loss_total, grad_norm, "
      "step_size, halvings, r_t, time_ms, note");
  solve_cmd->add_option("--instance", solve.instance, "instance file")->required();
  solve_cmd->add_option("--truth", solve.truth, "ground-truth sidecar (enables r_t, supplies w)");
  solve_cmd->add_option("--method", solve.method, "gd | newton");
  solve_cmd->add_option("--x0", solve.x0, "start point, comma separated");
  solve_cmd->add_option("--rho", solve.rho, "with --truth and no --x0: start at radius rho (1 + |x*|)");
  solve_cmd->add_option("--seed", solve.seed, "seed for the start direction");
  solve_cmd->add_option("--max-iters", solve.max_iters, "iteration cap (default: gd 1000, newton 50)");
  solve_cmd->add_option("--tol", solve.tol, "gd: gradient-norm tol; newton: step tol");
  solve_cmd->add_option("--eta", solve.eta, "gd fixed step");
  solve_cmd->add_option("--alpha", solve.alpha, "gd: use step 2/(alpha (k+1)) when > 0");
  solve_cmd->add_option("--max-halvings", solve.max_halvings, "domain safeguard halving cap");
  solve_cmd->add_option("--hessian-mode", solve.hessian_mode, "newton: residual | literal");
  solve_cmd->add_option("--l", solve.l, "regularize with w^2 = max(0, -44 beta + l / sigma_min(A)^2)");
  solve_cmd->add_option("--beta", solve.beta, "beta used with --l");
  solve_cmd->add_option("--out", solve.out, "CSV path (default stdout)");
  solve_cmd->add_option("--manifest", solve.manifest, "JSON manifest path");

  VerifyArgs verify;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify",
      "compare analytic derivatives and sigma against the oracles; CSV columns: case, n, d, formula, "
      "max_error, threshold, pass");
  verify_cmd->add_option("--instance", verify.instance, "instance file");
  verify_cmd->add_option("--truth", verify.truth, "ground truth; point defaults near x*");
  verify_cmd->add_option("--x", verify.x, "evaluation point, comma separated");
  verify_cmd->add_option("--random", verify.random, "N D COUNT SEED: random cases with n <= N, d <= D")
      ->expected(4);
  verify_cmd->add_option("--mode", verify.hessian_mode, "Hessian mode: residual | literal");
  verify_cmd->add_option("--against", verify.against, "fd | identity");
  verify_cmd->add_option("--l", verify.l, "regularization l (instance mode)");
  verify_cmd->add_option("--beta", verify.beta, "beta used with --l");
  verify_cmd->add_option("--out", verify.out, "CSV path (default stdout)");
  verify_cmd->add_option("--manifest", verify.manifest, "JSON manifest path");

  DiagArgs diag;
  CLI::App* diag_cmd = app.add_subcommand(
      "diag",
      "Lipschitz and norm-bound diagnostics; CSV columns: report, quantity, value, bound, gap, "
      "asserted, pass");
  diag_cmd->add_option("--instance", diag.instance, "instance file")->required();
  diag_cmd->add_option("--truth", diag.truth, "ground truth; region centred at x*");
  diag_cmd->add_option("--x", diag.x, "region centre, comma separated");
  diag_cmd->add_option("--report", diag.report, "all | lipschitz | basic | norms | dterms");
  diag_cmd->add_option("--radius", diag.radius, "sampling ball radius");
  diag_cmd->add_option("--samples", diag.samples, "sample pairs");
  diag_cmd->add_option("--seed", diag.seed, "sampling seed");
  diag_cmd->add_option("--l", diag.l, "regularization l");
  diag_cmd->add_option("--beta", diag.beta, "beta used with --l");
  diag_cmd->add_option("--out", diag.out, "CSV path (default stdout)");
  diag_cmd->add_option("--manifest", diag.manifest, "JSON manifest path");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand(
      "bench",
      "per-iteration timings; CSV columns: n, d, reps, grad_ms, hess_ms, then axis, fixed, quantity, "
      "slope, points");
  bench_cmd->add_option("--grid", bench.grid, "points NxD, comma separated (e.g. 256x8,512x8)");
  bench_cmd->add_option("--reps", bench.reps, "repetitions per point (median reported)");
  bench_cmd->add_option("--seed", bench.seed, "instance seed");
  bench_cmd->add_option("--hessian-max-n", bench.hessian_max_n, "skip Hessian timing above this n");
  bench_cmd->add_option("--out", bench.out, "timings CSV path (default stdout)");
  bench_cmd->add_option("--slopes", bench.slopes, "slopes CSV path (default stdout)");
  bench_cmd->add_option("--manifest", bench.manifest, "JSON manifest path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  set_thread_count(threads);
  const char* command = app.get_subcommands().front()->get_name().c_str();
  try {
    if (*gen_cmd) return cmd_gen(gen, *gen_cmd, out, err);
    if (*solve_cmd) return cmd_solve(solve, *solve_cmd, out, err);
    if (*verify_cmd) return cmd_verify(verify, *verify_cmd, out, err);
    if (*diag_cmd) return cmd_diag(diag, *diag_cmd, out, err);
    if (*bench_cmd) return cmd_bench(bench, *bench_cmd, out, err);
  } catch (const Error& e) {
    // Bad flags, unreadable or malformed input files, and evaluation failures.
    err << "levinv " << command << ": " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace levinv::cli
