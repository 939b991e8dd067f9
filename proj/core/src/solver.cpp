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
#include "levinv/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "levinv/error.hpp"
#include "levinv/gradient.hpp"
#include "levinv/leverage.hpp"

namespace levinv {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

LeverageSnapshot start_snapshot(const ProblemInstance& inst, const Vector& x0, double delta_min) {
  if (x0.size() != inst.d()) throw InvalidStart("x0 must have d entries");
  if (!x0.allFinite()) throw InvalidStart("x0 has non-finite entries");
  try {
    return snapshot(inst, x0, false, delta_min);
  } catch (const Error& e) {
    throw InvalidStart(std::string("x0 is not a valid point: ") + e.what());
  }
}

// A candidate is accepted when no s_i changes sign or drops below delta_min
// and A(x) keeps full rank.
std::optional<LeverageSnapshot> try_point(const ProblemInstance& inst, const Vector& current_s,
                                          const Vector& x, double delta_min) {
  if (!x.allFinite()) return std::nullopt;
  const Vector s = inst.A() * x - inst.b();
  for (Index i = 0; i < s.size(); ++i) {
    if (!(std::abs(s(i)) >= delta_min) || std::signbit(s(i)) != std::signbit(current_s(i))) {
      return std::nullopt;
    }
  }
  try {
    return snapshot(inst, x, false, delta_min);
  } catch (const Error&) {
    return std::nullopt;
  }
}

IterationRecord make_record(int iter, const ProblemInstance& inst, const LeverageSnapshot& snap,
                            const RegConfig& reg, const Vector& grad,
                            const std::optional<Vector>& x_star) {
  IterationRecord rec;
  rec.iter = iter;
  rec.loss = loss_total(inst, snap, reg);
  rec.grad_norm = grad.norm();
  rec.min_abs_s = snap.min_abs_s;
  if (x_star) rec.r = (snap.x - *x_star).norm();
  return rec;
}

void check_reg(const ProblemInstance& inst, const RegConfig& reg) {
  if (reg.w.size() != inst.n()) throw DimensionMismatch("w must have n entries");
}

}  // namespace

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Converged:
      return "converged";
    case RunStatus::IterationCap:
      return "iteration-cap";
    case RunStatus::StepTrapped:
      return "step-trapped";
  }
  return "unknown";
}

void GDConfig::validate() const {
  if (max_iters < 1) throw Error("iteration cap must be >= 1");
  if (max_halvings < 0) throw Error("halving cap must be >= 0");
  if (!(grad_tol > 0.0)) throw Error("gradient tolerance must be > 0");
  if (policy == StepPolicy::Fixed && !(eta >= 0.0)) throw Error("eta must be >= 0");
  if (policy == StepPolicy::Schedule && !(alpha > 0.0)) throw Error("alpha must be > 0");
}

void NewtonConfig::validate() const {
  if (max_iters < 1) throw Error("iteration cap must be >= 1");
  if (max_halvings < 0) throw Error("halving cap must be >= 0");
  if (!(step_tol > 0.0)) throw Error("step tolerance must be > 0");
}

TrackedRun gradient_descent(const ProblemInstance& inst, const RegConfig& reg, const Vector& x0,
                            const GDConfig& cfg, const std::optional<Vector>& x_star) {
  cfg.validate();
  check_reg(inst, reg);

  TrackedRun run;
  run.method = Method::GradientDescent;
  LeverageSnapshot snap = start_snapshot(inst, x0, cfg.delta_min);
  Vector grad = grad_loss_total(inst, snap, reg).grad_total;
  run.iterates.push_back(snap.x);
  run.records.push_back(make_record(0, inst, snap, reg, grad, x_star));

  run.status = RunStatus::IterationCap;
  for (int t = 1; t <= cfg.max_iters; ++t) {
    if (grad.norm() <= cfg.grad_tol) {
      run.status = RunStatus::Converged;
      break;
    }
    const auto started = Clock::now();
    double step = cfg.policy == StepPolicy::Fixed ? cfg.eta : 2.0 / (cfg.alpha * (t + 1));

    std::optional<LeverageSnapshot> next;
    int halvings = 0;
    for (;;) {
      next = try_point(inst, snap.s, snap.x - step * grad, cfg.delta_min);
      if (next || halvings == cfg.max_halvings) break;
      step *= 0.5;
      ++halvings;
    }
    if (!next) {
      run.status = RunStatus::StepTrapped;
      run.diagnostic = "step at iteration " + std::to_string(t) + " still leaves the domain after " +
                       std::to_string(halvings) + " halvings";
      break;
    }

    snap = std::move(*next);
    grad = grad_loss_total(inst, snap, reg).grad_total;
    IterationRecord rec = make_record(t, inst, snap, reg, grad, x_star);
    rec.step_size = step;
    rec.halvings = halvings;
    rec.time_ms = elapsed_ms(started);
    run.iterates.push_back(snap.x);
    run.records.push_back(std::move(rec));
  }
  if (run.status == RunStatus::IterationCap && grad.norm() <= cfg.grad_tol) {
    run.status = RunStatus::Converged;
  }
  return run;
}

TrackedRun newton(const ProblemInstance& inst, const RegConfig& reg, const Vector& x0,
                  const NewtonConfig& cfg, const std::optional<Vector>& x_star) {
  cfg.validate();
  check_reg(inst, reg);

  TrackedRun run;
  run.method = Method::Newton;
  LeverageSnapshot snap = start_snapshot(inst, x0, cfg.delta_min);
  Vector grad = grad_loss_total(inst, snap, reg).grad_total;
  run.iterates.push_back(snap.x);
  run.records.push_back(make_record(0, inst, snap, reg, grad, x_star));

  run.status = RunStatus::IterationCap;
  for (int t = 1; t <= cfg.max_iters; ++t) {
    const auto started = Clock::now();
    const HessianBundle bundle = hessian_total(inst, snap, reg, cfg.mode);
    const double scale = bundle.spectral_norm > 0.0 ? bundle.spectral_norm : 1.0;

    Matrix H = bundle.H_total;
    bool regularized = false;
    Eigen::LDLT<Matrix> ldlt(H);
    auto singular = [&] {
      return ldlt.info() != Eigen::Success ||
             !(ldlt.rcond() > 16.0 * std::numeric_limits<double>::epsilon());
    };
    if (singular()) {
      if (!cfg.regularize_on_singular) {
        throw SingularHessian("Hessian is singular at iteration " + std::to_string(t));
      }
      H.diagonal().array() += 1e-10 * scale;
      ldlt.compute(H);
      regularized = true;
      if (singular()) {
        throw SingularHessian("Hessian is singular at iteration " + std::to_string(t) +
                              " even after diagonal regularization");
      }
    }
    const Vector direction = ldlt.solve(grad);

    double step = 1.0;
    std::optional<LeverageSnapshot> next;
    int halvings = 0;
    for (;;) {
      next = try_point(inst, snap.s, snap.x - step * direction, cfg.delta_min);
      if (next || halvings == cfg.max_halvings) break;
      step *= 0.5;
      ++halvings;
    }
    if (!next) {
      run.status = RunStatus::StepTrapped;
      run.diagnostic = "Newton step at iteration " + std::to_string(t) +
                       " still leaves the domain after " + std::to_string(halvings) + " halvings";
      break;
    }

    const double moved = (next->x - snap.x).norm();
    const double size = snap.x.norm();
    snap = std::move(*next);
    grad = grad_loss_total(inst, snap, reg).grad_total;
    IterationRecord rec = make_record(t, inst, snap, reg, grad, x_star);
    rec.step_size = step;
    rec.halvings = halvings;
    rec.hessian_regularized = regularized;
    rec.time_ms = elapsed_ms(started);
    run.iterates.push_back(snap.x);
    run.records.push_back(std::move(rec));

    if (moved <= cfg.step_tol * (1.0 + size)) {
      run.status = RunStatus::Converged;
      break;
    }
  }
  return run;
}

AveragedIterate averaged_iterate(const TrackedRun& run, double alpha, double grad_bound) {
  const int T = run.steps();
  if (T < 1) throw EmptyRun("averaged_iterate needs at least one step");
  AveragedIterate out;
  out.x = Vector::Zero(run.iterates.front().size());
  const double denom = static_cast<double>(T) * static_cast<double>(T + 1);
  for (int k = 1; k <= T; ++k) out.x += (2.0 * k / denom) * run.iterates[static_cast<std::size_t>(k)];
  out.bound = 2.0 * grad_bound * grad_bound / (alpha * (T + 1));
  return out;
}

ContractionReport contraction_report(const TrackedRun& run, const Vector& x_star, double l,
                                     double M, double slack, double noise_floor) {
  ContractionReport out;
  out.threshold = 0.4 + slack;
  const std::size_t count = run.iterates.size();
  std::vector<double> r(count);
  for (std::size_t t = 0; t < count; ++t) r[t] = (run.iterates[t] - x_star).norm();

  for (std::size_t t = 0; t < count; ++t) {
    ContractionStep step;
    step.t = static_cast<int>(t);
    step.r = r[t];
    step.ratio = t + 1 < count ? (r[t] > 0.0 ? r[t + 1] / r[t] : 0.0)
                               : std::numeric_limits<double>::quiet_NaN();
    step.good = M * r[t] <= 0.1 * l;
    if (step.good && out.first_good < 0) out.first_good = step.t;
    step.measured = out.first_good >= 0 && t + 1 < count && r[t] > noise_floor;
    if (step.measured) {
      out.max_ratio = std::max(out.max_ratio, step.ratio);
      if (step.ratio > out.threshold) out.ratios_ok = false;
    }
    out.steps.push_back(step);
  }
  out.condition_met = out.first_good >= 0;
  out.final_r = count ? r.back() : 0.0;
  return out;
}

}  // namespace levinv
