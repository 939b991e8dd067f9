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
#include "levinv/diagnostics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>

#include "levinv/error.hpp"
#include "levinv/generator.hpp"
#include "levinv/gradient.hpp"
#include "levinv/linalg.hpp"
#include "levinv/objective.hpp"
#include "levinv/rng.hpp"

namespace levinv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SamplePair {
  LeverageSnapshot x;
  LeverageSnapshot y;
};

double symmetric_norm(const Matrix& m) {
  const Vector eig = linalg::symmetric_eigenvalues(m);
  return std::max(std::abs(eig(0)), std::abs(eig(eig.size() - 1)));
}

// Draws pairs (x, y) with x uniform in the region and y a short hop away,
// rejecting pairs whose segment would cross an s_i = 0 hyperplane.
class PairSampler {
 public:
  PairSampler(const ProblemInstance& inst, const Region& region, std::uint64_t seed,
              double pair_scale, int max_rejections)
      : inst_(inst),
        region_(region),
        rng_(CounterRng::from_seed(seed).split(0x11A5)),
        max_rejections_(max_rejections) {
    if (region.centre.size() != inst.d()) throw DimensionMismatch("region centre must have d entries");
    if (!(region.radius >= 0.0)) throw Error("region radius must be >= 0");
    const double norm_a = linalg::spectral_norm(inst.A());
    hop_ = std::min(pair_scale * region.radius, 0.01 / norm_a);
    if (!(hop_ > 0.0)) hop_ = 0.01 / norm_a;
  }

  SamplePair next() {
    const Index d = inst_.d();
    for (;;) {
      const std::uint64_t k = counter_++;
      const CounterRng draw = rng_.split(k);
      Vector u = draw.split(1).normal_vector(d);
      Vector v = draw.split(2).normal_vector(d);
      u /= std::max(u.norm(), 1e-300);
      v /= std::max(v.norm(), 1e-300);
      const double radial = region_.radius * std::pow(draw.uniform(1u << 20), 1.0 / static_cast<double>(d));
      const Vector x = region_.centre + radial * u;
      const Vector y = x + hop_ * v;
      try {
        LeverageSnapshot sx = snapshot(inst_, x, true);
        LeverageSnapshot sy = snapshot(inst_, y, true);
        if (((sx.s.array() > 0.0) == (sy.s.array() > 0.0)).all()) return {std::move(sx), std::move(sy)};
      } catch (const Error&) {
      }
      if (++rejected_ > max_rejections_) {
        throw Error("too many sample points outside the domain (" + std::to_string(rejected_) +
                    " rejections); shrink the region");
      }
    }
  }

  int rejected() const noexcept { return rejected_; }

 private:
  const ProblemInstance& inst_;
  Region region_;
  CounterRng rng_;
  int max_rejections_;
  double hop_ = 0.0;
  std::uint64_t counter_ = 0;
  int rejected_ = 0;
};

struct ConstantTracker {
  double sigma_min_Ax = kInf;
  double min_abs_s = kInf;
  double max_norm_x = 0.0;

  void add(const LeverageSnapshot& s) {
    sigma_min_Ax = std::min(sigma_min_Ax, s.sigma_min_Ax);
    min_abs_s = std::min(min_abs_s, s.min_abs_s);
    max_norm_x = std::max(max_norm_x, s.x.norm());
  }

  MeasuredConstants finish(const ProblemInstance& inst) const {
    MeasuredConstants c;
    c.sigma_min_Ax = sigma_min_Ax;
    c.min_abs_s = min_abs_s;
    c.beta = std::min({sigma_min_Ax, min_abs_s, kBetaCap});
    c.R = std::max(linalg::spectral_norm(inst.A()), max_norm_x);
    return c;
  }
};

// Spectral norm of the difference of two stripped D_q matrices, using the
// structure of each term.
double stripped_difference_norm(std::size_t q, const Matrix& a, const Matrix& b, Index i) {
  switch (q) {
    case 1:
      return (a.row(i) - b.row(i)).norm();
    case 2:
      return (a.col(i) - b.col(i)).norm();
    case 3:
      return std::abs(a(i, i) - b(i, i));
    case 5:
      return (a.diagonal() - b.diagonal()).cwiseAbs().maxCoeff();
    default:
      return symmetric_norm(a - b);
  }
}

template <class F>
double median_ms(int reps, F&& fn) {
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    times.push_back(
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
  }
  std::sort(times.begin(), times.end());
  const std::size_t mid = times.size() / 2;
  return times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
}

}  // namespace

double LipschitzReport::tightness_gap_total() const {
  return max_ratio_total > 0.0 ? bound_total / max_ratio_total : kInf;
}

std::array<double, 6> LipschitzReport::tightness_gap_terms() const {
  std::array<double, 6> out{};
  for (std::size_t q = 0; q < 6; ++q) {
    out[q] = term_ratios[q] > 0.0 ? term_bounds[q] / term_ratios[q] : kInf;
  }
  return out;
}

LipschitzReport empirical_hessian_lipschitz(const ProblemInstance& inst, const RegConfig& reg,
                                            const Region& region, int samples, std::uint64_t seed,
                                            const LipschitzOptions& options) {
  if (samples < 1) throw Error("need at least one sample pair");
  PairSampler sampler(inst, region, seed, options.pair_scale, options.max_rejections);
  ConstantTracker tracker;
  LipschitzReport report;
  const Matrix h_reg = hessian_loss_reg(inst, reg);

  for (int p = 0; p < samples; ++p) {
    const SamplePair pair = sampler.next();
    tracker.add(pair.x);
    tracker.add(pair.y);
    const double dist = (pair.x.x - pair.y.x).norm();
    if (!(dist > 0.0)) continue;

    if (options.include_exp) {
      const Matrix hx = hessian_loss_exp(inst, pair.x, options.mode) + h_reg;
      const Matrix hy = hessian_loss_exp(inst, pair.y, options.mode) + h_reg;
      report.max_ratio_total = std::max(report.max_ratio_total, symmetric_norm(hx - hy) / dist);
    }

    for (Index i = 0; i < inst.n(); ++i) {
      const double ci = inst.c()(i);
      const Matrix rx = hessian_terms(pair.x, i, ci, HessianMode::Literal).sum();
      const Matrix ry = hessian_terms(pair.y, i, ci, HessianMode::Literal).sum();
      report.max_ratio_row = std::max(report.max_ratio_row, symmetric_norm(rx - ry) / dist);

      const auto dx = stripped_d_terms(pair.x, i);
      const auto dy = stripped_d_terms(pair.y, i);
      for (std::size_t q = 0; q < 6; ++q) {
        report.term_ratios[q] =
            std::max(report.term_ratios[q], stripped_difference_norm(q, dx[q], dy[q], i) / dist);
      }
    }
    ++report.pairs;
  }

  report.rejected = sampler.rejected();
  report.constants = tracker.finish(inst);
  const double beta = report.constants.beta;
  const double R = report.constants.R;
  report.bound_total = kHessianLipschitzConstant * std::pow(beta, -9.0) * std::pow(R, 5.0);
  report.total_ok = report.max_ratio_total <= report.bound_total;
  report.row_ok = report.max_ratio_row <= report.bound_total;
  report.terms_ok = true;
  for (std::size_t q = 0; q < 6; ++q) {
    report.term_bounds[q] = kTermLipschitzConstants[q] * std::pow(beta, -7.0) * std::pow(R, 3.0);
    report.terms_ok = report.terms_ok && report.term_ratios[q] <= report.term_bounds[q];
  }
  return report;
}

bool BasicLipschitzReport::pass() const noexcept {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return !e.asserted || e.ok; });
}

BasicLipschitzReport basic_lipschitz_suite(const ProblemInstance& inst, const Region& region,
                                           int samples, std::uint64_t seed) {
  if (samples < 1) throw Error("need at least one sample pair");
  PairSampler sampler(inst, region, seed, 0.1, 1000);
  ConstantTracker tracker;
  BasicLipschitzReport report;

  enum { kS, kSInv, kAx, kPinv, kGram, kSigma, kSigmaDiag, kSigmaCol, kCount };
  std::array<double, kCount> ratio{};

  for (int p = 0; p < samples; ++p) {
    const SamplePair pair = sampler.next();
    const LeverageSnapshot& a = pair.x;
    const LeverageSnapshot& b = pair.y;
    tracker.add(a);
    tracker.add(b);
    const double dist = (a.x - b.x).norm();
    if (!(dist > 0.0)) continue;

    auto bump = [&](int k, double value) { ratio[k] = std::max(ratio[k], value / dist); };
    bump(kS, (a.s - b.s).cwiseAbs().maxCoeff());
    bump(kSInv, (a.s.cwiseInverse() - b.s.cwiseInverse()).cwiseAbs().maxCoeff());
    bump(kAx, linalg::spectral_norm(a.Ax - b.Ax));
    bump(kPinv, linalg::spectral_norm(a.gram_inv * a.Ax.transpose() - b.gram_inv * b.Ax.transpose()));
    bump(kGram, symmetric_norm(a.gram_inv - b.gram_inv));
    const Matrix diff = *a.sigma_full - *b.sigma_full;
    bump(kSigma, symmetric_norm(diff));
    bump(kSigmaDiag, diff.diagonal().cwiseAbs().maxCoeff());
    bump(kSigmaCol, diff.colwise().norm().maxCoeff());
    ++report.pairs;
  }

  report.constants = tracker.finish(inst);
  const double beta = report.constants.beta;
  const double R = report.constants.R;
  auto add = [&](const char* name, double value, double bound, bool asserted) {
    report.entries.push_back({name, value, bound, asserted, value <= bound});
  };
  add("S", ratio[kS], R, true);
  add("S_inv", ratio[kSInv], std::pow(beta, -2.0) * R, true);
  add("A_of_x", ratio[kAx], std::pow(beta, -2.0) * R * R, true);
  add("A_of_x_pinv", ratio[kPinv], std::pow(beta, -4.0) * R * R, false);
  add("gram_inv", ratio[kGram], 2.0 * std::pow(beta, -5.0) * R * R, true);
  add("sigma", ratio[kSigma], 3.0 * std::pow(beta, -7.0) * std::pow(R, 3.0), true);
  add("sigma_ii", ratio[kSigmaDiag], 3.0 * std::pow(beta, -7.0) * std::pow(R, 3.0), true);
  add("sigma_col", ratio[kSigmaCol], 3.0 * std::pow(beta, -7.0) * std::pow(R, 3.0), true);
  return report;
}

bool NormBoundReport::pass() const noexcept {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return !e.asserted || e.ok; });
}

NormBoundReport norm_bound_suite(const LeverageSnapshot& snap, double beta, double R) {
  NormBoundReport report;
  report.beta = beta;
  report.hypothesis_met = snap.sigma_min_Ax >= beta;

  const Matrix sigma = snap.sigma_full ? *snap.sigma_full
                                       : Matrix(snap.Ax * snap.gram_inv * snap.Ax.transpose());
  auto add = [&](const char* name, double value, double bound, bool asserted) {
    report.entries.push_back({name, value, bound, asserted, value <= bound});
  };
  add("sigma_norm", symmetric_norm(sigma), 1.0 + 1e-10, true);
  add("sigma_ii_abs", sigma.diagonal().cwiseAbs().maxCoeff(), 1.0 + 1e-12, true);
  add("sigma_col_norm", sigma.colwise().norm().maxCoeff(), 1.0 + 1e-10, true);
  add("row_norm_A_of_x", snap.Ax.rowwise().norm().maxCoeff(), beta * R, false);
  add("pinv_norm", 1.0 / snap.sigma_min_Ax, (1.0 / beta) * (1.0 + 1e-8), report.hypothesis_met);
  add("gram_inv_norm", symmetric_norm(snap.gram_inv), (1.0 / (beta * beta)) * (1.0 + 1e-8),
      report.hypothesis_met);
  return report;
}

Vector gradient_iteration(const ProblemInstance& inst, const RegConfig& reg, const Vector& x) {
  const LeverageSnapshot snap = snapshot(inst, x);
  const GradientBundle g = grad_loss_total(inst, snap, reg);
  const double loss = loss_total(inst, snap, reg).loss_total;
  Vector out = g.grad_total;
  if (!std::isfinite(loss)) out.setConstant(loss);
  return out;
}

BenchReport timing_bench(const std::vector<std::pair<Index, Index>>& grid, const BenchOptions& options) {
  if (grid.empty()) throw Error("benchmark grid is empty");
  if (options.reps < 1) throw Error("reps must be >= 1");
  BenchReport report;

  for (const auto& [n, d] : grid) {
    GenConfig cfg;
    cfg.n = n;
    cfg.d = d;
    cfg.seed = options.seed;
    const GeneratedInstance gen = gen_instance(cfg);
    const Vector x = perturb_start(gen.x_star, 1e-2 * (1.0 + gen.x_star.norm()), options.seed + 1);

    BenchRow row;
    row.n = n;
    row.d = d;
    row.reps = options.reps;
    volatile double sink = gradient_iteration(gen.instance, gen.reg, x)(0);
    row.grad_ms = median_ms(options.reps, [&] { sink = gradient_iteration(gen.instance, gen.reg, x)(0); });
    if (n <= options.hessian_max_n) {
      row.hess_ms = median_ms(options.reps, [&] {
        sink = hessian_total(gen.instance, x, gen.reg).min_eigenvalue;
      });
    }
    (void)sink;
    report.rows.push_back(row);
  }

  auto fit = [&](const char* axis, bool along_n) {
    std::map<Index, std::vector<const BenchRow*>> groups;
    for (const auto& row : report.rows) groups[along_n ? row.d : row.n].push_back(&row);
    for (const auto& [fixed, rows] : groups) {
      for (const char* quantity : {"grad", "hess"}) {
        const bool grad = quantity[0] == 'g';
        std::map<Index, double> points;
        for (const BenchRow* r : rows) {
          const double t = grad ? r->grad_ms : r->hess_ms;
          if (t > 0.0) points[along_n ? r->n : r->d] = t;
        }
        if (points.size() < 2) continue;
        Vector xs(static_cast<Index>(points.size()));
        Vector ys(static_cast<Index>(points.size()));
        Index k = 0;
        for (const auto& [size, t] : points) {
          xs(k) = static_cast<double>(size);
          ys(k) = t;
          ++k;
        }
        report.slopes.push_back({axis, fixed, quantity, linalg::loglog_slope(xs, ys),
                                 static_cast<int>(points.size())});
      }
    }
  };
  fit("n", true);
  fit("d", false);
  return report;
}

}  // namespace levinv
