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
#include "levinv/instance.hpp"

#include <cmath>
#include <sstream>

#include "levinv/error.hpp"
#include "levinv/linalg.hpp"
#include "levinv/text_document.hpp"

namespace levinv {

ProblemInstance::ProblemInstance(Matrix a, Vector b, Vector c)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
  if (a_.rows() == 0 || a_.cols() == 0) throw DimensionMismatch("A must be non-empty");
  if (b_.size() != a_.rows()) {
    throw DimensionMismatch("b has " + std::to_string(b_.size()) + " entries, A has " +
                            std::to_string(a_.rows()) + " rows");
  }
  if (c_.size() != a_.rows()) {
    throw DimensionMismatch("c has " + std::to_string(c_.size()) + " entries, A has " +
                            std::to_string(a_.rows()) + " rows");
  }
}

ProblemInstance ProblemInstance::with_target(Vector c) const { return {a_, b_, std::move(c)}; }

bool ValidationReport::has(ViolationKind kind) const noexcept {
  for (const auto& v : violations) {
    if (v.kind == kind) return true;
  }
  return false;
}

ValidationReport validate(const ProblemInstance& inst) {
  ValidationReport report;
  const Index n = inst.n();
  const Index d = inst.d();

  if (!inst.A().allFinite() || !inst.b().allFinite() || !inst.c().allFinite()) {
    report.violations.push_back({ViolationKind::NonFinite, "instance contains non-finite entries"});
    return report;
  }
  if (n < d) {
    report.violations.push_back(
        {ViolationKind::TooFewRows,
         "n = " + std::to_string(n) + " < d = " + std::to_string(d)});
  }

  const Vector sv = linalg::singular_values(inst.A());
  report.sigma_max_A = sv(0);
  report.sigma_min_A = sv(sv.size() - 1);
  const double tol = 1e-10 * report.sigma_max_A;
  report.rank = (sv.array() > tol).count();
  if (report.rank < d) {
    report.violations.push_back(
        {ViolationKind::RankDeficient,
         "A has rank " + std::to_string(report.rank) + " < d = " + std::to_string(d)});
  }

  for (Index i = 0; i < n; ++i) {
    const double ci = inst.c()(i);
    if (ci < 0.0 || ci > 1.0) {
      std::ostringstream msg;
      msg << "c_" << i << " = " << ci << " lies outside [0, 1]";
      report.violations.push_back({ViolationKind::TargetOutOfRange, msg.str()});
    }
  }

  report.trace_gap = inst.c().sum() - static_cast<double>(d);
  report.realizable = std::abs(report.trace_gap) <= 1e-8 * std::max<double>(1.0, d);
  if (!report.realizable) {
    std::ostringstream msg;
    msg << "sum(c) - d = " << report.trace_gap
        << ": c is not the leverage diagonal of any rank-d matrix";
    report.warnings.push_back(msg.str());
  }
  return report;
}

RegConfig RegConfig::none(Index n) { return {Vector::Zero(n), 0.0, 0.0}; }

RegConfig RegConfig::from_bounds(const ProblemInstance& inst, double l, double beta, double margin) {
  const Vector sv = linalg::singular_values(inst.A());
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0)) throw RankDeficient("sigma_min(A) = 0; weight bound undefined");
  const double w2 = std::max(0.0, -44.0 * beta + l / (smin * smin)) + margin;
  return {Vector::Constant(inst.n(), std::sqrt(w2)), l, beta};
}

bool RegConfig::is_zero() const noexcept { return w.size() == 0 || (w.array() == 0.0).all(); }

bool satisfies_weight_bound(const RegConfig& reg, double sigma_min_A) {
  const double required = -44.0 * reg.beta + reg.l / (sigma_min_A * sigma_min_A);
  return (reg.w.array().square() >= required).all();
}

void SolveSettings::validate() const {
  if (max_iters < 1) throw Error("iteration cap must be >= 1");
  if (!(tol > 0.0)) throw Error("tolerance must be > 0");
  if (max_halvings < 0) throw Error("halving cap must be >= 0");
  if (method == Method::GradientDescent) {
    if (step_policy == StepPolicy::Fixed && !(eta >= 0.0)) throw Error("eta must be >= 0");
    if (step_policy == StepPolicy::Schedule && !(alpha > 0.0)) throw Error("alpha must be > 0");
  }
}

std::string format_instance(const ProblemInstance& inst) {
  std::ostringstream out;
  out << "# levinv instance\n";
  out << "n=" << inst.n() << "\n";
  out << "d=" << inst.d() << "\n";
  out << "A:\n";
  for (Index i = 0; i < inst.n(); ++i) {
    for (Index j = 0; j < inst.d(); ++j) {
      if (j) out << ' ';
      out << format_double(inst.A()(i, j));
    }
    out << '\n';
  }
  auto write_vector = [&](const char* name, const Vector& v) {
    out << name << ":\n";
    for (Index i = 0; i < v.size(); ++i) {
      if (i) out << ' ';
      out << format_double(v(i));
    }
    out << '\n';
  };
  write_vector("b", inst.b());
  write_vector("c", inst.c());
  return out.str();
}

ProblemInstance parse_instance(const std::string& text, const std::string& source) {
  const TextDocument doc = parse_text_document(text, source);
  const long long n = doc.integer("n");
  const long long d = doc.integer("d");
  if (n < 1 || d < 1) throw ParseError(source + ": n and d must be positive");

  const auto& a = doc.section("A");
  const auto& b = doc.section("b");
  const auto& c = doc.section("c");
  if (static_cast<long long>(a.size()) != n * d) {
    throw ParseError(source + ": section A has " + std::to_string(a.size()) +
                     " values, expected n*d = " + std::to_string(n * d));
  }
  if (static_cast<long long>(b.size()) != n) {
    throw ParseError(source + ": section b has " + std::to_string(b.size()) +
                     " values, expected n = " + std::to_string(n));
  }
  if (static_cast<long long>(c.size()) != n) {
    throw ParseError(source + ": section c has " + std::to_string(c.size()) +
                     " values, expected n = " + std::to_string(n));
  }

  Matrix A(n, d);
  for (long long i = 0; i < n; ++i) {
    for (long long j = 0; j < d; ++j) A(i, j) = a[static_cast<std::size_t>(i * d + j)];
  }
  return {std::move(A), Eigen::Map<const Vector>(b.data(), n),
          Eigen::Map<const Vector>(c.data(), n)};
}

void save_instance(const ProblemInstance& inst, const std::filesystem::path& path) {
  write_file(path.string(), format_instance(inst));
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  return parse_instance(read_file(path.string()), path.string());
}

}  // namespace levinv
