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
#include "levinv/generator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "levinv/error.hpp"
#include "levinv/leverage.hpp"
#include "levinv/linalg.hpp"
#include "levinv/rng.hpp"
#include "levinv/text_document.hpp"

namespace levinv {
namespace {

// Stream tags; each quantity draws from its own counter stream.
enum : std::uint64_t {
  kStreamA = 1,
  kStreamX = 2,
  kStreamSMagnitude = 3,
  kStreamSSign = 4,
  kStreamNoise = 5,
  kStreamDirection = 6,
  kStreamTarget = 7,
  kStreamWeights = 8,
};

std::string join(const Vector& v) {
  std::string out;
  for (Index i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_double(v(i));
  }
  return out;
}

Vector to_vector(const std::vector<double>& values) {
  return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

}  // namespace

const char* to_string(GenMode mode) { return mode == GenMode::Pure ? "pure" : "regularized"; }

GenMode parse_gen_mode(const std::string& text) {
  if (text == "pure") return GenMode::Pure;
  if (text == "regularized") return GenMode::Regularized;
  throw Error("unknown generator mode '" + text + "' (expected pure or regularized)");
}

void GenConfig::validate() const {
  if (d < 1 || n < d) throw Error("generator needs n >= d >= 1");
  if (!(margin > 0.0)) throw Error("margin must be > 0");
  if (!(rho >= 0.0)) throw Error("rho must be >= 0");
  if (!(noise >= 0.0)) throw Error("noise must be >= 0");
  if (max_attempts < 1) throw Error("max_attempts must be >= 1");
  if (mode == GenMode::Regularized) {
    if (!(l > 0.0)) throw Error("regularized mode needs l > 0");
    if (!(beta > 0.0 && beta < 0.1)) throw Error("regularized mode needs beta in (0, 0.1)");
  }
}

GeneratedInstance gen_instance(const GenConfig& cfg) {
  cfg.validate();
  const CounterRng root = CounterRng::from_seed(cfg.seed);

  Matrix A;
  int attempt = 0;
  double sigma_min_A = 0.0;
  for (; attempt < cfg.max_attempts; ++attempt) {
    A = root.split(kStreamA).split(static_cast<std::uint64_t>(attempt)).normal_matrix(cfg.n, cfg.d);
    const Vector sv = linalg::singular_values(A);
    sigma_min_A = sv(sv.size() - 1);
    if ((sv.array() > 1e-10 * sv(0)).count() == cfg.d) break;
  }
  if (attempt == cfg.max_attempts) {
    throw GenerationFailed("no full-rank A after " + std::to_string(cfg.max_attempts) + " draws");
  }

  const Vector x_star = root.split(kStreamX).normal_vector(cfg.d);
  const CounterRng mag = root.split(kStreamSMagnitude);
  const CounterRng sign = root.split(kStreamSSign);
  Vector s_star(cfg.n);
  for (Index i = 0; i < cfg.n; ++i) {
    const double magnitude = cfg.margin + std::abs(mag.normal(static_cast<std::uint64_t>(i)));
    s_star(i) = (sign.bits(static_cast<std::uint64_t>(i)) & 1U) ? -magnitude : magnitude;
  }
  Vector b = A * x_star - s_star;

  const ProblemInstance draft(A, b, Vector::Zero(cfg.n));
  LeverageSnapshot at_star;
  try {
    at_star = snapshot(draft, x_star);
  } catch (const Error& e) {
    throw GenerationFailed(std::string("planted point is not valid: ") + e.what());
  }
  Vector c = at_star.sigma_diag;
  if (cfg.noise > 0.0) {
    const CounterRng noise = root.split(kStreamNoise);
    for (Index i = 0; i < cfg.n; ++i) {
      c(i) = std::clamp(c(i) + cfg.noise * noise.normal(static_cast<std::uint64_t>(i)), 0.0, 1.0);
    }
  }

  ProblemInstance inst(std::move(A), std::move(b), std::move(c));
  RegConfig reg = cfg.mode == GenMode::Pure ? RegConfig::none(cfg.n)
                                            : RegConfig::from_bounds(inst, cfg.l, cfg.beta, 1e-12);

  GroundTruth truth;
  truth.x_star = x_star;
  truth.s_star = at_star.s;
  truth.seed = cfg.seed;
  truth.margin = cfg.margin;
  truth.min_abs_s = at_star.min_abs_s;
  truth.sigma_min_A = sigma_min_A;
  truth.mode = cfg.mode;
  truth.reg = reg;
  truth.attempts = attempt + 1;
  return {std::move(inst), std::move(reg), x_star, std::move(truth)};
}

Vector perturb_start(const Vector& x_star, double rho, std::uint64_t seed) {
  if (!(rho >= 0.0)) throw Error("rho must be >= 0");
  if (rho == 0.0) return x_star;
  Vector u = CounterRng::from_seed(seed).split(kStreamDirection).normal_vector(x_star.size());
  const double norm = u.norm();
  if (norm > 0.0) {
    u /= norm;
  } else {
    u = Vector::Unit(x_star.size(), 0);
  }
  return x_star + rho * u;
}

VerificationCase random_verification_case(Index n, Index d, std::uint64_t seed, double radius,
                                          double point_margin) {
  GenConfig cfg;
  cfg.n = n;
  cfg.d = d;
  cfg.seed = seed;
  cfg.margin = 0.5;
  GeneratedInstance gen = gen_instance(cfg);

  const CounterRng root = CounterRng::from_seed(seed);
  const CounterRng target = root.split(kStreamTarget);
  const CounterRng weights = root.split(kStreamWeights);
  Vector c(n);
  Vector w(n);
  for (Index i = 0; i < n; ++i) {
    c(i) = target.uniform(static_cast<std::uint64_t>(i));
    w(i) = weights.uniform(static_cast<std::uint64_t>(i));
  }
  ProblemInstance inst = gen.instance.with_target(std::move(c));
  RegConfig reg{std::move(w), 0.0, 0.0};

  double r = radius;
  for (std::uint64_t attempt = 0; attempt < 200; ++attempt) {
    if (attempt > 0 && attempt % 10 == 0) r *= 0.7;
    Vector x = perturb_start(gen.x_star, r, splitmix64(seed) + attempt);
    const Vector s = inst.A() * x - inst.b();
    if (s.cwiseAbs().minCoeff() >= point_margin) return {std::move(inst), std::move(reg), std::move(x)};
  }
  return {std::move(inst), std::move(reg), gen.x_star};
}

std::vector<VerificationCase> verification_batch(Index n_max, Index d_max, int count,
                                                 std::uint64_t seed) {
  if (d_max < 1 || n_max < d_max) throw Error("verification batch needs n_max >= d_max >= 1");
  if (count < 0) throw Error("verification batch count must be >= 0");
  const CounterRng rng = CounterRng::from_seed(seed).split(0xBA7C);
  std::vector<VerificationCase> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const CounterRng draw = rng.split(static_cast<std::uint64_t>(k));
    const Index d = 1 + static_cast<Index>(draw.bits(0) % static_cast<std::uint64_t>(d_max));
    const Index lo = std::max(d, std::min<Index>(5, n_max));
    const Index n = lo + static_cast<Index>(draw.bits(1) % static_cast<std::uint64_t>(n_max - lo + 1));
    out.push_back(random_verification_case(n, d, draw.bits(2)));
  }
  return out;
}

void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "# levinv ground truth\n";
  out << "seed=" << truth.seed << "\n";
  out << "mode=" << to_string(truth.mode) << "\n";
  out << "margin=" << format_double(truth.margin) << "\n";
  out << "min_abs_s=" << format_double(truth.min_abs_s) << "\n";
  out << "sigma_min_A=" << format_double(truth.sigma_min_A) << "\n";
  out << "l=" << format_double(truth.reg.l) << "\n";
  out << "beta=" << format_double(truth.reg.beta) << "\n";
  out << "attempts=" << truth.attempts << "\n";
  out << "x_star:\n" << join(truth.x_star) << "\n";
  out << "s_star:\n" << join(truth.s_star) << "\n";
  out << "w:\n" << join(truth.reg.w) << "\n";
  write_file(path.string(), out.str());
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  const std::string source = path.string();
  const TextDocument doc = parse_text_document(read_file(source), source);
  GroundTruth truth;
  const std::string& seed = doc.value("seed");
  auto [ptr, ec] = std::from_chars(seed.data(), seed.data() + seed.size(), truth.seed);
  if (ec != std::errc() || ptr != seed.data() + seed.size()) {
    throw ParseError(source + ": seed is not an unsigned integer");
  }
  try {
    truth.mode = parse_gen_mode(doc.value("mode"));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(source + ": " + e.what());
  }
  truth.margin = doc.real("margin");
  truth.min_abs_s = doc.real("min_abs_s");
  truth.sigma_min_A = doc.real("sigma_min_A");
  truth.reg.l = doc.real("l");
  truth.reg.beta = doc.real("beta");
  truth.attempts = static_cast<int>(doc.integer("attempts"));
  truth.x_star = to_vector(doc.section("x_star"));
  truth.s_star = to_vector(doc.section("s_star"));
  truth.reg.w = to_vector(doc.section("w"));
  if (truth.s_star.size() != truth.reg.w.size()) {
    throw ParseError(source + ": s_star and w lengths differ");
  }
  return truth;
}

}  // namespace levinv
