// Copyright 2026 The weakcollapse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "weakcollapse/ks.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "weakcollapse/errors.hpp"
#include "weakcollapse/text.hpp"

namespace weakcollapse::ks {
namespace {

// 4^13 candidates is already ~6.7e7; anything larger is not a desk-scale search.
constexpr std::size_t kMaxSearchContexts = 13;

void require_valid_contexts(const KSTable& table) {
  const auto violations = validate_contexts(table);
  if (!violations.empty()) throw InvalidTable(violations.front().message);
  if (table.contexts().size() > kMaxSearchContexts) {
    throw InvalidTable("coloring search supports at most " + std::to_string(kMaxSearchContexts) +
                       " contexts");
  }
}

std::uint64_t search_space(std::size_t contexts) {
  return std::uint64_t{1} << (2 * contexts);
}

std::string context_label(std::size_t c) { return "S" + std::to_string(c + 1); }

}  // namespace

Ray::Ray(std::array<int, kRayDim> components) : c_(components) {
  int g = 0;
  for (int x : c_) g = std::gcd(g, std::abs(x));
  if (g == 0) throw InvalidTable("ray is the zero vector");
  for (int& x : c_) x /= g;
  for (int x : c_) {
    if (x == 0) continue;
    if (x < 0) {
      for (int& y : c_) y = -y;
    }
    break;
  }
}

long Ray::dot(const Ray& other) const noexcept {
  long sum = 0;
  for (std::size_t i = 0; i < kRayDim; ++i) sum += static_cast<long>(c_[i]) * other.c_[i];
  return sum;
}

Vector Ray::unit_vector() const {
  Vector v(static_cast<Eigen::Index>(kRayDim));
  for (std::size_t i = 0; i < kRayDim; ++i) v[static_cast<Eigen::Index>(i)] = c_[i];
  return v / std::sqrt(static_cast<double>(norm2()));
}

std::string Ray::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < kRayDim; ++i) {
    if (i) s += ',';
    s += std::to_string(c_[i]);
  }
  return s + ")";
}

Ray parse_ray(std::string_view text) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '(' || text.back() != ')') {
    throw ParseError("ray must be written as (a,b,c,d): '" + std::string(text) + "'");
  }
  const auto parts = split(text.substr(1, text.size() - 2), ',');
  if (parts.size() != kRayDim) {
    throw ParseError("ray must have 4 components: '" + std::string(text) + "'");
  }
  std::array<int, kRayDim> c{};
  for (std::size_t i = 0; i < kRayDim; ++i) c[i] = static_cast<int>(parse_int(parts[i], "ray component"));
  try {
    return Ray(c);
  } catch (const InvalidTable& e) {
    throw ParseError(e.what());
  }
}

KSTable::KSTable(std::vector<Context> contexts) : contexts_(std::move(contexts)) {
  for (std::size_t c = 0; c < contexts_.size(); ++c) {
    for (std::size_t p = 0; p < kContextSize; ++p) index_[contexts_[c].rays[p]].push_back({c, p});
  }
}

KSTable builtin_ks_table() {
  using R = std::array<int, kRayDim>;
  const std::array<std::array<R, kContextSize>, 9> rows = {{
      {{{0, 0, 0, 1}, {0, 0, 1, 0}, {1, 1, 0, 0}, {1, -1, 0, 0}}},
      {{{0, 0, 0, 1}, {0, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, -1, 0}}},
      {{{1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, 0, 0}, {0, 0, 1, 1}}},
      {{{1, -1, 1, -1}, {1, 1, 1, 1}, {1, 0, -1, 0}, {0, 1, 0, -1}}},
      {{{0, 0, 1, 0}, {0, 1, 0, 0}, {1, 0, 0, 1}, {1, 0, 0, -1}}},
      {{{1, -1, -1, 1}, {1, 1, 1, 1}, {1, 0, 0, -1}, {0, 1, -1, 0}}},
      {{{1, 1, -1, 1}, {1, 1, 1, -1}, {1, -1, 0, 0}, {0, 0, 1, 1}}},
      {{{1, 1, -1, 1}, {-1, 1, 1, 1}, {1, 0, 1, 0}, {0, 1, 0, -1}}},
      {{{1, 1, 1, -1}, {-1, 1, 1, 1}, {1, 0, 0, 1}, {0, 1, -1, 0}}},
  }};
  std::vector<Context> contexts;
  for (const auto& row : rows) {
    contexts.push_back(Context{{Ray(row[0]), Ray(row[1]), Ray(row[2]), Ray(row[3])}});
  }
  return KSTable(std::move(contexts));
}

std::vector<TableViolation> validate_contexts(const KSTable& table) {
  std::vector<TableViolation> out;
  for (std::size_t c = 0; c < table.contexts().size(); ++c) {
    const auto& rays = table.contexts()[c].rays;
    for (std::size_t i = 0; i < kContextSize; ++i) {
      for (std::size_t j = i + 1; j < kContextSize; ++j) {
        if (rays[i].dot(rays[j]) != 0) {
          out.push_back({TableViolation::Kind::NotOrthogonal, c, rays[i],
                         context_label(c) + ": " + rays[i].to_string() + " is not orthogonal to " +
                             rays[j].to_string()});
        }
      }
    }
  }
  return out;
}

std::vector<TableViolation> validate_table(const KSTable& table) {
  auto out = validate_contexts(table);
  if (table.contexts().size() != 9) {
    out.push_back({TableViolation::Kind::ContextCount, std::nullopt, std::nullopt,
                   "expected 9 contexts, found " + std::to_string(table.contexts().size())});
  }
  if (table.distinct_rays() != 18) {
    out.push_back({TableViolation::Kind::DistinctRayCount, std::nullopt, std::nullopt,
                   "expected 18 distinct rays, found " + std::to_string(table.distinct_rays())});
  }
  for (const auto& [ray, occurrences] : table.ray_index()) {
    if (occurrences.size() == 2) continue;
    std::string where;
    for (const auto& occ : occurrences) where += (where.empty() ? "" : ",") + context_label(occ.context);
    out.push_back({TableViolation::Kind::Multiplicity, occurrences.front().context, ray,
                   ray.to_string() + " occurs " + std::to_string(occurrences.size()) +
                       " times (" + where + "), expected 2"});
  }
  return out;
}

ColoringResult ks_coloring_search(const KSTable& table) {
  require_valid_contexts(table);
  const std::size_t n = table.contexts().size();

  // Consecutive occurrences of a ray must agree on "chosen or not".
  struct Link {
    std::uint32_t shift_a, pos_a, shift_b, pos_b;
  };
  std::vector<Link> links;
  for (const auto& [ray, occ] : table.ray_index()) {
    for (std::size_t i = 1; i < occ.size(); ++i) {
      links.push_back({static_cast<std::uint32_t>(2 * occ[i - 1].context),
                       static_cast<std::uint32_t>(occ[i - 1].position),
                       static_cast<std::uint32_t>(2 * occ[i].context),
                       static_cast<std::uint32_t>(occ[i].position)});
    }
  }

  const std::uint64_t space = search_space(n);
  const auto count = static_cast<std::int64_t>(space);
  std::uint64_t found = 0;
#pragma omp parallel for schedule(static) reduction(+ : found)
  for (std::int64_t code = 0; code < count; ++code) {
    const auto u = static_cast<std::uint64_t>(code);
    bool ok = true;
    for (const Link& l : links) {
      const bool a = ((u >> l.shift_a) & 3U) == l.pos_a;
      const bool b = ((u >> l.shift_b) & 3U) == l.pos_b;
      if (a != b) {
        ok = false;
        break;
      }
    }
    if (ok) ++found;
  }
  return {found > 0, found, space};
}

ColoringResult ks_coloring_search_serial(const KSTable& table) {
  require_valid_contexts(table);
  const auto& contexts = table.contexts();
  const std::uint64_t space = search_space(contexts.size());
  std::uint64_t found = 0;
  std::vector<std::size_t> choice(contexts.size(), 0);
  for (std::uint64_t code = 0; code < space; ++code) {
    std::uint64_t rest = code;
    for (auto& c : choice) {
      c = rest % kContextSize;
      rest /= kContextSize;
    }
    std::map<Ray, int> value;
    bool consistent = true;
    for (std::size_t c = 0; c < contexts.size() && consistent; ++c) {
      for (std::size_t p = 0; p < kContextSize; ++p) {
        const int v = p == choice[c] ? 1 : 0;
        const auto [it, inserted] = value.emplace(contexts[c].rays[p], v);
        if (!inserted && it->second != v) {
          consistent = false;
          break;
        }
      }
    }
    if (consistent) ++found;
  }
  return {found > 0, found, space};
}

bool parity_certificate(const KSTable& table) {
  require_valid_contexts(table);
  if (table.contexts().size() % 2 == 0) return false;
  for (const auto& [ray, occ] : table.ray_index()) {
    if (occ.size() % 2 != 0) return false;
  }
  return true;
}

std::string format_table(const KSTable& table) {
  std::string out;
  for (const auto& context : table.contexts()) {
    for (std::size_t p = 0; p < kContextSize; ++p) {
      if (p) out += ' ';
      out += context.rays[p].to_string();
    }
    out += '\n';
  }
  return out;
}

KSTable parse_table(std::string_view text) {
  std::vector<Context> contexts;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::vector<Ray> rays;
    std::size_t pos = 0;
    while (pos < line.size()) {
      const auto open = line.find('(', pos);
      if (open == std::string_view::npos) {
        if (!trim(line.substr(pos)).empty()) {
          throw ParseError("line " + std::to_string(line_no) + ": unexpected text outside a ray");
        }
        break;
      }
      if (!trim(line.substr(pos, open - pos)).empty()) {
        throw ParseError("line " + std::to_string(line_no) + ": unexpected text between rays");
      }
      const auto close = line.find(')', open);
      if (close == std::string_view::npos) {
        throw ParseError("line " + std::to_string(line_no) + ": unterminated ray");
      }
      rays.push_back(parse_ray(line.substr(open, close - open + 1)));
      pos = close + 1;
    }
    if (rays.size() != kContextSize) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 4 rays, found " +
                       std::to_string(rays.size()));
    }
    contexts.push_back(Context{{rays[0], rays[1], rays[2], rays[3]}});
  }
  if (contexts.empty()) throw ParseError("table has no contexts");
  return KSTable(std::move(contexts));
}

StateVector twin_state() {
  Vector v = Vector::Zero(16);
  for (int k = 0; k < 4; ++k) v[k * 4 + k] = 0.5;
  return StateVector::normalized(std::move(v));
}

Matrix context_coefficients(const StateVector& shared, const Context& context) {
  if (shared.dim() != kRayDim * kRayDim) throw DimensionMismatch("shared state must be 4 x 4");
  Matrix c(static_cast<Eigen::Index>(kContextSize), static_cast<Eigen::Index>(kContextSize));
  for (std::size_t a = 0; a < kContextSize; ++a) {
    const StateVector va = StateVector::normalized(context.rays[a].unit_vector());
    for (std::size_t b = 0; b < kContextSize; ++b) {
      const StateVector vb = StateVector::normalized(context.rays[b].unit_vector());
      c(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          inner_product(tensor(va, vb), shared);
    }
  }
  return c;
}

ProjectiveMeasurement context_measurement(const Context& context) {
  std::vector<Vector> basis;
  for (const Ray& r : context.rays) basis.push_back(r.unit_vector());
  return ProjectiveMeasurement::from_basis(basis);
}

FwtProtocol::FwtProtocol(KSTable table) : table_(std::move(table)), shared_(twin_state()) {
  const auto violations = validate_contexts(table_);
  if (!violations.empty()) throw InvalidTable(violations.front().message);
  const Subsystems dims{kRayDim, kRayDim};
  for (const auto& [ray, occ] : table_.ray_index()) {
    rays_.push_back(ray);
    bob_.push_back(ProjectiveMeasurement::local(ProjectiveMeasurement::binary(ray.unit_vector()), dims,
                                                Side::B));
  }
  for (const auto& context : table_.contexts()) {
    alice_.push_back(ProjectiveMeasurement::local(context_measurement(context), dims, Side::A));
  }
}

std::optional<std::size_t> FwtProtocol::ray_id(const Ray& ray) const {
  for (std::size_t i = 0; i < rays_.size(); ++i) {
    if (rays_[i] == ray) return i;
  }
  return std::nullopt;
}

FwtTrial FwtProtocol::trial(std::size_t context, std::size_t bob_ray, CollapsePolicy& alice_policy,
                            Rng& rng) const {
  if (context >= alice_.size()) throw BadParameter("context index out of range");
  if (bob_ray >= bob_.size()) throw BadParameter("ray index out of range");
  FwtTrial t;
  t.alice_context = context;
  t.bob_ray = bob_ray;
  const OutcomeSample alice = sample_outcome(alice_policy, shared_, alice_[context], rng);
  t.alice_outcome = alice.outcome;
  t.forbidden_attempted = alice.forbidden_attempted;
  const StateVector after = collapse(shared_, alice_[context], alice.outcome);
  const ProbabilityDistribution bob = born_distribution(after, bob_[bob_ray]);
  t.bob_value = sample_index(bob.probs(), rng) == 0 ? 1 : 0;

  const auto& rays = table_.contexts()[context].rays;
  t.alice_value = AliceValue::NotInContext;
  for (std::size_t p = 0; p < kContextSize; ++p) {
    if (rays[p] == rays_[bob_ray]) {
      t.alice_value = p == alice.outcome ? AliceValue::One : AliceValue::Zero;
    }
  }
  return t;
}

double FwtProtocol::overlap2(std::size_t bob_ray, std::size_t context, std::size_t position) const {
  const Ray& k = rays_.at(bob_ray);
  const Ray& a = table_.contexts().at(context).rays.at(position);
  const double d = static_cast<double>(k.dot(a));
  return d * d / (static_cast<double>(k.norm2()) * static_cast<double>(a.norm2()));
}

FwtTrial fwt_trial(std::size_t context, const Ray& bob_ray, CollapsePolicy& alice_policy, Rng& rng) {
  static const FwtProtocol protocol(builtin_ks_table());
  const auto id = protocol.ray_id(bob_ray);
  if (!id) throw BadParameter("ray " + bob_ray.to_string() + " is not in the table");
  return protocol.trial(context, *id, alice_policy, rng);
}

FwtSummary fwt_experiment(const FwtProtocol& protocol, const FwtSettings& settings,
                          const CollapsePolicy& policy, std::uint64_t trials, std::uint64_t seed,
                          Execution exec) {
  const std::size_t n_contexts = protocol.table().contexts().size();
  if (n_contexts == 0) throw InvalidTable("table has no contexts");
  if (settings.context && *settings.context >= n_contexts) throw BadParameter("context out of range");
  if (settings.bob_ray && *settings.bob_ray >= protocol.rays().size()) {
    throw BadParameter("ray out of range");
  }

  auto choose = [&](Rng& rng) {
    const std::size_t context = settings.context ? *settings.context : uniform_index(rng, n_contexts);
    std::size_t ray;
    if (settings.bob_ray) {
      ray = *settings.bob_ray;
    } else if (settings.selection == RaySelection::InContext) {
      const auto& rays = protocol.table().contexts()[context].rays;
      ray = *protocol.ray_id(rays[uniform_index(rng, kContextSize)]);
    } else {
      ray = uniform_index(rng, protocol.rays().size());
    }
    return std::pair{context, ray};
  };

  FwtSummary summary;
  if (is_scripted(policy)) {
    CollapsePolicy shared = policy;
    summary.trials = run_trials_serial(trials, seed, [&](std::uint64_t, Rng& rng) {
      const auto [context, ray] = choose(rng);
      return protocol.trial(context, ray, shared, rng);
    });
  } else {
    summary.trials = run_trials(exec, trials, seed, [&](std::uint64_t, Rng& rng) {
      CollapsePolicy local = policy;
      const auto [context, ray] = choose(rng);
      return protocol.trial(context, ray, local, rng);
    });
  }

  for (const FwtTrial& t : summary.trials) {
    if (t.forbidden_attempted) ++summary.forbidden_attempts;
    if (t.in_context()) {
      ++summary.in_context;
      if (t.agrees()) ++summary.agreements;
    } else {
      ++summary.out_of_context;
      const double p = protocol.overlap2(t.bob_ray, t.alice_context, t.alice_outcome);
      summary.out_of_context_expected += p;
      summary.out_of_context_variance += p * (1.0 - p);
      if (t.bob_value == 1) ++summary.out_of_context_detections;
    }
  }
  return summary;
}

}  // namespace weakcollapse::ks
