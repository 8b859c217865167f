#include "actsearch/clumps.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>

namespace actsearch {

int ClumpSpace::num_points() const {
  int n = 0;
  for (const auto& c : clumps) n += c.size;
  return n;
}

void ClumpSpace::validate() const {
  if (clumps.empty()) throw config_error("clump space has no clumps");
  for (const auto& c : clumps) {
    if (c.size < 1) throw config_error("clump size must be >= 1");
    if (!(c.prob > 0.0 && c.prob < 1.0))
      throw config_error("clump probability must lie in (0,1), got " + std::to_string(c.prob));
  }
}

ClumpSpace load_clump_space(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw parse_error(path.string() + ": cannot open");
  ClumpSpace space;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string cell;
    std::array<std::string, 3> cells;
    int got = 0;
    while (std::getline(ss, cell, ',') && got < 3) cells[static_cast<std::size_t>(got++)] = cell;
    if (got != 3)
      throw parse_error(path.string() + ":" + std::to_string(line_no) +
                        ": expected count,size,prob");
    try {
      const int count = std::stoi(cells[0]);
      const int size = std::stoi(cells[1]);
      const double prob = std::stod(cells[2]);
      if (count < 1) throw std::invalid_argument("count");
      for (int i = 0; i < count; ++i) space.clumps.push_back(Clump{size, prob});
    } catch (const std::exception&) {
      throw parse_error(path.string() + ":" + std::to_string(line_no) + ": malformed clump row '" +
                        line + "'");
    }
  }
  space.validate();
  return space;
}

// ---------------------------------------------------------------------------
// ClumpModel

ClumpModel::ClumpModel(ClumpSpace space) : space_(std::move(space)) {
  space_.validate();
  for (int c = 0; c < static_cast<int>(space_.clumps.size()); ++c)
    for (int i = 0; i < space_.clumps[static_cast<std::size_t>(c)].size; ++i)
      clump_of_.push_back(c);
  total_points_ = static_cast<int>(clump_of_.size());
  status_.assign(space_.clumps.size(), kUnobserved);
  queried_.assign(static_cast<std::size_t>(total_points_), 0);
}

double ClumpModel::posterior(PointId x) const {
  if (x < 0 || x >= total_points_) throw usage_error("point id out of range");
  if (is_labeled(x)) throw usage_error("posterior queried for a labeled point");
  switch (status_[static_cast<std::size_t>(clump_of(x))]) {
    case kTarget:
      return 1.0;
    case kNontarget:
      return 0.0;
    default:
      return space_.clumps[static_cast<std::size_t>(clump_of(x))].prob;
  }
}

void ClumpModel::condition(PointId x, int y) {
  if (x < 0 || x >= total_points_) throw usage_error("point id out of range");
  if (is_labeled(x)) throw usage_error("point " + std::to_string(x) + " is already labeled");
  if (y != 0 && y != 1) throw usage_error("label must be 0 or 1");
  const auto c = static_cast<std::size_t>(clump_of(x));
  const signed char prev = status_[c];
  if ((prev == kTarget && y != 1) || (prev == kNontarget && y != 0))
    throw usage_error("observation contradicts the revealed clump label");
  status_[c] = (y == 1) ? kTarget : kNontarget;
  queried_[static_cast<std::size_t>(x)] = 1;
  ++queried_total_;
  positives_ += y;
  undo_.push_back(UndoRecord{x, static_cast<signed char>(y), prev});
}

void ClumpModel::undo_last() {
  if (undo_.empty()) throw usage_error("undo stack is empty");
  const auto rec = undo_.back();
  undo_.pop_back();
  status_[static_cast<std::size_t>(clump_of(rec.point))] = rec.prev_status;
  queried_[static_cast<std::size_t>(rec.point)] = 0;
  --queried_total_;
  positives_ -= rec.label;
}

std::unique_ptr<PosteriorModel> ClumpModel::clone() const {
  return std::make_unique<ClumpModel>(*this);
}

std::uint64_t ClumpModel::fingerprint() const {
  std::uint64_t h = fnv1a(status_.data(), status_.size());
  h = fnv1a(queried_.data(), queried_.size(), h);
  return h;
}

double ClumpModel::posterior_upper_bound(int n) const {
  if (n < 0) throw usage_error("n must be >= 0");
  if (num_unlabeled() == 0) throw usage_error("no unlabeled points remain");
  if (n >= 1) return 1.0;  // one positive reveals a whole clump
  double best = 0.0;
  for (PointId x = 0; x < total_points_; ++x)
    if (!is_labeled(x)) best = std::max(best, posterior(x));
  return best;
}

// ---------------------------------------------------------------------------
// Exact policy DP
//
// The lookahead value collapses clumps into kinds (type, status, remaining):
// members of same-kind clumps are exchangeable inside a max. The episode
// value keeps the ordered per-clump status vector, because the engine's
// lowest-id tie-break distinguishes clumps the value function cannot.

namespace {

enum KStatus : int { ksUnobserved = 0, ksTarget = 1, ksNontarget = 2 };

struct Kind {
  int type;
  int status;
  int remaining;

  friend bool operator<(const Kind& a, const Kind& b) {
    return std::tie(a.type, a.status, a.remaining) < std::tie(b.type, b.status, b.remaining);
  }
  friend bool operator==(const Kind& a, const Kind& b) {
    return a.type == b.type && a.status == b.status && a.remaining == b.remaining;
  }
};

// Sorted (kind, count) aggregation of every clump with queryable members.
using KindState = std::vector<std::pair<Kind, int>>;

void add_kind(KindState& s, const Kind& k, int delta) {
  for (auto it = s.begin(); it != s.end(); ++it) {
    if (it->first == k) {
      it->second += delta;
      if (it->second == 0) s.erase(it);
      return;
    }
  }
  if (delta != 0) s.emplace_back(k, delta);
  std::sort(s.begin(), s.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
}

std::string key_of(const KindState& s, int h) {
  std::string key;
  key.reserve(s.size() * 4 * sizeof(int) + sizeof(int));
  auto put = [&key](int v) {
    key.append(reinterpret_cast<const char*>(&v), sizeof(int));
  };
  for (const auto& [k, count] : s) {
    put(k.type);
    put(k.status);
    put(k.remaining);
    put(count);
  }
  put(h);
  return key;
}

class ClumpDp {
 public:
  explicit ClumpDp(const ClumpSpace& space) : space_(space) {
    space_.validate();
    for (const auto& c : space_.clumps) {
      int t = -1;
      for (int i = 0; i < static_cast<int>(types_.size()); ++i)
        if (types_[static_cast<std::size_t>(i)].size == c.size &&
            types_[static_cast<std::size_t>(i)].prob == c.prob)
          t = i;
      if (t < 0) {
        t = static_cast<int>(types_.size());
        types_.push_back(c);
      }
      type_of_.push_back(t);
    }
  }

  double episode_value(int lookahead, int budget) {
    std::vector<std::pair<int, int>> clumps;  // per clump: status, queried
    clumps.assign(space_.clumps.size(), {ksUnobserved, 0});
    return episode(clumps, lookahead, budget);
  }

  double query_value(int clump_index, int horizon) {
    if (clump_index < 0 || clump_index >= static_cast<int>(space_.clumps.size()))
      throw usage_error("clump index out of range");
    if (horizon < 1) throw usage_error("horizon must be >= 1");
    std::vector<std::pair<int, int>> clumps;
    clumps.assign(space_.clumps.size(), {ksUnobserved, 0});
    const KindState s = project(clumps);
    return q_value(s, kind_of(clump_index, clumps[static_cast<std::size_t>(clump_index)]),
                   horizon);
  }

 private:
  Kind kind_of(int clump, const std::pair<int, int>& st) const {
    const auto& c = space_.clumps[static_cast<std::size_t>(clump)];
    return Kind{type_of_[static_cast<std::size_t>(clump)], st.first, c.size - st.second};
  }

  KindState project(const std::vector<std::pair<int, int>>& clumps) const {
    KindState s;
    for (int c = 0; c < static_cast<int>(clumps.size()); ++c) {
      const Kind k = kind_of(c, clumps[static_cast<std::size_t>(c)]);
      if (k.remaining > 0) add_kind(s, k, 1);
    }
    return s;
  }

  double kind_posterior(const Kind& k) const {
    if (k.status == ksTarget) return 1.0;
    if (k.status == ksNontarget) return 0.0;
    return types_[static_cast<std::size_t>(k.type)].prob;
  }

  // Kind transition after querying one member and observing y.
  Kind after(const Kind& k, int y) const {
    Kind next = k;
    if (k.status == ksUnobserved) next.status = (y == 1) ? ksTarget : ksNontarget;
    next.remaining = k.remaining - 1;
    return next;
  }

  double q_value(const KindState& s, const Kind& k, int h) {
    const double p = kind_posterior(k);
    double v1 = 0.0;
    double v0 = 0.0;
    if (h > 1) {
      if (p > 0.0) {
        KindState s1 = s;
        add_kind(s1, k, -1);
        const Kind n1 = after(k, 1);
        if (n1.remaining > 0) add_kind(s1, n1, 1);
        v1 = lookahead_value(s1, h - 1);
      }
      if (p < 1.0) {
        KindState s0 = s;
        add_kind(s0, k, -1);
        const Kind n0 = after(k, 0);
        if (n0.remaining > 0) add_kind(s0, n0, 1);
        v0 = lookahead_value(s0, h - 1);
      }
    }
    return p * (1.0 + v1) + (1.0 - p) * v0;
  }

  double lookahead_value(const KindState& s, int h) {
    if (s.empty()) return 0.0;
    if (h == 1) {
      double best = 0.0;
      for (const auto& [k, count] : s) best = std::max(best, kind_posterior(k));
      return best;
    }
    const std::string key = key_of(s, h);
    if (auto it = value_memo_.find(key); it != value_memo_.end()) return it->second;
    double best = 0.0;
    bool first = true;
    for (const auto& [k, count] : s) {
      const double q = q_value(s, k, h);
      if (first || q > best) {
        best = q;
        first = false;
      }
    }
    value_memo_.emplace(key, best);
    return best;
  }

  double episode(std::vector<std::pair<int, int>>& clumps, int lookahead, int budget) {
    if (budget == 0) return 0.0;
    std::string key;
    key.reserve(clumps.size() * 2 * sizeof(int) + sizeof(int));
    auto put = [&key](int v) { key.append(reinterpret_cast<const char*>(&v), sizeof(int)); };
    for (const auto& [st, q] : clumps) {
      put(st);
      put(q);
    }
    put(budget);
    if (auto it = episode_memo_.find(key); it != episode_memo_.end()) return it->second;

    const int h = std::min(lookahead, budget);
    const KindState s = project(clumps);

    // The policy's decision: clumps ascend in id order, strict improvement,
    // so equal-value ties resolve to the lowest point id exactly as the
    // engine does.
    int best_clump = -1;
    double best_q = 0.0;
    for (int c = 0; c < static_cast<int>(clumps.size()); ++c) {
      const Kind k = kind_of(c, clumps[static_cast<std::size_t>(c)]);
      if (k.remaining == 0) continue;
      const double q = q_value(s, k, h);
      if (best_clump < 0 || q > best_q) {
        best_clump = c;
        best_q = q;
      }
    }
    if (best_clump < 0) throw usage_error("budget exceeds the queryable points");

    auto& chosen = clumps[static_cast<std::size_t>(best_clump)];
    const Kind k = kind_of(best_clump, chosen);
    const double p = kind_posterior(k);
    const auto saved = chosen;

    double e1 = 0.0;
    if (p > 0.0) {
      chosen = {ksTarget, saved.second + 1};
      e1 = episode(clumps, lookahead, budget - 1);
      chosen = saved;
    }
    double e0 = 0.0;
    if (p < 1.0) {
      chosen = {ksNontarget, saved.second + 1};
      e0 = episode(clumps, lookahead, budget - 1);
      chosen = saved;
    }
    const double value = p * (1.0 + e1) + (1.0 - p) * e0;
    episode_memo_.emplace(std::move(key), value);
    return value;
  }

  ClumpSpace space_;
  std::vector<Clump> types_;
  std::vector<int> type_of_;
  std::unordered_map<std::string, double> value_memo_;
  std::unordered_map<std::string, double> episode_memo_;
};

}  // namespace

double exact_policy_value(const ClumpSpace& space, int lookahead, int budget) {
  space.validate();
  if (lookahead < 1) throw usage_error("lookahead must be >= 1");
  if (budget < 0) throw config_error("budget must be >= 0");
  if (budget > space.num_points())
    throw config_error("budget " + std::to_string(budget) + " exceeds the point count " +
                       std::to_string(space.num_points()));
  ClumpDp dp(space);
  return dp.episode_value(lookahead, budget);
}

double clump_query_value(const ClumpSpace& space, int clump_index, int horizon) {
  space.validate();
  ClumpDp dp(space);
  return dp.query_value(clump_index, horizon);
}

// ---------------------------------------------------------------------------
// Closed forms

namespace {

void check_prob(double p, const char* name) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error(std::string(name) + " must lie in (0,1)");
}

}  // namespace

double eq2_value(double eps, int t) {
  check_prob(eps, "eps");
  if (t < 1) throw std::domain_error("t must be >= 1");
  double sum = 0.0;
  double miss = 1.0;  // (1-eps)^{i-1}
  for (int i = 1; i <= t; ++i) {
    sum += eps * miss * static_cast<double>(t - i + 1);
    miss *= 1.0 - eps;
  }
  const double closed = eq2_closed_form(eps, t);
  if (std::abs(sum - closed) > 1e-12 * std::max(1.0, std::abs(sum)))
    throw std::logic_error("summation and closed form disagree");
  return sum;
}

double eq2_closed_form(double eps, int t) {
  check_prob(eps, "eps");
  if (t < 1) throw std::domain_error("t must be >= 1");
  return (std::pow(1.0 - eps, t + 1) + eps * t + eps - 1.0) / eps;
}

double eq3_bound(double delta, int lookahead, int t) {
  check_prob(delta, "delta");
  if (lookahead < 1) throw std::domain_error("lookahead must be >= 1");
  if (t < 1) throw std::domain_error("t must be >= 1");
  const double l = static_cast<double>(lookahead);
  return (static_cast<double>(t) + l) * delta * l / (delta * (l - 1.0) + 1.0);
}

double clump_difference(double eps, double delta, int lookahead) {
  check_prob(eps, "eps");
  check_prob(delta, "delta");
  if (!(eps < delta)) throw std::domain_error("requires eps < delta");
  if (lookahead < 1) throw std::domain_error("lookahead must be >= 1");
  const double me = std::pow(1.0 - eps, lookahead);
  const double md = std::pow(1.0 - delta, lookahead);
  return me - md + (md - 1.0) / delta - (me - 1.0) / eps;
}

std::optional<CrossoverResult> lemma1_crossover(int lookahead, int m, int k, double delta) {
  if (!(lookahead >= 1 && lookahead < m && m <= k))
    throw config_error("requires 1 <= lookahead < m <= k");
  check_prob(delta, "delta");

  const auto evaluate = [&](double eps) {
    const ClumpSpace space{{Clump{k, eps}, Clump{lookahead, delta}}};
    return std::pair<double, double>{clump_query_value(space, 0, m),
                                     clump_query_value(space, 1, m)};
  };
  const auto gap = [&](double eps) {
    const auto [large, small] = evaluate(eps);
    return large - small;
  };

  double lo = delta * 1e-6;
  double hi = delta * (1.0 - 1e-12);
  if (gap(hi) <= 0.0) return std::nullopt;

  double boundary;
  if (gap(lo) > 0.0) {
    boundary = lo;
  } else {
    // Bisect the sign change; the upper end stays certified positive.
    while (hi - lo > 1e-9) {
      const double mid = 0.5 * (lo + hi);
      if (gap(mid) > 0.0)
        hi = mid;
      else
        lo = mid;
    }
    boundary = hi;
  }

  // Prefer the interior of the certified region; certification is always a
  // fresh evaluation of both sides, never the bisection transcript.
  for (const double eps : {0.5 * (boundary + delta), boundary}) {
    if (!(eps > 0.0 && eps < delta)) continue;
    const auto [large, small] = evaluate(eps);
    if (large > small) return CrossoverResult{eps, large, small};
  }
  return std::nullopt;
}

double theorem1_ratio_bound(double eps, double delta, int lookahead, int t) {
  check_prob(eps, "eps");
  check_prob(delta, "delta");
  if (!(eps < delta)) throw std::domain_error("requires eps < delta");
  if (lookahead < 1) throw std::domain_error("lookahead must be >= 1");
  if (t < 1) throw std::domain_error("t must be >= 1");
  const double l = static_cast<double>(lookahead);
  const double direct = (std::pow(1.0 - eps, t + 1) + eps * t + eps - 1.0) *
                        (delta * (l - 1.0) + 1.0) /
                        (eps * delta * l * (static_cast<double>(t) + l));
  const double via_parts = eq2_value(eps, t) / eq3_bound(delta, lookahead, t);
  if (std::abs(direct - via_parts) > 1e-12 * std::max(1.0, std::abs(direct)))
    throw std::logic_error("ratio computations disagree");
  return direct;
}

}  // namespace actsearch
