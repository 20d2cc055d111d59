#include "flexbid/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace flexbid::strategy {

namespace {

std::string strip_ws(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

double parse_num(const std::string& text) {
  size_t pos = 0;
  double v = std::stod(text, &pos);
  if (pos != text.size()) throw ConfigError("strategy: bad number '" + text + "'");
  return v;
}

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

std::string StrategySpec::canonical_name(const SplitPolicy& split,
                                         const PenaltyPolicy& penalty) {
  std::string left = split.free ? "free"
                                : "(" + fmt_num(split.da_mw) + "," +
                                      fmt_num(split.afrr_mw) + ")";
  std::string right = penalty.free ? "free" : fmt_num(penalty.coefficient);
  return "(" + left + "|" + right + ")";
}

StrategySpec StrategySpec::parse(const std::string& text) {
  std::string s = strip_ws(text);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') {
    throw ConfigError("strategy '" + text + "' must look like ((a,b)|c) or (free|c)");
  }
  std::string body = s.substr(1, s.size() - 2);
  // Split at the '|' outside any nested parentheses.
  int depth = 0;
  std::size_t bar = std::string::npos;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '(') ++depth;
    else if (body[i] == ')') --depth;
    else if (body[i] == '|' && depth == 0) { bar = i; break; }
  }
  if (bar == std::string::npos) {
    throw ConfigError("strategy '" + text + "' is missing the | separator");
  }
  std::string left = body.substr(0, bar);
  std::string right = body.substr(bar + 1);

  StrategySpec spec;
  if (left == "free") {
    spec.split = SplitPolicy::make_free();
  } else {
    if (left.size() < 2 || left.front() != '(' || left.back() != ')') {
      throw ConfigError("strategy split '" + left + "' must be free or (a,b)");
    }
    std::string inner = left.substr(1, left.size() - 2);
    auto comma = inner.find(',');
    if (comma == std::string::npos) {
      throw ConfigError("strategy split '" + left + "' must be (a,b)");
    }
    double a = parse_num(inner.substr(0, comma));
    double b = parse_num(inner.substr(comma + 1));
    if (a < 0 || b < 0) throw ConfigError("fixed split values must be >= 0");
    spec.split = SplitPolicy::fixed(a, b);
  }
  if (right == "free") {
    spec.penalty = PenaltyPolicy::make_free();
  } else {
    double c = parse_num(right);
    if (c < 0) throw ConfigError("penalty coefficient must be >= 0");
    spec.penalty = PenaltyPolicy::fixed(c);
  }
  spec.name = canonical_name(spec.split, spec.penalty);
  return spec;
}

std::vector<StrategySpec> parse_strategy_list(const std::string& text) {
  // Strategies are separated by commas at parenthesis depth zero.
  std::vector<StrategySpec> out;
  std::string s = strip_ws(text);
  int depth = 0;
  std::string current;
  auto flush = [&]() {
    if (!current.empty()) {
      out.push_back(StrategySpec::parse(current));
      current.clear();
    }
  };
  for (char c : s) {
    if (c == ',' && depth == 0) {
      flush();
      continue;
    }
    if (c == '(') ++depth;
    if (c == ')') --depth;
    current.push_back(c);
  }
  flush();
  if (out.empty()) throw ConfigError("empty strategy list");
  return out;
}

MarketFeatures compute_features(const ingest::ValidatedDataset& ds, Date date,
                                int window_days) {
  MarketFeatures f;
  double sum = 0.0, sumsq = 0.0;
  int count = 0;
  double sre_sum = 0.0;
  int sre_count = 0;
  double marg_sum = 0.0;
  int marg_count = 0;

  for (int back = window_days; back >= 1; --back) {
    Date day = date - back;
    if (!ds.has_realized_day(day)) {
      throw HistoryError("features for " + date.to_string() + " need realized prices on " +
                         day.to_string());
    }
    for (int h = 0; h < 24; ++h) {
      double p = ds.realized_price(day, h);
      sum += p;
      sumsq += p * p;
      ++count;
    }
    for (int k = 1; k <= ProductBlock::kCount; ++k) {
      const auto& merit = ds.merit(day, k, Direction::pos);
      const auto& act = ds.activation(day, Direction::pos);
      auto block = act.block_samples(k);
      double mean_mw = 0.0;
      for (double v : block) mean_mw += v;
      mean_mw /= static_cast<double>(block.size());
      // Price of the merit tier that typical activation reaches.
      double price = merit.points.back().price;
      for (const auto& p : merit.points) {
        if (p.cumulative_volume >= mean_mw) {
          price = p.price;
          break;
        }
      }
      sre_sum += price;
      ++sre_count;
      for (Direction dir : kDirections) {
        marg_sum += ds.src_marginal(day, k, dir);
        ++marg_count;
      }
    }
  }

  f.da_mean = sum / count;
  f.da_std = std::sqrt(std::max(0.0, sumsq / count - f.da_mean * f.da_mean));
  f.sre_pos_price = sre_sum / sre_count;
  f.src_marginal_mean = marg_sum / marg_count;
  return f;
}

PenaltySelector::PenaltySelector(std::vector<double> ladder,
                                 double default_coefficient, int clusters,
                                 unsigned seed)
    : ladder_(std::move(ladder)),
      default_coefficient_(default_coefficient),
      clusters_(clusters),
      seed_(seed) {
  if (ladder_.empty()) throw ConfigError("penalty ladder is empty");
  if (clusters_ < 1) throw ConfigError("cluster count must be >= 1");
  std::sort(ladder_.begin(), ladder_.end());
}

void PenaltySelector::fit(const std::vector<MarketFeatures>& window) {
  fitted_ = true;
  const int n = static_cast<int>(window.size());
  if (n < clusters_ || clusters_ == 1) {
    degenerate_ = true;
    return;
  }
  degenerate_ = false;

  // Standardize per feature over the fit window.
  std::vector<std::array<double, 4>> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = window[i].as_array();
  for (int d = 0; d < 4; ++d) {
    double s = 0.0, ss = 0.0;
    for (const auto& p : pts) {
      s += p[d];
      ss += p[d] * p[d];
    }
    mean_[d] = s / n;
    double var = std::max(0.0, ss / n - mean_[d] * mean_[d]);
    std_[d] = var > 1e-24 ? std::sqrt(var) : 1.0;
  }
  for (auto& p : pts) {
    for (int d = 0; d < 4; ++d) p[d] = (p[d] - mean_[d]) / std_[d];
  }

  auto dist2 = [](const std::array<double, 4>& a, const std::array<double, 4>& b) {
    double s = 0.0;
    for (int d = 0; d < 4; ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
    return s;
  };

  // Seeded first center, then farthest-first for the rest.
  std::mt19937 rng(seed_);
  centers_.clear();
  centers_.push_back(pts[rng() % n]);
  while (static_cast<int>(centers_.size()) < clusters_) {
    int far = 0;
    double far_d = -1.0;
    for (int i = 0; i < n; ++i) {
      double dmin = dist2(pts[i], centers_[0]);
      for (const auto& c : centers_) dmin = std::min(dmin, dist2(pts[i], c));
      if (dmin > far_d) {
        far_d = dmin;
        far = i;
      }
    }
    centers_.push_back(pts[far]);
  }

  std::vector<int> owner(n, 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = dist2(pts[i], centers_[0]);
      for (int c = 1; c < clusters_; ++c) {
        double d = dist2(pts[i], centers_[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (owner[i] != best) {
        owner[i] = best;
        changed = true;
      }
    }
    std::vector<std::array<double, 4>> next(clusters_, {0, 0, 0, 0});
    std::vector<int> size(clusters_, 0);
    for (int i = 0; i < n; ++i) {
      for (int d = 0; d < 4; ++d) next[owner[i]][d] += pts[i][d];
      ++size[owner[i]];
    }
    for (int c = 0; c < clusters_; ++c) {
      if (size[c] == 0) {
        // Re-seed an empty cluster at the point farthest from its center.
        int far = 0;
        double far_d = -1.0;
        for (int i = 0; i < n; ++i) {
          double d = dist2(pts[i], centers_[owner[i]]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        centers_[c] = pts[far];
        changed = true;
        continue;
      }
      for (int d = 0; d < 4; ++d) centers_[c][d] = next[c][d] / size[c];
    }
    if (!changed) break;
  }

  // Volatility rank (standardized da_std is dimension 1) decides the rung.
  std::vector<int> order(clusters_);
  for (int c = 0; c < clusters_; ++c) order[c] = c;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return centers_[a][1] < centers_[b][1];
  });
  coefficient_by_center_.assign(clusters_, default_coefficient_);
  const int rungs = static_cast<int>(ladder_.size());
  for (int rank = 0; rank < clusters_; ++rank) {
    int idx = static_cast<int>(std::lround(
        static_cast<double>(rank) * (rungs - 1) / (clusters_ - 1)));
    coefficient_by_center_[order[rank]] = ladder_[idx];
  }
}

int PenaltySelector::assign(const std::array<double, 4>& z) const {
  int best = 0;
  double best_d = 0.0;
  for (int c = 0; c < static_cast<int>(centers_.size()); ++c) {
    double d = 0.0;
    for (int k = 0; k < 4; ++k) d += (z[k] - centers_[c][k]) * (z[k] - centers_[c][k]);
    if (c == 0 || d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

double PenaltySelector::select(const MarketFeatures& f) const {
  if (!fitted_) throw Error("penalty selector used before fitting");
  if (degenerate_) return default_coefficient_;
  std::array<double, 4> z = f.as_array();
  for (int d = 0; d < 4; ++d) z[d] = (z[d] - mean_[d]) / std_[d];
  return coefficient_by_center_[assign(z)];
}

}  // namespace flexbid::strategy
