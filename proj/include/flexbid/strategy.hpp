// Per-day strategy parameters: the flexibility split policy and the penalty
// coefficient, including the "free" coefficient picked by clustering market
// volatility features.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "flexbid/common.hpp"
#include "flexbid/config.hpp"
#include "flexbid/data_ingest.hpp"

namespace flexbid::strategy {

// Named strategies follow the "((a,b) | c)" grammar: a fixed split (a, b) or
// "free", and a fixed penalty coefficient or "free".
struct StrategySpec {
  std::string name;
  SplitPolicy split;
  PenaltyPolicy penalty;

  static StrategySpec parse(const std::string& text);
  static std::string canonical_name(const SplitPolicy& split,
                                    const PenaltyPolicy& penalty);
};

std::vector<StrategySpec> parse_strategy_list(const std::string& text);

// Trailing-window market state, computed strictly from data before the day.
struct MarketFeatures {
  double da_mean = 0.0;          // mean realized day-ahead price
  double da_std = 0.0;           // population std of realized prices
  double sre_pos_price = 0.0;    // top-of-merit activation-weighted price
  double src_marginal_mean = 0.0;

  std::array<double, 4> as_array() const {
    return {da_mean, da_std, sre_pos_price, src_marginal_mean};
  }
};

MarketFeatures compute_features(const ingest::ValidatedDataset& ds, Date date,
                                int window_days = 30);

// k-means over standardized features with a fixed seed; cluster centers
// sorted by day-ahead price volatility map to nondecreasing rungs of the
// penalty ladder.
class PenaltySelector {
 public:
  PenaltySelector(std::vector<double> ladder, double default_coefficient,
                  int clusters, unsigned seed);

  // Fitting with fewer points than clusters leaves the selector in the
  // default state: select() then always returns the default coefficient.
  void fit(const std::vector<MarketFeatures>& window);
  bool fitted() const { return fitted_; }

  // Throws Error when called before fit().
  double select(const MarketFeatures& f) const;

 private:
  int assign(const std::array<double, 4>& z) const;

  std::vector<double> ladder_;
  double default_coefficient_;
  int clusters_;
  unsigned seed_;
  bool fitted_ = false;
  bool degenerate_ = false;  // fit window too small; use the default
  std::array<double, 4> mean_{}, std_{};
  std::vector<std::array<double, 4>> centers_;
  std::vector<double> coefficient_by_center_;
};

}  // namespace flexbid::strategy
