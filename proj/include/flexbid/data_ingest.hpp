// Parsing and validation of the historical/forecast market data files.
// Everything downstream consumes only the ValidatedDataset built here.
//
// CSV schemas (UTF-8, header row, '.' decimal separator):
//   da_prices.csv      date,hour,price,kind,forecast_origin
//   src_marginals.csv  date,block,direction,marginal_price
//   sre_activation.csv date,second_of_day,direction,activated_mw
//                      (leading comment line "# step=<seconds>")
//   sre_merit.csv      date,block,direction,price,cumulative_volume

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flexbid/common.hpp"
#include "flexbid/config.hpp"

namespace flexbid::ingest {

struct DaPriceRecord {
  Date date;
  int hour = 0;  // 0..23
  double price = 0.0;
  bool forecast = false;
  std::optional<Date> forecast_origin;  // forecast records only
};

struct SrcMarginalRecord {
  Date date;
  int block = 1;
  Direction direction = Direction::pos;
  double marginal_price = 0.0;  // EUR/MW, may be negative
};

// One day of activation data for one direction, equally spaced samples
// covering the whole day at the declared step.
struct ActivationSeries {
  int step_seconds = 900;
  std::vector<double> activated_mw;  // 86400 / step_seconds samples

  int samples_per_block() const {
    return ProductBlock::kHours * 3600 / step_seconds;
  }
  std::span<const double> block_samples(int block) const;
};

struct MeritPoint {
  double price = 0.0;              // EUR/MWh ask
  double cumulative_volume = 0.0;  // MW offered at ask <= price
};

// Merit order curve Psi for one (date, block, direction): the offered
// capacity available up to a threshold price.
struct MeritCurve {
  std::vector<MeritPoint> points;  // sorted by price, volume nondecreasing

  double volume_at(double price) const;  // 0 below the first point
};

struct BlockKey {
  Date date;
  int block;
  Direction direction;
  auto operator<=>(const BlockKey&) const = default;
};

struct DayDirKey {
  Date date;
  Direction direction;
  auto operator<=>(const DayDirKey&) const = default;
};

struct LoadReport {
  std::vector<std::string> notes;  // normalized days and similar findings
};

class ValidatedDataset {
 public:
  // Realized day-ahead prices.
  bool has_realized_day(Date d) const;
  double realized_price(Date d, int hour) const;  // throws GapError
  Date realized_first() const;
  Date realized_last() const;

  // Forecasts keyed by origin; each vector holds lookahead_hours entries
  // starting at origin 00:00.
  bool has_forecast(Date origin) const;
  const std::vector<double>& forecast(Date origin) const;  // throws GapError

  bool has_src_marginal(Date d, int block, Direction dir) const;
  double src_marginal(Date d, int block, Direction dir) const;  // throws GapError

  bool has_activation(Date d, Direction dir) const;
  const ActivationSeries& activation(Date d, Direction dir) const;

  bool has_merit(Date d, int block, Direction dir) const;
  const MeritCurve& merit(Date d, int block, Direction dir) const;
  // Most recent curve on or before d; throws GapError when none exists.
  const MeritCurve& merit_latest(Date d, int block, Direction dir) const;

  const LoadReport& load_report() const { return report_; }

  // Record-level access for round-trip serialization and tests.
  std::vector<DaPriceRecord> da_records() const;
  std::vector<SrcMarginalRecord> src_records() const;
  const std::map<DayDirKey, ActivationSeries>& activation_map() const {
    return activation_;
  }
  const std::map<BlockKey, MeritCurve>& merit_map() const { return merit_; }

  // Drops everything that was not knowable on day `cutoff`: realized data
  // after the cutoff and forecasts with a later origin. Used by the
  // no-lookahead tests and replay tooling.
  ValidatedDataset truncated_after(Date cutoff) const;

 private:
  friend class DatasetBuilder;
  std::map<int, std::array<double, 24>> realized_;  // date serial -> hourly
  std::map<int, std::vector<double>> forecasts_;    // origin serial -> prices
  std::map<BlockKey, double> src_marginals_;
  std::map<DayDirKey, ActivationSeries> activation_;
  std::map<BlockKey, MeritCurve> merit_;
  LoadReport report_;
};

// Assembles a dataset from in-memory records, applying the same validation
// as the CSV loader. The fixture generator and tests build datasets here.
class DatasetBuilder {
 public:
  explicit DatasetBuilder(const RunConfig& cfg) : cfg_(cfg) {}

  void add_realized(Date d, int hour, double price);
  void add_forecast(Date origin, std::vector<double> prices);
  void add_src_marginal(Date d, int block, Direction dir, double price);
  void add_activation(Date d, Direction dir, ActivationSeries series);
  void add_merit(Date d, int block, Direction dir, MeritCurve curve);

  // Validates invariants (contiguity, horizons, monotonicity) and returns
  // the dataset. Throws SchemaError / GapError / MonotonicityError.
  ValidatedDataset finish();

 private:
  RunConfig cfg_;
  ValidatedDataset ds_;
  std::map<int, std::map<int, double>> realized_partial_;
};

struct DatasetPaths {
  std::string da_prices;
  std::string src_marginals;
  std::string sre_activation;
  std::string sre_merit;

  static DatasetPaths in_directory(const std::string& dir);
};

ValidatedDataset load_dataset(const DatasetPaths& paths, const RunConfig& cfg);
void write_dataset(const ValidatedDataset& ds, const DatasetPaths& paths);

// Seasonal persistence baseline: forecast hour h repeats the realized price
// at the same hour-of-week one week before the origin. Requires seven days
// of realized history immediately before the origin.
std::vector<double> naive_forecast(const ValidatedDataset& ds, Date origin,
                                   int horizon_hours);

}  // namespace flexbid::ingest
