#include "flexbid/data_ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace flexbid::ingest {

namespace {

std::string trim(std::string s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string token;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(trim(token));
      token.clear();
    } else {
      token.push_back(ch);
    }
  }
  fields.push_back(trim(token));
  return fields;
}

double parse_double(const std::string& text, const std::string& file, int lineno) {
  try {
    size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing");
    if (std::isnan(v)) throw std::invalid_argument("nan");
    return v;
  } catch (const std::exception&) {
    throw SchemaError(file + ":" + std::to_string(lineno) +
                      ": cannot parse number '" + text + "'");
  }
}

int parse_intf(const std::string& text, const std::string& file, int lineno) {
  try {
    size_t pos = 0;
    int v = std::stoi(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw SchemaError(file + ":" + std::to_string(lineno) +
                      ": cannot parse integer '" + text + "'");
  }
}

Date parse_date(const std::string& text, const std::string& file, int lineno) {
  try {
    return Date::parse(text);
  } catch (const SchemaError& e) {
    throw SchemaError(file + ":" + std::to_string(lineno) + ": " + e.what());
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void expect_header(std::istream& in, const std::string& expected,
                   const std::string& file, int& lineno) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError(file + ": empty file");
  ++lineno;
  if (trim(line) != expected) {
    throw SchemaError(file + ": header mismatch, expected '" + expected + "'");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ActivationSeries / MeritCurve

std::span<const double> ActivationSeries::block_samples(int block) const {
  const int per_block = samples_per_block();
  const int from = (block - 1) * per_block;
  return std::span<const double>(activated_mw).subspan(from, per_block);
}

double MeritCurve::volume_at(double price) const {
  double vol = 0.0;
  for (const auto& p : points) {
    if (p.price <= price) {
      vol = p.cumulative_volume;
    } else {
      break;
    }
  }
  return vol;
}

// ---------------------------------------------------------------------------
// ValidatedDataset accessors

bool ValidatedDataset::has_realized_day(Date d) const {
  return realized_.count(d.serial()) > 0;
}

double ValidatedDataset::realized_price(Date d, int hour) const {
  auto it = realized_.find(d.serial());
  if (it == realized_.end() || hour < 0 || hour >= 24) {
    throw GapError("missing realized day-ahead price for " + d.to_string() +
                   " hour " + std::to_string(hour));
  }
  return it->second[hour];
}

Date ValidatedDataset::realized_first() const {
  if (realized_.empty()) throw GapError("dataset has no realized day-ahead prices");
  return Date(realized_.begin()->first);
}

Date ValidatedDataset::realized_last() const {
  if (realized_.empty()) throw GapError("dataset has no realized day-ahead prices");
  return Date(realized_.rbegin()->first);
}

bool ValidatedDataset::has_forecast(Date origin) const {
  return forecasts_.count(origin.serial()) > 0;
}

const std::vector<double>& ValidatedDataset::forecast(Date origin) const {
  auto it = forecasts_.find(origin.serial());
  if (it == forecasts_.end()) {
    throw GapError("no forecast with origin " + origin.to_string());
  }
  return it->second;
}

bool ValidatedDataset::has_src_marginal(Date d, int block, Direction dir) const {
  return src_marginals_.count(BlockKey{d, block, dir}) > 0;
}

double ValidatedDataset::src_marginal(Date d, int block, Direction dir) const {
  auto it = src_marginals_.find(BlockKey{d, block, dir});
  if (it == src_marginals_.end()) {
    throw GapError("missing SRC marginal for " + d.to_string() + " block " +
                   std::to_string(block) + " " + std::string(to_string(dir)));
  }
  return it->second;
}

bool ValidatedDataset::has_activation(Date d, Direction dir) const {
  return activation_.count(DayDirKey{d, dir}) > 0;
}

const ActivationSeries& ValidatedDataset::activation(Date d, Direction dir) const {
  auto it = activation_.find(DayDirKey{d, dir});
  if (it == activation_.end()) {
    throw GapError("missing activation series for " + d.to_string() + " " +
                   std::string(to_string(dir)));
  }
  return it->second;
}

bool ValidatedDataset::has_merit(Date d, int block, Direction dir) const {
  return merit_.count(BlockKey{d, block, dir}) > 0;
}

const MeritCurve& ValidatedDataset::merit(Date d, int block, Direction dir) const {
  auto it = merit_.find(BlockKey{d, block, dir});
  if (it == merit_.end()) {
    throw GapError("missing merit curve for " + d.to_string() + " block " +
                   std::to_string(block) + " " + std::string(to_string(dir)));
  }
  return it->second;
}

const MeritCurve& ValidatedDataset::merit_latest(Date d, int block, Direction dir) const {
  // Entries are ordered by (date, block, direction); scan back from d.
  auto it = merit_.upper_bound(BlockKey{d, block, dir});
  while (it != merit_.begin()) {
    --it;
    if (it->first.block == block && it->first.direction == dir) return it->second;
  }
  throw GapError("no merit curve on or before " + d.to_string() + " block " +
                 std::to_string(block) + " " + std::string(to_string(dir)));
}

std::vector<DaPriceRecord> ValidatedDataset::da_records() const {
  std::vector<DaPriceRecord> out;
  for (const auto& [serial, prices] : realized_) {
    for (int h = 0; h < 24; ++h) {
      out.push_back(DaPriceRecord{Date(serial), h, prices[h], false, std::nullopt});
    }
  }
  for (const auto& [origin, prices] : forecasts_) {
    for (std::size_t h = 0; h < prices.size(); ++h) {
      Date day(origin + static_cast<int>(h / 24));
      out.push_back(DaPriceRecord{day, static_cast<int>(h % 24), prices[h], true,
                                  Date(origin)});
    }
  }
  return out;
}

std::vector<SrcMarginalRecord> ValidatedDataset::src_records() const {
  std::vector<SrcMarginalRecord> out;
  for (const auto& [key, price] : src_marginals_) {
    out.push_back(SrcMarginalRecord{key.date, key.block, key.direction, price});
  }
  return out;
}

ValidatedDataset ValidatedDataset::truncated_after(Date cutoff) const {
  ValidatedDataset out;
  for (const auto& [serial, prices] : realized_) {
    if (serial <= cutoff.serial()) out.realized_[serial] = prices;
  }
  for (const auto& [origin, prices] : forecasts_) {
    if (origin <= cutoff.serial()) out.forecasts_[origin] = prices;
  }
  for (const auto& [key, v] : src_marginals_) {
    if (key.date <= cutoff) out.src_marginals_[key] = v;
  }
  for (const auto& [key, v] : activation_) {
    if (key.date <= cutoff) out.activation_[key] = v;
  }
  for (const auto& [key, v] : merit_) {
    if (key.date <= cutoff) out.merit_[key] = v;
  }
  out.report_ = report_;
  out.report_.notes.push_back("truncated after " + cutoff.to_string());
  return out;
}

// ---------------------------------------------------------------------------
// DatasetBuilder

void DatasetBuilder::add_realized(Date d, int hour, double price) {
  if (hour < 0 || hour >= 24) {
    throw SchemaError("realized price hour " + std::to_string(hour) +
                      " out of range for " + d.to_string());
  }
  auto& day = realized_partial_[d.serial()];
  if (!day.emplace(hour, price).second) {
    throw SchemaError("duplicate realized price for " + d.to_string() +
                      " hour " + std::to_string(hour));
  }
}

void DatasetBuilder::add_forecast(Date origin, std::vector<double> prices) {
  if (!ds_.forecasts_.emplace(origin.serial(), std::move(prices)).second) {
    throw SchemaError("duplicate forecast origin " + origin.to_string());
  }
}

void DatasetBuilder::add_src_marginal(Date d, int block, Direction dir, double price) {
  ProductBlock::at(block);
  if (!std::isfinite(price)) {
    throw SchemaError("non-finite SRC marginal for " + d.to_string());
  }
  if (!ds_.src_marginals_.emplace(BlockKey{d, block, dir}, price).second) {
    throw SchemaError("duplicate SRC marginal for " + d.to_string() + " block " +
                      std::to_string(block) + " " + std::string(to_string(dir)));
  }
}

void DatasetBuilder::add_activation(Date d, Direction dir, ActivationSeries series) {
  if (series.step_seconds <= 0 || 86400 % series.step_seconds != 0) {
    throw SchemaError("activation step " + std::to_string(series.step_seconds) +
                      " does not divide the day");
  }
  if (static_cast<int>(series.activated_mw.size()) != 86400 / series.step_seconds) {
    throw GapError("activation series for " + d.to_string() + " " +
                   std::string(to_string(dir)) + " does not cover the day");
  }
  for (double v : series.activated_mw) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw SchemaError("activation must be finite and >= 0 on " + d.to_string());
    }
  }
  if (!ds_.activation_.emplace(DayDirKey{d, dir}, std::move(series)).second) {
    throw SchemaError("duplicate activation series for " + d.to_string());
  }
}

void DatasetBuilder::add_merit(Date d, int block, Direction dir, MeritCurve curve) {
  ProductBlock::at(block);
  if (!ds_.merit_.emplace(BlockKey{d, block, dir}, std::move(curve)).second) {
    throw SchemaError("duplicate merit curve for " + d.to_string());
  }
}

ValidatedDataset DatasetBuilder::finish() {
  // Realized days: normalize single missing hours (DST artifacts), reject
  // wider gaps, then require day contiguity over the covered span.
  for (auto& [serial, hours] : realized_partial_) {
    Date d(serial);
    std::array<double, 24> day{};
    if (hours.size() < 23) {
      throw GapError("realized day-ahead prices for " + d.to_string() + " cover only " +
                     std::to_string(hours.size()) + " hours");
    }
    if (hours.size() == 23) {
      int missing = -1;
      for (int h = 0; h < 24; ++h) {
        if (!hours.count(h)) { missing = h; break; }
      }
      int neighbor = missing > 0 ? missing - 1 : 1;
      hours[missing] = hours.at(neighbor);
      ds_.report_.notes.push_back("normalized " + d.to_string() + ": filled hour " +
                                  std::to_string(missing) + " from hour " +
                                  std::to_string(neighbor));
    }
    for (int h = 0; h < 24; ++h) day[h] = hours.at(h);
    ds_.realized_[serial] = day;
  }
  realized_partial_.clear();
  if (!ds_.realized_.empty()) {
    int prev = ds_.realized_.begin()->first;
    for (const auto& [serial, _] : ds_.realized_) {
      if (serial > prev + 1) {
        throw GapError("missing realized day-ahead day " + Date(prev + 1).to_string());
      }
      prev = serial;
    }
  }

  // Forecast horizons must be exactly lookahead_hours long; values were
  // accumulated contiguously by the loader or builder caller.
  for (const auto& [origin, prices] : ds_.forecasts_) {
    if (static_cast<int>(prices.size()) != cfg_.lookahead_hours) {
      throw GapError("forecast with origin " + Date(origin).to_string() + " has " +
                     std::to_string(prices.size()) + " hours, expected " +
                     std::to_string(cfg_.lookahead_hours));
    }
    for (double p : prices) {
      if (!std::isfinite(p)) {
        throw SchemaError("non-finite forecast price for origin " +
                          Date(origin).to_string());
      }
    }
  }

  // SRC marginals: every (block, direction) present per covered day, days
  // contiguous.
  if (!ds_.src_marginals_.empty()) {
    Date first = ds_.src_marginals_.begin()->first.date;
    Date last = ds_.src_marginals_.rbegin()->first.date;
    for (Date d = first; d <= last; ++d) {
      for (int k = 1; k <= ProductBlock::kCount; ++k) {
        for (Direction dir : kDirections) {
          if (!ds_.src_marginals_.count(BlockKey{d, k, dir})) {
            throw GapError("missing SRC marginal for " + d.to_string() + " block " +
                           std::to_string(k) + " " + std::string(to_string(dir)));
          }
        }
      }
    }
  }

  // Activation: both directions per covered day, days contiguous.
  if (!ds_.activation_.empty()) {
    Date first = ds_.activation_.begin()->first.date;
    Date last = ds_.activation_.rbegin()->first.date;
    for (Date d = first; d <= last; ++d) {
      for (Direction dir : kDirections) {
        if (!ds_.activation_.count(DayDirKey{d, dir})) {
          throw GapError("missing activation series for " + d.to_string() + " " +
                         std::string(to_string(dir)));
        }
      }
    }
  }

  // Merit curves: sorted, nondecreasing volume, complete per covered day.
  for (auto& [key, curve] : ds_.merit_) {
    auto& pts = curve.points;
    if (pts.empty()) {
      throw SchemaError("empty merit curve for " + key.date.to_string());
    }
    std::sort(pts.begin(), pts.end(), [](const MeritPoint& a, const MeritPoint& b) {
      return a.price < b.price || (a.price == b.price && a.cumulative_volume < b.cumulative_volume);
    });
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (pts[i].cumulative_volume < pts[i - 1].cumulative_volume) {
        throw MonotonicityError(
            "merit curve cumulative volume decreases at price " + fmt(pts[i].price) +
            " for " + key.date.to_string() + " block " + std::to_string(key.block) +
            " " + std::string(to_string(key.direction)));
      }
    }
  }
  if (!ds_.merit_.empty()) {
    Date first = ds_.merit_.begin()->first.date;
    Date last = ds_.merit_.rbegin()->first.date;
    for (Date d = first; d <= last; ++d) {
      for (int k = 1; k <= ProductBlock::kCount; ++k) {
        for (Direction dir : kDirections) {
          if (!ds_.merit_.count(BlockKey{d, k, dir})) {
            throw GapError("missing merit curve for " + d.to_string() + " block " +
                           std::to_string(k) + " " + std::string(to_string(dir)));
          }
        }
      }
    }
  }

  return std::move(ds_);
}

// ---------------------------------------------------------------------------
// CSV loading

DatasetPaths DatasetPaths::in_directory(const std::string& dir) {
  auto join = [&](const char* name) { return dir + "/" + name; };
  return DatasetPaths{join("da_prices.csv"), join("src_marginals.csv"),
                      join("sre_activation.csv"), join("sre_merit.csv")};
}

namespace {

void load_da_prices(const std::string& path, const RunConfig& cfg,
                    DatasetBuilder& builder) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  int lineno = 0;
  expect_header(in, "date,hour,price,kind,forecast_origin", path, lineno);

  // Forecast rows are keyed by origin and must form one contiguous horizon.
  struct ForecastAcc {
    std::map<long long, double> by_abs_hour;
  };
  std::map<int, ForecastAcc> forecasts;

  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto f = split_csv(line);
    if (f.size() != 5) {
      throw SchemaError(path + ":" + std::to_string(lineno) + ": expected 5 columns");
    }
    Date d = parse_date(f[0], path, lineno);
    int hour = parse_intf(f[1], path, lineno);
    if (hour < 0 || hour > 23) {
      throw SchemaError(path + ":" + std::to_string(lineno) + ": hour out of range");
    }
    double price = parse_double(f[2], path, lineno);
    if (f[3] == "realized") {
      if (!f[4].empty()) {
        throw SchemaError(path + ":" + std::to_string(lineno) +
                          ": realized rows must not carry a forecast_origin");
      }
      builder.add_realized(d, hour, price);
    } else if (f[3] == "forecast") {
      if (f[4].empty()) {
        throw SchemaError(path + ":" + std::to_string(lineno) +
                          ": forecast rows need a forecast_origin");
      }
      Date origin = parse_date(f[4], path, lineno);
      long long abs_hour = static_cast<long long>(d.serial()) * 24 + hour;
      auto& acc = forecasts[origin.serial()];
      if (!acc.by_abs_hour.emplace(abs_hour, price).second) {
        throw SchemaError(path + ":" + std::to_string(lineno) +
                          ": duplicate forecast hour for origin " + origin.to_string());
      }
    } else {
      throw SchemaError(path + ":" + std::to_string(lineno) +
                        ": kind must be realized or forecast");
    }
  }

  for (auto& [origin, acc] : forecasts) {
    const long long start = static_cast<long long>(origin) * 24;
    std::vector<double> prices;
    prices.reserve(acc.by_abs_hour.size());
    long long expected = start;
    for (const auto& [abs_hour, price] : acc.by_abs_hour) {
      if (abs_hour != expected) {
        throw GapError("forecast with origin " + Date(origin).to_string() +
                       " is not contiguous from its origin hour");
      }
      ++expected;
      prices.push_back(price);
    }
    if (static_cast<int>(prices.size()) != cfg.lookahead_hours) {
      throw GapError("forecast with origin " + Date(origin).to_string() + " has " +
                     std::to_string(prices.size()) + " hours, expected " +
                     std::to_string(cfg.lookahead_hours));
    }
    builder.add_forecast(Date(origin), std::move(prices));
  }
}

void load_src_marginals(const std::string& path, DatasetBuilder& builder) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  int lineno = 0;
  expect_header(in, "date,block,direction,marginal_price", path, lineno);
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto f = split_csv(line);
    if (f.size() != 4) {
      throw SchemaError(path + ":" + std::to_string(lineno) + ": expected 4 columns");
    }
    builder.add_src_marginal(parse_date(f[0], path, lineno),
                             parse_intf(f[1], path, lineno),
                             direction_from_string(f[2]),
                             parse_double(f[3], path, lineno));
  }
}

void load_activation(const std::string& path, DatasetBuilder& builder) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) throw SchemaError(path + ": empty file");
  ++lineno;
  line = trim(line);
  int step = 0;
  if (line.rfind("# step=", 0) == 0) {
    step = parse_intf(line.substr(7), path, lineno);
  } else {
    throw SchemaError(path + ": first line must declare '# step=<seconds>'");
  }
  if (step <= 0 || 86400 % step != 0) {
    throw SchemaError(path + ": step must divide the day");
  }
  expect_header(in, "date,second_of_day,direction,activated_mw", path, lineno);

  std::map<DayDirKey, std::map<int, double>> acc;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto f = split_csv(line);
    if (f.size() != 4) {
      throw SchemaError(path + ":" + std::to_string(lineno) + ": expected 4 columns");
    }
    Date d = parse_date(f[0], path, lineno);
    int second = parse_intf(f[1], path, lineno);
    Direction dir = direction_from_string(f[2]);
    double mw = parse_double(f[3], path, lineno);
    if (second < 0 || second >= 86400 || second % step != 0) {
      throw SchemaError(path + ":" + std::to_string(lineno) +
                        ": second_of_day must be a multiple of the declared step");
    }
    if (!acc[DayDirKey{d, dir}].emplace(second, mw).second) {
      throw SchemaError(path + ":" + std::to_string(lineno) + ": duplicate sample");
    }
  }
  for (auto& [key, samples] : acc) {
    ActivationSeries series;
    series.step_seconds = step;
    series.activated_mw.reserve(samples.size());
    int expected = 0;
    for (const auto& [second, mw] : samples) {
      if (second != expected) {
        throw GapError("activation series for " + key.date.to_string() + " " +
                       std::string(to_string(key.direction)) +
                       " is missing second " + std::to_string(expected));
      }
      expected += step;
      series.activated_mw.push_back(mw);
    }
    builder.add_activation(key.date, key.direction, std::move(series));
  }
}

void load_merit(const std::string& path, DatasetBuilder& builder) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  int lineno = 0;
  expect_header(in, "date,block,direction,price,cumulative_volume", path, lineno);
  std::map<BlockKey, MeritCurve> acc;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto f = split_csv(line);
    if (f.size() != 5) {
      throw SchemaError(path + ":" + std::to_string(lineno) + ": expected 5 columns");
    }
    BlockKey key{parse_date(f[0], path, lineno), parse_intf(f[1], path, lineno),
                 direction_from_string(f[2])};
    acc[key].points.push_back(MeritPoint{parse_double(f[3], path, lineno),
                                         parse_double(f[4], path, lineno)});
  }
  for (auto& [key, curve] : acc) {
    builder.add_merit(key.date, key.block, key.direction, std::move(curve));
  }
}

}  // namespace

ValidatedDataset load_dataset(const DatasetPaths& paths, const RunConfig& cfg) {
  DatasetBuilder builder(cfg);
  load_da_prices(paths.da_prices, cfg, builder);
  load_src_marginals(paths.src_marginals, builder);
  load_activation(paths.sre_activation, builder);
  load_merit(paths.sre_merit, builder);
  return builder.finish();
}

void write_dataset(const ValidatedDataset& ds, const DatasetPaths& paths) {
  {
    std::ofstream out(paths.da_prices);
    if (!out) throw SchemaError("cannot write " + paths.da_prices);
    out << "date,hour,price,kind,forecast_origin\n";
    for (const auto& rec : ds.da_records()) {
      out << rec.date.to_string() << "," << rec.hour << "," << fmt(rec.price) << ",";
      if (rec.forecast) {
        out << "forecast," << rec.forecast_origin->to_string();
      } else {
        out << "realized,";
      }
      out << "\n";
    }
  }
  {
    std::ofstream out(paths.src_marginals);
    if (!out) throw SchemaError("cannot write " + paths.src_marginals);
    out << "date,block,direction,marginal_price\n";
    for (const auto& rec : ds.src_records()) {
      out << rec.date.to_string() << "," << rec.block << ","
          << to_string(rec.direction) << "," << fmt(rec.marginal_price) << "\n";
    }
  }
  {
    std::ofstream out(paths.sre_activation);
    if (!out) throw SchemaError("cannot write " + paths.sre_activation);
    int step = 900;
    if (!ds.activation_map().empty()) {
      step = ds.activation_map().begin()->second.step_seconds;
    }
    out << "# step=" << step << "\n";
    out << "date,second_of_day,direction,activated_mw\n";
    for (const auto& [key, series] : ds.activation_map()) {
      for (std::size_t i = 0; i < series.activated_mw.size(); ++i) {
        out << key.date.to_string() << "," << i * series.step_seconds << ","
            << to_string(key.direction) << "," << fmt(series.activated_mw[i]) << "\n";
      }
    }
  }
  {
    std::ofstream out(paths.sre_merit);
    if (!out) throw SchemaError("cannot write " + paths.sre_merit);
    out << "date,block,direction,price,cumulative_volume\n";
    for (const auto& [key, curve] : ds.merit_map()) {
      for (const auto& p : curve.points) {
        out << key.date.to_string() << "," << key.block << ","
            << to_string(key.direction) << "," << fmt(p.price) << ","
            << fmt(p.cumulative_volume) << "\n";
      }
    }
  }
}

std::vector<double> naive_forecast(const ValidatedDataset& ds, Date origin,
                                   int horizon_hours) {
  for (int back = 7; back >= 1; --back) {
    if (!ds.has_realized_day(origin - back)) {
      throw HistoryError("naive forecast needs seven realized days before " +
                         origin.to_string() + "; missing " +
                         (origin - back).to_string());
    }
  }
  std::vector<double> out(horizon_hours);
  for (int h = 0; h < horizon_hours; ++h) {
    // Same hour-of-week one week before the origin, tiled over the horizon.
    int rel = (h % 168) - 168;
    long long abs_hour = (static_cast<long long>(origin.serial()) * 24) + rel;
    Date day(static_cast<int>(abs_hour / 24));
    out[h] = ds.realized_price(day, static_cast<int>(abs_hour % 24));
  }
  return out;
}

}  // namespace flexbid::ingest
