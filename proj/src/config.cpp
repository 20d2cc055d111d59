#include "flexbid/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace flexbid {

namespace {

std::string trim(std::string s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& text, const std::string& key) {
  try {
    size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: cannot parse number '" + text + "' for key " + key);
  }
}

int parse_int(const std::string& text, const std::string& key) {
  double v = parse_number(text, key);
  int i = static_cast<int>(std::lround(v));
  if (std::abs(v - i) > 1e-9) {
    throw ConfigError("config: expected integer for key " + key);
  }
  return i;
}

std::vector<double> parse_list(const std::string& text, const std::string& key) {
  // "a:b:step" or "v1,v2,...".
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::istringstream is(text);
    std::string a, b, s;
    if (!std::getline(is, a, ':') || !std::getline(is, b, ':') || !std::getline(is, s)) {
      throw ConfigError("config: bad range '" + text + "' for key " + key);
    }
    double lo = parse_number(trim(a), key);
    double hi = parse_number(trim(b), key);
    double step = parse_number(trim(s), key);
    if (step <= 0 || hi < lo) {
      throw ConfigError("config: bad range '" + text + "' for key " + key);
    }
    for (double v = lo; v <= hi + 1e-9 * step; v += step) out.push_back(v);
    return out;
  }
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_number(item, key));
  }
  return out;
}

std::string format_list(const std::vector<double>& values) {
  std::ostringstream os;
  os.precision(12);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ",";
    os << values[i];
  }
  return os.str();
}

}  // namespace

void PriceLevelGrid::validate(const std::string& label) const {
  if (levels.empty()) throw ConfigError("grid " + label + " is empty");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!std::isfinite(levels[i])) throw ConfigError("grid " + label + " has non-finite level");
    if (i > 0 && levels[i] <= levels[i - 1]) {
      throw ConfigError("grid " + label + " is not strictly increasing at index " +
                        std::to_string(i));
    }
  }
}

PriceLevelGrid PriceLevelGrid::parse(const std::string& text) {
  return PriceLevelGrid{parse_list(text, "grid")};
}

RunConfig RunConfig::defaults() {
  RunConfig cfg;
  cfg.src_grid_pos = PriceLevelGrid::parse("0:250:25");
  cfg.src_grid_neg = PriceLevelGrid::parse("0:250:25");
  cfg.sre_grid_pos = PriceLevelGrid::parse("25:500:25");
  cfg.sre_grid_neg = PriceLevelGrid::parse("-100:100:25");
  cfg.penalty_ladder = parse_list("0:25:2.5", "penalty_ladder");
  return cfg;
}

void RunConfig::validate() const {
  if (total_flexibility_mw < 0) throw ConfigError("total_flexibility_mw must be >= 0");
  if (!(tau_min_mwh <= tau_initial_mwh && tau_initial_mwh <= tau_max_mwh)) {
    throw ConfigError("battery levels must satisfy tau_min <= tau_0 <= tau_max");
  }
  if (first_day_hours != 24) {
    throw ConfigError("first_day_hours must be 24 (4h blocks partition one day)");
  }
  if (lookahead_hours < first_day_hours) {
    throw ConfigError("lookahead_hours must be >= first_day_hours");
  }
  if (lookahead_hours % 24 != 0) {
    throw ConfigError("lookahead_hours must be a multiple of 24");
  }
  src_grid_pos.validate("src_grid_pos");
  src_grid_neg.validate("src_grid_neg");
  sre_grid_pos.validate("sre_grid_pos");
  sre_grid_neg.validate("sre_grid_neg");
  if (src_window_days < 1 || sre_window_days < 1) {
    throw ConfigError("calibration windows must be positive");
  }
  if (!split_policy.free) {
    if (split_policy.da_mw < 0 || split_policy.afrr_mw < 0 ||
        split_policy.da_mw + split_policy.afrr_mw > total_flexibility_mw + 1e-9) {
      throw ConfigError("fixed split must be nonnegative and sum to at most m");
    }
  }
  if (!penalty_policy.free && penalty_policy.coefficient < 0) {
    throw ConfigError("penalty coefficient must be >= 0");
  }
  if (penalty_ladder.empty()) throw ConfigError("penalty_ladder is empty");
  for (double c : penalty_ladder) {
    if (c < 0 || !std::isfinite(c)) throw ConfigError("penalty_ladder entries must be >= 0");
  }
  if (cluster_count < 1) throw ConfigError("cluster_count must be >= 1");
  if (feature_window_days < 2) throw ConfigError("feature_window_days must be >= 2");
}

RunConfig RunConfig::parse(std::istream& in) {
  RunConfig cfg = defaults();
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(lineno) + " is not key = value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  auto take = [&](const std::string& key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  if (auto* v = take("total_flexibility_mw")) cfg.total_flexibility_mw = parse_number(*v, "total_flexibility_mw");
  if (auto* v = take("tau_min_mwh")) cfg.tau_min_mwh = parse_number(*v, "tau_min_mwh");
  if (auto* v = take("tau_max_mwh")) cfg.tau_max_mwh = parse_number(*v, "tau_max_mwh");
  if (auto* v = take("tau_initial_mwh")) cfg.tau_initial_mwh = parse_number(*v, "tau_initial_mwh");
  if (auto* v = take("first_day_hours")) cfg.first_day_hours = parse_int(*v, "first_day_hours");
  if (auto* v = take("lookahead_hours")) cfg.lookahead_hours = parse_int(*v, "lookahead_hours");
  if (auto* v = take("src_grid_pos")) cfg.src_grid_pos = PriceLevelGrid{parse_list(*v, "src_grid_pos")};
  if (auto* v = take("src_grid_neg")) cfg.src_grid_neg = PriceLevelGrid{parse_list(*v, "src_grid_neg")};
  if (auto* v = take("sre_grid_pos")) cfg.sre_grid_pos = PriceLevelGrid{parse_list(*v, "sre_grid_pos")};
  if (auto* v = take("sre_grid_neg")) cfg.sre_grid_neg = PriceLevelGrid{parse_list(*v, "sre_grid_neg")};
  if (auto* v = take("penalty_policy")) {
    cfg.penalty_policy = (*v == "free") ? PenaltyPolicy::make_free()
                                        : PenaltyPolicy::fixed(parse_number(*v, "penalty_policy"));
  }
  if (auto* v = take("split_policy")) {
    if (*v == "free") {
      cfg.split_policy = SplitPolicy::make_free();
    } else {
      auto parts = parse_list(*v, "split_policy");
      if (parts.size() != 2) throw ConfigError("split_policy must be 'free' or 'da,afrr'");
      cfg.split_policy = SplitPolicy::fixed(parts[0], parts[1]);
    }
  }
  if (auto* v = take("src_window_days")) cfg.src_window_days = parse_int(*v, "src_window_days");
  if (auto* v = take("sre_window_days")) cfg.sre_window_days = parse_int(*v, "sre_window_days");
  if (auto* v = take("forecast_source")) {
    if (*v == "file") cfg.forecast_source = ForecastSource::file;
    else if (*v == "naive") cfg.forecast_source = ForecastSource::naive;
    else throw ConfigError("forecast_source must be file or naive");
  }
  if (auto* v = take("penalty_ladder")) cfg.penalty_ladder = parse_list(*v, "penalty_ladder");
  if (auto* v = take("cluster_count")) cfg.cluster_count = parse_int(*v, "cluster_count");
  if (auto* v = take("cluster_seed")) cfg.cluster_seed = static_cast<unsigned>(parse_int(*v, "cluster_seed"));
  if (auto* v = take("cluster_refit_window_days")) cfg.cluster_refit_window_days = parse_int(*v, "cluster_refit_window_days");
  if (auto* v = take("default_free_penalty")) cfg.default_free_penalty = parse_number(*v, "default_free_penalty");
  if (auto* v = take("feature_window_days")) cfg.feature_window_days = parse_int(*v, "feature_window_days");

  static const char* known[] = {
      "total_flexibility_mw", "tau_min_mwh", "tau_max_mwh", "tau_initial_mwh",
      "first_day_hours", "lookahead_hours", "src_grid_pos", "src_grid_neg",
      "sre_grid_pos", "sre_grid_neg", "penalty_policy", "split_policy",
      "src_window_days", "sre_window_days", "forecast_source", "penalty_ladder",
      "cluster_count", "cluster_seed", "cluster_refit_window_days",
      "default_free_penalty", "feature_window_days"};
  for (const auto& [key, value] : kv) {
    bool ok = false;
    for (const char* k : known) {
      if (key == k) { ok = true; break; }
    }
    if (!ok) throw ConfigError("config: unknown key '" + key + "'");
  }

  cfg.validate();
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  return parse(in);
}

void RunConfig::write(std::ostream& out) const {
  out.precision(12);
  out << "total_flexibility_mw = " << total_flexibility_mw << "\n"
      << "tau_min_mwh = " << tau_min_mwh << "\n"
      << "tau_max_mwh = " << tau_max_mwh << "\n"
      << "tau_initial_mwh = " << tau_initial_mwh << "\n"
      << "first_day_hours = " << first_day_hours << "\n"
      << "lookahead_hours = " << lookahead_hours << "\n"
      << "src_grid_pos = " << format_list(src_grid_pos.levels) << "\n"
      << "src_grid_neg = " << format_list(src_grid_neg.levels) << "\n"
      << "sre_grid_pos = " << format_list(sre_grid_pos.levels) << "\n"
      << "sre_grid_neg = " << format_list(sre_grid_neg.levels) << "\n";
  if (penalty_policy.free) {
    out << "penalty_policy = free\n";
  } else {
    out << "penalty_policy = " << penalty_policy.coefficient << "\n";
  }
  if (split_policy.free) {
    out << "split_policy = free\n";
  } else {
    out << "split_policy = " << split_policy.da_mw << "," << split_policy.afrr_mw << "\n";
  }
  out << "src_window_days = " << src_window_days << "\n"
      << "sre_window_days = " << sre_window_days << "\n"
      << "forecast_source = " << (forecast_source == ForecastSource::file ? "file" : "naive") << "\n"
      << "penalty_ladder = " << format_list(penalty_ladder) << "\n"
      << "cluster_count = " << cluster_count << "\n"
      << "cluster_seed = " << cluster_seed << "\n"
      << "cluster_refit_window_days = " << cluster_refit_window_days << "\n"
      << "default_free_penalty = " << default_free_penalty << "\n"
      << "feature_window_days = " << feature_window_days << "\n";
}

}  // namespace flexbid
