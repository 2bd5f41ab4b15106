#include "lanegraph/config.hpp"

#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "lanegraph/error.hpp"

namespace lanegraph {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorCode::kParse,
              "invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

double to_double(std::string_view key, std::string_view value) {
  const std::string text(trim(value));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    bad_value(key, value);
  }
  if (used != text.size() || !std::isfinite(v)) bad_value(key, value);
  return v;
}

std::uint64_t to_unsigned(std::string_view key, std::string_view value) {
  const auto text = trim(value);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) bad_value(key, value);
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

Extent parse_extent(std::string_view text) {
  const auto t = trim(text);
  const auto x = t.find_first_of("xX");
  if (x == std::string_view::npos) {
    throw Error(ErrorCode::kParse, "extent must look like WxH, got '" + std::string(text) + "'");
  }
  const Extent e{to_double("extent", t.substr(0, x)), to_double("extent", t.substr(x + 1))};
  if (!(e.width > 0.0 && e.height > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "extent must be positive, got '" + std::string(text) + "'");
  }
  return e;
}

void apply_setting(ToolConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  value = unquote(trim(value));
  if (key == "alpha") {
    cfg.weights.alpha = to_double(key, value);
  } else if (key == "beta") {
    cfg.weights.beta = to_double(key, value);
  } else if (key == "p_min") {
    cfg.aggregation.p_min = to_double(key, value);
  } else if (key == "d_max") {
    cfg.aggregation.d_max = to_double(key, value);
  } else if (key == "n_cp_out") {
    const auto n = to_unsigned(key, value);
    if (n == 0) {
      cfg.aggregation.n_cp_out.reset();
    } else {
      cfg.aggregation.n_cp_out = static_cast<std::size_t>(n);
    }
  } else if (key == "bezier_degree") {
    cfg.bezier_degree = static_cast<int>(to_unsigned(key, value));
  } else if (key == "polyline_points") {
    cfg.polyline_points = static_cast<std::size_t>(to_unsigned(key, value));
  } else if (key == "max_paths") {
    cfg.max_paths = static_cast<std::size_t>(to_unsigned(key, value));
  } else if (key == "interp_dist") {
    cfg.metrics.interp_dist = to_double(key, value);
  } else if (key == "match_dist") {
    cfg.metrics.match_dist = to_double(key, value);
  } else if (key == "topo_radius") {
    cfg.metrics.topo_radius = to_double(key, value);
  } else if (key == "lane_halfwidth") {
    cfg.metrics.lane_halfwidth = to_double(key, value);
  } else if (key == "sda_thresholds") {
    auto list = value;
    if (list.size() >= 2 && list.front() == '[' && list.back() == ']') {
      list = list.substr(1, list.size() - 2);
    }
    cfg.metrics.sda_thresholds.clear();
    for (auto part : split(list, ',')) cfg.metrics.sda_thresholds.push_back(to_double(key, part));
  } else if (key == "raster_extent") {
    cfg.metrics.raster_extent = parse_extent(value);
  } else if (key == "raster_origin") {
    const auto parts = split(value, ',');
    if (parts.size() != 2) bad_value(key, value);
    cfg.metrics.raster_origin = Point{to_double(key, parts[0]), to_double(key, parts[1])};
  } else if (key == "rng_seed") {
    cfg.rng_seed = to_unsigned(key, value);
  } else {
    throw Error(ErrorCode::kParse, "unknown config key '" + std::string(key) + "'");
  }
}

ToolConfig parse_config(std::string_view text, ToolConfig base) {
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    auto line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  validate(base);
  return base;
}

void validate(const ToolConfig& cfg) {
  if (!(cfg.weights.alpha > 0.0)) throw Error(ErrorCode::kInvalidArgument, "alpha must be > 0");
  if (!(cfg.weights.beta >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "beta must be >= 0");
  if (!(cfg.aggregation.p_min >= 0.0 && cfg.aggregation.p_min <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "p_min must lie in [0,1]");
  }
  if (!(cfg.aggregation.d_max >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "d_max must be >= 0");
  if (cfg.aggregation.n_cp_out && *cfg.aggregation.n_cp_out < 2) {
    throw Error(ErrorCode::kInvalidArgument, "n_cp_out must be >= 2");
  }
  if (cfg.bezier_degree < 1) throw Error(ErrorCode::kInvalidArgument, "bezier_degree must be >= 1");
  if (cfg.polyline_points < 2) throw Error(ErrorCode::kInvalidArgument, "polyline_points must be >= 2");
  if (cfg.max_paths < 1) throw Error(ErrorCode::kInvalidArgument, "max_paths must be >= 1");
  validate_config(cfg.metrics);
}

}  // namespace lanegraph
