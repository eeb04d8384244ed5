#include "footfall/service/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "footfall/analytics/calendar.hpp"
#include "footfall/error.hpp"

namespace footfall::service {
namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kInvalidConfig, what); }

double to_double(const std::string& key, const std::string& text) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) bad(key + ": not a number: '" + text + "'");
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) bad(key + ": not an integer: '" + text + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  bad(key + ": not a boolean: '" + text + "'");
}

}  // namespace

void Config::validate() const {
  if (data_dir.empty()) bad("data_dir must not be empty");
  analytics::TimeZone::load(timezone);
  if (!(confidence_threshold >= 0.0 && confidence_threshold <= 1.0)) bad("confidence_threshold must be in [0,1]");
  tracker.validate();
  parse_bind(bind);
}

Config load_config_file(const std::filesystem::path& path, Config base) {
  std::ifstream in(path);
  if (!in) bad("cannot read config file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    bad(path.string() + ": " + e.what());
  }
  if (!doc.is_object()) bad(path.string() + ": top level must be an object");
  try {
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const std::string& key = it.key();
      const auto& v = it.value();
      if (key == "data_dir") base.data_dir = v.get<std::string>();
      else if (key == "timezone") base.timezone = v.get<std::string>();
      else if (key == "confidence_threshold") base.confidence_threshold = v.get<double>();
      else if (key == "iou_threshold") base.tracker.iou_threshold = v.get<double>();
      else if (key == "min_hits") base.tracker.min_hits = v.get<int>();
      else if (key == "max_misses") base.tracker.max_misses = v.get<int>();
      else if (key == "bind") base.bind = v.get<std::string>();
      else if (key == "frames_over_http") base.frames_over_http = v.get<bool>();
      else if (key == "strict") base.strict = v.get<bool>();
      else if (key == "sync_writes") base.sync_writes = v.get<bool>();
      else if (key == "ui_dir") base.ui_dir = v.get<std::string>();
      else bad(path.string() + ": unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    bad(path.string() + ": " + e.what());
  }
  return base;
}

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
  };
}

Config apply_env(Config base, const EnvLookup& lookup) {
  auto get = [&](const char* name) { return lookup(name); };
  if (auto v = get("FOOTFALL_DATA_DIR")) base.data_dir = *v;
  if (auto v = get("FOOTFALL_TIMEZONE")) base.timezone = *v;
  if (auto v = get("FOOTFALL_CONFIDENCE_THRESHOLD")) base.confidence_threshold = to_double("FOOTFALL_CONFIDENCE_THRESHOLD", *v);
  if (auto v = get("FOOTFALL_IOU_THRESHOLD")) base.tracker.iou_threshold = to_double("FOOTFALL_IOU_THRESHOLD", *v);
  if (auto v = get("FOOTFALL_MIN_HITS")) base.tracker.min_hits = to_int("FOOTFALL_MIN_HITS", *v);
  if (auto v = get("FOOTFALL_MAX_MISSES")) base.tracker.max_misses = to_int("FOOTFALL_MAX_MISSES", *v);
  if (auto v = get("FOOTFALL_BIND")) base.bind = *v;
  if (auto v = get("FOOTFALL_FRAMES_OVER_HTTP")) base.frames_over_http = to_bool("FOOTFALL_FRAMES_OVER_HTTP", *v);
  if (auto v = get("FOOTFALL_STRICT")) base.strict = to_bool("FOOTFALL_STRICT", *v);
  if (auto v = get("FOOTFALL_SYNC_WRITES")) base.sync_writes = to_bool("FOOTFALL_SYNC_WRITES", *v);
  if (auto v = get("FOOTFALL_UI_DIR")) base.ui_dir = *v;
  return base;
}

BindAddress parse_bind(const std::string& bind) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos || colon == 0) bad("bind must be host:port, got '" + bind + "'");
  BindAddress addr{bind.substr(0, colon), 0};
  const std::string port = bind.substr(colon + 1);
  auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), addr.port);
  if (ec != std::errc{} || ptr != port.data() + port.size() || addr.port < 0 || addr.port > 65535) {
    bad("bad port in bind '" + bind + "'");
  }
  return addr;
}

}  // namespace footfall::service
