#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "footfall/tracker/tracker.hpp"

namespace footfall::service {

// Keys of the JSON config file, and the FOOTFALL_* environment overrides:
//   data_dir              FOOTFALL_DATA_DIR
//   timezone              FOOTFALL_TIMEZONE              IANA name
//   confidence_threshold  FOOTFALL_CONFIDENCE_THRESHOLD  [0,1]
//   iou_threshold         FOOTFALL_IOU_THRESHOLD         (0,1)
//   min_hits              FOOTFALL_MIN_HITS              >= 1
//   max_misses            FOOTFALL_MAX_MISSES            >= 1
//   bind                  FOOTFALL_BIND                  host:port
//   frames_over_http      FOOTFALL_FRAMES_OVER_HTTP      true/false
//   strict                FOOTFALL_STRICT                reject unknown wire fields
//   sync_writes           FOOTFALL_SYNC_WRITES           fdatasync every append
//   ui_dir                FOOTFALL_UI_DIR                dashboard assets served at /ui
struct Config {
  std::filesystem::path data_dir = "data";
  std::string timezone = "UTC";
  double confidence_threshold = 0.5;
  tracker::TrackerConfig tracker;
  std::string bind = "127.0.0.1:8080";
  bool frames_over_http = false;
  bool strict = true;
  bool sync_writes = true;
  std::optional<std::filesystem::path> ui_dir;

  /// Throws Error(kInvalidConfig) naming the first bad setting.
  void validate() const;
};

/// Overlays keys present in the JSON file onto `base`. Unknown keys are an error.
Config load_config_file(const std::filesystem::path& path, Config base = {});

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
EnvLookup process_env();

/// Overlays FOOTFALL_* variables onto `base`.
Config apply_env(Config base, const EnvLookup& lookup = process_env());

struct BindAddress {
  std::string host;
  int port = 0;
};
BindAddress parse_bind(const std::string& bind);

}  // namespace footfall::service
