#pragma once

#include <memory>
#include <string>
#include <thread>

#include "footfall/service/pipeline.hpp"

namespace httplib {
class Server;
}

namespace footfall::service {

// JSON renderings shared by the HTTP API and tests.
std::string live_json(const LiveStatus& live);
std::string record_json(const analytics::DailyRecord& record);
std::string days_json(const std::vector<analytics::DailyRecord>& records);
std::string hourly_json(const analytics::HourlyHistogram& histogram);
std::string trend_json(const std::vector<analytics::TrendPoint>& points, int window_days);

/// HTTP/1.1 front end over a Pipeline.
///
///   GET  /api/live
///   GET  /api/days?from=YYYY-MM-DD&to=YYYY-MM-DD   (either bound optional)
///   GET  /api/days/{date}/hourly
///   PUT  /api/days/{date}/transactions            body {"count": N}
///   GET  /api/trend?from&to&window=7
///   GET  /api/export.csv
///   POST /api/frames                              only with frames_over_http
///   GET  /ui/...                                  static files from ui_dir
///
/// Validation errors map to 400, unknown dates to 404, an unstarted
/// pipeline to 503. Error bodies are {"error": "<Kind>", "message": "..."}.
class HttpService {
 public:
  explicit HttpService(Pipeline& pipeline);
  ~HttpService();

  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  /// Binds and serves on a background thread. Port 0 picks a free port.
  /// Returns the bound port; throws Error(kInvalidConfig) if binding fails.
  int start(const std::string& host, int port);
  /// Blocks serving on the calling thread until stop().
  bool listen(const std::string& host, int port);
  void stop();

 private:
  void install_routes();

  Pipeline& pipeline_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace footfall::service
