#include "footfall/service/http_service.hpp"

#include <httplib.h>

#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "footfall/error.hpp"
#include "footfall/ingest/wire.hpp"

namespace footfall::service {
namespace {

using nlohmann::ordered_json;

ordered_json record_object(const analytics::DailyRecord& r) {
  ordered_json j;
  j["date"] = r.date.to_string();
  j["people_counted"] = r.people_counted;
  j["traffic"] = r.traffic;
  j["unpaired"] = r.unpaired;
  j["transactions"] = r.transactions ? ordered_json(*r.transactions) : ordered_json(nullptr);
  if (r.conversion_rate) {
    j["conversion_rate"] = r.conversion_rate->percent();
    j["conversion_rate_text"] = r.conversion_rate->format_2dp();
  } else {
    j["conversion_rate"] = nullptr;
    j["conversion_rate_text"] = nullptr;
  }
  return j;
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownDate: return 404;
    case ErrorCode::kServiceUnavailable: return 503;
    case ErrorCode::kStorageFailure:
    case ErrorCode::kCorruptEntry: return 500;
    default: return 400;
  }
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  ordered_json j;
  j["error"] = std::string(to_string(code));
  j["message"] = message;
  res.status = status_for(code);
  res.set_content(j.dump(), "application/json");
}

analytics::Date path_date(const std::string& text) {
  const auto d = analytics::parse_date(text);
  if (!d) throw Error(ErrorCode::kInvalidField, "bad date '" + text + "', expected YYYY-MM-DD");
  return *d;
}

std::optional<analytics::Date> query_date(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  return path_date(req.get_param_value(key));
}

template <typename Handler>
httplib::Server::Handler guarded(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.detail());
    } catch (const std::exception& e) {
      send_error(res, ErrorCode::kStorageFailure, e.what());
    }
  };
}

void send_json(httplib::Response& res, const std::string& body) {
  res.set_content(body, "application/json");
}

}  // namespace

std::string live_json(const LiveStatus& live) {
  ordered_json j;
  j["date"] = live.date.to_string();
  j["active_tracks"] = live.active_tracks;
  j["people_counted_so_far"] = live.people_counted_so_far;
  j["traffic_so_far"] = live.traffic_so_far;
  j["last_frame_timestamp_ms"] =
      live.last_frame_timestamp_ms ? ordered_json(*live.last_frame_timestamp_ms) : ordered_json(nullptr);
  return j.dump();
}

std::string record_json(const analytics::DailyRecord& record) { return record_object(record).dump(); }

std::string days_json(const std::vector<analytics::DailyRecord>& records) {
  ordered_json j;
  auto& days = j["days"] = ordered_json::array();
  for (const auto& r : records) days.push_back(record_object(r));
  return j.dump();
}

std::string hourly_json(const analytics::HourlyHistogram& histogram) {
  ordered_json j;
  j["date"] = histogram.date.to_string();
  j["buckets"] = histogram.buckets;
  const auto peak = histogram.peak_hour();
  j["peak_hour"] = peak ? ordered_json(*peak) : ordered_json(nullptr);
  return j.dump();
}

std::string trend_json(const std::vector<analytics::TrendPoint>& points, int window_days) {
  ordered_json j;
  j["window"] = window_days;
  auto& arr = j["points"] = ordered_json::array();
  for (const auto& p : points) {
    ordered_json item;
    item["date"] = p.date.to_string();
    item["traffic_average"] = p.traffic_average;
    item["conversion_average"] = p.conversion_average ? ordered_json(*p.conversion_average) : ordered_json(nullptr);
    arr.push_back(std::move(item));
  }
  return j.dump();
}

HttpService::HttpService(Pipeline& pipeline)
    : pipeline_(pipeline), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpService::~HttpService() { stop(); }

void HttpService::install_routes() {
  httplib::Server& s = *server_;

  s.Get("/api/live", guarded([this](const httplib::Request&, httplib::Response& res) {
          send_json(res, live_json(pipeline_.live()));
        }));

  s.Get("/api/days", guarded([this](const httplib::Request& req, httplib::Response& res) {
          const auto from = query_date(req, "from");
          const auto to = query_date(req, "to");
          if (!from && !to) {
            send_json(res, days_json(pipeline_.all_days()));
            return;
          }
          const analytics::Date lo = from ? *from : analytics::Date{1, 1, 1};
          const analytics::Date hi = to ? *to : analytics::Date{9999, 12, 31};
          send_json(res, days_json(pipeline_.days(lo, hi)));
        }));

  s.Get(R"(/api/days/([^/]+)/hourly)", guarded([this](const httplib::Request& req, httplib::Response& res) {
          send_json(res, hourly_json(pipeline_.hourly(path_date(req.matches[1]))));
        }));

  s.Put(R"(/api/days/([^/]+)/transactions)",
        guarded([this](const httplib::Request& req, httplib::Response& res) {
          const analytics::Date date = path_date(req.matches[1]);
          const auto body = nlohmann::json::parse(req.body, nullptr, false);
          if (body.is_discarded() || !body.is_object() || !body.contains("count")) {
            throw Error(ErrorCode::kInvalidCount, R"(body must be {"count": <non-negative integer>})");
          }
          const auto& count = body["count"];
          if (!count.is_number_integer()) throw Error(ErrorCode::kInvalidCount, "count must be an integer");
          if (count.is_number_unsigned() && count.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
            throw Error(ErrorCode::kInvalidCount, "count out of range");
          }
          send_json(res, record_json(pipeline_.set_transactions(date, count.get<std::int64_t>())));
        }));

  s.Get("/api/trend", guarded([this](const httplib::Request& req, httplib::Response& res) {
          int window = 7;
          if (req.has_param("window")) {
            try {
              window = std::stoi(req.get_param_value("window"));
            } catch (const std::exception&) {
              throw Error(ErrorCode::kInvalidField, "window must be an integer");
            }
          }
          const auto records = pipeline_.all_days();
          const auto from = query_date(req, "from");
          const auto to = query_date(req, "to");
          if (records.empty() && (!from || !to)) {
            send_json(res, trend_json({}, window));
            return;
          }
          const analytics::Date lo = from ? *from : records.front().date;
          const analytics::Date hi = to ? *to : records.back().date;
          send_json(res, trend_json(pipeline_.trend(lo, hi, window), window));
        }));

  s.Get("/api/export.csv", guarded([this](const httplib::Request&, httplib::Response& res) {
          res.set_content(pipeline_.export_csv(), "text/csv; charset=utf-8");
        }));

  if (pipeline_.config().frames_over_http) {
    s.Post("/api/frames", guarded([this](const httplib::Request& req, httplib::Response& res) {
             std::istringstream in(req.body);
             const auto mode = pipeline_.config().strict ? ingest::ParseMode::kStrict : ingest::ParseMode::kLenient;
             std::string line;
             std::int64_t accepted = 0;
             std::size_t line_no = 0;
             while (std::getline(in, line)) {
               ++line_no;
               if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
               try {
                 pipeline_.process(ingest::parse_frame(line, mode));
               } catch (const Error& e) {
                 throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.detail() +
                                           " (" + std::to_string(accepted) + " frame(s) accepted before it)");
               }
               ++accepted;
             }
             ordered_json j;
             j["accepted"] = accepted;
             send_json(res, j.dump());
           }));
  }

  if (const auto& ui = pipeline_.config().ui_dir; ui && std::filesystem::is_directory(*ui)) {
    s.set_mount_point("/ui", ui->string());
  }
}

int HttpService::start(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorCode::kInvalidConfig, "cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

bool HttpService::listen(const std::string& host, int port) { return server_->listen(host, port); }

void HttpService::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace footfall::service
