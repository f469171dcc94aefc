// SPDX-License-Identifier: Apache-2.0
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "laborcast/bls_client.hpp"

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <json.hpp>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "laborcast/csv.hpp"
#include "laborcast/error.hpp"

namespace laborcast {

using nlohmann::json;

void SeriesRequest::validate() const {
  if (series_id.empty()) throw ContractError("series request without a series id");
  if (start_year > end_year) {
    throw ContractError("series " + series_id + ": start year " + std::to_string(start_year) +
                        " after end year " + std::to_string(end_year));
  }
}

std::vector<std::pair<int, int>> chunk_years(int start, int end, int max_years) {
  if (max_years < 1) throw ContractError("chunk size must be at least one year");
  std::vector<std::pair<int, int>> out;
  for (int y = start; y <= end; y += max_years) out.emplace_back(y, std::min(end, y + max_years - 1));
  return out;
}

std::string build_request_payload(const SeriesRequest& req, int start_year, int end_year) {
  json body;
  body["seriesid"] = json::array({req.series_id});
  body["startyear"] = std::to_string(start_year);
  body["endyear"] = std::to_string(end_year);
  if (!req.api_key.empty()) body["registrationkey"] = req.api_key;
  return body.dump();
}

std::vector<MonthlyObservation> parse_bls_response(std::string_view body, std::string_view series_id) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ParseError("BLS response for " + std::string(series_id) + " is not JSON: " + e.what());
  }
  try {
    const std::string status = doc.at("status").get<std::string>();
    if (status != "REQUEST_SUCCEEDED") {
      std::string msg;
      if (doc.contains("message")) {
        for (const auto& m : doc["message"]) msg += (msg.empty() ? "" : "; ") + m.get<std::string>();
      }
      throw RemoteError("BLS API status " + status + " for " + std::string(series_id) +
                        (msg.empty() ? "" : ": " + msg));
    }
    std::vector<MonthlyObservation> out;
    if (!doc.contains("Results")) return out;
    const auto& results = doc["Results"];
    if (!results.contains("series")) return out;
    for (const auto& s : results["series"]) {
      if (s.value("seriesID", std::string{}) != series_id) continue;
      if (!s.contains("data")) continue;
      for (const auto& d : s["data"]) {
        const std::string period = d.at("period").get<std::string>();
        if (period.size() != 3 || period[0] != 'M') continue;
        const unsigned month = static_cast<unsigned>(std::stoi(period.substr(1)));
        if (month < 1 || month > 12) continue;
        MonthlyObservation o;
        o.year = std::stoi(d.at("year").get<std::string>());
        o.month = month;
        const std::string value = d.at("value").get<std::string>();
        o.value = (value == "-" || value.empty()) ? std::nan("") : parse_double(value);
        out.push_back(o);
      }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return a.year != b.year ? a.year < b.year : a.month < b.month;
    });
    return out;
  } catch (const json::exception& e) {
    throw ParseError("malformed BLS response for " + std::string(series_id) + ": " + e.what());
  } catch (const std::invalid_argument&) {
    throw ParseError("malformed period or year in BLS response for " + std::string(series_id));
  }
}

std::string format_bls_response(std::string_view series_id, std::span<const MonthlyObservation> obs) {
  static constexpr const char* kMonthNames[] = {"January", "February", "March",     "April",
                                                "May",     "June",     "July",      "August",
                                                "September", "October", "November", "December"};
  json data = json::array();
  for (auto it = obs.rbegin(); it != obs.rend(); ++it) {
    char period[4];
    std::snprintf(period, sizeof(period), "M%02u", it->month);
    data.push_back({{"year", std::to_string(it->year)},
                    {"period", period},
                    {"periodName", kMonthNames[it->month - 1]},
                    {"value", std::isnan(it->value) ? std::string("-") : format_number(it->value)},
                    {"footnotes", json::array({json::object()})}});
  }
  json doc = {{"status", "REQUEST_SUCCEEDED"},
              {"responseTime", 0},
              {"message", json::array()},
              {"Results", {{"series", json::array({{{"seriesID", series_id}, {"data", data}}})}}}};
  return doc.dump();
}

BlsClient::BlsClient(BlsClientOptions options) : options_(std::move(options)) {}

std::string BlsClient::post(const std::string& body) {
  httplib::Client client(options_.base_url);
  client.set_connection_timeout(options_.timeout);
  client.set_read_timeout(options_.timeout);
  std::string last_error;
  for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
    ++requests_sent_;
    auto res = client.Post(options_.path, body, "application/json");
    if (res && res->status == 200) return res->body;
    last_error = res ? "HTTP " + std::to_string(res->status) : httplib::to_string(res.error());
    const bool retryable = !res || res->status == 429 || res->status >= 500;
    if (!retryable) {
      throw TransportError("BLS request failed with " + last_error + " after " + std::to_string(attempt) +
                               " attempt(s)",
                           attempt);
    }
    if (attempt < options_.max_attempts) std::this_thread::sleep_for(options_.retry_backoff * attempt);
  }
  throw TransportError("BLS request failed with " + last_error + " after " +
                           std::to_string(options_.max_attempts) + " attempt(s)",
                       options_.max_attempts);
}

std::vector<MonthlyObservation> BlsClient::fetch_series(const SeriesRequest& req) {
  req.validate();
  std::map<std::pair<int, unsigned>, MonthlyObservation> merged;
  for (const auto& [from, to] : chunk_years(req.start_year, req.end_year, options_.max_years_per_request)) {
    const std::string body = post(build_request_payload(req, from, to));
    for (const auto& o : parse_bls_response(body, req.series_id)) merged.insert_or_assign({o.year, o.month}, o);
  }
  std::vector<MonthlyObservation> out;
  out.reserve(merged.size());
  for (const auto& [key, o] : merged) out.push_back(o);
  return out;
}

std::vector<MonthlyObservation> FixtureSource::fetch_series(const SeriesRequest& req) {
  req.validate();
  const auto path = dir_ / (req.series_id + ".json");
  std::ifstream in(path);
  if (!in) throw DataError("no fixture for series " + req.series_id + " at " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto all = parse_bls_response(ss.str(), req.series_id);
  std::erase_if(all, [&](const MonthlyObservation& o) { return o.year < req.start_year || o.year > req.end_year; });
  return all;
}

std::vector<std::vector<MonthlyObservation>> fetch_many(
    const std::function<std::unique_ptr<SeriesSource>()>& make_source, std::span<const SeriesRequest> requests,
    std::size_t max_parallel, std::chrono::milliseconds min_interval) {
  std::vector<std::vector<MonthlyObservation>> results(requests.size());
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  auto next_start = std::chrono::steady_clock::now();
  std::exception_ptr failure;

  auto worker = [&] {
    auto source = make_source();
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= requests.size()) return;
      {
        std::unique_lock lock(mu);
        if (failure) return;
        const auto now = std::chrono::steady_clock::now();
        const auto start = std::max(now, next_start);
        next_start = start + min_interval;
        lock.unlock();
        std::this_thread::sleep_until(start);
      }
      try {
        results[i] = source->fetch_series(requests[i]);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const std::size_t n = std::max<std::size_t>(1, std::min(max_parallel, requests.size()));
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < n; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace laborcast
