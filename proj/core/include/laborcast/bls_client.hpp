// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "laborcast/interpolation.hpp"

namespace laborcast {

struct SeriesRequest {
  std::string series_id;
  int start_year = 0;
  int end_year = 0;
  std::string api_key;  // never logged

  // Throws ContractError.
  void validate() const;
};

// Anything that can answer a series request with monthly observations in
// chronological order.
class SeriesSource {
 public:
  virtual ~SeriesSource() = default;
  virtual std::vector<MonthlyObservation> fetch_series(const SeriesRequest& req) = 0;
};

// Year ranges of at most `max_years` covering [start, end], in order.
std::vector<std::pair<int, int>> chunk_years(int start, int end, int max_years);

// Request body for the v2 timeseries endpoint.
std::string build_request_payload(const SeriesRequest& req, int start_year, int end_year);

// Parses a v2 timeseries response. Monthly periods M01..M12 are kept, the
// annual average M13 is dropped, blank values ("-") become NaN. Throws
// RemoteError when the status is not REQUEST_SUCCEEDED and ParseError on
// malformed payloads. An absent or empty series yields an empty result.
std::vector<MonthlyObservation> parse_bls_response(std::string_view body, std::string_view series_id);

// Renders observations in the v2 response format (newest first, as served).
std::string format_bls_response(std::string_view series_id, std::span<const MonthlyObservation> obs);

struct BlsClientOptions {
  std::string base_url = "https://api.bls.gov";
  std::string path = "/publicAPI/v2/timeseries/data/";
  int max_years_per_request = 10;
  int max_attempts = 3;
  std::chrono::milliseconds retry_backoff{500};
  std::chrono::seconds timeout{30};
};

// HTTP client for the public timeseries API. Long spans are split into
// chunks the API accepts and the results concatenated without duplicates.
class BlsClient : public SeriesSource {
 public:
  explicit BlsClient(BlsClientOptions options = {});
  std::vector<MonthlyObservation> fetch_series(const SeriesRequest& req) override;
  // Number of HTTP requests issued so far.
  std::size_t requests_sent() const noexcept { return requests_sent_; }

 private:
  std::string post(const std::string& body);

  BlsClientOptions options_;
  std::size_t requests_sent_ = 0;
};

// Serves requests from `<dir>/<series_id>.json` files holding v2 responses,
// filtered to the requested years. A missing file is a DataError.
class FixtureSource : public SeriesSource {
 public:
  explicit FixtureSource(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::vector<MonthlyObservation> fetch_series(const SeriesRequest& req) override;

 private:
  std::filesystem::path dir_;
};

// Fetches every request with at most `max_parallel` in flight and at least
// `min_interval` between request starts. Results follow request order.
// `make_source` is called once per worker.
std::vector<std::vector<MonthlyObservation>> fetch_many(
    const std::function<std::unique_ptr<SeriesSource>()>& make_source, std::span<const SeriesRequest> requests,
    std::size_t max_parallel, std::chrono::milliseconds min_interval);

}  // namespace laborcast
