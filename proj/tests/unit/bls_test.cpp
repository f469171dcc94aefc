// SPDX-License-Identifier: Apache-2.0
// Same httplib configuration as the core library.
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <gtest/gtest.h>
#include <httplib.h>

#include <atomic>
#include <json.hpp>
#include <mutex>
#include <set>
#include <thread>

#include "laborcast/bls_client.hpp"
#include "laborcast/error.hpp"
#include "laborcast/synthetic.hpp"
#include "support.hpp"

namespace laborcast {
namespace {

using nlohmann::json;

// Local HTTP server standing in for the timeseries endpoint.
class StubServer {
 public:
  using Handler = std::function<void(const json& request, httplib::Response& res)>;

  explicit StubServer(Handler handler) : handler_(std::move(handler)) {
    server_.Post("/publicAPI/v2/timeseries/data/", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mu_);
      const json body = json::parse(req.body);
      bodies_.push_back(body);
      handler_(body, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubServer() {
    server_.stop();
    thread_.join();
  }

  BlsClientOptions options() const {
    BlsClientOptions o;
    o.base_url = "http://127.0.0.1:" + std::to_string(port_);
    o.retry_backoff = std::chrono::milliseconds(1);
    o.timeout = std::chrono::seconds(5);
    return o;
  }
  std::vector<json> bodies() {
    std::lock_guard lock(mu_);
    return bodies_;
  }

 private:
  httplib::Server server_;
  Handler handler_;
  std::thread thread_;
  int port_ = 0;
  std::mutex mu_;
  std::vector<json> bodies_;
};

std::vector<MonthlyObservation> monthly(int first_year, int last_year) {
  std::vector<MonthlyObservation> out;
  for (int y = first_year; y <= last_year; ++y)
    for (unsigned m = 1; m <= 12; ++m) out.push_back({y, m, 100.0 + y - 2000 + 0.1 * m});
  return out;
}

// Answers with the requested year range of `full`.
StubServer::Handler serve(std::vector<MonthlyObservation> full) {
  return [full](const json& req, httplib::Response& res) {
    const int from = std::stoi(req.at("startyear").get<std::string>());
    const int to = std::stoi(req.at("endyear").get<std::string>());
    std::vector<MonthlyObservation> part;
    for (const auto& o : full)
      if (o.year >= from && o.year <= to) part.push_back(o);
    res.set_content(format_bls_response(req.at("seriesid")[0].get<std::string>(), part), "application/json");
  };
}

TEST(ChunkYears, TenYearChunks) {
  EXPECT_EQ(chunk_years(2006, 2024, 10), (std::vector<std::pair<int, int>>{{2006, 2015}, {2016, 2024}}));
  EXPECT_EQ(chunk_years(2020, 2020, 10), (std::vector<std::pair<int, int>>{{2020, 2020}}));
  EXPECT_EQ(chunk_years(2000, 2039, 20), (std::vector<std::pair<int, int>>{{2000, 2019}, {2020, 2039}}));
  EXPECT_THROW(chunk_years(2000, 2010, 0), ContractError);
}

TEST(Payload, CarriesSeriesYearsAndKey) {
  SeriesRequest req{"CES2000000001", 2006, 2024, "secret"};
  const json body = json::parse(build_request_payload(req, 2006, 2015));
  EXPECT_EQ(body["seriesid"], json::array({"CES2000000001"}));
  EXPECT_EQ(body["startyear"], "2006");
  EXPECT_EQ(body["endyear"], "2015");
  EXPECT_EQ(body["registrationkey"], "secret");
  req.api_key.clear();
  EXPECT_FALSE(json::parse(build_request_payload(req, 2006, 2015)).contains("registrationkey"));
}

TEST(ParseResponse, KeepsMonthsDropsAnnualAverage) {
  const std::string body = R"({"status":"REQUEST_SUCCEEDED","Results":{"series":[{"seriesID":"X","data":[
    {"year":"2024","period":"M13","value":"9.9"},
    {"year":"2024","period":"M02","value":"8.5"},
    {"year":"2024","period":"M01","value":"-"},
    {"year":"2023","period":"M12","value":"7.5"}]}]}})";
  const auto obs = parse_bls_response(body, "X");
  ASSERT_EQ(obs.size(), 3u);
  EXPECT_EQ(obs[0], (MonthlyObservation{2023, 12, 7.5}));
  EXPECT_EQ(obs[1].month, 1u);
  EXPECT_TRUE(std::isnan(obs[1].value));
  EXPECT_EQ(obs[2], (MonthlyObservation{2024, 2, 8.5}));
}

TEST(ParseResponse, EmptySeriesIsEmpty) {
  EXPECT_TRUE(parse_bls_response(R"({"status":"REQUEST_SUCCEEDED","Results":{"series":[]}})", "X").empty());
  EXPECT_TRUE(parse_bls_response(R"({"status":"REQUEST_SUCCEEDED"})", "X").empty());
}

TEST(ParseResponse, Failures) {
  try {
    parse_bls_response(R"({"status":"REQUEST_NOT_PROCESSED","message":["daily threshold"]})", "X");
    FAIL();
  } catch (const RemoteError& e) {
    EXPECT_NE(std::string(e.what()).find("daily threshold"), std::string::npos);
  }
  EXPECT_THROW(parse_bls_response("<html>", "X"), ParseError);
  EXPECT_THROW(parse_bls_response(R"({"no":"status"})", "X"), ParseError);
}

TEST(ParseResponse, FormatRoundTrip) {
  auto obs = monthly(2019, 2020);
  obs[5].value = std::nan("");
  EXPECT_EQ(parse_bls_response(format_bls_response("S", obs), "S"), obs);
}

TEST(BlsClient, LongSpanIsChunkedWithoutDuplicates) {
  StubServer server(serve(monthly(2006, 2024)));
  BlsClient client(server.options());
  const auto obs = client.fetch_series({"CES1000000001", 2006, 2024, ""});
  EXPECT_EQ(obs, monthly(2006, 2024));
  const auto bodies = server.bodies();
  ASSERT_EQ(bodies.size(), 2u);
  EXPECT_EQ(bodies[0]["startyear"], "2006");
  EXPECT_EQ(bodies[0]["endyear"], "2015");
  EXPECT_EQ(bodies[1]["startyear"], "2016");
  EXPECT_EQ(bodies[1]["endyear"], "2024");
}

TEST(BlsClient, OverlappingChunksMerge) {
  // A server that ignores the requested range and always returns everything.
  const auto full = monthly(2010, 2013);
  StubServer server([&](const json&, httplib::Response& res) {
    res.set_content(format_bls_response("S", full), "application/json");
  });
  auto opts = server.options();
  opts.max_years_per_request = 2;
  BlsClient client(opts);
  EXPECT_EQ(client.fetch_series({"S", 2010, 2013, ""}), full);
}

TEST(BlsClient, RetriesServerErrors) {
  std::atomic<int> calls{0};
  auto ok = serve(monthly(2020, 2021));
  StubServer server([&](const json& req, httplib::Response& res) {
    if (calls.fetch_add(1) == 0) {
      res.status = 500;
      return;
    }
    ok(req, res);
  });
  BlsClient client(server.options());
  EXPECT_EQ(client.fetch_series({"S", 2020, 2021, ""}).size(), 24u);
  EXPECT_EQ(client.requests_sent(), 2u);
}

TEST(BlsClient, GivesUpAfterMaxAttempts) {
  StubServer server([](const json&, httplib::Response& res) { res.status = 503; });
  BlsClient client(server.options());
  try {
    client.fetch_series({"S", 2020, 2021, ""});
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_EQ(e.attempts(), 3);
  }
  EXPECT_EQ(server.bodies().size(), 3u);
}

TEST(BlsClient, ClientErrorsAreNotRetried) {
  StubServer server([](const json&, httplib::Response& res) { res.status = 400; });
  BlsClient client(server.options());
  try {
    client.fetch_series({"S", 2020, 2021, ""});
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_EQ(e.attempts(), 1);
  }
}

TEST(BlsClient, RemoteStatusSurfaces) {
  StubServer server([](const json&, httplib::Response& res) {
    res.set_content(R"({"status":"REQUEST_NOT_PROCESSED","message":["invalid key"]})", "application/json");
  });
  BlsClient client(server.options());
  EXPECT_THROW(client.fetch_series({"S", 2020, 2021, ""}), RemoteError);
}

TEST(BlsClient, UnreachableHostIsTransportError) {
  BlsClientOptions o;
  o.base_url = "http://127.0.0.1:1";
  o.retry_backoff = std::chrono::milliseconds(1);
  o.max_attempts = 2;
  BlsClient client(o);
  try {
    client.fetch_series({"S", 2020, 2021, ""});
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_EQ(e.attempts(), 2);
  }
}

class RecordingSource : public SeriesSource {
 public:
  std::vector<MonthlyObservation> fetch_series(const SeriesRequest& req) override {
    req.validate();
    const int id = std::stoi(req.series_id);
    std::this_thread::sleep_for(std::chrono::milliseconds((7 - id % 7) * 2));
    return {{req.start_year, 1, static_cast<double>(id)}};
  }
};

TEST(FetchMany, ResultsFollowRequestOrder) {
  std::vector<SeriesRequest> reqs;
  for (int i = 0; i < 20; ++i) reqs.push_back({std::to_string(i), 2020, 2020, ""});
  const auto out = fetch_many([] { return std::make_unique<RecordingSource>(); }, reqs, 4,
                              std::chrono::milliseconds(0));
  ASSERT_EQ(out.size(), 20u);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(out[static_cast<std::size_t>(i)][0].value, i);
}

TEST(FetchMany, FirstFailurePropagates) {
  std::vector<SeriesRequest> reqs{{"1", 2020, 2020, ""}, {"", 2020, 2020, ""}};
  EXPECT_THROW(fetch_many([] { return std::make_unique<RecordingSource>(); }, reqs, 2, std::chrono::milliseconds(0)),
               ContractError);
}

TEST(FixtureSource, FiltersYearsAndReportsMissingFiles) {
  testing::TempDir dir("fixture");
  {
    std::ofstream out(dir.path() / "S.json");
    out << format_bls_response("S", monthly(2006, 2024));
  }
  FixtureSource src(dir.path());
  const auto obs = src.fetch_series({"S", 2010, 2011, ""});
  EXPECT_EQ(obs, monthly(2010, 2011));
  EXPECT_THROW(src.fetch_series({"T", 2010, 2011, ""}), DataError);
}

TEST(FixtureSource, CommittedFixturesCoverTheCatalog) {
  FixtureSource src(LABORCAST_FIXTURE_DIR);
  for (const auto& info : industry_catalog()) {
    for (const auto& id : info.series_ids) {
      const auto obs = src.fetch_series({std::string(id), 2006, 2024, ""});
      EXPECT_EQ(obs.size(), 19u * 12u) << id;
    }
  }
}

}  // namespace
}  // namespace laborcast
