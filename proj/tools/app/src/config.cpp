// SPDX-License-Identifier: Apache-2.0
#include "laborcast_app/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <ostream>
#include <regex>
#include <sstream>
#include <cstdio>

#include "laborcast/csv.hpp"
#include "laborcast/error.hpp"
#include "laborcast/panel.hpp"

namespace laborcast::app {
namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  // Quotes and trailing commas are dropped so a Python dict line pastes in.
  const char* junk = " \t'\",";
  const auto b = s.find_first_not_of(junk);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(junk);
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_integer(const std::string& key, const std::string& v) {
  T out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    return parse_double(v);
  } catch (const Error&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on" || v == "True") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off" || v == "False") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<std::string> parse_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : v + ",") {
    if (c == ',' || c == ';' || c == '[' || c == ']') {
      auto t = trim(cur);
      if (!t.empty()) out.push_back(std::move(t));
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

YearMonth parse_year_month(const std::string& key, const std::string& v) {
  const auto dash = v.find('-');
  if (dash == std::string::npos) throw ConfigError(key + ": expected YYYY-MM, got '" + v + "'");
  YearMonth ym{parse_integer<int>(key, v.substr(0, dash)), parse_integer<unsigned>(key, v.substr(dash + 1))};
  if (ym.month < 1 || ym.month > 12) throw ConfigError(key + ": month out of range in '" + v + "'");
  return ym;
}

std::string year_month_string(YearMonth ym) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u", ym.year, ym.month);
  return buf;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

int compare(YearMonth a, YearMonth b) {
  return a.year != b.year ? (a.year < b.year ? -1 : 1) : (a.month == b.month ? 0 : (a.month < b.month ? -1 : 1));
}

void apply_key(RunConfig& c, const std::string& section, const std::string& key, const std::string& v) {
  const std::string name = section + "." + key;
  auto size = [&] { return parse_integer<std::size_t>(name, v); };
  if (section == "MODEL_CONFIG") {
    if (key == "cnn_kernel_size") c.model.conv_kernel = size();
    else if (key == "rnn_hidden_size") c.model.rnn_hidden = size();
    else if (key == "skip_size") {
      c.model.skip_lengths.clear();
      for (const auto& s : parse_list(v)) c.model.skip_lengths.push_back(parse_integer<std::size_t>(name, s));
    } else if (key == "skip_hidden_size") c.model.skip_hidden = size();
    else if (key == "highway_window") c.model.highway_window = size();
    else if (key == "cnn_channels") c.model.conv_channels = size();
    else if (key == "horizon") c.model.horizon = size();
    else if (key == "target") c.model.target_index = indicator_index(v);
    else throw ConfigError("unknown key " + name);
  } else if (section == "TRAINING_CONFIG") {
    if (key == "batch_size") c.train.batch_size = size();
    else if (key == "epochs") c.train.epochs = size();
    else if (key == "learning_rate") c.train.learning_rate = parse_real(name, v);
    else if (key == "sequence_length") c.model.window = size();
    else if (key == "test_size") c.train.test_fraction = parse_real(name, v);
    else if (key == "val_size") c.train.val_fraction = parse_real(name, v);
    else if (key == "seed") c.train.seed = parse_integer<std::uint64_t>(name, v);
    else if (key == "clip_norm") c.train.clip_norm = parse_real(name, v);
    else if (key == "optimizer") {
      if (v == "adam") c.train.optimizer = OptimizerKind::kAdam;
      else if (v == "sgd") c.train.optimizer = OptimizerKind::kSgd;
      else throw ConfigError(name + ": expected adam or sgd, got '" + v + "'");
    } else throw ConfigError("unknown key " + name);
  } else if (section == "DATA") {
    if (key == "start") c.first = parse_year_month(name, v);
    else if (key == "end") c.last = parse_year_month(name, v);
    else if (key == "industries") {
      c.industries.clear();
      if (v != "all") {
        for (const auto& s : parse_list(v)) c.industries.emplace_back(find_industry(s).slug);
      }
    } else if (key == "offline") c.offline = parse_bool(name, v);
    else if (key == "panel_dir") c.panel_dir = v;
    else if (key == "fixture_dir") c.fixture_dir = v;
    else if (key == "api_base_url") c.api_base_url = v;
    else if (key == "max_parallel_fetches") c.max_parallel_fetches = size();
    else throw ConfigError("unknown key " + name);
  } else if (section == "OUTPUT") {
    if (key == "checkpoint_dir") c.checkpoint_dir = v;
    else if (key == "report_dir") c.report_dir = v;
    else throw ConfigError("unknown key " + name);
  } else if (section == "IEHI") {
    if (key == "volatility_weight") c.iehi_weights.volatility = parse_real(name, v);
    else if (key == "separation_weight") c.iehi_weights.separation = parse_real(name, v);
    else if (key == "hiring_weight") c.iehi_weights.hiring = parse_real(name, v);
    else if (key == "trend_weight") c.iehi_weights.trend = parse_real(name, v);
    else if (key == "volatility_window") c.volatility_window = size();
    else throw ConfigError("unknown key " + name);
  } else if (section == "RUN") {
    if (key != "profile") throw ConfigError("unknown key " + name);
  } else {
    throw ConfigError("unknown section [" + section + "]");
  }
}

}  // namespace

void RunConfig::validate() const {
  try {
    model.validate();
    train.validate();
    iehi_weights.validate();
  } catch (const ContractError& e) {
    throw ConfigError(e.what());
  }
  if (compare(first, last) >= 0) {
    throw ConfigError("data start " + year_month_string(first) + " must precede end " + year_month_string(last));
  }
  if (volatility_window < 2) throw ConfigError("IEHI volatility_window must be at least 2");
  if (max_parallel_fetches < 1) throw ConfigError("max_parallel_fetches must be at least 1");
}

std::vector<std::string> RunConfig::industry_slugs() const {
  if (!industries.empty()) return industries;
  std::vector<std::string> out;
  for (const auto& info : industry_catalog()) out.emplace_back(info.slug);
  return out;
}

RunConfig profile_config(std::string_view name) {
  RunConfig c;
  c.profile = std::string(name);
  if (name == "paper-appendix") {
    // Listing values; the listing gives no channel count, so the prose value is used.
    c.model.window = 28;
    c.model.conv_channels = 32;
    c.model.conv_kernel = 6;
    c.model.rnn_hidden = 100;
    c.model.skip_lengths = {24};
    c.model.skip_hidden = 5;
    c.model.highway_window = 24;
    c.train.batch_size = 128;
    c.train.epochs = 100;
    c.train.learning_rate = 0.001;
    c.train.test_fraction = 0.2;
    c.train.val_fraction = 0.2;
  } else if (name == "paper-prose") {
    c.model.window = 30;
    c.model.conv_channels = 32;
    c.model.conv_kernel = 7;
    c.model.rnn_hidden = 64;
    c.model.skip_lengths = {4, 24};
    c.model.skip_hidden = 5;
    c.model.highway_window = 7;
    c.train.batch_size = 128;
    c.train.epochs = 100;
    c.train.learning_rate = 0.001;
    c.train.test_fraction = 0.2;
    c.train.val_fraction = 0.2;
  } else {
    throw ConfigError("unknown profile '" + std::string(name) + "' (expected paper-appendix or paper-prose)");
  }
  c.model.features = kIndicatorCount;
  c.model.horizon = 7;
  return c;
}

namespace {

// Rewrites the dict-style listing (NAME = {, 'key': value, }) into INI lines
// and passes everything else through.
std::string normalize_listing(std::istream& in) {
  static const std::regex open(R"(^\s*([A-Z_]+)\s*=\s*\{\s*$)");
  static const std::regex close(R"(^\s*\}\s*$)");
  static const std::regex entry(R"(^\s*['"]?(\w+)['"]?\s*:\s*(.*)$)");
  std::string out, line;
  std::smatch m;
  while (std::getline(in, line)) {
    if (std::regex_match(line, m, open)) {
      out += "[" + m[1].str() + "]\n";
    } else if (std::regex_match(line, close)) {
      continue;
    } else if (std::regex_match(line, m, entry)) {
      out += m[1].str() + " = " + m[2].str() + "\n";
    } else {
      out += line + "\n";
    }
  }
  return out;
}

}  // namespace

RunConfig apply_ini(const RunConfig& base, std::istream& raw) {
  pt::ptree tree;
  try {
    std::istringstream in(normalize_listing(raw));
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  RunConfig c = base;
  if (const auto run = tree.get_child_optional("RUN")) {
    if (const auto p = run->get_optional<std::string>("profile")) {
      const auto overrides_profile = trim(*p);
      if (overrides_profile != base.profile) {
        const auto keep = base;
        c = profile_config(overrides_profile);
        // Non-model settings chosen before the file still apply.
        c.industries = keep.industries;
        c.offline = keep.offline;
      }
    }
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("key '" + section + "' appears outside a section");
    for (const auto& [key, value] : body) apply_key(c, trim(section), trim(key), trim(value.data()));
  }
  c.validate();
  return c;
}

RunConfig apply_ini_file(const RunConfig& base, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return apply_ini(base, in);
}

void write_config_ini(std::ostream& out, const RunConfig& c) {
  std::vector<std::string> skips;
  for (auto p : c.model.skip_lengths) skips.push_back(std::to_string(p));
  out << "[RUN]\nprofile = " << c.profile << "\n\n";
  out << "[MODEL_CONFIG]\n"
      << "cnn_kernel_size = " << c.model.conv_kernel << '\n'
      << "rnn_hidden_size = " << c.model.rnn_hidden << '\n'
      << "skip_size = " << join(skips) << '\n'
      << "skip_hidden_size = " << c.model.skip_hidden << '\n'
      << "highway_window = " << c.model.highway_window << '\n'
      << "cnn_channels = " << c.model.conv_channels << '\n'
      << "horizon = " << c.model.horizon << '\n'
      << "target = " << indicator_name(c.model.target_index) << "\n\n";
  out << "[TRAINING_CONFIG]\n"
      << "batch_size = " << c.train.batch_size << '\n'
      << "epochs = " << c.train.epochs << '\n'
      << "learning_rate = " << format_number(c.train.learning_rate) << '\n'
      << "sequence_length = " << c.model.window << '\n'
      << "test_size = " << format_number(c.train.test_fraction) << '\n'
      << "val_size = " << format_number(c.train.val_fraction) << '\n'
      << "seed = " << c.train.seed << '\n'
      << "optimizer = " << (c.train.optimizer == OptimizerKind::kAdam ? "adam" : "sgd") << '\n'
      << "clip_norm = " << format_number(c.train.clip_norm) << "\n\n";
  out << "[DATA]\n"
      << "start = " << year_month_string(c.first) << '\n'
      << "end = " << year_month_string(c.last) << '\n'
      << "industries = " << (c.industries.empty() ? std::string("all") : join(c.industries)) << '\n'
      << "offline = " << (c.offline ? "true" : "false") << '\n'
      << "panel_dir = " << c.panel_dir.generic_string() << '\n'
      << "fixture_dir = " << c.fixture_dir.generic_string() << '\n'
      << "api_base_url = " << c.api_base_url << '\n'
      << "max_parallel_fetches = " << c.max_parallel_fetches << "\n\n";
  out << "[OUTPUT]\n"
      << "checkpoint_dir = " << c.checkpoint_dir.generic_string() << '\n'
      << "report_dir = " << c.report_dir.generic_string() << "\n\n";
  out << "[IEHI]\n"
      << "volatility_weight = " << format_number(c.iehi_weights.volatility) << '\n'
      << "separation_weight = " << format_number(c.iehi_weights.separation) << '\n'
      << "hiring_weight = " << format_number(c.iehi_weights.hiring) << '\n'
      << "trend_weight = " << format_number(c.iehi_weights.trend) << '\n'
      << "volatility_window = " << c.volatility_window << '\n';
}

}  // namespace laborcast::app
