#include "kinrel/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "kinrel/errors.hpp"
#include "kinrel/format.hpp"

namespace kinrel {

namespace {

using nlohmann::json;

std::vector<double> coefficients(const json& doc, const char* key) {
  if (!doc.contains(key)) return {1.0};
  const json& node = doc.at(key);
  if (!node.is_array() || node.empty()) {
    throw ConfigError(std::string("\"") + key + "\" must be a non-empty array of numbers");
  }
  std::vector<double> out;
  for (const auto& x : node) {
    if (!x.is_number()) {
      throw ConfigError(std::string("\"") + key + "\" must contain numbers only");
    }
    out.push_back(x.get<double>());
  }
  return out;
}

double number(const json& node, const char* key, double fallback) {
  if (!node.contains(key)) return fallback;
  if (!node.at(key).is_number()) throw ConfigError(std::string("\"") + key + "\" must be a number");
  return node.at(key).get<double>();
}

double parse_double(const std::string& text, const std::string& whole) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError("cannot parse \"" + text + "\" in range \"" + whole + "\"");
  }
  return value;
}

}  // namespace

FluxModel parse_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("model document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("flux") || !doc.at("flux").is_object()) {
    throw ConfigError("model document needs a \"flux\" object");
  }
  const json& flux = doc.at("flux");
  if (!flux.contains("kind") || !flux.at("kind").is_string()) {
    throw ConfigError("\"flux\" needs a string \"kind\"");
  }
  const std::string kind = flux.at("kind").get<std::string>();

  Interval domain = kDefaultDomain;
  if (doc.contains("domain")) {
    const json& d = doc.at("domain");
    if (!d.is_array() || d.size() != 2 || !d[0].is_number() || !d[1].is_number()) {
      throw ConfigError("\"domain\" must be [lo, hi]");
    }
    domain = {d[0].get<double>(), d[1].get<double>()};
    if (!(domain.lo < 0.0 && domain.hi > 0.0)) {
      throw ConfigError("\"domain\" must satisfy lo < 0 < hi");
    }
  }

  Polynomial b(coefficients(doc, "b"));
  Polynomial c1(coefficients(doc, "c1"));
  Polynomial c2(coefficients(doc, "c2"));
  Polynomial f;
  if (kind == "cubic") {
    f = Polynomial{0.0, 0.0, 0.0, 1.0};
  } else if (kind == "scaled_cubic") {
    const double K = number(flux, "K", 1.0);
    const double C = number(flux, "C", 1.0);
    if (!(K > 0.0) || !(C > 0.0)) throw ConfigError("scaled_cubic needs K > 0 and C > 0");
    f = Polynomial{0.0, 0.0, 0.0, K};
    c1 = c1.scaled(C);
  } else if (kind == "polynomial") {
    if (!flux.contains("coeffs")) throw ConfigError("polynomial flux needs \"coeffs\"");
    f = Polynomial(coefficients(flux, "coeffs"));
  } else {
    throw ConfigError("unknown flux kind \"" + kind + "\"");
  }
  return FluxModel::polynomial(std::move(f), std::move(b), std::move(c1), std::move(c2), domain);
}

FluxModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model file \"" + path + "\"");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_model(text.str());
}

std::vector<double> parse_range(const std::string& text) {
  const auto first = text.find(':');
  if (first == std::string::npos) return {parse_double(text, text)};
  const auto second = text.find(':', first + 1);
  if (second == std::string::npos || text.find(':', second + 1) != std::string::npos) {
    throw ConfigError("range \"" + text + "\" must be start:stop:count");
  }
  const double start = parse_double(text.substr(0, first), text);
  const double stop = parse_double(text.substr(first + 1, second - first - 1), text);
  const std::string count_text = text.substr(second + 1);
  long long count = 0;
  const char* end = count_text.data() + count_text.size();
  const auto [ptr, ec] = std::from_chars(count_text.data(), end, count);
  if (ec != std::errc() || ptr != end || count < 0) {
    throw ConfigError("range \"" + text + "\" needs a non-negative integer count");
  }
  std::vector<double> out;
  if (count == 1) {
    if (start != stop) throw ConfigError("range \"" + text + "\" with count 1 needs start == stop");
    out.push_back(start);
  }
  for (long long i = 0; count > 1 && i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(i == count - 1 ? stop : (1.0 - t) * start + t * stop);
  }
  return out;
}

void write_csv(std::ostream& out, const DiffusiveProfile& profile) {
  out << "y,u\n";
  for (const auto& s : profile.samples) {
    out << format_number(s.y) << ',' << format_number(s.u) << '\n';
  }
}

void write_shock_set_csv(std::ostream& out, const std::vector<double>& u_minus,
                         const std::vector<double>& alpha, const std::vector<ShockSet>& sets) {
  out << "u_minus,alpha,isolated,lo,hi,lo_closed,hi_closed\n";
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const ShockSet& s = sets[i];
    out << format_number(u_minus[i]) << ',' << format_number(alpha[i]) << ','
        << (s.isolated ? format_number(*s.isolated) : std::string()) << ','
        << format_number(s.lo) << ',' << format_number(s.hi) << ',' << (s.lo_closed ? 1 : 0)
        << ',' << (s.hi_closed ? 1 : 0) << '\n';
  }
}

void write_diffusive_set_csv(std::ostream& out, const std::vector<double>& u_minus,
                             const std::vector<DiffusiveShockSet>& sets) {
  out << "u_minus,lo,hi\n";
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (const auto& piece : sets[i].pieces) {
      out << format_number(u_minus[i]) << ',' << format_number(piece.lo) << ','
          << format_number(piece.hi) << '\n';
    }
  }
}

}  // namespace kinrel
