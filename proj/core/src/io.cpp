#include "momentreg/io.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include "json.hpp"

namespace momentreg {

using nlohmann::json;

namespace {

json parse_json(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos)
    throw ParseError("moment file is empty");
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

double as_number(const json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  return j.get<double>();
}

Interval as_interval(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2)
    throw ParseError(std::string(what) + " must be [a, b]");
  Interval iv{as_number(j[0], what), as_number(j[1], what)};
  if (iv.b < iv.a) throw ParseError(std::string(what) + " needs a <= b");
  return iv;
}

PowerMoments parse_power(const json& doc) {
  PowerMoments pm;
  if (doc.contains("support")) {
    const json& s = doc["support"];
    if (s.is_string() && s == "half_line") {
      pm.support = HalfLine{};
    } else if (s.is_object() && s.contains("interval")) {
      pm.support = as_interval(s["interval"], "support.interval");
    } else {
      throw ParseError("power support must be \"half_line\" or {\"interval\": [a, b]}");
    }
  }
  for (const json& v : doc["values"]) pm.values.push_back(as_number(v, "values[]"));
  if (pm.values.empty()) throw ParseError("values must not be empty");
  return pm;
}

TrigMoments parse_trig(const json& doc) {
  if (doc.contains("support") && doc["support"] != "circle")
    throw ParseError("trig support must be \"circle\"");
  TrigMoments tm;
  for (const json& v : doc["values"]) {
    if (v.is_array()) {
      if (v.size() != 2) throw ParseError("trig values must be numbers or [re, im]");
      tm.values.emplace_back(as_number(v[0], "values[].re"), as_number(v[1], "values[].im"));
    } else {
      tm.values.emplace_back(as_number(v, "values[]"), 0.0);
    }
  }
  if (tm.values.empty()) throw ParseError("values must not be empty");
  return tm;
}

MultiMoments parse_multi(const json& doc) {
  if (!doc.contains("dimension") || !doc.contains("order"))
    throw ParseError("multi moments need \"dimension\" and \"order\"");
  const auto d = doc["dimension"].get<long>();
  const auto n = doc["order"].get<long>();
  if (d < 1 || n < 0) throw ParseError("dimension must be >= 1 and order >= 0");
  MultiMoments mm;
  try {
    mm = MultiMoments(static_cast<std::size_t>(d), static_cast<std::size_t>(n));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  for (const json& entry : doc["values"]) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_array())
      throw ParseError("multi values must be [[index...], value] pairs");
    std::vector<unsigned> idx;
    for (const json& e : entry[0]) {
      if (!e.is_number_integer() || e.get<long>() < 0)
        throw ParseError("multi index entries must be non-negative integers");
      idx.push_back(e.get<unsigned>());
    }
    if (idx.size() != mm.dimension) throw ParseError("multi index has wrong dimension");
    MultiIndex alpha(std::move(idx));
    if (alpha.total_degree() > mm.order) throw ParseError("multi index exceeds order");
    mm.set(alpha, as_number(entry[1], "multi value"));
  }
  mm.total_mass = doc.contains("total_mass") ? as_number(doc["total_mass"], "total_mass")
                                             : mm.values[0];
  if (doc.contains("support")) {
    const json& s = doc["support"];
    if (s.is_object() && s.contains("box")) {
      std::vector<Interval> box;
      for (const json& iv : s["box"]) box.push_back(as_interval(iv, "support.box[]"));
      if (box.size() != mm.dimension) throw ParseError("support box has wrong dimension");
      mm.box = std::move(box);
    } else if (!(s.is_string() && s == "orthant")) {
      throw ParseError("multi support must be \"orthant\" or {\"box\": [...]}");
    }
  }
  return mm;
}

json support_json(const Support& s) {
  if (const auto* iv = std::get_if<Interval>(&s))
    return json{{"interval", {iv->a, iv->b}}};
  return "half_line";
}

}  // namespace

MomentData parse_moments(std::string_view json_text) {
  const json doc = parse_json(json_text);
  try {
    if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string())
      throw ParseError("moment file needs a string \"kind\" field");
    if (!doc.contains("values") || !doc["values"].is_array())
      throw ParseError("moment file needs a \"values\" array");
    const auto kind = doc["kind"].get<std::string>();
    if (kind == "power") return parse_power(doc);
    if (kind == "trig") return parse_trig(doc);
    if (kind == "multi") return parse_multi(doc);
    throw ParseError("unknown moment kind \"" + kind + "\"");
  } catch (const json::exception& e) {
    throw ParseError(std::string("schema error: ") + e.what());
  }
}

std::string moments_to_json(const MomentData& data) {
  json doc;
  if (const auto* pm = std::get_if<PowerMoments>(&data)) {
    doc = {{"kind", "power"}, {"support", support_json(pm->support)}, {"values", pm->values}};
  } else if (const auto* tm = std::get_if<TrigMoments>(&data)) {
    json values = json::array();
    for (const Complex& v : tm->values) values.push_back({v.real(), v.imag()});
    doc = {{"kind", "trig"}, {"support", "circle"}, {"values", values}};
  } else {
    const auto& mm = std::get<MultiMoments>(data);
    const auto ix = IndexSet::get(mm.dimension, mm.order);
    json values = json::array();
    for (std::size_t p = 0; p < ix->size(); ++p) {
      const auto e = (*ix)[p].entries();
      values.push_back({std::vector<unsigned>(e.begin(), e.end()), mm.values[p]});
    }
    json support = "orthant";
    if (mm.box) {
      json box = json::array();
      for (const auto& iv : *mm.box) box.push_back({iv.a, iv.b});
      support = {{"box", box}};
    }
    doc = {{"kind", "multi"},       {"dimension", mm.dimension}, {"order", mm.order},
           {"support", support},    {"values", values},         {"total_mass", mm.total_mass}};
  }
  return doc.dump(2);
}

std::vector<RayDirection> parse_directions(std::string_view json_text) {
  const json doc = parse_json(json_text);
  const json& list = doc.is_object() && doc.contains("directions") ? doc["directions"] : doc;
  if (!list.is_array() || list.empty()) throw ParseError("directions must be a non-empty array");
  std::vector<RayDirection> out;
  try {
    for (const json& y : list) out.emplace_back(y.get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("directions: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return out;
}

std::string series_to_json(const FormalSeries& s) {
  json coeffs = json::array();
  for (std::size_t p = 0; p < s.size(); ++p) {
    const auto e = s.indices()[p].entries();
    coeffs.push_back({std::vector<unsigned>(e.begin(), e.end()), s[p].real(), s[p].imag()});
  }
  return json{{"dimension", s.dimension()}, {"order", s.order()}, {"coefficients", coeffs}}
      .dump(2);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

}  // namespace momentreg
