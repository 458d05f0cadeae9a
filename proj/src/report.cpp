#include "monolab/report.hpp"

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <map>

namespace monolab::report {

const char* kSchemaVersion = "monolab-report/1";
const char* kToolVersion = "0.1.0";

namespace {

void escape_string(const std::string& s, std::string& out) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void emit(const nlohmann::json& j, std::string& out) {
  using value_t = nlohmann::json::value_t;
  switch (j.type()) {
    case value_t::null: out += "null"; break;
    case value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
    case value_t::number_integer:
    case value_t::number_unsigned: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%lld",
                    static_cast<long long>(j.get<int64_t>()));
      out += buf;
      break;
    }
    case value_t::number_float: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
      out += buf;
      break;
    }
    case value_t::string: escape_string(j.get<std::string>(), out); break;
    case value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += ',';
        first = false;
        emit(item, out);
      }
      out += ']';
      break;
    }
    case value_t::object: {
      // nlohmann::json objects iterate in sorted key order already.
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        escape_string(it.key(), out);
        out += ':';
        emit(it.value(), out);
      }
      out += '}';
      break;
    }
    default: out += "null";
  }
}

nlohmann::json vec_to_json(const Vec& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : v) a.push_back(x);
  return a;
}

nlohmann::json point_to_json(const GraphPoint& p) {
  return nlohmann::json{{"x", vec_to_json(p.x)}, {"v", vec_to_json(p.v)}};
}

} // namespace

std::string canonical_json(const nlohmann::json& j) {
  std::string out;
  emit(j, out);
  return out;
}

nlohmann::json verdict_to_json(const Verdict& v) {
  nlohmann::json j;
  j["status"] = status_name(v.status);
  j["certified"] = v.certified;
  if (!v.name.empty()) j["analysis"] = v.name;
  if (!v.detail.empty()) j["detail"] = v.detail;
  if (v.witness_pair) {
    j["witness_pair"] = nlohmann::json::array(
        {point_to_json(v.witness_pair->first), point_to_json(v.witness_pair->second)});
  }
  if (v.witness_point) j["witness_point"] = point_to_json(*v.witness_point);
  if (v.witness_query) j["witness_query"] = vec_to_json(*v.witness_query);
  if (v.witness_w) j["witness_w"] = vec_to_json(*v.witness_w);
  if (v.witness_z) j["witness_z"] = vec_to_json(*v.witness_z);
  nlohmann::json moduli;
  if (v.sigma_hat) moduli["sigma_hat"] = *v.sigma_hat;
  if (v.r_hat) moduli["r_hat"] = *v.r_hat;
  if (v.ell_hat) moduli["ell_hat"] = *v.ell_hat;
  if (v.value) moduli["value"] = *v.value;
  if (!moduli.empty()) j["moduli"] = moduli;
  nlohmann::json res;
  if (v.resolution.density > 0) res["density"] = v.resolution.density;
  if (v.resolution.tol > 0) res["tol"] = v.resolution.tol;
  if (!v.resolution.radii.empty()) res["radii"] = vec_to_json(v.resolution.radii);
  if (!v.resolution.lambdas.empty())
    res["lambdas"] = vec_to_json(v.resolution.lambdas);
  if (!v.resolution.note.empty()) res["note"] = v.resolution.note;
  if (!res.empty()) j["resolution"] = res;
  if (!v.parts.empty()) {
    nlohmann::json parts = nlohmann::json::array();
    for (const auto& p : v.parts) parts.push_back(verdict_to_json(p));
    j["parts"] = parts;
  }
  return j;
}

std::string content_hash(const std::string& text) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a:%016" PRIx64, h);
  return buf;
}

} // namespace monolab::report
