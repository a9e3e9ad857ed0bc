#include "linkhom/io.hpp"

#include <limits>
#include <stdexcept>

#include "json.hpp"

#include "linkhom/errors.hpp"

namespace linkhom {

using Json = nlohmann::ordered_json;

namespace {

Json parse_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

Json integer_json(const Integer& x) {
  if (x.fits_int64()) return x.to_int64();
  return x.to_string();
}

Integer integer_of(const Json& j, const std::string& where) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) {
      const auto u = j.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) return Integer::parse(std::to_string(u));
    }
    return Integer(j.get<long long>());
  }
  if (j.is_string()) {
    try {
      return Integer::parse(j.get<std::string>());
    } catch (const std::invalid_argument&) {
    }
  }
  throw InputError(where + ": expected an integer, got " + j.dump());
}

CanonicalForm canonical_of(const Json& j) {
  if (!j.is_object()) throw InputError("canonical form must be a JSON object");
  if (!j.contains("components")) throw InputError("canonical form lacks \"components\"");
  if (!j.contains("Y")) throw InputError("canonical form lacks \"Y\"");
  const Json& c = j.at("components");
  if (!c.is_number_integer()) throw InputError("\"components\" must be an integer");
  const long long n = c.get<long long>();
  if (n < 2 || n > kMaxComponents) throw InputError("\"components\" = " + std::to_string(n) + " is outside 2..5");
  const Json& y = j.at("Y");
  if (!y.is_array()) throw InputError("\"Y\" must be a list of blocks");
  if (static_cast<long long>(y.size()) != n - 1) {
    throw InputError("\"Y\" has " + std::to_string(y.size()) + " blocks, expected " + std::to_string(n - 1));
  }
  std::vector<CanonicalForm::Block> blocks;
  for (std::size_t k = 0; k < y.size(); ++k) {
    const std::string name = "block Y" + std::to_string(k + 1);
    if (!y[k].is_array()) throw InputError(name + " must be a list");
    CanonicalForm::Block b;
    for (std::size_t p = 0; p < y[k].size(); ++p) b.push_back(integer_of(y[k][p], name + " position " + std::to_string(p + 1)));
    blocks.push_back(std::move(b));
  }
  return CanonicalForm(static_cast<int>(n), std::move(blocks));
}

Json canonical_to(const CanonicalForm& y) {
  Json blocks = Json::array();
  for (const auto& b : y.blocks()) {
    Json jb = Json::array();
    for (const auto& x : b) jb.push_back(integer_json(x));
    blocks.push_back(std::move(jb));
  }
  return Json{{"components", y.n()}, {"Y", std::move(blocks)}};
}

Json move_to(const PartialConj& m) { return Json{{"component", m.component}, {"conjugator", m.conjugator_string()}}; }

PartialConj move_of(const Json& j, std::size_t pos) {
  const std::string where = "certificate move " + std::to_string(pos + 1);
  if (!j.is_object() || !j.contains("component") || !j.contains("conjugator")) {
    throw InputError(where + ": expected {\"component\": i, \"conjugator\": w}");
  }
  if (!j.at("component").is_number_integer() || !j.at("conjugator").is_string()) {
    throw InputError(where + ": wrong field types");
  }
  return PartialConj::parse(j.at("component").get<int>(), j.at("conjugator").get<std::string>());
}

Json verdict_to(const Verdict& v, bool with_certificate) {
  Json j;
  j["result"] = v.homotopic ? "link-homotopic" : "not-link-homotopic";
  j["step"] = v.homotopic ? Json(nullptr) : Json(v.step);
  if (v.homotopic && with_certificate) {
    Json c = Json::array();
    for (const auto& m : v.certificate) c.push_back(move_to(m));
    j["certificate"] = std::move(c);
  } else {
    j["certificate"] = nullptr;
  }
  return j;
}

}  // namespace

CanonicalForm parse_canonical(std::string_view text) { return canonical_of(parse_text(text)); }

std::string canonical_json(const CanonicalForm& y) { return canonical_to(y).dump(); }

std::string move_json(const PartialConj& m) { return move_to(m).dump(); }

std::vector<PartialConj> parse_certificate(std::string_view text) {
  Json j = parse_text(text);
  if (j.is_object()) {
    if (!j.contains("certificate")) throw InputError("object has no \"certificate\" field");
    j = j.at("certificate");
  }
  if (j.is_null()) return {};
  if (!j.is_array()) throw InputError("certificate must be a list of moves");
  std::vector<PartialConj> out;
  for (std::size_t p = 0; p < j.size(); ++p) out.push_back(move_of(j[p], p));
  return out;
}

std::string verdict_json(const Verdict& v, bool with_certificate) { return verdict_to(v, with_certificate).dump(); }

Verdict parse_verdict(std::string_view text) {
  const Json j = parse_text(text);
  if (!j.is_object() || !j.contains("result") || !j.at("result").is_string()) {
    throw InputError("verdict lacks a \"result\" string");
  }
  Verdict v;
  const auto result = j.at("result").get<std::string>();
  if (result == "link-homotopic") {
    v.homotopic = true;
    v.certificate = parse_certificate(text);
  } else if (result == "not-link-homotopic") {
    if (!j.contains("step") || !j.at("step").is_number_integer()) throw InputError("negative verdict lacks \"step\"");
    v.step = j.at("step").get<int>();
  } else {
    throw InputError("unknown result \"" + result + "\"");
  }
  return v;
}

std::string mu_table_json(int n, const std::vector<MuResidue>& residues) {
  Json rows = Json::array();
  for (const auto& r : residues) {
    rows.push_back(Json{{"index", r.index.to_string()}, {"value", integer_json(r.value)}, {"modulus", integer_json(r.modulus)}});
  }
  return Json{{"components", n}, {"residues", std::move(rows)}}.dump();
}

std::string mu_report_json(const MuComparison& report) {
  Json rows = Json::array();
  for (std::size_t p = 0; p < report.left.size(); ++p) {
    const auto& l = report.left[p];
    const auto& r = report.right[p];
    rows.push_back(Json{{"index", l.index.to_string()},
                        {"left", Json{{"value", integer_json(l.value)}, {"modulus", integer_json(l.modulus)}}},
                        {"right", Json{{"value", integer_json(r.value)}, {"modulus", integer_json(r.modulus)}}}});
  }
  Json j;
  j["equal"] = report.equal;
  j["first_difference"] = report.first_difference ? Json(report.first_difference->to_string()) : Json(nullptr);
  j["residues"] = std::move(rows);
  return j.dump();
}

std::string string_link_json(const StringLink& sl) {
  Json j = Json::array();
  for (const auto& l : sl.longitudes()) j.push_back(l.series().to_string());
  return j.dump();
}

std::vector<std::pair<CanonicalForm, CanonicalForm>> parse_pairs(std::string_view text) {
  const Json j = parse_text(text);
  if (!j.is_array()) throw InputError("batch input must be a list of pairs");
  std::vector<std::pair<CanonicalForm, CanonicalForm>> out;
  for (std::size_t p = 0; p < j.size(); ++p) {
    const Json& e = j[p];
    try {
      if (e.is_object() && e.contains("left") && e.contains("right")) {
        out.emplace_back(canonical_of(e.at("left")), canonical_of(e.at("right")));
      } else if (e.is_array() && e.size() == 2) {
        out.emplace_back(canonical_of(e[0]), canonical_of(e[1]));
      } else {
        throw InputError("expected {\"left\": ..., \"right\": ...}");
      }
    } catch (const InputError& err) {
      throw InputError("pair " + std::to_string(p + 1) + ": " + err.what());
    }
  }
  return out;
}

std::string batch_json(const std::vector<BatchResult>& results, bool with_certificate) {
  Json j = Json::array();
  for (const auto& r : results) {
    if (r.verdict) {
      j.push_back(verdict_to(*r.verdict, with_certificate));
    } else {
      j.push_back(Json{{"error", r.error}, {"code", r.error_code}});
    }
  }
  return j.dump();
}

}  // namespace linkhom
