#ifndef HKB_REPORT_HPP
#define HKB_REPORT_HPP

// JSON views of the library results. Keys keep insertion order so reports
// are byte-stable; integers that overflow 64 bits become decimal strings.

#include <json.hpp>
#include <limits>
#include <string>
#include <vector>

#include "hkb/analysis.hpp"
#include "hkb/classify.hpp"
#include "hkb/equivalence.hpp"

namespace hkb {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline Json big_json(const BigInt& v) {
  if (v >= 0 && v <= std::numeric_limits<std::uint64_t>::max()) return v.convert_to<std::uint64_t>();
  return v.str();
}

inline Json opt_big(const std::optional<BigInt>& v) { return v ? big_json(*v) : Json(nullptr); }

inline Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    Json r = Json::array();
    for (std::size_t j = 0; j < m.cols; ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline Json points_json(const std::vector<Coords>& pts) {
  Json out = Json::array();
  for (const auto& p : pts) out.push_back(p);
  return out;
}

inline Json to_json(const BoundReport& r) {
  return Json{{"n", r.n},
              {"d", r.d},
              {"q", r.q},
              {"measured", big_json(r.measured)},
              {"theta", opt_big(r.theta)},
              {"serre", big_json(r.serre)},
              {"sziklai", opt_big(r.sziklai)},
              {"aubry_perret", opt_big(r.aubry_perret)},
              {"proj_space", big_json(r.proj_space)},
              {"has_linear_components", r.has_linear_components},
              {"achieves_theta", r.achieves_theta},
              {"achieves_serre", r.achieves_serre},
              {"exceeds_any", r.exceeds_any}};
}

inline Json to_json(const EquivalenceVerdict& v) {
  Json j{{"status", verdict_name(v.status)}, {"reason", v.reason}, {"method", v.method}, {"candidates", v.candidates}};
  j["witness"] = v.witness ? matrix_json(*v.witness) : Json(nullptr);
  j["scalar"] = v.witness ? Json(v.scalar) : Json(nullptr);
  return j;
}

inline Json to_json(const ConeReport& c) {
  Json j{{"vertex_dimension", c.vertex_dimension()}, {"vertex_basis", matrix_json(c.vertex.basis())}};
  j["base_coordinates"] = c.base_coordinates;
  j["base_ambient"] = c.base_ambient();
  j["base_form"] = render(c.base_form);
  return j;
}

inline Json to_json(const SingularityReport& r) {
  Json per = Json::array();
  for (std::size_t i = 0; i < r.tested_extensions.size(); ++i)
    per.push_back(Json{{"t", r.tested_extensions[i]}, {"count", r.points[i].size()}, {"points", points_json(r.points[i])}});
  Json j{{"nonsingular_at_tested_t", r.empty()}, {"gradient_identically_zero", r.gradient_identically_zero}};
  j["pth_root"] = r.pth_root ? Json(render(*r.pth_root)) : Json(nullptr);
  j["extensions"] = std::move(per);
  return j;
}

inline Json spectrum_json(const std::map<std::uint64_t, std::uint64_t>& s) {
  Json out = Json::array();
  for (const auto& [count, mult] : s) out.push_back(Json{{"count", count}, {"hyperplanes", mult}});
  return out;
}

inline Json to_json(const Fingerprint& f) {
  Json j{{"degree", f.degree}, {"ambient", f.ambient}, {"count_q", f.count_q}};
  j["count_q2"] = f.count_q2 ? Json(*f.count_q2) : Json(nullptr);
  j["singular_count"] = f.singular_count;
  j["section_spectrum"] = spectrum_json(f.spectrum);
  j["linear_components"] = f.linear_components;
  return j;
}

inline Json to_json(const Classification& c) {
  Json j{{"status", status_name(c.status)}, {"case", case_name(c.theorem_case)}, {"alarm", c.alarm()}};
  j["bounds"] = to_json(c.bounds);
  j["evidence"] = c.evidence;
  j["linear_components"] = points_json(c.linear_components);
  j["cone"] = c.cone ? to_json(*c.cone) : Json(nullptr);
  j["equivalence"] = c.equivalence ? to_json(*c.equivalence) : Json(nullptr);
  j["antisymmetric_matrix"] = c.antisymmetric ? matrix_json(*c.antisymmetric) : Json(nullptr);
  if (c.pencil)
    j["pencil"] = Json{{"change", matrix_json(c.pencil->change)}, {"a", c.pencil->a}, {"b", c.pencil->b}, {"det", c.pencil->det}};
  else
    j["pencil"] = nullptr;
  return j;
}

}  // namespace hkb

#endif  // HKB_REPORT_HPP
