#ifndef HKB_CLI_HPP
#define HKB_CLI_HPP

// Command layer behind the `hkb` executable. Every command returns its
// report text and exit code instead of printing, so tests can drive it.
//
// Exit codes: 0 ok, 1 property failure, 2 input error, 3 counterexample alarm.

#include <CLI11.hpp>
#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hkb/analysis.hpp"
#include "hkb/bounds.hpp"
#include "hkb/classify.hpp"
#include "hkb/constructions.hpp"
#include "hkb/equivalence.hpp"
#include "hkb/gf.hpp"
#include "hkb/parallel.hpp"
#include "hkb/poly.hpp"
#include "hkb/projgeo.hpp"
#include "hkb/random.hpp"
#include "hkb/report.hpp"

namespace hkb::cli {

enum ExitCode : int { kOk = 0, kPropertyFailure = 1, kInputError = 2, kAlarm = 3 };

struct RunConfig {
  std::string command;
  unsigned p = 2, s = 1;
  std::string poly;
  std::string construct;
  std::optional<std::size_t> ambient;
  std::vector<Elem> a, b;
  std::vector<std::vector<Elem>> forms;
  std::vector<std::array<unsigned, 3>> upper;  // i, j, a_ij with i < j
  std::string other;
  unsigned ext = 1;
  unsigned t_max = 2;
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t seed = kDefaultSeed;
  std::string format = "json";
  unsigned jobs = 1;
  unsigned degree = 0;
  std::uint64_t samples = 1000;
  std::string family = "random";
  std::string grid = "small";
  std::string inject_fault;

  bool operator==(const RunConfig&) const = default;

  /// Flag string that parses back to this config. Worker count is optional
  /// so reports can echo a config that does not depend on it.
  std::string canonical(bool with_jobs = true) const;
};

struct Outcome {
  int code = kOk;
  std::string out;
  std::string err;
};

namespace detail {

inline std::string quote(const std::string& s) {
  if (!s.empty() && s.find_first_of(" \t\"'\\;") == std::string::npos) return s;
  std::string r = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') r += '\\';
    r += c;
  }
  return r + "\"";
}

inline std::string join(const std::vector<Elem>& v) {
  std::string r;
  for (std::size_t i = 0; i < v.size(); ++i) r += (i ? "," : "") + std::to_string(v[i]);
  return r;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

inline unsigned to_uint(const std::string& t, const char* what) {
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != t.size() || v > 0xFFFFFFFFul) throw error(errc::invalid_argument, std::string(what) + ": bad integer '" + t + "'");
  return static_cast<unsigned>(v);
}

inline std::vector<Elem> parse_list(const std::string& s, const char* what) {
  std::vector<Elem> v;
  for (const auto& t : split(s, ',')) v.push_back(to_uint(t, what));
  return v;
}

inline std::pair<unsigned, unsigned> parse_field_spec(const std::string& s) {
  const auto caret = s.find('^');
  if (caret == std::string::npos) return {to_uint(s, "--field"), 1};
  return {to_uint(s.substr(0, caret), "--field"), to_uint(s.substr(caret + 1), "--field")};
}

}  // namespace detail

inline std::string RunConfig::canonical(bool with_jobs) const {
  using detail::quote;
  std::string r = command + " --field " + std::to_string(p) + "^" + std::to_string(s);
  if (!poly.empty()) r += " --poly " + quote(poly);
  if (!construct.empty()) r += " --construct " + construct;
  if (ambient) r += " --ambient " + std::to_string(*ambient);
  if (!a.empty()) r += " --a " + detail::join(a);
  if (!b.empty()) r += " --b " + detail::join(b);
  if (!upper.empty()) {
    std::string u;
    for (const auto& e : upper) u += (u.empty() ? "" : ",") + std::to_string(e[0]) + ":" + std::to_string(e[1]) + ":" + std::to_string(e[2]);
    r += " --upper " + u;
  }
  if (!forms.empty()) {
    std::string f;
    for (const auto& l : forms) f += (f.empty() ? "" : ";") + detail::join(l);
    r += " --forms " + quote(f);
  }
  if (!other.empty()) r += " --other " + quote(other);
  if (ext != 1) r += " --ext " + std::to_string(ext);
  if (degree) r += " --degree " + std::to_string(degree);
  if (samples != 1000) r += " --samples " + std::to_string(samples);
  if (family != "random") r += " --family " + family;
  if (grid != "small") r += " --grid " + grid;
  if (!inject_fault.empty()) r += " --inject-fault " + inject_fault;
  r += " --t-max " + std::to_string(t_max) + " --budget " + std::to_string(budget) + " --seed " + std::to_string(seed) +
       " --format " + format;
  if (with_jobs) r += " --jobs " + std::to_string(jobs);
  return r;
}

// ---------------------------------------------------------------------------
// argument parsing

namespace detail {

struct RawFlags {
  std::string field = "2^1", a, b, upper, forms;
};

inline void finish_config(RunConfig& c, const RawFlags& raw) {
  std::tie(c.p, c.s) = parse_field_spec(raw.field);
  if (!raw.a.empty()) c.a = parse_list(raw.a, "--a");
  if (!raw.b.empty()) c.b = parse_list(raw.b, "--b");
  if (!raw.forms.empty())
    for (const auto& f : split(raw.forms, ';')) c.forms.push_back(parse_list(f, "--forms"));
  if (!raw.upper.empty())
    for (const auto& e : split(raw.upper, ',')) {
      const auto parts = split(e, ':');
      if (parts.size() != 3) throw error(errc::invalid_argument, "--upper entries are i:j:value");
      c.upper.push_back({to_uint(parts[0], "--upper"), to_uint(parts[1], "--upper"), to_uint(parts[2], "--upper")});
    }
  if (c.format != "json" && c.format != "csv") throw error(errc::invalid_argument, "--format is json or csv");
  if (c.t_max == 0) throw error(errc::invalid_argument, "--t-max must be >= 1");
  if (c.ext == 0) throw error(errc::invalid_argument, "--ext must be >= 1");
}

inline std::unique_ptr<CLI::App> build_app(RunConfig& c, RawFlags& raw) {
  auto app = std::make_unique<CLI::App>("Hypersurfaces over finite fields and the theta bound", "hkb");
  app->require_subcommand(1);
  auto common = [&](CLI::App* sub, bool needs_input) {
    sub->add_option("--field", raw.field, "field as p^s (or p)")->capture_default_str();
    sub->add_option("--t-max", c.t_max, "largest extension degree for singular sweeps")->capture_default_str();
    sub->add_option("--budget", c.budget, "equivalence search budget")->capture_default_str();
    sub->add_option("--seed", c.seed, "seed for sampling and random search")->capture_default_str();
    sub->add_option("--format", c.format, "json or csv")->capture_default_str();
    sub->add_option("--jobs", c.jobs, "worker threads, 0 = all cores")->capture_default_str();
    sub->add_option("--ambient", c.ambient, "ambient dimension N");
    if (!needs_input) return;
    auto* po = sub->add_option("--poly", c.poly, "defining form, e.g. \"x0^3+x1^3+x2^3+x3^3\"");
    auto* co = sub->add_option("--construct", c.construct,
                               "hermitian | hermitian-cone | space-filling | quadric-pencil | pencil-union | gamma | hyperbolic-quadric");
    po->excludes(co);
    co->excludes(po);
    sub->add_option("--a", raw.a, "quadric pencil coefficients a_0,..,a_N");
    sub->add_option("--b", raw.b, "quadric pencil coefficients b_0,..,b_N");
    sub->add_option("--upper", raw.upper, "antisymmetric entries i:j:a_ij,...");
    sub->add_option("--forms", raw.forms, "pencil-union linear forms, ';'-separated");
  };
  auto* count = app->add_subcommand("count", "count rational points and compare with the bounds");
  common(count, true);
  count->add_option("--ext", c.ext, "count over F_{q^t}")->capture_default_str();
  common(app->add_subcommand("classify", "bound comparison and extremal-case classification"), true);
  common(app->add_subcommand("analyze", "singular locus, components, cone, lines, sections"), true);
  auto* equiv = app->add_subcommand("equiv", "projective equivalence of two hypersurfaces");
  common(equiv, true);
  equiv->add_option("--other", c.other, "second defining form")->required();
  auto* verify = app->add_subcommand("verify", "run the identity battery over a field grid");
  common(verify, false);
  verify->add_option("--grid", c.grid, "small (q<=4) or medium (q<=9)")->capture_default_str();
  verify->add_option("--inject-fault", c.inject_fault)->group("");
  auto* scan = app->add_subcommand("scan", "sample random hypersurfaces and classify bound achievers");
  common(scan, false);
  scan->add_option("--degree", c.degree, "degree d");
  scan->add_option("--samples", c.samples, "number of samples")->capture_default_str();
  scan->add_option("--family", c.family, "random or antisymmetric")->capture_default_str();
  auto* bounds = app->add_subcommand("bounds", "table of bound values over (n, d, q)");
  common(bounds, false);
  bounds->add_option("--grid", c.grid, "small (q<=4) or medium (q<=9)")->capture_default_str();
  return app;
}

}  // namespace detail

/// Parses a flag string such as RunConfig::canonical() produces.
inline RunConfig parse_command_line(const std::string& line) {
  RunConfig c;
  detail::RawFlags raw;
  auto app = detail::build_app(c, raw);
  app->parse(line, false);
  c.command = app->get_subcommands().front()->get_name();
  detail::finish_config(c, raw);
  return c;
}

// ---------------------------------------------------------------------------
// inputs

inline FieldPtr config_field(const RunConfig& c) { return get_field(c.p, c.s); }

inline Hypersurface build_input(const RunConfig& c) {
  const FieldPtr f = config_field(c);
  if (!c.poly.empty()) {
    std::optional<std::size_t> nv;
    if (c.ambient) nv = *c.ambient + 1;
    return parse_hypersurface(c.poly, f, nv);
  }
  const std::string& k = c.construct;
  if (k.empty()) throw error(errc::invalid_argument, "one of --poly or --construct is required");
  if (k == "hermitian") return hermitian(f, c.ambient.value_or(3));
  if (k == "hermitian-cone") {
    const std::size_t n = c.ambient.value_or(4);
    if (n < 4) throw error(errc::unsupported_dimension, "hermitian-cone needs --ambient >= 4");
    return hermitian_cone(f, n - 1);
  }
  if (k == "space-filling") {
    const std::size_t n = c.ambient.value_or(3);
    if (n < 2) throw error(errc::unsupported_dimension, "space-filling needs --ambient >= 2");
    AntisymmetricSpec spec(n - 1);
    if (c.upper.empty()) {
      for (std::size_t i = 0; i + 1 <= n; i += 2) spec.set(i, i + 1, 1);
      if (n % 2 == 0) spec.set(n - 1, n, 1);
    } else {
      for (const auto& e : c.upper) {
        if (e[1] > n) throw error(errc::variable_index_out_of_range, "--upper index beyond the ambient dimension");
        spec.set(e[0], e[1], e[2]);
      }
    }
    return space_filling(spec, f);
  }
  if (k == "quadric-pencil") {
    if (c.ambient && c.a.size() != *c.ambient + 1) throw error(errc::dimension_mismatch, "--a length must be N+1");
    return quadric_pencil(c.a, c.b, f).surface;
  }
  if (k == "pencil-union") return hyperplane_pencil_union(c.forms, f);
  if (k == "gamma") return gamma_curve(f);
  if (k == "hyperbolic-quadric") return hyperbolic_quadric(f);
  throw error(errc::invalid_argument, "unknown constructor '" + k + "'");
}

inline SearchOptions search_options(const RunConfig& c) {
  SearchOptions o;
  o.budget = c.budget;
  o.seed = c.seed;
  o.jobs = c.jobs;
  return o;
}

inline Json report_header(const RunConfig& c) {
  return Json{{"schema", kSchemaVersion}, {"command", c.command}, {"config", c.canonical(false)}};
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline std::string csv_bool(bool b) { return b ? "true" : "false"; }

inline std::string csv_big(const std::optional<BigInt>& v) { return v ? v->str() : ""; }

// ---------------------------------------------------------------------------
// commands

inline Outcome cmd_count(const RunConfig& c) {
  const Hypersurface x0 = build_input(c);
  const Hypersurface x = c.ext == 1 ? x0 : Hypersurface(extend_scalars(x0.poly(), extension_field(x0.field(), c.ext)));
  const std::uint64_t n = count_points(x, c.jobs);
  const auto comps = linear_components(x);
  const BoundReport b = bound_report(x, n, !comps.empty());
  Outcome o;
  o.code = b.exceeds_any ? kAlarm : kOk;
  if (c.format == "csv") {
    o.out = "field,ext,ambient,degree,count,theta,serre,sziklai,proj_space,linear_components,achieves_theta,achieves_serre,exceeds_any\n";
    o.out += x0.field().name() + "," + std::to_string(c.ext) + "," + std::to_string(x.ambient()) + "," + std::to_string(x.degree()) + "," +
             std::to_string(n) + "," + csv_big(b.theta) + "," + b.serre.str() + "," + csv_big(b.sziklai) + "," + b.proj_space.str() + "," +
             std::to_string(comps.size()) + "," + csv_bool(b.achieves_theta) + "," + csv_bool(b.achieves_serre) + "," +
             csv_bool(b.exceeds_any) + "\n";
    return o;
  }
  Json j = report_header(c);
  j["field"] = x0.field().name();
  j["extension"] = c.ext;
  j["polynomial"] = render(x0.poly());
  j["ambient"] = x.ambient();
  j["degree"] = x.degree();
  j["count"] = n;
  j["linear_components"] = points_json(comps);
  j["bounds"] = to_json(b);
  o.out = dump(j);
  return o;
}

inline Outcome cmd_classify(const RunConfig& c) {
  const Hypersurface x = build_input(c);
  const Classification cl = classify(x, search_options(c));
  Outcome o;
  o.code = cl.alarm() ? kAlarm : kOk;
  if (c.format == "csv") {
    o.out = "status,case,count,theta,serre,sziklai,achieves_theta,alarm\n";
    o.out += std::string(status_name(cl.status)) + "," + case_name(cl.theorem_case) + "," + cl.bounds.measured.str() + "," +
             csv_big(cl.bounds.theta) + "," + cl.bounds.serre.str() + "," + csv_big(cl.bounds.sziklai) + "," +
             csv_bool(cl.bounds.achieves_theta) + "," + csv_bool(cl.alarm()) + "\n";
    return o;
  }
  Json j = report_header(c);
  j["field"] = x.field().name();
  j["polynomial"] = render(x.poly());
  j["classification"] = to_json(cl);
  j["fingerprint"] = to_json(fingerprint(x, c.jobs));
  o.out = dump(j);
  return o;
}

inline Outcome cmd_analyze(const RunConfig& c) {
  const Hypersurface x = build_input(c);
  const auto sing = singular_points(x, c.t_max, c.jobs);
  const auto comps = linear_components(x);
  const auto cone = cone_analysis(x);
  const std::uint64_t n = count_points(x, c.jobs);
  const bool filling = n == proj_point_count(x.field().order(), static_cast<unsigned>(x.ambient()));
  std::optional<LineCoverage> lines;
  if (x.ambient() == 3) lines = covered_by_lines(x);
  const auto spectrum = section_spectrum(x);
  Outcome o;
  if (c.format == "csv") {
    o.out = "count,space_filling,linear_components,singular_points,vertex_dimension,covered_by_lines\n";
    o.out += std::to_string(n) + "," + csv_bool(filling) + "," + std::to_string(comps.size()) + "," + std::to_string(sing.total()) + "," +
             std::to_string(cone.vertex_dimension()) + "," + (lines ? csv_bool(lines->covered) : "") + "\n";
    return o;
  }
  Json j = report_header(c);
  j["field"] = x.field().name();
  j["polynomial"] = render(x.poly());
  j["ambient"] = x.ambient();
  j["degree"] = x.degree();
  j["count"] = n;
  j["space_filling"] = filling;
  j["linear_components"] = points_json(comps);
  j["singular"] = to_json(sing);
  j["cone"] = to_json(cone);
  if (lines) {
    Json w = Json::array();
    for (const auto& [p, r] : lines->witnesses) w.push_back(Json{{"point", p}, {"line_to", r ? Json(*r) : Json(nullptr)}});
    j["lines"] = Json{{"covered", lines->covered}, {"witnesses", std::move(w)}};
  } else {
    j["lines"] = nullptr;
  }
  j["section_spectrum"] = spectrum_json(spectrum);
  o.out = dump(j);
  return o;
}

inline Outcome cmd_equiv(const RunConfig& c) {
  const Hypersurface x = build_input(c);
  const Hypersurface y = parse_hypersurface(c.other, x.field_ptr(), x.poly().nvars());
  const auto v = pgl_search(x, y, search_options(c));
  Outcome o;
  if (c.format == "csv") {
    o.out = "status,reason,method,candidates\n" + std::string(verdict_name(v.status)) + "," + v.reason + "," + v.method + "," +
            std::to_string(v.candidates) + "\n";
    return o;
  }
  Json j = report_header(c);
  j["field"] = x.field().name();
  j["x"] = render(x.poly());
  j["y"] = render(y.poly());
  j["verdict"] = to_json(v);
  o.out = dump(j);
  return o;
}

// ---------------------------------------------------------------------------
// verify

struct Check {
  std::string name;
  bool passed = true;
  std::string detail;
};

inline std::vector<std::pair<unsigned, unsigned>> grid_fields(const std::string& grid) {
  std::vector<std::pair<unsigned, unsigned>> fs{{2, 1}, {3, 1}, {2, 2}};
  if (grid == "medium") fs.insert(fs.end(), {{5, 1}, {7, 1}, {2, 3}, {3, 2}});
  else if (grid != "small") throw error(errc::invalid_argument, "--grid is small or medium");
  return fs;
}

/// The identity battery. `theta_fn` is a parameter so a deliberately wrong
/// formula can be injected as a negative control.
inline std::vector<Check> run_checks(const RunConfig& c, const std::function<BigInt(unsigned, unsigned, std::uint64_t)>& theta_fn) {
  std::vector<Check> out;
  auto check = [&](std::string name, auto&& body) {
    Check ch{std::move(name), true, ""};
    try {
      if (auto fail = body()) {
        ch.passed = false;
        ch.detail = *fail;
      }
    } catch (const std::exception& e) {
      ch.passed = false;
      ch.detail = e.what();
    }
    out.push_back(std::move(ch));
  };
  using Fail = std::optional<std::string>;
  const auto fields = grid_fields(c.grid);

  check("theta-values", [&]() -> Fail {
    const std::array<std::array<unsigned, 4>, 5> cases{{{2, 4, 4, 65}, {2, 3, 4, 45}, {2, 4, 9, 280}, {3, 3, 4, 181}, {3, 2, 3, 49}}};
    for (const auto& k : cases)
      if (theta_fn(k[0], k[1], k[2]) != k[3])
        return "theta(" + std::to_string(k[0]) + "," + std::to_string(k[1]) + "," + std::to_string(k[2]) + ") != " + std::to_string(k[3]);
    return std::nullopt;
  });
  check("theta-gap-identities", [&]() -> Fail {
    for (auto [p, s] : fields) {
      const std::uint64_t q = get_field(p, s)->order();
      for (unsigned n = 2; n <= 4; ++n)
        for (unsigned d = 1; d <= q + 3; ++d) {
          const BigInt th = theta_fn(n, d, q);
          const BigInt slack = BigInt(static_cast<long long>(q) + 1 - d);
          if (serre_bound(n, d, q) - th != big_pow(q, n - 1) * slack) return "serre - theta at " + std::to_string(n) + "," + std::to_string(d);
          if (proj_space_count(n + 1, q) - th != big_pow(q, n - 1) * (q + 1) * slack)
            return "|P^{n+1}| - theta at " + std::to_string(n) + "," + std::to_string(d);
        }
    }
    return std::nullopt;
  });
  check("field-axioms", [&]() -> Fail {
    for (auto [p, s] : fields) {
      const auto f = get_field(p, s);
      const Elem q = f->order();
      for (Elem x = 0; x < q; ++x) {
        if (f->add(x, f->neg(x)) != 0 || f->mul(x, 1) != x) return f->name() + ": identities";
        if (x && f->mul(x, f->inv(x)) != 1) return f->name() + ": inverse";
        if (f->pow(x, q) != x) return f->name() + ": x^q = x";
        for (Elem y = 0; y < q; ++y)
          for (Elem z = 0; z < q; ++z) {
            if (f->mul(x, f->add(y, z)) != f->add(f->mul(x, y), f->mul(x, z))) return f->name() + ": distributivity";
            if (f->mul(x, f->mul(y, z)) != f->mul(f->mul(x, y), z)) return f->name() + ": associativity";
          }
      }
    }
    return std::nullopt;
  });
  check("hermitian-equality", [&]() -> Fail {
    for (auto [p, s] : fields) {
      const auto f = get_field(p, s);
      if (!f->is_square_order()) continue;
      const auto n = count_points(hermitian(f), c.jobs);
      if (n != theta_fn(2, f->sqrt_order() + 1, f->order())) return f->name() + ": count " + std::to_string(n);
      if (!singular_points(hermitian(f), 1).empty()) return f->name() + ": singular";
    }
    return std::nullopt;
  });
  check("space-filling-equality", [&]() -> Fail {
    for (auto [p, s] : fields) {
      const auto f = get_field(p, s);
      const std::uint64_t q = f->order();
      const auto n = count_points(corollary_surfaces(f).space_filling, c.jobs);
      if (n != proj_space_count(3, q) || n != theta_fn(2, static_cast<unsigned>(q + 1), q)) return f->name() + ": count " + std::to_string(n);
    }
    return std::nullopt;
  });
  check("quadric-equality", [&]() -> Fail {
    for (auto [p, s] : fields) {
      const auto f = get_field(p, s);
      const std::uint64_t q = f->order();
      const auto n = count_points(hyperbolic_quadric(f), c.jobs);
      if (n != (q + 1) * (q + 1) || n != theta_fn(2, 2, q)) return f->name() + ": count " + std::to_string(n);
    }
    return std::nullopt;
  });
  check("serre-equality", [&]() -> Fail {
    for (auto [p, s] : fields) {
      const auto f = get_field(p, s);
      const Elem q = f->order();
      std::vector<LinearForm> forms{{1, 0, 0, 0}};
      for (Elem t = 0; t < q; ++t) {
        forms.push_back({t, 1, 0, 0});
        const auto n = count_points(hyperplane_pencil_union(forms, f), c.jobs);
        if (n != serre_bound(2, static_cast<unsigned>(forms.size()), q)) return f->name() + ": d = " + std::to_string(forms.size());
      }
    }
    return std::nullopt;
  });
  check("cone-formula", [&]() -> Fail {
    for (auto [p, s] : fields) {
      const auto f = get_field(p, s);
      if (!f->is_square_order()) continue;
      const std::uint64_t q = f->order();
      const std::uint64_t base = count_points(hermitian(f), c.jobs);
      const auto n = count_points(hermitian_cone(f, 3), c.jobs);
      if (n != q * base + 1 || n != theta_fn(3, f->sqrt_order() + 1, q)) return f->name() + ": count " + std::to_string(n);
    }
    return std::nullopt;
  });
  check("sziklai-gamma", [&]() -> Fail {
    const auto f4 = get_field(2, 2);
    const auto g = gamma_curve(f4);
    if (count_points(g) != sziklai_bound(4, 4)) return "gamma count";
    if (!linear_components(g).empty()) return "gamma has a linear component";
    return std::nullopt;
  });
  check("pencil-decomposition", [&]() -> Fail {
    for (auto [p, s] : fields) {
      const auto f = get_field(p, s);
      Rng rng = stream_rng(c.seed, f->order());
      const Hypersurface x(random_form(f, 4, 3, rng));
      // hyperplanes through {X0 = X1 = 0}
      const auto lambda = LinearSubspace::span(f, 3, {{0, 0, 1, 0}, {0, 0, 0, 1}});
      std::uint64_t total = 0;
      for (const auto& h : hyperplanes_through(lambda)) total += count_on_subspace(x.poly(), hyperplane_subspace(f, h));
      const std::uint64_t expect = count_points(x) + f->order() * count_on_subspace(x.poly(), lambda);
      if (total != expect) return f->name() + ": " + std::to_string(total) + " != " + std::to_string(expect);
    }
    return std::nullopt;
  });
  return out;
}

inline Outcome cmd_verify(const RunConfig& c) {
  std::function<BigInt(unsigned, unsigned, std::uint64_t)> theta_fn = [](unsigned n, unsigned d, std::uint64_t q) { return theta(n, d, q); };
  if (c.inject_fault == "theta")
    theta_fn = [](unsigned n, unsigned d, std::uint64_t q) { return theta(n, d, q) + 1; };
  else if (!c.inject_fault.empty())
    throw error(errc::invalid_argument, "unknown fault '" + c.inject_fault + "'");
  const auto checks = run_checks(c, theta_fn);
  Outcome o;
  const auto bad = std::find_if(checks.begin(), checks.end(), [](const Check& ch) { return !ch.passed; });
  if (bad != checks.end()) {
    o.code = kPropertyFailure;
    o.err = "property failure: " + bad->name + (bad->detail.empty() ? "" : " (" + bad->detail + ")") + "\n";
  }
  if (c.format == "csv") {
    o.out = "check,passed,detail\n";
    for (const auto& ch : checks) o.out += ch.name + "," + csv_bool(ch.passed) + "," + detail::quote(ch.detail) + "\n";
    return o;
  }
  Json j = report_header(c);
  j["grid"] = c.grid;
  Json arr = Json::array();
  for (const auto& ch : checks) arr.push_back(Json{{"name", ch.name}, {"passed", ch.passed}, {"detail", ch.detail}});
  j["checks"] = std::move(arr);
  j["passed"] = bad == checks.end();
  j["first_failure"] = bad == checks.end() ? Json(nullptr) : Json(bad->name);
  o.out = dump(j);
  return o;
}

// ---------------------------------------------------------------------------
// scan

struct SampleResult {
  std::uint64_t count = 0;
  bool has_components = false;
  bool achieves = false;
  bool alarm = false;
  ClassStatus status = ClassStatus::below_bound;
  TheoremCase theorem_case = TheoremCase::none;
  std::string polynomial;  // kept only for achievers and alarms
};

inline Outcome cmd_scan(const RunConfig& c) {
  const FieldPtr f = config_field(c);
  const std::size_t n = c.ambient.value_or(3);
  if (n < 2) throw error(errc::unsupported_dimension, "scan needs --ambient >= 2");
  const std::uint64_t q = f->order();
  unsigned d = c.degree;
  if (c.family == "antisymmetric") {
    if (d && d != q + 1) throw error(errc::invalid_argument, "antisymmetric family has degree q+1");
    d = static_cast<unsigned>(q + 1);
  } else if (c.family != "random") {
    throw error(errc::invalid_argument, "--family is random or antisymmetric");
  }
  if (d == 0) throw error(errc::invalid_argument, "--degree is required");
  SearchOptions opt = search_options(c);
  opt.jobs = 1;  // parallelism is across samples

  auto chunks = parallel_ranges(c.samples, c.jobs, [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<SampleResult> rs;
    for (std::uint64_t i = begin; i < end; ++i) {
      Rng rng = stream_rng(c.seed, i);
      const Hypersurface x = c.family == "random" ? Hypersurface(random_form(f, n + 1, d, rng))
                                                  : space_filling(AntisymmetricSpec::random(*f, n - 1, rng), f);
      SampleResult r;
      r.count = count_points(x);
      r.has_components = !linear_components(x).empty();
      const BoundReport b = bound_report(x, r.count, r.has_components);
      r.alarm = b.exceeds_any;
      if (!r.has_components && (b.achieves_theta || (b.sziklai && b.measured == *b.sziklai))) {
        r.achieves = true;
        const Classification cl = classify(x, opt);
        r.status = cl.status;
        r.theorem_case = cl.theorem_case;
        r.alarm |= cl.alarm();
      }
      if (r.achieves || r.alarm) r.polynomial = render(x.poly());
      rs.push_back(std::move(r));
    }
    return rs;
  });

  std::map<std::uint64_t, std::uint64_t> histogram;
  std::map<std::string, std::uint64_t> by_status, by_case;
  std::uint64_t with_components = 0, achievers = 0, alarms = 0, index = 0;
  Json flagged = Json::array();
  for (const auto& chunk : chunks)
    for (const auto& r : chunk) {
      if (r.has_components)
        ++with_components;
      else
        ++histogram[r.count];
      if (r.achieves) {
        ++achievers;
        ++by_status[status_name(r.status)];
        ++by_case[case_name(r.theorem_case)];
      }
      alarms += r.alarm;
      if (r.alarm || (r.achieves && r.status != ClassStatus::extremal))
        flagged.push_back(Json{{"index", index}, {"polynomial", r.polynomial}, {"count", r.count}, {"status", status_name(r.status)}});
      ++index;
    }

  Outcome o;
  o.code = alarms ? kAlarm : kOk;
  if (c.format == "csv") {
    o.out = "count,frequency\n";
    for (const auto& [k, v] : histogram) o.out += std::to_string(k) + "," + std::to_string(v) + "\n";
    return o;
  }
  const unsigned dim = static_cast<unsigned>(n - 1);
  const Json bound = dim >= 2 ? Json{{"name", "theta"}, {"value", big_json(theta(dim, d, q))}}
                   : d >= 2   ? Json{{"name", "sziklai"}, {"value", big_json(sziklai_bound(d, q))}}
                              : Json(nullptr);
  Json j = report_header(c);
  j["field"] = f->name();
  j["ambient"] = n;
  j["degree"] = d;
  j["family"] = c.family;
  j["samples"] = c.samples;
  j["with_linear_components"] = with_components;
  j["analyzed"] = c.samples - with_components;
  j["bound"] = bound;
  j["max_count"] = histogram.empty() ? Json(nullptr) : Json(histogram.rbegin()->first);
  Json h = Json::array();
  for (const auto& [k, v] : histogram) h.push_back(Json{{"count", k}, {"frequency", v}});
  j["histogram"] = std::move(h);
  j["achievers"] = achievers;
  j["achievers_by_status"] = by_status;
  j["achievers_by_case"] = by_case;
  j["alarms"] = alarms;
  j["flagged"] = std::move(flagged);
  o.out = dump(j);
  return o;
}

// ---------------------------------------------------------------------------
// bounds table

inline Outcome cmd_bounds(const RunConfig& c) {
  Outcome o;
  Json rows = Json::array();
  std::string csv = "n,d,q,theta,serre,proj_space,theta_le_serre,theta_le_proj_space\n";
  for (auto [p, s] : grid_fields(c.grid)) {
    const std::uint64_t q = get_field(p, s)->order();
    for (unsigned n = 2; n <= 4; ++n)
      for (unsigned d = 1; d <= q + 3; ++d) {
        const BigInt th = theta(n, d, q), se = serre_bound(n, d, q), ps = proj_space_count(n + 1, q);
        csv += std::to_string(n) + "," + std::to_string(d) + "," + std::to_string(q) + "," + th.str() + "," + se.str() + "," + ps.str() + "," +
               csv_bool(th <= se) + "," + csv_bool(th <= ps) + "\n";
        rows.push_back(Json{{"n", n}, {"d", d}, {"q", q}, {"theta", big_json(th)}, {"serre", big_json(se)}, {"proj_space", big_json(ps)},
                            {"theta_le_serre", th <= se}, {"theta_le_proj_space", th <= ps}});
      }
  }
  if (c.format == "csv") {
    o.out = csv;
    return o;
  }
  Json j = report_header(c);
  j["rows"] = std::move(rows);
  o.out = dump(j);
  return o;
}

// ---------------------------------------------------------------------------
// entry points

inline Outcome execute(const RunConfig& c) {
  try {
    if (c.command == "count") return cmd_count(c);
    if (c.command == "classify") return cmd_classify(c);
    if (c.command == "analyze") return cmd_analyze(c);
    if (c.command == "equiv") return cmd_equiv(c);
    if (c.command == "verify") return cmd_verify(c);
    if (c.command == "scan") return cmd_scan(c);
    if (c.command == "bounds") return cmd_bounds(c);
    return {kInputError, "", "unknown command '" + c.command + "'\n"};
  } catch (const error& e) {
    return {kInputError, "", std::string(e.what()) + "\n"};
  } catch (const std::logic_error& e) {
    return {kPropertyFailure, "", std::string("internal check failed: ") + e.what() + "\n"};
  }
}

/// argv without the program name.
inline Outcome run(const std::vector<std::string>& args) {
  RunConfig c;
  detail::RawFlags raw;
  auto app = detail::build_app(c, raw);
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app->parse(rev);
    c.command = app->get_subcommands().front()->get_name();
    detail::finish_config(c, raw);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app->get_subcommands();
    return {kOk, subs.empty() ? app->help() : subs.front()->help(), ""};
  } catch (const CLI::CallForAllHelp&) {
    return {kOk, app->help("", CLI::AppFormatMode::All), ""};
  } catch (const CLI::ParseError& e) {
    return {kInputError, "", std::string(e.what()) + "\n"};
  } catch (const error& e) {
    return {kInputError, "", std::string(e.what()) + "\n"};
  }
  return execute(c);
}

}  // namespace hkb::cli

#endif  // HKB_CLI_HPP
