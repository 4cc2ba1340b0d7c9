#pragma once

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stharm/geometry.hpp"
#include "stharm/potentials.hpp"
#include "stharm/solver.hpp"

namespace stharm {

inline constexpr const char* kVersion = "stharm 0.1.0";

/// Minimal insertion-ordered JSON value for reports. Numbers print with 17
/// significant digits so identical runs emit byte-identical files.
class Json {
 public:
  static Json num(double v) { Json j; j.kind_ = Kind::Num; j.num_ = v; return j; }
  static Json integer(long long v) { Json j; j.kind_ = Kind::Int; j.int_ = v; return j; }
  static Json str(std::string s) { Json j; j.kind_ = Kind::Str; j.str_ = std::move(s); return j; }
  static Json boolean(bool b) { Json j; j.kind_ = Kind::Bool; j.bool_ = b; return j; }
  static Json array() { Json j; j.kind_ = Kind::Arr; return j; }
  static Json object() { Json j; j.kind_ = Kind::Obj; return j; }

  Json& set(const std::string& key, Json v) {
    members_.emplace_back(key, std::move(v));
    return *this;
  }
  Json& push(Json v) {
    items_.push_back(std::move(v));
    return *this;
  }

  std::string dump() const {
    std::string out;
    write(out);
    return out;
  }

 private:
  enum class Kind { Num, Int, Str, Bool, Arr, Obj };
  Kind kind_ = Kind::Obj;
  double num_ = 0.0;
  long long int_ = 0;
  bool bool_ = false;
  std::string str_;
  std::vector<Json> items_;
  std::vector<std::pair<std::string, Json>> members_;

  static void escape(const std::string& s, std::string& out) {
    out += '"';
    for (char c : s) {
      if (c == '"' || c == '\\') { out += '\\'; out += c; }
      else if (c == '\n') out += "\\n";
      else out += c;
    }
    out += '"';
  }

  void write(std::string& out) const {
    char buf[40];
    switch (kind_) {
      case Kind::Num:
        std::snprintf(buf, sizeof buf, "%.17g", num_);
        out += buf;
        break;
      case Kind::Int:
        std::snprintf(buf, sizeof buf, "%lld", int_);
        out += buf;
        break;
      case Kind::Str:
        escape(str_, out);
        break;
      case Kind::Bool:
        out += bool_ ? "true" : "false";
        break;
      case Kind::Arr:
        out += '[';
        for (std::size_t i = 0; i < items_.size(); ++i) {
          if (i) out += ',';
          items_[i].write(out);
        }
        out += ']';
        break;
      case Kind::Obj:
        out += '{';
        for (std::size_t i = 0; i < members_.size(); ++i) {
          if (i) out += ',';
          escape(members_[i].first, out);
          out += ':';
          members_[i].second.write(out);
        }
        out += '}';
        break;
    }
  }
};

inline const char* family_name(Family f) {
  switch (f) {
    case Family::RoundBand: return "RoundBand";
    case Family::GUpsilon: return "GUpsilon";
    case Family::TorusExtremal: return "TorusExtremal";
    case Family::Counterexample: return "Counterexample";
    case Family::RicciWarped: return "RicciWarped";
    case Family::AFSymmetric: return "AFSymmetric";
    case Family::FlatProduct: return "FlatProduct";
    case Family::CustomDoublyWarped: return "CustomDoublyWarped";
  }
  return "?";
}

inline const char* potential_kind_name(PotentialKind k) {
  switch (k) {
    case PotentialKind::Zero: return "Zero";
    case PotentialKind::RicciBand: return "RicciBand";
    case PotentialKind::TorusBand: return "TorusBand";
    case PotentialKind::TwoRicciBand: return "TwoRicciBand";
    case PotentialKind::Waist: return "Waist";
    case PotentialKind::Llarull: return "Llarull";
    case PotentialKind::LipschitzFamily: return "LipschitzFamily";
  }
  return "?";
}

inline Json metric_to_json(const MetricSpec& m) {
  Json j = Json::object();
  j.set("family", Json::str(family_name(m.family())));
  Json p = Json::object();
  for (const auto& [k, v] : m.params()) p.set(k, Json::num(v));
  j.set("params", std::move(p));
  j.set("dimension", Json::integer(m.dimension()));
  return j;
}

inline Json potential_to_json(const Potential& p) {
  Json j = Json::object();
  j.set("kind", Json::str(potential_kind_name(p.kind())));
  Json q = Json::object();
  for (const auto& [k, v] : p.params()) q.set(k, Json::num(v));
  j.set("params", std::move(q));
  return j;
}

/// Throws std::invalid_argument with a line/column diagnostic on bad input.
inline nlohmann::json parse_json_or_die(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') { ++line; col = 1; }
      else ++col;
    }
    throw std::invalid_argument(what + ": malformed JSON at line " + std::to_string(line) +
                                ", column " + std::to_string(col) + ": " + e.what());
  }
}

inline MetricSpec metric_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family"))
    throw std::invalid_argument("metric spec: expected an object with a \"family\" key");
  std::string fam = j["family"].get<std::string>();
  MetricSpec::Params params;
  if (j.contains("params"))
    for (auto it = j["params"].begin(); it != j["params"].end(); ++it)
      params[it.key()] = it.value().get<double>();
  const int dim = j.value("dimension", 3);

  // convenience aliases for the single-warped shapes
  if (fam == "RoundSphere") { params["shape"] = 1.0; fam = "RicciWarped"; }
  else if (fam == "Capsule") { params["shape"] = 2.0; fam = "RicciWarped"; }
  else if (fam == "LlarullSin") { params["shape"] = 3.0; fam = "RicciWarped"; }
  else if (fam == "LlarullSinCubic") { params["shape"] = 4.0; fam = "RicciWarped"; }
  else if (fam == "SechBand") { params["shape"] = 5.0; fam = "RicciWarped"; }

  static const std::map<std::string, Family> kFamilies = {
      {"RoundBand", Family::RoundBand},       {"GUpsilon", Family::GUpsilon},
      {"TorusExtremal", Family::TorusExtremal}, {"Counterexample", Family::Counterexample},
      {"RicciWarped", Family::RicciWarped},   {"AFSymmetric", Family::AFSymmetric},
      {"FlatProduct", Family::FlatProduct},   {"CustomDoublyWarped", Family::CustomDoublyWarped}};
  auto it = kFamilies.find(fam);
  if (it == kFamilies.end()) throw std::invalid_argument("metric spec: unknown family '" + fam + "'");
  if (it->second == Family::CustomDoublyWarped) {
    const int nk = static_cast<int>(params.at("n_knots"));
    std::vector<double> phi(nk), psi(nk);
    for (int i = 0; i < nk; ++i) {
      phi[i] = params.at("phi" + std::to_string(i));
      psi[i] = params.at("psi" + std::to_string(i));
    }
    return MetricSpec::custom_doubly_warped(params.at("lo"), params.at("hi"), phi, psi);
  }
  return MetricSpec::make(it->second, params, dim);
}

inline Potential potential_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw std::invalid_argument("potential spec: expected an object with a \"kind\" key");
  const std::string kind = j["kind"].get<std::string>();
  Potential::Params params;
  if (j.contains("params"))
    for (auto it = j["params"].begin(); it != j["params"].end(); ++it)
      params[it.key()] = it.value().get<double>();
  static const std::map<std::string, PotentialKind> kKinds = {
      {"Zero", PotentialKind::Zero},
      {"RicciBand", PotentialKind::RicciBand},
      {"TorusBand", PotentialKind::TorusBand},
      {"TwoRicciBand", PotentialKind::TwoRicciBand},
      {"Waist", PotentialKind::Waist},
      {"Llarull", PotentialKind::Llarull},
      {"LipschitzFamily", PotentialKind::LipschitzFamily}};
  auto it = kKinds.find(kind);
  if (it == kKinds.end())
    throw std::invalid_argument("potential spec: unknown kind '" + kind + "'");
  return make_potential(it->second, params);
}

/// Profile CSV: rho, u, du, residual with 17-significant-digit columns.
inline std::string profile_to_csv(const SolveProfile& sol, const BandProblem& prob) {
  std::string out = "rho,u,du,residual\n";
  const double h = sol.grid.spacing();
  char buf[160];
  for (int i = 0; i < sol.grid.n_nodes(); ++i) {
    double res = 0.0;
    if (i > 0 && i + 1 < sol.grid.n_nodes()) {
      const double d1 = (sol.u[i + 1] - sol.u[i - 1]) / (2 * h);
      const double d2 = (sol.u[i + 1] - 2 * sol.u[i] + sol.u[i - 1]) / (h * h);
      const double rho = sol.grid.node(i);
      res = d2 + prob.metric.mean_curv_profile(rho) * d1 +
            prob.n * prob.f_at(rho) * std::abs(d1);
    }
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", sol.grid.node(i), sol.u[i],
                  sol.du[i], res);
    out += buf;
  }
  return out;
}

/// Plain polyline profile chart; no external renderer.
inline std::string profile_to_svg(const std::vector<double>& x, const std::vector<double>& y,
                                  const std::string& title) {
  const int W = 640, H = 400, M = 48;
  double xmin = x.front(), xmax = x.front(), ymin = y.front(), ymax = y.front();
  for (double v : x) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
  for (double v : y) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  auto px = [&](double v) { return M + (W - 2 * M) * (v - xmin) / (xmax - xmin); };
  auto py = [&](double v) { return H - M - (H - 2 * M) * (v - ymin) / (ymax - ymin); };
  std::ostringstream ss;
  ss << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
     << "<rect x=\"" << M << "\" y=\"" << M << "\" width=\"" << W - 2 * M << "\" height=\""
     << H - 2 * M << "\" fill=\"none\" stroke=\"#888\"/>\n"
     << "<text x=\"" << M << "\" y=\"" << M - 12 << "\" font-size=\"13\">" << title << "</text>\n"
     << "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < x.size(); ++i) ss << px(x[i]) << "," << py(y[i]) << " ";
  ss << "\"/>\n</svg>\n";
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace stharm
