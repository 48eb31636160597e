// Job configuration, certificate serialization, boundary CSV and SVG plots.
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pinchkit/core.hpp"
#include "pinchkit/essrange.hpp"
#include "pinchkit/matrix_io.hpp"
#include "pinchkit/numrange.hpp"
#include "pinchkit/pinching.hpp"

namespace pinchkit::io {

// ---------------------------------------------------------------- host specs

inline json host_spec_to_json(const HostSpec& s) {
  json j;
  j["kind"] = to_string(s.kind);
  if (s.dim) j["dim"] = s.dim;
  if (!s.weights.empty()) j["weights"] = s.weights;
  if (!s.values.empty()) {
    json values = json::array();
    for (auto v : s.values) values.push_back(complex_to_json(v));
    j["values"] = values;
  }
  if (!s.children.empty()) {
    json children = json::array();
    for (const auto& c : s.children) children.push_back(host_spec_to_json(c));
    j["children"] = children;
  }
  if (!s.path.empty()) j["path"] = s.path;
  if (s.scale != 1.0) j["scale"] = s.scale;
  return j;
}

inline HostSpec host_spec_from_json(const json& j, const std::string& base_dir = "") {
  if (!j.is_object()) throw Error(ErrorCode::BadSpec, "host must be an object");
  try {
    HostSpec s;
    s.kind = host_kind_from_string(j.at("kind").get<std::string>());
    s.dim = j.value("dim", Eigen::Index{0});
    if (j.contains("weights")) s.weights = j.at("weights").get<std::vector<double>>();
    if (j.contains("values"))
      for (const auto& v : j.at("values")) s.values.push_back(complex_from_json(v));
    if (j.contains("children"))
      for (const auto& c : j.at("children")) s.children.push_back(host_spec_from_json(c, base_dir));
    if (j.contains("path")) {
      s.path = j.at("path").get<std::string>();
      if (!base_dir.empty() && !s.path.empty() && s.path.front() != '/') s.path = base_dir + "/" + s.path;
    }
    s.scale = j.value("scale", 1.0);
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadSpec, std::string("host: ") + e.what());
  }
}

// ------------------------------------------------------------------- targets

/// Random matrix with the given spectral norm: complex Gaussian entries
/// rescaled, drawn from mt19937_64(seed).
inline ComplexMatrix random_contraction(Eigen::Index dim, double norm, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ComplexMatrix x(dim, dim);
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    x(k) = Complex(re, im);
  }
  const double s = spectral_norm(x);
  return s > 0.0 ? ComplexMatrix(x * (norm / s)) : x;
}

/// Random normal matrix U diag(mu) U* with eigenvalues of modulus at most `radius`.
inline ComplexMatrix random_normal(Eigen::Index dim, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  ComplexMatrix g(dim, dim);
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    g(k) = Complex(re, im);
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  const ComplexMatrix u = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  ComplexVector mu(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double r = radius * std::sqrt(unit(rng));
    const double t = 2.0 * kPi * unit(rng);
    mu(k) = std::polar(r, t);
  }
  return u * mu.asDiagonal() * u.adjoint();
}

/// A target is either an inline matrix (array of rows) or a generator object
/// {"generator": "contraction" | "normal", "dim": d, "norm": r, "seed": s}.
inline ComplexMatrix target_from_json(const json& j) {
  if (j.is_array()) return matrix_from_json(j);
  if (!j.is_object()) throw Error(ErrorCode::BadSpec, "target must be a matrix or a generator object");
  try {
    const auto gen = j.at("generator").get<std::string>();
    const auto dim = j.at("dim").get<Eigen::Index>();
    const double norm = j.at("norm").get<double>();
    if (!j.contains("seed")) throw Error(ErrorCode::BadSpec, "generator targets need an explicit seed");
    const auto seed = j.at("seed").get<std::uint64_t>();
    if (dim < 1) throw Error(ErrorCode::BadSpec, "generator dim must be positive");
    if (gen == "contraction") return random_contraction(dim, norm, seed);
    if (gen == "normal") return random_normal(dim, norm, seed);
    throw Error(ErrorCode::BadSpec, "unknown generator '" + gen + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadSpec, std::string("target: ") + e.what());
  }
}

// ---------------------------------------------------------------- job config

struct JobConfig {
  HostSpec host;
  std::vector<ComplexMatrix> targets;
  std::vector<PinchMode> modes;
  std::vector<Complex> lambdas;
  std::optional<ComplexMatrix> contraction;
  std::optional<double> radius;
  int n_angles = 360;
  double rho = 0.9;
  double gamma = 1.0;
  std::uint64_t seed = 0x5eedULL;
  Eigen::Index max_removal = 0;
  bool normal_targets = false;
};

inline JobConfig job_config_from_json(const json& j, const std::string& base_dir = "") {
  if (!j.is_object()) throw Error(ErrorCode::BadSpec, "config must be a JSON object");
  JobConfig c;
  try {
    if (j.contains("host")) c.host = host_spec_from_json(j.at("host"), base_dir);
    if (j.contains("targets"))
      for (const auto& t : j.at("targets")) c.targets.push_back(target_from_json(t));
    if (j.contains("mode")) {
      const auto& m = j.at("mode");
      if (m.is_string()) {
        c.modes.push_back(pinch_mode_from_string(m.get<std::string>()));
      } else {
        for (const auto& s : m) c.modes.push_back(pinch_mode_from_string(s.get<std::string>()));
      }
    }
    if (j.contains("lambdas"))
      for (const auto& v : j.at("lambdas")) c.lambdas.push_back(complex_from_json(v));
    if (j.contains("contraction")) c.contraction = matrix_from_json(j.at("contraction"));
    if (j.contains("radius")) c.radius = j.at("radius").get<double>();
    c.n_angles = j.value("n_angles", c.n_angles);
    c.rho = j.value("rho", c.rho);
    c.gamma = j.value("gamma", c.gamma);
    c.seed = j.value("seed", c.seed);
    c.max_removal = j.value("max_removal", c.max_removal);
    c.normal_targets = j.value("normal", c.normal_targets);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadSpec, e.what());
  }
  if (c.n_angles < 8) throw Error(ErrorCode::BadSpec, "n_angles must be at least 8");
  if (!(c.rho > 0.0 && c.rho < 1.0)) throw Error(ErrorCode::BadSpec, "rho must lie in (0, 1)");
  return c;
}

inline JobConfig read_job_config(const std::string& path) {
  const auto slash = path.find_last_of('/');
  return job_config_from_json(read_json_file(path), slash == std::string::npos ? "" : path.substr(0, slash));
}

// --------------------------------------------------------------- certificates

inline json frame_to_json(const Frame& f) {
  json cols = json::array();
  for (Eigen::Index k = 0; k < f.rank(); ++k) {
    json col = json::array();
    for (Eigen::Index i = 0; i < f.ambient_dim(); ++i) col.push_back(complex_to_json(f.columns()(i, k)));
    cols.push_back(std::move(col));
  }
  return cols;
}

inline Frame frame_from_json(const json& j, Eigen::Index ambient) {
  if (!j.is_array()) throw Error(ErrorCode::BadSpec, "frame must be a list of columns");
  ComplexMatrix q(ambient, static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    const auto& col = j[k];
    if (!col.is_array() || static_cast<Eigen::Index>(col.size()) != ambient)
      throw Error(ErrorCode::BadSpec, "frame column length differs from ambient dimension");
    for (Eigen::Index i = 0; i < ambient; ++i)
      q(i, static_cast<Eigen::Index>(k)) = complex_from_json(col[static_cast<std::size_t>(i)]);
  }
  return Frame(std::move(q), 1e-8);
}

inline json certificate_to_json(const PinchingCertificate& c) {
  json j;
  j["ambient_dim"] = c.ambient_dim;
  json frames = json::array();
  for (const auto& f : c.frames) frames.push_back(frame_to_json(f));
  j["frames"] = frames;
  j["residuals"] = c.residuals;
  j["orthogonality"] = c.orthogonality;
  json masses = json::array();
  for (const auto& m : c.mass_bounds) {
    if (m) {
      masses.push_back({{"epsilon_claimed", m->epsilon_claimed}, {"mass_measured", m->mass_measured}, {"level", m->level}});
    } else {
      masses.push_back(nullptr);
    }
  }
  j["mass_bounds"] = masses;
  j["coverage"] = c.coverage;
  j["order"] = c.order;
  json modes = json::array();
  for (auto m : c.modes) modes.push_back(to_string(m));
  j["modes"] = modes;
  j["disc_margins"] = c.disc_margins;
  j["tolerance"] = c.tolerance;
  return j;
}

inline PinchingCertificate certificate_from_json(const json& j) {
  PinchingCertificate c;
  try {
    c.ambient_dim = j.at("ambient_dim").get<Eigen::Index>();
    for (const auto& f : j.at("frames")) c.frames.push_back(frame_from_json(f, c.ambient_dim));
    c.residuals = j.at("residuals").get<std::vector<double>>();
    c.orthogonality = j.at("orthogonality").get<double>();
    for (const auto& m : j.at("mass_bounds")) {
      if (m.is_null()) {
        c.mass_bounds.push_back(std::nullopt);
      } else {
        c.mass_bounds.push_back(MassBound{m.at("epsilon_claimed").get<double>(), m.at("mass_measured").get<double>(),
                                          m.at("level").get<int>()});
      }
    }
    c.coverage = j.at("coverage").get<double>();
    c.order = j.at("order").get<std::vector<std::size_t>>();
    for (const auto& m : j.at("modes")) c.modes.push_back(pinch_mode_from_string(m.get<std::string>()));
    c.disc_margins = j.at("disc_margins").get<std::vector<double>>();
    c.tolerance = j.at("tolerance").get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadSpec, std::string("certificate: ") + e.what());
  }
  return c;
}

inline json disc_certificate_to_json(const DiscCertificate& c) {
  return {{"radius", c.radius}, {"margin", c.margin}, {"min_support_theta", c.min_support_theta},
          {"certified", c.certified()}};
}

// ------------------------------------------------------------------ writers

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::FileNotFound, "cannot write " + path);
  out << text;
}

inline void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline std::string boundary_csv(const RangeHull& hull) {
  std::ostringstream out;
  out << "theta,support,re,im\n";
  for (const auto& s : hull.samples)
    out << format_double(s.theta) << ',' << format_double(s.support) << ',' << format_double(s.boundary_point.real())
        << ',' << format_double(s.boundary_point.imag()) << '\n';
  return out.str();
}

/// 800 × 800 plot of the hull over the unit-disc grid, optionally with a
/// reference disc.
inline std::string hull_svg(const RangeHull& hull, std::optional<double> reference_radius = std::nullopt) {
  double extent = 1.0;
  for (const auto& s : hull.samples) extent = std::max(extent, std::abs(s.boundary_point));
  extent *= 1.1;
  const double half = 400.0;
  const double scale = 380.0 / extent;
  auto px = [&](Complex z) {
    return format_double(half + scale * z.real()) + "," + format_double(half - scale * z.imag());
  };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n";
  out << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
  for (int k = -10; k <= 10; ++k) {
    const double t = 0.1 * k;
    if (std::abs(t) > extent) continue;
    out << "<line x1=\"" << format_double(half + scale * t) << "\" y1=\"0\" x2=\"" << format_double(half + scale * t)
        << "\" y2=\"800\" stroke=\"#eeeeee\"/>\n";
    out << "<line x1=\"0\" y1=\"" << format_double(half - scale * t) << "\" x2=\"800\" y2=\""
        << format_double(half - scale * t) << "\" stroke=\"#eeeeee\"/>\n";
  }
  out << "<circle cx=\"400\" cy=\"400\" r=\"" << format_double(scale) << "\" fill=\"none\" stroke=\"#999999\"/>\n";
  if (reference_radius)
    out << "<circle cx=\"400\" cy=\"400\" r=\"" << format_double(scale * *reference_radius)
        << "\" fill=\"none\" stroke=\"#cc3333\" stroke-dasharray=\"6,4\"/>\n";
  const auto poly = hull.polygon();
  if (poly.size() <= 1) {
    const Complex z = poly.empty() ? Complex(0.0) : poly.front();
    out << "<circle cx=\"" << format_double(half + scale * z.real()) << "\" cy=\"" << format_double(half - scale * z.imag())
        << "\" r=\"4\" fill=\"#3366cc\"/>\n";
  } else {
    out << "<polygon points=\"";
    for (std::size_t k = 0; k < poly.size(); ++k) out << (k ? " " : "") << px(poly[k]);
    out << "\" fill=\"#3366cc\" fill-opacity=\"0.25\" stroke=\"#3366cc\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace pinchkit::io
