// pinchkit command-line front end.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 failed certification,
// 3 synthesis failure (MarginLost / HostTooSmall).
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pinchkit/checks.hpp"
#include "pinchkit/pinchkit.hpp"

namespace fs = std::filesystem;
using namespace pinchkit;
using io::json;

namespace {

struct Flags {
  std::string config;
  std::string out = ".";
  std::optional<int> angles;
  std::optional<double> radius;
  bool require = false;
  std::optional<std::string> mode;
  std::optional<double> rho;
  std::optional<std::uint64_t> seed;
  bool svg = false;
  std::string suite = "all";
};

void add_common(CLI::App* cmd, Flags& f, bool needs_config = true) {
  auto* c = cmd->add_option("--config", f.config, "job configuration (JSON)");
  if (needs_config) c->required();
  cmd->add_option("--out", f.out, "output directory")->capture_default_str();
  cmd->add_option("--angles", f.angles, "number of support-function angles")->check(CLI::Range(8, 1 << 20));
  cmd->add_option("--rho", f.rho, "disc radius for realizations")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--seed", f.seed, "seed of the test-vector sequence");
}

std::string out_path(const Flags& f, const std::string& name) {
  fs::create_directories(f.out);
  return (fs::path(f.out) / name).string();
}

io::JobConfig load(const Flags& f) {
  auto cfg = io::read_job_config(f.config);
  if (f.angles) cfg.n_angles = *f.angles;
  if (f.rho) cfg.rho = *f.rho;
  if (f.seed) cfg.seed = *f.seed;
  if (f.radius) cfg.radius = *f.radius;
  if (f.mode) cfg.modes = {pinch_mode_from_string(*f.mode)};
  return cfg;
}

int cmd_numrange(const Flags& f) {
  const auto cfg = load(f);
  const ComplexMatrix a = build_host(cfg.host);
  const auto hull = numerical_range_hull(a, cfg.n_angles);
  io::write_text(out_path(f, "boundary.csv"), io::boundary_csv(hull));
  json summary = {{"dim", a.rows()},
                  {"n_angles", cfg.n_angles},
                  {"max_support", hull.max_support()},
                  {"max_modulus", hull.max_modulus()}};
  int code = 0;
  if (cfg.radius) {
    const auto cert = contains_disc(a, *cfg.radius, cfg.n_angles);
    io::write_json(out_path(f, "disc.json"), io::disc_certificate_to_json(cert));
    summary["disc"] = io::disc_certificate_to_json(cert);
    if (f.require && !cert.certified()) code = 2;
  } else if (f.require) {
    std::cerr << "error: --require needs a radius\n";
    return 1;
  }
  if (f.svg) io::write_text(out_path(f, "numrange.svg"), io::hull_svg(hull, cfg.radius));
  std::cout << summary.dump(2) << "\n";
  return code;
}

int cmd_essrange(const Flags& f) {
  const auto cfg = load(f);
  const ComplexMatrix a = build_host(cfg.host);
  const Eigen::Index removal = cfg.max_removal ? cfg.max_removal : a.rows() / 20;
  const auto est = essential_range_estimate(a, removal, cfg.n_angles);
  std::string csv = "theta,support\n";
  for (std::size_t k = 0; k < est.angles.size(); ++k)
    csv += io::format_double(est.angles[k]) + "," + io::format_double(est.intersection_support[k]) + "\n";
  io::write_text(out_path(f, "essrange.csv"), csv);
  json summary = {{"dim", a.rows()},
                  {"max_removal", removal},
                  {"n_angles", cfg.n_angles},
                  {"min_intersection_support", est.min_intersection_support()}};
  io::write_json(out_path(f, "essrange.json"), summary);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_dilate(const Flags& f) {
  const auto cfg = load(f);
  if (!cfg.contraction) {
    std::cerr << "error: config needs a \"contraction\" matrix\n";
    return 1;
  }
  const auto dil = halmos_dilation(*cfg.contraction, cfg.rho);
  json j = {{"norm", dil.norm},
            {"unitary", io::matrix_to_json(dil.unitary)},
            {"normal", io::matrix_to_json(dil.normal)},
            {"unitarity_defect", unitarity_defect(dil.unitary)},
            {"normality_defect", normality_defect(dil.normal)}};
  io::write_json(out_path(f, "dilation.json"), j);
  std::cout << json({{"norm", dil.norm},
                     {"unitarity_defect", j["unitarity_defect"]},
                     {"normality_defect", j["normality_defect"]}})
                   .dump(2)
            << "\n";
  return 0;
}

int cmd_compress(const Flags& f) {
  const auto cfg = load(f);
  const ComplexMatrix a = build_host(cfg.host);
  Frame e;
  ComplexMatrix target;
  if (!cfg.lambdas.empty()) {
    e = realize_diagonal_compression(a, cfg.lambdas, cfg.rho);
    target = ComplexMatrix::Zero(static_cast<Eigen::Index>(cfg.lambdas.size()),
                                 static_cast<Eigen::Index>(cfg.lambdas.size()));
    for (std::size_t k = 0; k < cfg.lambdas.size(); ++k)
      target(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = cfg.lambdas[k];
  } else if (cfg.targets.size() == 1) {
    target = cfg.targets.front();
    e = realize_contraction_compression(a, target, cfg.rho);
  } else {
    std::cerr << "error: config needs \"lambdas\" or exactly one entry in \"targets\"\n";
    return 1;
  }
  const double residual = (compress(a, e) - target).norm();
  io::write_json(out_path(f, "compression.json"),
                 {{"frame", io::frame_to_json(e)}, {"residual", residual}, {"target", io::matrix_to_json(target)}});
  std::cout << json({{"rank", e.rank()}, {"residual", residual}, {"orthonormality", e.orthonormality_error()}}).dump(2)
            << "\n";
  return 0;
}

int cmd_pinch(const Flags& f) {
  const auto cfg = load(f);
  const ComplexMatrix a = build_host(cfg.host);
  PinchOptions opts;
  opts.seed = cfg.seed;
  opts.gamma = cfg.gamma;
  const auto cert = cfg.normal_targets ? pinch_normal(a, cfg.targets, cfg.rho, opts)
                                       : pinch(a, cfg.targets, cfg.rho, cfg.modes, opts);
  io::write_json(out_path(f, "certificate.json"), io::certificate_to_json(cert));
  for (std::size_t j = 0; j < cert.frames.size(); ++j) {
    std::printf("block %zu: dim %ld  mode %s  residual %.3e", cert.order[j], static_cast<long>(cert.frames[j].rank()),
                to_string(cert.modes[j]), cert.residuals[j]);
    if (cert.mass_bounds[j])
      std::printf("  mass %.6f (claimed >= %.6f, level %d)", cert.mass_bounds[j]->mass_measured,
                  cert.mass_bounds[j]->epsilon_claimed, cert.mass_bounds[j]->level);
    std::printf("\n");
  }
  std::printf("max residual %.3e  orthogonality %.3e  coverage %.6f\n", cert.max_residual(), cert.orthogonality,
              cert.coverage);
  return cert.valid() ? 0 : 2;
}

int cmd_check(const Flags& f) {
  const auto& names = checks::suite_names();
  if (std::find(names.begin(), names.end(), f.suite) == names.end()) {
    std::cerr << "error: unknown suite '" << f.suite << "'\n";
    return 1;
  }
  const auto results = checks::run_suite(f.suite);
  const json summary = checks::results_to_json(f.suite, results);
  std::cout << summary.dump(2) << "\n";
  return summary["passed"].get<bool>() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pinchkit: numerical ranges, dilations and pinchings of matrices"};
  app.require_subcommand(1);
  Flags f;

  auto* numrange = app.add_subcommand("numrange", "sample the numerical range boundary");
  add_common(numrange, f);
  numrange->add_option("--radius", f.radius, "certify the disc of this radius");
  numrange->add_flag("--require", f.require, "exit 2 unless the disc is certified");
  numrange->add_flag("--svg", f.svg, "also write numrange.svg");

  auto* essrange = app.add_subcommand("essrange", "essential numerical range surrogate");
  add_common(essrange, f);

  auto* dilate = app.add_subcommand("dilate", "normal dilation of a strict contraction");
  add_common(dilate, f);

  auto* comp = app.add_subcommand("compress", "realize a diagonal or a contraction as a compression");
  add_common(comp, f);

  auto* pinch_cmd = app.add_subcommand("pinch", "pinch a family of targets out of the host");
  add_common(pinch_cmd, f);
  pinch_cmd->add_option("--mode", f.mode, "fast or faithful")->check(CLI::IsMember({"fast", "faithful"}));

  auto* check = app.add_subcommand("check", "run a property suite");
  check->add_option("suite", f.suite, "walsh, parker, dilation, numrange, pinch or all")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*numrange) return cmd_numrange(f);
    if (*essrange) return cmd_essrange(f);
    if (*dilate) return cmd_dilate(f);
    if (*comp) return cmd_compress(f);
    if (*pinch_cmd) return cmd_pinch(f);
    if (*check) return cmd_check(f);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what();
    if (e.index()) std::cerr << " (target index " << *e.index() << ")";
    std::cerr << "\n";
    return e.code() == ErrorCode::MarginLost || e.code() == ErrorCode::HostTooSmall ? 3 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
