// brokenhyp: command-line front end.
//
// Exit codes: 0 success, 1 input or parse error, 2 validity failure, 3 tolerance failure.

#include <CLI/CLI.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "brokenhyp.hpp"

namespace fs = std::filesystem;
using namespace brokenhyp;
using json = nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kParse = 1;
constexpr int kInvalid = 2;
constexpr int kTolerance = 3;

struct Options {
  std::string input;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  int depth = 3;
  int max_depth = 8;
  int base = 0;
  double tol = 0.0;  // 0 selects the command default
  bool constrained = false;
  std::vector<std::string> loops;
  double n_max = 1e6;
  int per_decade = 1;
  std::vector<double> x_list;
  int samples = 1000;
};

double tolerance(const Options& o, double fallback) { return o.tol > 0.0 ? o.tol : fallback; }

void emit(const Options& o, const std::string& text) {
  if (o.out.empty())
    std::cout << text;
  else
    io::write_text(o.out, text);
}

void emit(const Options& o, const json& j) { emit(o, io::dump(j)); }

json load_input(const Options& o) {
  if (o.input.empty()) throw Error(ErrorKind::ParseError, "no input file given");
  return io::load_json(o.input);
}

fs::path input_dir(const Options& o) { return fs::path(o.input).parent_path(); }

json to_json(const HyperbolicReport& r) {
  json faces = json::array();
  for (const auto& f : r.faces) faces.push_back({{"face", f.face}, {"residual", f.residual}, {"ok", f.ok}});
  json punctures = json::array();
  for (const auto& p : r.punctures) {
    json entry{{"puncture", p.puncture}, {"lambda_holonomy", p.lambda_holonomy}, {"ok", p.ok},
               {"degenerate", p.degenerate}};
    entry["holonomy"] = p.degenerate ? json(nullptr) : json(p.holonomy);
    punctures.push_back(entry);
  }
  json warnings = json::array();
  if (r.degenerate_decoration) warnings.push_back("degenerate-decoration: some decoration horocycles are tangent");
  return {{"kind", "structure"},
          {"valid", r.valid},
          {"faces", faces},
          {"negative_delta_pairs", r.negative_delta_pairs},
          {"mismatched_edges", r.mismatched_edges},
          {"punctures", punctures},
          {"warnings", warnings}};
}

json to_json(const MeasureReport& r) {
  json faces = json::array();
  for (const auto& f : r.faces)
    faces.push_back({{"face", f.face},
                     {"large", f.large},
                     {"small", f.small},
                     {"switch_residual", f.switch_residual},
                     {"nonnegative", f.nonnegative},
                     {"ok", f.ok}});
  return {{"kind", "measure"}, {"valid", r.valid}, {"faces", faces}, {"offending_faces", r.offending_faces}};
}

json to_json(const RankReport& r) { return {{"rank", r.rank}, {"dimension", r.dimension}, {"spectrum", r.spectrum}}; }

json triangulation_summary(const IdealTriangulation& t) {
  json cycles = json::array();
  for (const auto& c : t.corner_cycles()) cycles.push_back(c.size());
  return {{"faces", t.face_count()},       {"edges", t.edge_count()}, {"genus", t.genus()},
          {"punctures", t.puncture_count()}, {"cycle_lengths", cycles}};
}

DecoratedBrokenHyperbolic load_structure(const Options& o) {
  const json j = load_input(o);
  if (io::classify(j) != io::FileKind::Structure) throw Error(ErrorKind::ParseError, "expected a structure file");
  return io::structure_from_json(j, input_dir(o));
}

// "f:s,s,s" -> loop starting at face f crossing the listed slots
DualLoop parse_loop(const IdealTriangulation& t, const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Error(ErrorKind::ParseError, "loop must look like face:slot,slot,...");
  try {
    const int start = std::stoi(text.substr(0, colon));
    std::vector<int> slots;
    std::string rest = text.substr(colon + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
      const auto comma = rest.find(',', pos);
      const auto token = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (!token.empty()) slots.push_back(std::stoi(token));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return make_dual_loop(t, start, slots);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::ParseError, "bad loop '" + text + "'");
  }
}

// ---------------------------------------------------------------------------

int cmd_validate(const Options& o) {
  const json j = load_input(o);
  switch (io::classify(j)) {
    case io::FileKind::Triangulation: {
      const auto t = io::triangulation_from_json(j);
      json r = triangulation_summary(t);
      r["kind"] = "triangulation";
      r["valid"] = true;
      emit(o, r);
      return kOk;
    }
    case io::FileKind::Structure: {
      const auto h = io::structure_from_json(j, input_dir(o));
      const auto report = validate(h);
      emit(o, to_json(report));
      return report.valid ? kOk : kInvalid;
    }
    case io::FileKind::Measure: {
      const auto m = io::measure_from_json(j, input_dir(o));
      const auto report = validate_measure(m);
      emit(o, to_json(report));
      return report.valid ? kOk : kInvalid;
    }
  }
  return kParse;
}

int cmd_forms(const Options& o) {
  const auto h = load_structure(o);
  const auto report = validate(h);
  if (!report.valid) {
    emit(o, to_json(report));
    return kInvalid;
  }
  const auto& t = h.triangulation();
  const double residual = pullback_residual(t);
  const double residual_at_point = pullback_residual(h);
  const auto rank = rank_report(t, nullptr, false);
  json out{{"residual", residual},
           {"residual_at_point", residual_at_point},
           {"rank", rank.rank},
           {"spectrum", rank.spectrum},
           {"unbroken", to_json(unbroken_rank_report(t))},
           {"f_delta", io::to_json(f_delta(h))["w"]}};
  if (o.constrained) out["constrained"] = to_json(rank_report(t, &h, true));
  emit(o, out);
  return std::max(residual, residual_at_point) <= tolerance(o, 1e-12) ? kOk : kTolerance;
}

int cmd_ray(const Options& o) {
  const auto h = o.input.empty() ? constant_structure(torus_triangulation(), std::sqrt(2.0)) : load_structure(o);
  if (!validate(h).valid) throw Error(ErrorKind::InvalidDecoration, "base structure is not valid");
  Rng rng(o.seed);
  const int n = h.triangulation().pair_count();
  Eigen::VectorXd u(n), v(n);
  for (int i = 0; i < n; ++i) {
    u(i) = std::normal_distribution<double>()(rng);
    v(i) = std::normal_distribution<double>()(rng);
  }
  json rows = json::array();
  auto row = [&](const DecoratedBrokenHyperbolic& hn, double x, std::optional<double> step) {
    const auto [m, xx] = yamabe_image({hn, x});
    json r{{"x", xx}, {"weights", m.large_weights()}, {"residual", scaling_identity_residual(hn, x, u, v)}};
    if (step) r["n"] = *step;
    rows.push_back(r);
    return m;
  };
  if (!o.x_list.empty()) {
    for (double x : o.x_list) row(h, x, std::nullopt);
    emit(o, json{{"rows", rows}});
    return kOk;
  }
  // lambda_n = exp(n/2) lambda, x_n = 1/n, n sampled logarithmically
  std::vector<double> schedule;
  const int decades = static_cast<int>(std::ceil(std::log10(o.n_max) - 1e-12));
  for (int d = 0; d < decades * o.per_decade; ++d) schedule.push_back(std::pow(10.0, double(d) / o.per_decade));
  schedule.push_back(o.n_max);
  std::vector<double> last;
  for (double step : schedule) {
    std::vector<double> logs(h.log_lambdas().begin(), h.log_lambdas().end());
    for (double& l : logs) l += 0.5 * step;
    const auto m = row(DecoratedBrokenHyperbolic(h.base(), logs), 1.0 / step, step);
    last.assign(m.large_weights().begin(), m.large_weights().end());
  }
  double distance = 0.0;
  for (double w : last) distance = std::max(distance, std::abs(w - 1.0));
  emit(o, json{{"rows", rows}, {"limit", std::vector<double>(n, 1.0)}, {"distance", distance}});
  return distance <= tolerance(o, 1e-4) ? kOk : kTolerance;
}

int cmd_develop(const Options& o) {
  if (o.depth < 0 || o.depth > o.max_depth)
    throw Error(ErrorKind::InvalidInput, "depth must lie in [0, " + std::to_string(o.max_depth) + "]");
  const auto h = load_structure(o);
  const auto report = validate(h);
  if (!report.valid) {
    emit(o, to_json(report));
    return kInvalid;
  }
  const auto ball = develop(h, o.base, o.depth);
  if (o.format == "svg") {
    emit(o, svg::render(ball));
    return kOk;
  }
  json cusps = json::array();
  for (int p = 0; p < h.triangulation().puncture_count(); ++p)
    cusps.push_back({{"puncture", p}, {"cusp_closure_residual", cusp_closure_residual(h, p, o.base)}});
  emit(o, json{{"triangles", io::to_json(ball)}, {"cusps", cusps}});
  return kOk;
}

int cmd_calibrate(const Options& o) {
  Rng rng(o.seed);
  double lo = INFINITY, hi = -INFINITY, first = 0.0, offset = 0.0;
  for (int i = 0; i < o.samples; ++i) {
    std::array<double, 3> l{};
    for (double& x : l) x = std::exp(detail::uniform(rng, -1.0, 2.0));
    std::array<MinkVec, 3> rays;
    for (auto& r : rays) {
      const double a = detail::uniform(rng, 0.0, 2.0 * std::numbers::pi);
      r = MinkVec{std::cos(a), std::sin(a), 1.0} * std::exp(detail::uniform(rng, -1.0, 1.0));
    }
    if (det3(rays[0], rays[1], rays[2]) < 0.0) std::swap(rays[1], rays[2]);
    const auto lift = solve_triangle(rays, l);
    const int k = i % 3;
    const auto arc = horocycle_arc(lift, k);
    const double c = arc.arc / arc.alpha;
    lo = std::min(lo, c);
    hi = std::max(hi, c);
    if (i == 0) first = c;
    offset += c - first;
  }
  const double mean = first + offset / o.samples;
  const double spread = (hi - lo) / mean;
  const auto sqrt2 = constant_structure(torus_triangulation(), std::sqrt(2.0));
  json r{{"constant", mean},
         {"min", lo},
         {"max", hi},
         {"relative_spread", spread},
         {"samples", o.samples},
         {"seed", o.seed},
         {"all_sqrt2_arc", geometric_arc(sqrt2, {0, 0})},
         {"all_sqrt2_alpha", h_length(sqrt2, {0, 0})}};
  emit(o, r);
  return spread <= tolerance(o, 1e-9) ? kOk : kTolerance;
}

int cmd_holonomy(const Options& o) {
  const auto h = load_structure(o);
  const auto report = validate(h);
  if (!report.valid) {
    emit(o, to_json(report));
    return kInvalid;
  }
  const auto& t = h.triangulation();
  const auto m = f_delta(h);
  auto measure_phi = [&](const DualLoop& loop) -> json {
    try {
      return holonomy_hom(m, loop);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateEdge) throw;
      return nullptr;
    }
  };
  json punctures = json::array();
  for (int p = 0; p < t.puncture_count(); ++p) {
    const auto loop = puncture_loop(t, p, o.base);
    const auto& cycle = t.corner_cycles()[p];
    json entry{{"puncture", p},
               {"lambda", puncture_holonomy(h, cycle, Convention::Lambda)},
               {"path_phi", path_holonomy(h, loop).scale},
               {"cusp_closure_residual", cusp_closure_residual(h, p, o.base)}};
    try {
      entry["measure"] = puncture_holonomy(h, cycle, Convention::Measure);
    } catch (const Error&) {
      entry["measure"] = nullptr;
    }
    punctures.push_back(entry);
  }
  std::vector<DualLoop> loops;
  for (const auto& text : o.loops) loops.push_back(parse_loop(t, text));
  if (loops.empty()) loops = dual_loop_basis(t, o.base);
  json per_loop = json::array();
  for (const auto& loop : loops) {
    const auto hol = path_holonomy(h, loop);
    per_loop.push_back({{"start", loop.start},
                        {"slots", loop.slots},
                        {"lambda", hol.scale},
                        {"measure", measure_phi(loop)},
                        {"lorentz_residual", hol.lorentz_residual()}});
  }
  emit(o, json{{"punctures", punctures}, {"loops", per_loop}});
  return kOk;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::InvalidInput:
    case ErrorKind::SlotReused:
    case ErrorKind::SlotUnglued:
    case ErrorKind::Disconnected:
    case ErrorKind::OpenPath:
    case ErrorKind::ChartMismatch:
      return kParse;
    default:
      return kInvalid;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decorated broken hyperbolic structures and broken measures on punctured surfaces"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--seed", o.seed, "seed for randomized sweeps")->capture_default_str();
  app.add_option("--tol", o.tol, "tolerance override");
  app.add_option("--out", o.out, "write the report to a file instead of stdout");

  auto* validate_cmd = app.add_subcommand("validate", "check a triangulation, structure or measure file");
  validate_cmd->add_option("file", o.input)->required();

  auto* forms_cmd = app.add_subcommand("forms", "form identities and rank of the Weil-Petersson form");
  forms_cmd->add_option("file", o.input)->required();
  forms_cmd->add_flag("--constrained", o.constrained, "also restrict to the cusp-condition tangent space");

  auto* ray_cmd = app.add_subcommand("ray", "degeneration along lambda_n = exp(n/2) lambda, x_n = 1/n");
  ray_cmd->add_option("file", o.input, "base structure (default: all-sqrt2 torus)");
  ray_cmd->add_option("--n-max", o.n_max, "last n of the schedule")->capture_default_str();
  ray_cmd->add_option("--per-decade", o.per_decade, "samples per decade of n")->capture_default_str()
      ->check(CLI::PositiveNumber);
  ray_cmd->add_option("--x", o.x_list, "explicit curvature scales instead of the schedule");

  auto* develop_cmd = app.add_subcommand("develop", "develop a ball of the universal cover");
  develop_cmd->add_option("file", o.input)->required();
  develop_cmd->add_option("--depth", o.depth, "dual-tree depth of the ball")->capture_default_str();
  develop_cmd->add_option("--max-depth", o.max_depth, "refuse depths above this")->capture_default_str();
  develop_cmd->add_option("--base", o.base, "face placed at the root")->capture_default_str();
  develop_cmd->add_option("--format", o.format)->check(CLI::IsMember({"json", "svg"}))->capture_default_str();

  auto* calibrate_cmd = app.add_subcommand("calibrate", "measure the horocyclic arc / h-length constant");
  calibrate_cmd->add_option("--samples", o.samples)->capture_default_str()->check(CLI::PositiveNumber);

  auto* holonomy_cmd = app.add_subcommand("holonomy", "holonomy per puncture and per loop");
  holonomy_cmd->add_option("file", o.input)->required();
  holonomy_cmd->add_option("--loop", o.loops, "loop as face:slot,slot,...");
  holonomy_cmd->add_option("--base", o.base, "base face for the puncture paths")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*validate_cmd) return cmd_validate(o);
    if (*forms_cmd) return cmd_forms(o);
    if (*ray_cmd) return cmd_ray(o);
    if (*develop_cmd) return cmd_develop(o);
    if (*calibrate_cmd) return cmd_calibrate(o);
    if (*holonomy_cmd) return cmd_holonomy(o);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  }
  return kParse;
}
