#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "halfvar/examples.hpp"
#include "halfvar/io.hpp"
#include "halfvar/kernels.hpp"
#include "halfvar/kf.hpp"
#include "halfvar/reparam.hpp"
#include "halfvar/variation.hpp"
#include "halfvar/verify.hpp"

using namespace halfvar;

namespace {

struct RunConfig {
  std::string subcommand;
  std::string input;
  std::string example;
  int depth = 8;
  double alpha = 0.5;
  double tolerance = 1e-12;
  std::uint64_t seed = 1;
  std::string emit = "json";
  std::string output;
  std::size_t samples = 10000;
  std::string set = "kf";
  std::string of = "f";

  nlohmann::json to_json() const {
    return {{"subcommand", subcommand}, {"input", input},   {"example", example}, {"depth", depth},
            {"alpha", alpha},           {"tolerance", tolerance}, {"seed", seed}, {"emit", emit},
            {"output", output},         {"samples", samples}, {"set", set},     {"of", of}};
  }
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

LoadedPath load(const RunConfig& rc) {
  if (rc.input.empty() == rc.example.empty()) throw UsageError("exactly one of --input or --example is required");
  if (!rc.example.empty()) {
    try {
      auto b = example_by_name(rc.example, rc.depth, rc.seed);
      Path p = b.path;
      return {std::move(p), std::move(b)};
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return load_path_file(rc.input, rc.depth, rc.seed);
}

void write_artifact(const RunConfig& rc, const std::string& body) {
  std::string target = rc.output;
  if (target.empty()) {
    if (const char* dir = std::getenv("HALFVAR_OUTPUT_DIR"); dir && *dir) {
      std::filesystem::create_directories(dir);
      target = (std::filesystem::path(dir) / (rc.subcommand + (rc.emit == "csv" ? ".csv" : ".json"))).string();
    }
  }
  if (target.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(target, std::ios::binary);
  if (!out) throw UsageError("cannot write " + target);
  out << body;
}

void emit_json(const RunConfig& rc, nlohmann::json result) {
  nlohmann::json doc{{"run_config", rc.to_json()}, {"result", std::move(result)}};
  write_artifact(rc, dump(doc));
}

void emit_csv(const RunConfig& rc, const std::string& table) {
  write_artifact(rc, "# run_config " + rc.to_json().dump() + "\n" + table);
}

ScalarFn scalar_target(const RunConfig& rc, const Path& path, std::shared_ptr<VariationFunction>& keep) {
  if (rc.of == "vf") {
    keep = std::make_shared<VariationFunction>(path);
    return [v = keep](double t) { return (*v)(t); };
  }
  if (path.dimension() != 1) throw UsageError("--of f needs a scalar path; use --of vf for vector paths");
  return scalar_view(path);
}

ClosedSet target_set(const RunConfig& rc, const Path& path) {
  if (rc.set == "kf") return detect_K_f(path, {rc.tolerance}).set;
  std::ifstream in(rc.set);
  if (!in) throw UsageError("--set must be 'kf' or a ClosedSet JSON file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return ClosedSet::from_json(parse_json_text(ss.str(), rc.set));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(rc.set + ": " + e.what());
  }
}

std::string path_csv(const RunConfig& rc, const std::function<Point(double)>& g, Interval dom, std::size_t dim) {
  return sample_csv(g, dom, dim, std::max<std::size_t>(rc.samples, 1));
}

int run_variation(const RunConfig& rc) {
  const auto lp = load(rc);
  const VariationFunction vf(lp.path);
  if (rc.emit == "csv") {
    emit_csv(rc, path_csv(rc, [&vf](double t) { return Point{vf(t)}; }, lp.path.domain(), 1));
    return 0;
  }
  const auto tv = total_variation(lp.path);
  nlohmann::json j{{"total_variation", tv.value},
                   {"tail_bound", tv.tail ? nlohmann::json(*tv.tail) : nlohmann::json(nullptr)},
                   {"inconclusive", tv.inconclusive},
                   {"strictly_increasing", vf.strictly_increasing()},
                   {"breakpoints", lp.path.size()}};
  if (vf.knots().size() <= 4096) j["v_f"] = {{"knots", vf.knots()}, {"values", vf.values()}};
  emit_json(rc, j);
  return 0;
}

int run_fvar(const RunConfig& rc) {
  if (!(rc.alpha > 0.0 && rc.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
  const auto lp = load(rc);
  std::shared_ptr<VariationFunction> keep;
  const auto g = scalar_target(rc, lp.path, keep);
  const auto K = target_set(rc, lp.path);
  const auto r = fractional_variation(g, rc.alpha, K, rc.depth);
  nlohmann::json out = {{"value", r.value},
                        {"depth", r.depth},
                        {"points", r.points},
                        {"monotone_in_depth", r.monotone_in_depth},
                        {"diagnostic", r.diagnostic.to_json()}};
  // Generator input: also classify the value as the truncation grows.
  if (lp.bundle && rc.set == "kf" && rc.of == "f" && lp.path.dimension() == 1) {
    const auto& gen = lp.path.generator();
    const int depth = gen ? gen->depth : rc.depth;
    out["truncation_diagnostic"] = truncation_series(lp.bundle->name, depth, rc.seed, rc.alpha).to_json();
  }
  emit_json(rc, out);
  return 0;
}

int run_kf(const RunConfig& rc) {
  const auto lp = load(rc);
  emit_json(rc, detect_K_f(lp.path, {rc.tolerance}).to_json(rc.depth));
  return 0;
}

int run_certify(const RunConfig& rc) {
  const auto lp = load(rc);
  CertifyOptions co;
  co.depth = rc.depth;
  std::optional<std::vector<ClosedSet>> dec;
  if (lp.bundle) {
    dec = lp.bundle->decomposition;
    co.refutation = lp.bundle->refutation.get();
  }
  const auto cert = certify_vbg_half(lp.path, dec, co);
  emit_json(rc, cert.to_json());
  return 0;
}

ReparamOptions reparam_options(const RunConfig& rc, const LoadedPath& lp) {
  ReparamOptions ro;
  ro.depth = rc.depth;
  if (lp.bundle) {
    ro.decomposition = lp.bundle->decomposition;
    ro.refutation = lp.bundle->refutation.get();
  }
  return ro;
}

int run_reparam(const RunConfig& rc) {
  const auto lp = load(rc);
  try {
    const Reparametrization r(lp.path, reparam_options(rc, lp));
    if (rc.emit == "csv") {
      emit_csv(rc, path_csv(rc, [&r](double s) { return r.g(s); }, r.domain(), lp.path.dimension()));
    } else {
      emit_json(rc, r.to_json());
    }
    return 0;
  } catch (const ReparamRefused& e) {
    emit_json(rc, {{"error", e.what()}, {"certificate", e.certificate().to_json()}});
    return 1;
  }
}

int run_verify(const RunConfig& rc) {
  const auto lp = load(rc);
  std::optional<Reparametrization> opt;
  try {
    opt.emplace(lp.path, reparam_options(rc, lp));
  } catch (const ReparamRefused& e) {
    emit_json(rc, {{"error", e.what()}, {"certificate", e.certificate().to_json()}});
    return 1;
  }
  const Reparametrization& r = *opt;
  const auto pc = check_pipeline(r, 100, rc.seed);
  bool ok = pc.pass();

  const auto vt = vartimes_all(r, rc.samples, rc.seed, 1.0, Exec::parallel);
  nlohmann::json vartimes = nlohmann::json::array();
  for (const auto& v : vt) {
    ok = ok && v.pass;
    vartimes.push_back(v.to_json());
  }

  emit_json(rc, {{"pass", ok}, {"corners", pc.corner_reports}, {"vartimes", vartimes}, {"off_corner", pc.off_reports},
                 {"diagnostics", r.diagnostics()}});
  return ok ? 0 : 1;
}

int run_example(const RunConfig& rc) {
  if (rc.example.empty()) throw UsageError("example needs --example NAME");
  const auto lp = load(rc);
  if (rc.emit == "csv") {
    emit_csv(rc, path_csv(rc, [&lp](double t) { return lp.path.evaluate(t); }, lp.path.domain(),
                          lp.path.dimension()));
    return 0;
  }
  auto j = lp.bundle->to_json();
  j["path"] = lp.path.to_json();
  if (rc.example == "cantor") j["conditions"] = cantor_nonvbg_example(4, std::max(1, rc.depth)).check().to_json();
  emit_json(rc, j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"halfvar: fractional 1/2-variation, VBG_1/2 certificates and C^2 reparametrization of polylines"};
  app.require_subcommand(1);
  RunConfig rc;

  auto common = [&rc](CLI::App* sub) {
    sub->add_option("--input", rc.input, "Path JSON file (explicit or generator form)");
    sub->add_option("--example", rc.example, "Built-in: harmonic-tents, cantor, zigzag, single-corner, affine");
    sub->add_option("--depth", rc.depth, "Enumeration depth; also N, k_max or corner count for examples")
        ->capture_default_str();
    sub->add_option("--alpha", rc.alpha, "Exponent in (0,1)")->capture_default_str();
    sub->add_option("--tolerance", rc.tolerance, "Direction tolerance for corner detection")->capture_default_str();
    sub->add_option("--seed", rc.seed, "Seed for every random draw")->capture_default_str();
    sub->add_option("--emit", rc.emit, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sub->add_option("--output", rc.output, "Output file (default: $HALFVAR_OUTPUT_DIR/<subcommand>.<ext> or stdout)");
    sub->add_option("--samples", rc.samples, "CSV rows or vartimes pairs per corner")->capture_default_str();
  };
  std::map<std::string, std::function<int(const RunConfig&)>> handlers{
      {"variation", run_variation}, {"fvar", run_fvar},     {"kf", run_kf},         {"certify", run_certify},
      {"reparam", run_reparam},     {"verify", run_verify}, {"example", run_example}};
  const std::map<std::string, std::string> help{
      {"variation", "Total variation and the arc-length function v_f"},
      {"fvar", "Fractional variation V_alpha(g, K)"},
      {"kf", "Detect K_f"},
      {"certify", "VBG_1/2 certificate"},
      {"reparam", "Twice differentiable reparametrization"},
      {"verify", "Finite-difference and inequality checks of the reparametrization"},
      {"example", "Emit a built-in example with its ledger"}};
  for (const auto& [name, _] : handlers) {
    auto* sub = app.add_subcommand(name, help.at(name));
    common(sub);
    if (name == "fvar") {
      sub->add_option("--set", rc.set, "kf or a ClosedSet JSON file")->capture_default_str();
      sub->add_option("--of", rc.of, "f (scalar paths) or vf")->check(CLI::IsMember({"f", "vf"}))->capture_default_str();
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  for (auto* sub : app.get_subcommands()) rc.subcommand = sub->get_name();

  try {
    return handlers.at(rc.subcommand)(rc);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
