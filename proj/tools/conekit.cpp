// Command-line front end: norms, central-map classification, Sinkhorn normal
// forms and reproduction suites. Reports go to stdout as JSON, timings and
// errors to stderr.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "conekit/conekit.hpp"

using namespace conekit;

namespace {

enum Exit { kOk = 0, kFailedCheck = 1, kSchema = 2, kUnsupported = 3, kSolver = 4, kNotInterior = 5, kNoConvergence = 6 };

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::DimensionMismatch: return kSchema;
    case ErrorCode::Unsupported:
    case ErrorCode::DimensionTooLarge: return kUnsupported;
    case ErrorCode::SolverFailure: return kSolver;
    case ErrorCode::NotInterior:
    case ErrorCode::NotPositive: return kNotInterior;
    case ErrorCode::NoConvergence: return kNoConvergence;
    default: return kFailedCheck;
  }
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("CONEKIT_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      std::cerr << "ignoring malformed CONEKIT_SEED=" << s << "\n";
    }
  }
  return 42;
}

Json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw SchemaError("cannot open " + path);
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

class Timer {
 public:
  explicit Timer(std::string what) : what_(std::move(what)), start_(std::chrono::steady_clock::now()) {}
  ~Timer() {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::cerr << what_ << ": " << s << " s\n";
  }

 private:
  std::string what_;
  std::chrono::steady_clock::time_point start_;
};

int cmd_norm(const std::string& kind, const std::string& path, double tol) {
  const MatrixInput in = parse_matrix_file(read_json(path));
  const OperatorMatrix u = in.operator_matrix();
  Timer timer("norm " + kind);
  NormInfo info;
  double value = 0.0;
  if (kind == "op") value = op_norm(u);
  else if (kind == "hs") value = hs(u);
  else if (kind == "nuc") value = nuclear(u, &info);
  else if (kind == "pi2") value = pi2(u, &info);
  else if (kind == "gamma2") value = gamma2(u, &info);
  else if (kind == "gamma2star") value = gamma2_star(u, &info);
  Json result = {{"kind", kind}, {"value", number(value)}, {"threshold", nullptr}, {"tolerance", tol},
                 {"pass", true}, {"diagnostics", norm_info_json(info)},
                 {"paper_anchor", "ideal norm " + kind + " of u: " + u.dom.name() + " -> " + u.cod.name()}};
  emit(report_envelope("norm", {{"kind", kind}, {"file", path}, {"matrix", matrix_json(u.entries)},
                                {"dom", space_json(u.dom)}, {"cod", space_json(u.cod)}},
                       Json::array({result}), std::nullopt));
  return kOk;
}

int cmd_classify(const std::string& path, std::optional<double> lambda, int trials, std::uint64_t seed) {
  const MatrixInput in = parse_matrix_file(read_json(path));
  const OperatorMatrix u = in.operator_matrix();
  const std::optional<double> lam = lambda ? lambda : in.lambda;
  if (!lam) throw SchemaError("lambda must be given with --lambda or in the file");
  Timer timer("classify");
  const CentralMap m{*lam, u};
  const auto rep = classify_central(m);
  Json out = classification_json(rep,
                                 {{"file", path}, {"lambda", *lam}, {"matrix", matrix_json(u.entries)},
                                  {"dom", space_json(u.dom)}, {"cod", space_json(u.cod)}, {"trials", trials}},
                                 seed);
  if (trials > 0) out["falsifier"] = falsify_json(lor_eb_falsify(m.to_cone_map(), trials, seed));
  emit(out);
  return kOk;
}

int cmd_sinkhorn(const std::string& path, double tol, int max_iter) {
  const MatrixInput in = parse_matrix_file(read_json(path));
  if (in.entries.rows() < 2 || in.entries.cols() < 2) throw SchemaError("Lorentz maps need at least 2 rows and cols");
  if ((in.dom && (in.dom->family != Family::L2 || in.dom->dim != in.entries.cols() - 1)) ||
      (in.cod && (in.cod->family != Family::L2 || in.cod->dim != in.entries.rows() - 1)))
    throw SchemaError("sinkhorn needs dom/cod l2 with dim = cols - 1 / rows - 1");
  Timer timer("sinkhorn");
  const SinkhornForm sf = sinkhorn_normal_form(in.entries, tol, max_iter);
  Json result = sinkhorn_json(sf);
  result["value"] = number(sf.residual);
  result["threshold"] = tol;
  result["tolerance"] = tol;
  result["pass"] = true;
  emit(report_envelope("sinkhorn", {{"file", path}, {"matrix", matrix_json(in.entries)}, {"max_iter", max_iter}},
                       Json::array({result}), std::nullopt));
  return kOk;
}

ReproReport run_suite(const std::string& which, std::uint64_t seed) {
  Timer timer("reproduce " + which);
  if (which == "peres") return peres_pipeline(seed);
  if (which == "nonconvexity") return nonconvexity_check();
  if (which == "nonassoc") return nonassociativity_suite();
  if (which == "square-cone") return square_cone_check(500, seed);
  return psd_factorization_check(200, seed);
}

int cmd_reproduce(const std::string& which, std::uint64_t seed, const std::string& out_dir) {
  static const std::vector<std::string> kSuites = {"peres", "nonconvexity", "nonassoc", "square-cone",
                                                   "psd-factorization"};
  std::vector<std::string> names = which == "all" ? kSuites : std::vector<std::string>{which};
  std::vector<std::future<ReproReport>> jobs;
  for (const auto& n : names) jobs.push_back(std::async(std::launch::async, run_suite, n, seed));
  bool ok = true;
  Json docs = Json::array();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const ReproReport r = jobs[i].get();
    ok = ok && r.overall;
    const Json doc = repro_json(r);
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      std::ofstream(std::filesystem::path(out_dir) / (names[i] + ".json")) << doc.dump(2) << "\n";
    }
    docs.push_back(doc);
  }
  emit(which == "all" ? docs : docs[0]);
  return ok ? kOk : kFailedCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conekit: ideal norms and map classes for cones over normed spaces"};
  app.require_subcommand(1);

  std::string kind, in_path, which = "all", out_dir;
  double tol = kNormSolveTol;
  std::optional<double> lambda;
  int trials = 100;
  std::uint64_t seed = default_seed();
  double sk_tol = kSinkhornTol;
  int max_iter = kSinkhornMaxIter;

  auto* norm = app.add_subcommand("norm", "compute an ideal norm of a matrix file");
  norm->add_option("--kind", kind, "op|hs|nuc|pi2|gamma2|gamma2star")
      ->required()
      ->check(CLI::IsMember({"op", "hs", "nuc", "pi2", "gamma2", "gamma2star"}));
  norm->add_option("--in", in_path, "matrix file")->required();
  norm->add_option("--tol", tol, "reported tolerance");

  auto* classify = app.add_subcommand("classify", "classify a central map lambda (+) u");
  classify->add_option("--in", in_path, "matrix file")->required();
  classify->add_option("--lambda", lambda, "central coefficient");
  classify->add_option("--trials", trials, "falsifier trials (0 to skip)");
  classify->add_option("--seed", seed, "random seed");

  auto* sinkhorn = app.add_subcommand("sinkhorn", "Sinkhorn normal form of an interior Lorentz-positive map");
  sinkhorn->add_option("--in", in_path, "matrix file")->required();
  sinkhorn->add_option("--tol", sk_tol, "stopping tolerance");
  sinkhorn->add_option("--max-iter", max_iter, "iteration cap");

  auto* reproduce = app.add_subcommand("reproduce", "run reproduction suites");
  reproduce->add_option("--which", which, "suite name or all")
      ->check(CLI::IsMember({"peres", "nonconvexity", "nonassoc", "square-cone", "psd-factorization", "all"}));
  reproduce->add_option("--seed", seed, "random seed");
  reproduce->add_option("--out", out_dir, "also write one JSON file per suite into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kSchema;
  }

  try {
    if (*norm) return cmd_norm(kind, in_path, tol);
    if (*classify) return cmd_classify(in_path, lambda, trials, seed);
    if (*sinkhorn) return cmd_sinkhorn(in_path, sk_tol, max_iter);
    return cmd_reproduce(which, seed, out_dir);
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kSchema;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code(e.code());
  }
}
