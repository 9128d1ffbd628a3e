// svdlab: decompose, bench, eigenfaces and perclos subcommands.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "svdlab/bench.hpp"
#include "svdlab/decompose.hpp"
#include "svdlab/eigenface.hpp"
#include "svdlab/errors.hpp"
#include "svdlab/matrix_io.hpp"
#include "svdlab/perclos.hpp"

namespace {

using namespace svdlab;

constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kInputError = 2;
constexpr int kConvergence = 3;
constexpr int kResidual = 4;
constexpr double kResidualLimit = 1e-8;

int exit_code(const Error& e) {
  return e.code() == Errc::NoConvergence || e.code() == Errc::SchemeFailure ? kConvergence : kInputError;
}

std::string num(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

template <class T>
T parse_or_throw(std::optional<T> v, const std::string& what, const std::string& name) {
  if (!v) throw Error(Errc::InvalidInput, "unknown " + what + " '" + name + "'");
  return *v;
}

struct DecomposeArgs {
  std::string alg = "dc";
  std::string input;
  std::string prefix;
  double tol = 0.0;
  std::size_t cutoff = 25;
  std::string scheme = "hybrid";
};

int run_decompose(const DecomposeArgs& a) {
  DecomposeOptions opt;
  opt.tol = a.tol;
  opt.cutoff = a.cutoff;
  opt.scheme = parse_or_throw(parse_scheme(a.scheme), "scheme", a.scheme);
  const Algorithm alg = parse_or_throw(parse_algorithm(a.alg), "algorithm", a.alg);
  const SymmetricMatrix m(read_matrix_text(std::filesystem::path(a.input)));
  const SvdResult r = decompose(alg, m, opt);

  DenseMatrix s(r.sigma.size(), r.sigma.size());
  for (std::size_t i = 0; i < r.sigma.size(); ++i) s(i, i) = r.sigma[i];
  write_matrix_text(std::filesystem::path(a.prefix + ".U.txt"), r.u);
  write_matrix_text(std::filesystem::path(a.prefix + ".S.txt"), s);
  write_matrix_text(std::filesystem::path(a.prefix + ".V.txt"), r.v);

  const double res = reconstruction_residual(m, r);
  const double orth = svd_orth_defect(r);
  std::cout << "alg=" << to_string(alg) << " n=" << m.n() << " residual=" << num("%.3e", res)
            << " orth_defect=" << num("%.3e", orth) << '\n';
  if (!(res <= kResidualLimit) || !(orth <= kResidualLimit)) {
    std::cerr << "svdlab: residual validation failed (limit " << kResidualLimit << ")\n";
    return kResidual;
  }
  return kOk;
}

struct BenchArgs {
  std::vector<std::string> algs{"dc", "qr"};
  std::vector<std::size_t> sizes{50, 100, 200, 500, 1000};
  std::size_t reps = 5;
  std::uint64_t seed = 42;
  std::string kind = "random-symmetric";
  std::string format = "csv";
  std::size_t cutoff = 25;
  std::string scheme = "hybrid";
};

int run_bench(const BenchArgs& a) {
  BenchSpec spec;
  for (const std::string& s : a.algs) spec.algorithms.push_back(parse_or_throw(parse_algorithm(s), "algorithm", s));
  spec.sizes = a.sizes;
  spec.reps = a.reps;
  spec.seed = a.seed;
  spec.kind = parse_or_throw(parse_matrix_kind(a.kind), "matrix kind", a.kind);
  spec.options.cutoff = a.cutoff;
  spec.options.scheme = parse_or_throw(parse_scheme(a.scheme), "scheme", a.scheme);
  const BenchResult r = run_benchmark(spec);
  if (a.format == "table") {
    write_table(std::cout, r);
  } else {
    write_csv(std::cout, r);
  }
  for (const BenchCell& c : r.cells) {
    if (!c.failure.empty()) std::cerr << "svdlab: " << to_string(c.alg) << " n=" << c.n << ": " << c.failure << '\n';
  }
  if (r.any_convergence_failure()) return kConvergence;
  if (!r.all_valid()) return kResidual;
  return kOk;
}

struct TrainArgs {
  std::string dir;
  std::optional<std::size_t> k;
  std::string alg = "dc";
  std::string out;
  double energy = 0.95;
};

int run_train(const TrainArgs& a) {
  TrainOptions opt;
  opt.k = a.k;
  opt.energy_target = a.energy;
  opt.backend = parse_or_throw(parse_algorithm(a.alg), "algorithm", a.alg);
  const LabeledImages set = load_training_set(a.dir);
  const EigenfaceModel m = train(set.images, set.labels, opt);
  save_model(std::filesystem::path(a.out), m);
  double energy = 0.0;
  for (double f : m.energy_fractions) energy += f;
  std::cout << "trained " << m.width << "x" << m.height << " M=" << m.training_count() << " K=" << m.k()
            << " energy=" << num("%.6f", energy) << " -> " << a.out << '\n';
  if (m.rank_capped) {
    std::cerr << "svdlab: warning: k capped from " << m.requested_k << " to " << m.k()
              << " (remaining eigenvalues are negligible)\n";
  }
  return kOk;
}

struct ClassifyArgs {
  std::string model;
  std::string image;
  bool json = false;
};

int run_classify(const ClassifyArgs& a) {
  const EigenfaceModel m = load_model(std::filesystem::path(a.model));
  const Classification c = classify(m, read_pgm(std::filesystem::path(a.image)));
  if (a.json) {
    nlohmann::json j = {{"label", c.label},
                        {"distance", c.distance},
                        {"reconstruction_error", c.error},
                        {"nearest_index", c.nearest}};
    std::cout << j.dump() << '\n';
  } else {
    std::cout << "label " << c.label << "\ndistance " << num("%.10g", c.distance) << "\nreconstruction_error "
              << num("%.10g", c.error) << '\n';
  }
  return kOk;
}

struct PerclosArgs {
  std::string labels;
  double window = 180.0;
};

int run_perclos(const PerclosArgs& a) {
  const auto frames = read_frame_labels(std::filesystem::path(a.labels));
  for (const PerclosWindow& w : perclos_windows(frames, a.window)) {
    std::cout << num("%.10g", w.start) << ',' << num("%.10g", w.end) << ',' << num("%.10g", w.percent) << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric SVD/eigendecomposition toolkit"};
  app.require_subcommand(1);
  int rc = kOk;

  DecomposeArgs da;
  auto* dec = app.add_subcommand("decompose", "SVD of a symmetric matrix from a text file");
  dec->add_option("--alg", da.alg, "jacobi | hestenes | gk | qr | dc")->capture_default_str();
  dec->add_option("--input", da.input, "matrix text file")->required();
  dec->add_option("--out", da.prefix, "output prefix for .U.txt, .S.txt, .V.txt")->required();
  dec->add_option("--tol", da.tol, "convergence tolerance (backend default when 0)");
  dec->add_option("--cutoff", da.cutoff, "dc leaf size")->capture_default_str();
  dec->add_option("--scheme", da.scheme, "dc secular scheme: hybrid | middle | left | right | fixed")
      ->capture_default_str();
  dec->callback([&] { rc = run_decompose(da); });

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "time backends on generated matrices");
  bench->add_option("--algs", ba.algs, "comma separated backends")->delimiter(',')->capture_default_str();
  bench->add_option("--sizes", ba.sizes, "comma separated orders")->delimiter(',')->capture_default_str();
  bench->add_option("--reps", ba.reps, "timed runs per cell")->capture_default_str();
  bench->add_option("--seed", ba.seed, "generator seed")->capture_default_str();
  bench->add_option("--kind", ba.kind, "random-symmetric | random-spd | graded | identity")->capture_default_str();
  bench->add_option("--format", ba.format, "csv | table")
      ->check(CLI::IsMember({"csv", "table"}))
      ->capture_default_str();
  bench->add_option("--cutoff", ba.cutoff, "dc leaf size")->capture_default_str();
  bench->add_option("--scheme", ba.scheme, "dc secular scheme")->capture_default_str();
  bench->callback([&] { rc = run_bench(ba); });

  auto* eig = app.add_subcommand("eigenfaces", "train or apply an eigenface model");
  eig->require_subcommand(1);
  TrainArgs ta;
  auto* tr = eig->add_subcommand("train", "train from class subdirectories of PGM files");
  tr->add_option("--dir", ta.dir, "training directory")->required();
  tr->add_option("--k", ta.k, "eigenface count (default: smallest k reaching --energy)");
  tr->add_option("--energy", ta.energy, "energy fraction used when --k is absent")->capture_default_str();
  tr->add_option("--alg", ta.alg, "backend for the M x M problem")->capture_default_str();
  tr->add_option("--out", ta.out, "model file")->required();
  tr->callback([&] { rc = run_train(ta); });
  ClassifyArgs ca;
  auto* cl = eig->add_subcommand("classify", "classify one PGM image");
  cl->add_option("--model", ca.model, "model file")->required();
  cl->add_option("--image", ca.image, "PGM image")->required();
  cl->add_flag("--json", ca.json, "emit JSON");
  cl->callback([&] { rc = run_classify(ca); });

  PerclosArgs pa;
  auto* pc = app.add_subcommand("perclos", "PERCLOS over tumbling windows of labeled frames");
  pc->add_option("--labels", pa.labels, "CSV with timestamp_s,label")->required();
  pc->add_option("--window", pa.window, "window length in seconds")->capture_default_str();
  pc->callback([&] { rc = run_perclos(pa); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  } catch (const Error& e) {
    std::cerr << "svdlab: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "svdlab: internal error: " << e.what() << '\n';
    return kInternal;
  }
  return rc;
}
