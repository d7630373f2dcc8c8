#include "rnla/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rnla/dense.hpp"
#include "rnla/estimate.hpp"
#include "rnla/fullrank.hpp"
#include "rnla/io.hpp"
#include "rnla/laplacian.hpp"
#include "rnla/lowrank.hpp"
#include "rnla/rangefinder.hpp"
#include "rnla/rng.hpp"
#include "rnla/sketch.hpp"
#include "rnla/solvers.hpp"
#include "rnla/synthetic.hpp"

namespace rnla::cli {

namespace {

using nlohmann::json;

struct Clock {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  }
};

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, json& params) {
  if (flag) {
    params["seed"] = *flag;
    return *flag;
  }
  if (const char* env = std::getenv("RNLA_SEED")) {
    auto s = static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));
    params["seed"] = s;
    params["seed_source"] = "env";
    return s;
  }
  std::random_device rd;
  std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  params["seed"] = s;
  params["seed_source"] = "generated";
  return s;
}

TestVectorDist parse_dist(const std::string& s) {
  if (s == "gaussian") return TestVectorDist::Gaussian;
  if (s == "rademacher") return TestVectorDist::Rademacher;
  if (s == "sphere") return TestVectorDist::ScaledSphere;
  throw CLI::ValidationError("--dist", "unknown distribution " + s);
}

SketchKind parse_sketch(const std::string& s) {
  if (s == "gaussian") return SketchKind::Gaussian;
  if (s == "isometry") return SketchKind::PartialIsometry;
  if (s == "sparse") return SketchKind::SparseSign;
  if (s == "srtt") return SketchKind::Srtt;
  if (s == "tensor") return SketchKind::TensorKR;
  if (s == "coord") return SketchKind::CoordSample;
  throw CLI::ValidationError("--sketch", "unknown sketch kind " + s);
}

void emit(std::ostream& out, const json& report, bool csv) {
  if (!csv) {
    out << report.dump(2) << "\n";
    return;
  }
  // Flat key,value dump for spreadsheet use.
  std::function<void(const std::string&, const json&)> walk =
      [&](const std::string& prefix, const json& node) {
        if (node.is_object()) {
          for (auto it = node.begin(); it != node.end(); ++it)
            walk(prefix.empty() ? it.key() : prefix + "." + it.key(),
                 it.value());
        } else if (node.is_array()) {
          for (std::size_t i = 0; i < node.size(); ++i)
            walk(prefix + "[" + std::to_string(i) + "]", node[i]);
        } else {
          out << prefix << "," << node.dump() << "\n";
        }
      };
  walk("", report);
}

// Parse "a:b:c" ranges and "x,y,z" lists of integers.
std::vector<long> parse_int_list(const std::string& s) {
  std::vector<long> out;
  if (s.find(':') != std::string::npos) {
    long lo, hi, step = 1;
    std::sscanf(s.c_str(), "%ld:%ld:%ld", &lo, &hi, &step);
    for (long v = lo; v <= hi; v += step) out.push_back(v);
    return out;
  }
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stol(tok));
  return out;
}

WeightedMultigraph load_graph(const std::string& spec, std::uint64_t seed) {
  if (spec.rfind("random:", 0) == 0) {
    long n = 100;
    double p = 0.05;
    std::sscanf(spec.c_str(), "random:%ld:%lf", &n, &p);
    return random_connected_graph(n, p, seed);
  }
  return WeightedMultigraph::from_file(spec);
}

int run_bench(const std::string& target, const json& opts, std::ostream& out);

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"randomized numerical linear algebra toolkit"};
  app.require_subcommand(1);
  bool csv = false;
  app.add_flag("--csv", csv, "emit flat CSV instead of JSON");
  int threads = 1;
  app.add_option("--threads", threads,
                 "internal data-parallelism (default 1, reproducible)");

  std::string in_file, graph_file, rhs_file, out_prefix, dist_s = "gaussian",
                                                         sketch_s = "gaussian";
  long rank = 10, oversample = 10, samples = 100, power = 0, block = 10;
  long sketch_l = 0, sketch_s_sz = 0, iters = 100, order = 2;
  double tol = 1e-8, alpha = 0.025, eps = 0.5;
  std::optional<std::uint64_t> seed_flag;
  std::string which = "max", method = "precondition", mode = "rows",
              side = "row", fn = "log", spectrum = "decay:0.5";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--in", in_file, "input matrix (MatrixMarket)");
    cmd->add_option("--graph", graph_file, "graph file or random:n:p");
    cmd->add_option("--rhs", rhs_file, "right-hand side CSV");
    cmd->add_option("--rank,-k", rank, "target rank k");
    cmd->add_option("--oversample,-p", oversample, "oversampling p");
    cmd->add_option("--power,-q", power, "power/depth parameter q");
    cmd->add_option("--samples", samples, "sample count");
    cmd->add_option("--dist", dist_s, "gaussian|rademacher|sphere");
    cmd->add_option("--sketch", sketch_s,
                    "gaussian|isometry|sparse|srtt|tensor|coord");
    cmd->add_option("--tol", tol, "tolerance");
    cmd->add_option("--alpha", alpha, "CI tail probability");
    cmd->add_option("--eps", eps, "epsilon parameter");
    cmd->add_option("--seed", seed_flag, "PRNG seed (env RNLA_SEED fallback)");
    cmd->add_option("--out-prefix", out_prefix, "prefix for factor files");
    cmd->add_option("--order", order, "Schatten order p");
    cmd->add_option("--iters", iters, "iteration count");
    cmd->add_option("--block,-b", block, "block/panel size");
    cmd->add_option("--which", which, "max|min");
    cmd->add_option("--method", method, "method selector");
    cmd->add_option("--mode", mode, "mode selector");
    cmd->add_option("--side", side, "row|col|two");
    cmd->add_option("--fn", fn, "slq function: log|inv|square|exp");
    cmd->add_option("--sketch-l", sketch_l, "single-view range sketch size");
    cmd->add_option("--sketch-s", sketch_s_sz, "single-view core sketch size");
    cmd->add_option("--spectrum", spectrum, "decay:r|poly:p|plateau:k");
  };

  CLI::App* est = app.add_subcommand("estimate", "scalar estimators");
  CLI::App* est_trace = est->add_subcommand("trace");
  CLI::App* est_frob = est->add_subcommand("frob");
  CLI::App* est_schatten = est->add_subcommand("schatten");
  CLI::App* est_maxeig = est->add_subcommand("maxeig");
  CLI::App* est_slq = est->add_subcommand("slq");
  for (auto* c : {est_trace, est_frob, est_schatten, est_maxeig, est_slq})
    add_common(c);

  CLI::App* c_rsvd = app.add_subcommand("rsvd", "randomized SVD");
  CLI::App* c_id = app.add_subcommand("id", "interpolative decomposition");
  CLI::App* c_cur = app.add_subcommand("cur", "CUR decomposition");
  CLI::App* c_nys = app.add_subcommand("nystrom", "psd Nystrom approximation");
  CLI::App* c_urv = app.add_subcommand("urv", "powerURV factorization");
  CLI::App* c_cpqr = app.add_subcommand("cpqr", "randomized blocked CPQR");
  CLI::App* c_single = app.add_subcommand("singleview", "single-view SVD");
  CLI::App* c_ls = app.add_subcommand("ls", "least-squares solvers");
  CLI::App* ls_solve = c_ls->add_subcommand("solve");
  CLI::App* c_kacz = app.add_subcommand("kaczmarz", "randomized Kaczmarz");
  CLI::App* c_lap = app.add_subcommand("lapsolve", "graph Laplacian solve");
  CLI::App* c_sparsify = app.add_subcommand("sparsify", "graph sparsifier");
  CLI::App* c_resist = app.add_subcommand("resistance",
                                          "effective resistances");
  CLI::App* c_bench = app.add_subcommand("bench", "benchmark harness");
  std::string bench_target;
  long bench_n = 100, bench_trials = 10;
  std::string bench_l = "10", bench_q = "0,1,2";
  c_bench->add_option("target", bench_target,
                      "rangefinder|urv|cpqr|nystrom|singleview|lapsolve")
      ->required();
  c_bench->add_option("--n", bench_n, "problem size");
  c_bench->add_option("--trials", bench_trials, "trials per configuration");
  c_bench->add_option("--l", bench_l, "rangefinder l list/range");
  c_bench->add_option("--q", bench_q, "power list");
  add_common(c_bench);

  for (auto* c : {c_rsvd, c_id, c_cur, c_nys, c_urv, c_cpqr, c_single,
                  ls_solve, c_kacz, c_lap, c_sparsify, c_resist})
    add_common(c);

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    int code = app.exit(e, msg, msg);
    out << msg.str();
    return code == 0 ? 0 : 1;
  }

  json report;
  json& params = report["parameters"];
  Clock clock;
  try {
    const std::uint64_t seed = resolve_seed(seed_flag, params);
    json& outputs = report["outputs"];
    json& metrics = report["error_metrics"];

    if (*est_trace) {
      report["command"] = "estimate trace";
      Matrix A = read_matrix_market(in_file);
      params["samples"] = samples;
      params["dist"] = dist_s;
      EstimatorReport er =
          trace_estimate(LinearOperator::from_dense(A), static_cast<int>(samples),
                         parse_dist(dist_s), seed);
      outputs["estimate"] = er.estimate;
      if (er.sample_variance) outputs["sample_variance"] = *er.sample_variance;
      ConfidenceInterval ci =
          bootstrap_trace_ci(er.per_sample, 1000, alpha, seed + 1);
      outputs["ci_lo"] = ci.lo;
      outputs["ci_hi"] = ci.hi;
      outputs["ci_level"] = ci.level;
      metrics["abs_error_vs_exact_trace"] =
          std::abs(er.estimate - A.trace());
    } else if (*est_frob) {
      report["command"] = "estimate frob";
      Matrix A = read_matrix_market(in_file);
      params["samples"] = samples;
      FrobSchatten4 fr = frob_schatten4(LinearOperator::from_dense(A),
                                        static_cast<int>(samples), seed);
      outputs["frob_sq_estimate"] = fr.frob_sq.estimate;
      outputs["schatten4_4_estimate"] = fr.schatten4_4;
      metrics["frob_sq_exact"] = A.squaredNorm();
    } else if (*est_schatten) {
      report["command"] = "estimate schatten";
      Matrix A = read_matrix_market(in_file);
      params["order"] = order;
      params["samples"] = samples;
      outputs["schatten_2p_pow_2p"] = schatten2p_kv(
          A, static_cast<int>(order), static_cast<int>(samples), seed);
    } else if (*est_maxeig) {
      report["command"] = "estimate maxeig";
      Matrix A = read_matrix_market(in_file);
      params["power"] = power;
      params["method"] = method;
      LinearOperator op = LinearOperator::from_dense(A);
      if (method == "power") {
        PowerEigResult pr =
            power_max_eig(op, static_cast<int>(std::max(power, 1L)), tol, seed);
        outputs["xi"] = pr.xi;
        outputs["iterations"] = pr.iterations;
      } else {
        LanczosEigResult lr = lanczos_extremal_eig(
            op, static_cast<int>(std::max(power, 1L)), true,
            which == "min" ? Extremal::Min : Extremal::Max, seed);
        outputs["xi"] = lr.xi;
        outputs["steps"] = lr.steps;
      }
    } else if (*est_slq) {
      report["command"] = "estimate slq";
      Matrix A = read_matrix_market(in_file);
      params["fn"] = fn;
      params["samples"] = samples;
      params["power"] = power;
      std::function<double(double)> f;
      if (fn == "log")
        f = [](double x) { return std::log(std::max(x, 1e-300)); };
      else if (fn == "inv")
        f = [](double x) { return 1.0 / std::max(x, 1e-300); };
      else if (fn == "square")
        f = [](double x) { return x * x; };
      else if (fn == "exp")
        f = [](double x) { return std::exp(x); };
      else
        throw CLI::ValidationError("--fn", "unknown function " + fn);
      EstimatorReport er = slq_trace_fn(
          LinearOperator::from_dense(A), f, static_cast<int>(samples),
          static_cast<int>(std::max(power, 1L)), parse_dist(dist_s), seed);
      outputs["estimate"] = er.estimate;
      if (er.sample_variance) outputs["sample_variance"] = *er.sample_variance;
    } else if (*c_rsvd) {
      report["command"] = "rsvd";
      Matrix A = read_matrix_market(in_file);
      params["rank"] = rank;
      params["oversample"] = oversample;
      params["power"] = power;
      SvdFactors f =
          rsvd(A, rank, oversample, static_cast<int>(power), seed);
      outputs["rank"] = f.sigma.size();
      outputs["sigma"] = std::vector<double>(
          f.sigma.data(), f.sigma.data() + f.sigma.size());
      PosteriorErrorEstimate pe = posterior_error(
          LinearOperator::from_dense(A), f.U, 10, seed + 99);
      metrics["posterior_frob_sq"] = pe.frob_sq_est;
      metrics["posterior_spec"] = pe.spec_est;
      if (!out_prefix.empty()) {
        write_matrix_market(out_prefix + "U.mtx", f.U);
        write_csv_vector(out_prefix + "S.csv", f.sigma);
        write_matrix_market(out_prefix + "V.mtx", f.V);
      }
    } else if (*c_id) {
      report["command"] = "id";
      Matrix A = read_matrix_market(in_file);
      params["rank"] = rank;
      params["oversample"] = oversample;
      params["side"] = side;
      if (side == "row") {
        RowId id = randomized_id_row(A, rank, oversample, seed);
        outputs["rows"] = id.rows;
        Matrix R(static_cast<Index>(id.rows.size()), A.cols());
        for (std::size_t i = 0; i < id.rows.size(); ++i)
          R.row(static_cast<Index>(i)) = A.row(id.rows[i]);
        metrics["frob_error"] = (A - id.X * R).norm();
      } else if (side == "col") {
        ColId id = randomized_id_col(A, rank, oversample, seed);
        outputs["cols"] = id.cols;
        Matrix C(A.rows(), static_cast<Index>(id.cols.size()));
        for (std::size_t j = 0; j < id.cols.size(); ++j)
          C.col(static_cast<Index>(j)) = A.col(id.cols[j]);
        metrics["frob_error"] = (A - C * id.Z).norm();
      } else {
        TwoSidedId id = two_sided_id(A, rank, oversample, seed);
        outputs["rows"] = id.rows;
        outputs["cols"] = id.cols;
        metrics["frob_error"] = (A - id.X * id.skeleton * id.Z).norm();
      }
    } else if (*c_cur) {
      report["command"] = "cur";
      Matrix A = read_matrix_market(in_file);
      params["rank"] = rank;
      params["oversample"] = oversample;
      CurFactors f = cur(A, rank, oversample, seed);
      outputs["rows"] = f.rows;
      outputs["cols"] = f.cols;
      Matrix C(A.rows(), static_cast<Index>(f.cols.size()));
      for (std::size_t j = 0; j < f.cols.size(); ++j)
        C.col(static_cast<Index>(j)) = A.col(f.cols[j]);
      Matrix R(static_cast<Index>(f.rows.size()), A.cols());
      for (std::size_t i = 0; i < f.rows.size(); ++i)
        R.row(static_cast<Index>(i)) = A.row(f.rows[i]);
      metrics["frob_error"] = (A - C * f.U * R).norm();
    } else if (*c_nys) {
      report["command"] = "nystrom";
      Matrix A = read_matrix_market(in_file);
      params["rank"] = rank;
      params["samples"] = samples;
      NystromFactors f =
          nystrom(LinearOperator::from_dense(A), rank, samples, seed);
      outputs["lambda"] = std::vector<double>(
          f.lambda.data(), f.lambda.data() + f.lambda.size());
      metrics["frob_error"] = (A - f.reconstruct()).norm();
      if (!out_prefix.empty()) {
        write_matrix_market(out_prefix + "U.mtx", f.U);
        write_csv_vector(out_prefix + "L.csv", f.lambda);
      }
    } else if (*c_urv) {
      report["command"] = "urv";
      Matrix A = read_matrix_market(in_file);
      params["power"] = power;
      UrvFactorization f = power_urv(A, static_cast<int>(power), seed);
      metrics["factor_residual"] =
          (A - f.U * f.R * f.V.transpose()).norm() / std::max(A.norm(), 1e-300);
      outputs["r_diag"] = std::vector<double>(
          f.R.diagonal().data(), f.R.diagonal().data() + f.R.cols());
      if (!out_prefix.empty()) {
        write_matrix_market(out_prefix + "U.mtx", f.U);
        write_matrix_market(out_prefix + "R.mtx", f.R);
        write_matrix_market(out_prefix + "V.mtx", f.V);
      }
    } else if (*c_cpqr) {
      report["command"] = "cpqr";
      Matrix A = read_matrix_market(in_file);
      params["block"] = block;
      params["oversample"] = oversample;
      CpqrFactorization f = randomized_cpqr(A, block, oversample, seed);
      Matrix AP(A.rows(), A.cols());
      for (Index j = 0; j < A.cols(); ++j)
        AP.col(j) = A.col(f.perm[static_cast<std::size_t>(j)]);
      metrics["factor_residual"] =
          (AP - f.Q * f.R).norm() / std::max(A.norm(), 1e-300);
      outputs["perm"] = f.perm;
    } else if (*c_single) {
      report["command"] = "singleview";
      Matrix A = read_matrix_market(in_file);
      const Index l = sketch_l > 0 ? sketch_l : 4 * rank;
      const Index s2 = sketch_s_sz > 0 ? sketch_s_sz : 2 * l;
      params["rank"] = rank;
      params["l"] = l;
      params["s"] = s2;
      params["sketch"] = sketch_s;
      StreamSketch sk(A.rows(), A.cols(), l, s2, seed, parse_sketch(sketch_s));
      sk.update(A);
      SvdFactors f = sk.finalize(rank);
      outputs["sigma"] = std::vector<double>(
          f.sigma.data(), f.sigma.data() + f.sigma.size());
      metrics["frob_error"] = (A - f.reconstruct()).norm();
    } else if (*ls_solve) {
      report["command"] = "ls solve";
      Matrix A = read_matrix_market(in_file);
      Vector b = read_csv_vector(rhs_file);
      const Index d = sketch_l > 0 ? sketch_l : 4 * A.cols();
      params["method"] = method;
      params["d"] = d;
      params["tol"] = tol;
      LsSolution sol;
      if (method == "sketch")
        sol = sketch_solve_ls(A, b, d, parse_sketch(sketch_s), seed);
      else if (method == "iterative")
        sol = iterative_sketch_ls(A, b, d, static_cast<int>(iters), seed);
      else
        sol = sketch_precondition_ls(A, b, d, tol, seed);
      outputs["residual_norm"] = sol.residual_norm;
      outputs["iterations"] = sol.iterations;
      outputs["converged"] = sol.converged;
      if (!out_prefix.empty()) write_csv_vector(out_prefix + "x.csv", sol.x);
    } else if (*c_kacz) {
      report["command"] = "kaczmarz";
      Matrix A = read_matrix_market(in_file);
      Vector b = read_csv_vector(rhs_file);
      params["iters"] = iters;
      params["mode"] = mode;
      LsSolution sol = randomized_kaczmarz(
          A, b, static_cast<int>(iters),
          mode == "block" ? KaczmarzMode::Block : KaczmarzMode::Rows, block,
          seed);
      outputs["residual_norm"] = sol.residual_norm;
      outputs["iterations"] = sol.iterations;
    } else if (*c_lap) {
      report["command"] = "lapsolve";
      WeightedMultigraph G = load_graph(graph_file, seed + 1000);
      Vector f = read_csv_vector(rhs_file);
      params["tol"] = tol;
      LaplacianSolve sol = laplacian_solve(G, f, tol, seed);
      outputs["iterations"] = sol.iterations;
      outputs["error_bound"] = sol.error_bound;
      metrics["residual_norm"] =
          (laplacian_matrix(G) * sol.x - f).norm() / std::max(f.norm(), 1e-300);
      if (!out_prefix.empty()) write_csv_vector(out_prefix + "x.csv", sol.x);
    } else if (*c_sparsify) {
      report["command"] = "sparsify";
      WeightedMultigraph G = load_graph(graph_file, seed + 1000);
      const Index k = samples > 0
                          ? static_cast<Index>(samples)
                          : sparsifier_sample_count(G.vertex_count(), eps);
      params["k"] = k;
      params["eps"] = eps;
      WeightedMultigraph H = sparsify(G, k, seed);
      outputs["edges"] = static_cast<long>(H.edges().size());
      Matrix LG = laplacian_matrix(G);
      Matrix LH = laplacian_matrix(H);
      metrics["laplacian_rel_frob_gap"] = (LH - LG).norm() / LG.norm();
      if (!out_prefix.empty()) {
        std::ofstream gout(out_prefix + "graph.txt");
        for (const GraphEdge& e : H.edges())
          gout << e.u << " " << e.v << " " << e.w << "\n";
      }
    } else if (*c_resist) {
      report["command"] = "resistance";
      WeightedMultigraph G = load_graph(graph_file, seed + 1000);
      Vector rho = effective_resistances(G);
      outputs["resistances"] =
          std::vector<double>(rho.data(), rho.data() + rho.size());
      double foster = 0.0;
      for (std::size_t i = 0; i < G.edges().size(); ++i)
        foster += G.edges()[i].w * rho(static_cast<Index>(i));
      metrics["foster_sum"] = foster;  // equals n-1 on connected graphs
    } else if (*c_bench) {
      json opts;
      opts["n"] = bench_n;
      opts["trials"] = bench_trials;
      opts["spectrum"] = spectrum;
      opts["l_list"] = bench_l;
      opts["q_list"] = bench_q;
      opts["rank"] = rank;
      opts["block"] = block;
      opts["oversample"] = oversample;
      opts["graph"] = graph_file;
      opts["eps"] = eps;
      opts["tol"] = tol;
      opts["seed"] = seed;
      return run_bench(bench_target, opts, out);
    }

    report["wall_time_ms"] = clock.ms();
    emit(out, report, csv);
    return 0;
  } catch (const IoError& e) {
    out << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    out << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    out << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}

namespace {

// Benchmark harness: one CSV row per (size, parameter, trial), with the
// truncation-oracle sigma_{k+1} column next to the achieved error.
int run_bench(const std::string& target, const json& opts, std::ostream& out) {
  const auto n = opts["n"].get<Index>();
  const auto trials = opts["trials"].get<long>();
  const auto seed = opts["seed"].get<std::uint64_t>();
  const auto spectrum = opts["spectrum"].get<std::string>();

  if (target == "rangefinder") {
    Vector sigma = parse_spectrum(spectrum, n);
    out << "n,l,trial,sigma_next,error,wall_ms\n";
    for (long l : parse_int_list(opts["l_list"].get<std::string>())) {
      for (long t = 0; t < trials; ++t) {
        Matrix A = matrix_with_spectrum(n, n, sigma, seed + 7 * t);
        Clock c;
        RangeBasis rb = rangefinder(A, l, SketchKind::Gaussian,
                                    seed + 1000 * t + l);
        const double err = spectral_norm(A - rb.Q * (rb.Q.transpose() * A));
        out << n << "," << l << "," << t << ","
            << (l < n ? sigma(l) : 0.0) << "," << err << "," << c.ms() << "\n";
      }
    }
    return 0;
  }
  if (target == "urv" || target == "cpqr") {
    Vector sigma = parse_spectrum(spectrum, n);
    out << "n,q_or_b,trial,k,sigma_next,error,wall_ms\n";
    for (long q : parse_int_list(opts["q_list"].get<std::string>())) {
      for (long t = 0; t < trials; ++t) {
        Matrix A = matrix_with_spectrum(n, n, sigma, seed + 7 * t);
        Clock c;
        Matrix Uk, Rk;
        std::vector<Index> perm;
        if (target == "urv") {
          UrvFactorization f =
              power_urv(A, static_cast<int>(q), seed + 1000 * t + q);
          const double ms = c.ms();
          for (Index k : {n / 10, n / 4, n / 2}) {
            Matrix approx = f.U.leftCols(k) * f.R.topRows(k) * f.V.transpose();
            out << n << "," << q << "," << t << "," << k << "," << sigma(k)
                << "," << spectral_norm(A - approx) << "," << ms << "\n";
          }
        } else {
          CpqrFactorization f = randomized_cpqr(
              A, opts["block"].get<Index>(), opts["oversample"].get<Index>(),
              seed + 1000 * t + q);
          const double ms = c.ms();
          Matrix AP(A.rows(), A.cols());
          for (Index j = 0; j < A.cols(); ++j)
            AP.col(j) = A.col(f.perm[static_cast<std::size_t>(j)]);
          for (Index k : {n / 10, n / 4, n / 2}) {
            Matrix approx = f.Q.leftCols(k) * f.R.topRows(k);
            out << n << "," << q << "," << t << "," << k << "," << sigma(k)
                << "," << spectral_norm(AP - approx) << "," << ms << "\n";
          }
        }
      }
    }
    return 0;
  }
  if (target == "nystrom") {
    Vector lambda = parse_spectrum(spectrum, n);
    const auto k = opts["rank"].get<Index>();
    out << "n,l,trial,lambda_next,error,wall_ms\n";
    for (long l = 2 * k; l <= 6 * k; l += k) {
      for (long t = 0; t < trials; ++t) {
        Matrix A = psd_with_eigenvalues(lambda, seed + 7 * t);
        Clock c;
        NystromFactors f = nystrom(LinearOperator::from_dense(A), k, l,
                                   seed + 1000 * t + l);
        out << n << "," << l << "," << t << "," << lambda(k) << ","
            << spectral_norm(A - f.reconstruct()) << "," << c.ms() << "\n";
      }
    }
    return 0;
  }
  if (target == "singleview") {
    Vector sigma = parse_spectrum(spectrum, n);
    const auto k = opts["rank"].get<Index>();
    out << "n,l,s,trial,tail_frob_sq,error_frob_sq,wall_ms\n";
    for (long t = 0; t < trials; ++t) {
      Matrix A = matrix_with_spectrum(n, n, sigma, seed + 7 * t);
      const double tail = sigma.tail(n - k).squaredNorm();
      Clock c;
      StreamSketch sk(n, n, 4 * k, 8 * k, seed + 1000 * t);
      sk.update(A);
      SvdFactors f = sk.finalize(4 * k);
      out << n << "," << 4 * k << "," << 8 * k << "," << t << "," << tail
          << "," << (A - f.reconstruct()).squaredNorm() << "," << c.ms()
          << "\n";
    }
    return 0;
  }
  if (target == "lapsolve") {
    out << "n,trial,iterations,rel_residual,wall_ms\n";
    for (long t = 0; t < trials; ++t) {
      WeightedMultigraph G =
          load_graph(opts["graph"].get<std::string>(), seed + 31 * t);
      RandomStream rng(seed + t, 3);
      Vector f = rng.gaussian_vector(G.vertex_count());
      f.array() -= f.mean();
      Clock c;
      LaplacianSolve sol =
          laplacian_solve(G, f, opts["tol"].get<double>(), seed + 1000 * t);
      out << G.vertex_count() << "," << t << "," << sol.iterations << ","
          << (laplacian_matrix(G) * sol.x - f).norm() / f.norm() << ","
          << c.ms() << "\n";
    }
    return 0;
  }
  out << "usage error: unknown bench target " << target << "\n";
  return 1;
}

}  // namespace

int main_entry(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout);
}

}  // namespace rnla::cli
