#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "app.hpp"
#include "gapforge/dmrg.hpp"
#include "gapforge/serialize.hpp"

namespace gapforge::cli {
namespace {

struct Job {
  CircuitSpec spec;
  Method method = Method::Dense;
};

struct Outcome {
  GapResult result;
  std::vector<SweepRecord> history;
  std::string error;
};

Outcome solve(const Job& job, const SolverConfig& scfg, const DmrgConfig& dcfg) {
  Outcome o;
  try {
    switch (job.method) {
      case Method::Formula: o.result = formula_gap(job.spec); break;
      case Method::Dense: o.result = dense_gap(job.spec, scfg); break;
      case Method::Iterative: o.result = iterative_gap(job.spec, scfg); break;
      case Method::Dmrg: {
        DmrgResult d = dmrg_gap(job.spec, dcfg);
        o.result = d.gap;
        o.history = std::move(d.history);
        break;
      }
    }
  } catch (const std::exception& e) {
    o.error = e.what();
    o.result.spec = job.spec;
    o.result.method = job.method;
    o.result.converged = false;
  }
  return o;
}

}  // namespace

int cmd_gap(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral gap of the second-moment layer operator", "gap"};
  std::string groups = "unitary", boundaries = "open", ns = "8", method_name = "auto", format = "csv";
  std::string output, history_dir;
  int d = 2, m = 1;
  SolverConfig scfg;
  DmrgConfig dcfg;
  bool no_timing = false;
  app.add_option("--group", groups, "Comma-separated: unitary, orthogonal, symplectic");
  app.add_option("--boundary", boundaries, "Comma-separated: open, closed");
  app.add_option("--n", ns, "Qudit counts, e.g. 8 or 4:70:2 or 8,12");
  app.add_option("--d", d, "Local qudit dimension");
  app.add_option("--m", m, "Qudits per gate half");
  app.add_option("--method", method_name, "formula, dense, iterative, dmrg or auto");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output,-o", output, "Output file (default stdout)");
  app.add_option("--tol", scfg.tolerance, "Iterative residual tolerance");
  app.add_option("--max-iter", scfg.max_iterations, "Iterative operator-application budget");
  app.add_option("--krylov", scfg.krylov_dim, "Krylov subspace size");
  app.add_option("--seed", scfg.seed, "Start-vector seed");
  app.add_option("--dense-cap", scfg.dense_cap, "Largest dense matrix, in coefficients");
  app.add_option("--chi", dcfg.chi, "DMRG bond dimension");
  app.add_option("--sweeps", dcfg.max_sweeps, "DMRG sweep limit");
  app.add_option("--energy-tol", dcfg.energy_tol, "DMRG sweep-energy convergence threshold");
  app.add_flag("--check-chi", dcfg.check_chi, "Rerun DMRG at 1.2 chi and flag disagreement");
  app.add_option("--history-dir", history_dir, "Write DMRG sweep histories here");
  app.add_flag("--no-timing", no_timing, "Write 0 in the seconds column");
  if (auto rc = parse_app(app, args, out, err)) return *rc;

  std::vector<Job> jobs;
  try {
    const bool is_auto = method_name == "auto";
    const Method method = is_auto ? Method::Dense : parse_method(method_name);
    if (!(scfg.tolerance > 0)) throw InvalidArgument("--tol must be positive");
    if (dcfg.chi < 2) throw InvalidArgument("--chi must be >= 2");
    const std::vector<int> nlist = parse_int_list(ns);
    for (const auto& gs : split(groups, ','))
      for (const auto& bs : split(boundaries, ','))
        for (int n : nlist) {
          Job j;
          j.spec = {d, m, n, parse_boundary(bs), parse_group(gs)};
          j.spec.validate();
          j.method = is_auto ? auto_method(j.spec, scfg.dense_cap) : method;
          if (j.method == Method::Formula && j.spec.group != Group::Unitary)
            throw InvalidArgument("--method formula is available for unitary gates only");
          jobs.push_back(j);
        }
    if (jobs.empty()) throw InvalidArgument("nothing to compute");
  } catch (const std::exception& e) {
    err << "gap: " << e.what() << "\n";
    return kBadArguments;
  }

  std::vector<Outcome> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) results[k] = solve(jobs[k], scfg, dcfg);
  };
  const unsigned nthreads = std::min<unsigned>(worker_count(), static_cast<unsigned>(jobs.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ostringstream body;
  bool all_ok = true;
  if (format == "csv") {
    body << kCsvHeader << "\n";
    for (const auto& o : results) body << csv_row(o.result, !no_timing) << (o.error.empty() ? "" : ";error") << "\n";
  } else {
    body << "[\n";
    for (std::size_t k = 0; k < results.size(); ++k)
      body << "  " << to_json(results[k].result) << (k + 1 < results.size() ? ",\n" : "\n");
    body << "]\n";
  }
  for (const auto& o : results) {
    if (!o.error.empty()) err << "gap: " << o.result.spec.describe() << ": " << o.error << "\n";
    all_ok = all_ok && o.result.converged;
  }

  if (!history_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(history_dir, ec);
    for (const auto& o : results) {
      if (o.history.empty()) continue;
      const auto& s = o.result.spec;
      const std::string path = history_dir + "/history_" + std::string(to_string(s.group)) + "_" +
                               std::string(to_string(s.boundary)) + "_d" + std::to_string(s.d) + "_m" +
                               std::to_string(s.m) + "_n" + std::to_string(s.n) + ".csv";
      std::ofstream f(path);
      if (!f) {
        err << "gap: cannot write " << path << "\n";
        return kBadArguments;
      }
      f << history_csv(o.history);
    }
  }

  if (output.empty()) {
    out << body.str();
  } else {
    std::ofstream f(output);
    if (!f) {
      err << "gap: cannot write " << output << "\n";
      return kBadArguments;
    }
    f << body.str();
  }
  return all_ok ? kOk : kNoConvergence;
}

}  // namespace gapforge::cli
