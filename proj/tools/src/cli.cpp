#include "gapforge/cli.hpp"

#include <cstdlib>
#include <ostream>
#include <sstream>
#include <thread>

#include "gapforge/serialize.hpp"

namespace gapforge::cli {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

namespace {

int to_int(const std::string& s) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw InvalidArgument("not an integer: '" + s + "'");
  }
  if (pos != s.size()) throw InvalidArgument("not an integer: '" + s + "'");
  return v;
}

}  // namespace

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& item : split(s, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(to_int(parts[0]));
    } else if (parts.size() == 2 || parts.size() == 3) {
      const int lo = to_int(parts[0]), hi = to_int(parts[1]);
      const int step = parts.size() == 3 ? to_int(parts[2]) : 1;
      if (step <= 0 || hi < lo) throw InvalidArgument("bad range '" + item + "'");
      for (int v = lo; v <= hi; v += step) out.push_back(v);
    } else {
      throw InvalidArgument("bad range '" + item + "'");
    }
  }
  if (out.empty()) throw InvalidArgument("empty list");
  return out;
}

Method auto_method(const CircuitSpec& spec, std::uint64_t dense_cap) {
  const double dc = spec.group == Group::Unitary ? 2.0 : 3.0;
  const double paired = std::pow(dc, spec.eta() / 2);
  if (paired <= 1024 && paired * paired <= static_cast<double>(dense_cap)) return Method::Dense;
  if (paired <= double(1 << 20)) return Method::Iterative;
  return Method::Dmrg;
}

unsigned worker_count() {
  if (const char* env = std::getenv("GAPFORGE_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string csv_row(const GapResult& r, bool timing) {
  std::ostringstream os;
  os << to_string(r.spec.group) << ',' << to_string(r.spec.boundary) << ',' << r.spec.d << ',' << r.spec.m << ','
     << r.spec.n << ',' << format_double(r.lambda) << ',' << to_string(r.method) << ','
     << format_double(r.residual) << ',' << r.iterations << ',' << format_double(timing ? r.seconds : 0.0)
     << ',' << r.status();
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  static constexpr char kUsage[] =
      "usage: gapforge <gap|depth|verify> [options]\n"
      "  gap     spectral gaps over groups, boundaries and sizes\n"
      "  depth   2-design depth bounds and gate-count comparison\n"
      "  verify  Monte-Carlo, lemma and square-law checks\n"
      "Run 'gapforge <command> --help' for the options of a command.\n";
  if (args.empty()) {
    err << kUsage;
    return kBadArguments;
  }
  const std::string& cmd = args[0];
  const std::vector<std::string> rest(args.begin() + 1, args.end());
  if (cmd == "gap") return cmd_gap(rest, out, err);
  if (cmd == "depth") return cmd_depth(rest, out, err);
  if (cmd == "verify") return cmd_verify(rest, out, err);
  if (cmd == "--help" || cmd == "-h" || cmd == "help") {
    out << kUsage;
    return kOk;
  }
  err << "unknown command '" << cmd << "'\n" << kUsage;
  return kBadArguments;
}

}  // namespace gapforge::cli
