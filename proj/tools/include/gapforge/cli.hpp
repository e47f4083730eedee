#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gapforge/numeric.hpp"

namespace gapforge::cli {

enum ExitCode { kOk = 0, kCheckFailed = 1, kBadArguments = 2, kNoConvergence = 3 };

// Arguments exclude the program name; args[0] is the subcommand.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Arguments exclude the subcommand name.
int cmd_gap(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cmd_depth(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cmd_verify(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "8", "4:12:2" and comma-separated mixtures of both.
std::vector<int> parse_int_list(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

// Solver chosen by --method auto for a spec and dense cap.
Method auto_method(const CircuitSpec& spec, std::uint64_t dense_cap);

// Worker count from GAPFORGE_THREADS, falling back to the hardware concurrency.
unsigned worker_count();

inline constexpr char kCsvHeader[] = "group,boundary,d,m,n,lambda,method,residual,iterations,seconds,status";
std::string csv_row(const GapResult& r, bool timing = true);

}  // namespace gapforge::cli
