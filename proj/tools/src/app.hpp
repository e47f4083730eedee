#pragma once

#include <CLI11.hpp>
#include <algorithm>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gapforge/cli.hpp"

namespace gapforge::cli {

// Parses args into app. Returns an exit code when parsing ends the command
// (help or a usage error).
inline std::optional<int> parse_app(CLI::App& app, const std::vector<std::string>& args, std::ostream& out,
                                    std::ostream& err) {
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << app.get_name() << ": " << e.what() << "\n";
    return kBadArguments;
  }
  return std::nullopt;
}

}  // namespace gapforge::cli
