#include "gapforge/types.hpp"

#include <limits>

namespace gapforge {

std::string_view to_string(Group g) {
  switch (g) {
    case Group::Unitary: return "unitary";
    case Group::Orthogonal: return "orthogonal";
    case Group::Symplectic: return "symplectic";
  }
  return "?";
}

std::string_view to_string(Boundary b) {
  return b == Boundary::Open ? "open" : "closed";
}

char to_char(Label l) {
  switch (l) {
    case Label::I: return 'i';
    case Label::S: return 's';
    case Label::T: return 't';
  }
  return '?';
}

Group parse_group(std::string_view s) {
  if (s == "unitary" || s == "U") return Group::Unitary;
  if (s == "orthogonal" || s == "O") return Group::Orthogonal;
  if (s == "symplectic" || s == "Sp") return Group::Symplectic;
  throw InvalidArgument("unknown group '" + std::string(s) + "'");
}

Boundary parse_boundary(std::string_view s) {
  if (s == "open") return Boundary::Open;
  if (s == "closed") return Boundary::Closed;
  throw InvalidArgument("unknown boundary '" + std::string(s) + "'");
}

Label parse_label(char c) {
  switch (c) {
    case 'i': return Label::I;
    case 's': return Label::S;
    case 't': return Label::T;
  }
  throw InvalidArgument(std::string("unknown site label '") + c + "'");
}

std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned k = 0; k < exp; ++k) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base)
      throw InvalidDimension("integer power overflows 64 bits");
    r *= base;
  }
  return r;
}

}  // namespace gapforge
