#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gapforge {

enum class Group { Unitary, Orthogonal, Symplectic };
enum class Boundary { Open, Closed };

// Site labels. T is the third commutant element: the transposition pair for
// orthogonal sites, its Omega-twisted version on the symplectic site.
enum class Label : std::uint8_t { I = 0, S = 1, T = 2 };

std::string_view to_string(Group g);
std::string_view to_string(Boundary b);
char to_char(Label l);

Group parse_group(std::string_view s);
Boundary parse_boundary(std::string_view s);
Label parse_label(char c);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define GAPFORGE_ERROR(Name)                \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  };

GAPFORGE_ERROR(UnsupportedGroupDimension)
GAPFORGE_ERROR(SingularGram)
GAPFORGE_ERROR(AmbientExpansionFailure)
GAPFORGE_ERROR(InvalidDimension)
GAPFORGE_ERROR(DimensionMismatch)
GAPFORGE_ERROR(DimensionCap)
GAPFORGE_ERROR(SectorLeak)
GAPFORGE_ERROR(InvalidSpec)
GAPFORGE_ERROR(InvalidSize)
GAPFORGE_ERROR(InvalidEpsilon)
GAPFORGE_ERROR(NoValidGrouping)
GAPFORGE_ERROR(UnsupportedSpec)
GAPFORGE_ERROR(InvalidArgument)

#undef GAPFORGE_ERROR

// Integer power with overflow detection; throws InvalidDimension on overflow.
std::uint64_t ipow(std::uint64_t base, unsigned exp);

}  // namespace gapforge
