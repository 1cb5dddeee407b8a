#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace warpchen {

// Root of every error raised by the library. The CLI maps anything derived
// from this to exit status 1 (input error).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define WARPCHEN_DEFINE_ERROR(Name)      \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  };

// exprlang
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};
WARPCHEN_DEFINE_ERROR(UnknownFunction)
WARPCHEN_DEFINE_ERROR(UnboundVariable)
WARPCHEN_DEFINE_ERROR(DomainError)

// geomcore
WARPCHEN_DEFINE_ERROR(RankDeficient)
WARPCHEN_DEFINE_ERROR(NotSymmetric)

// immersion
WARPCHEN_DEFINE_ERROR(ValidationError)
WARPCHEN_DEFINE_ERROR(DegenerateMetric)
WARPCHEN_DEFINE_ERROR(NormalRankError)
WARPCHEN_DEFINE_ERROR(OutOfDomain)

// invariants
WARPCHEN_DEFINE_ERROR(DegeneratePlane)
WARPCHEN_DEFINE_ERROR(SubspaceTooSmall)
WARPCHEN_DEFINE_ERROR(BadK)

// chen
WARPCHEN_DEFINE_ERROR(HypothesisViolated)
WARPCHEN_DEFINE_ERROR(ShapeError)
WARPCHEN_DEFINE_ERROR(PreconditionError)
WARPCHEN_DEFINE_ERROR(CaseDimensionError)

// scene / cli
WARPCHEN_DEFINE_ERROR(InputError)
WARPCHEN_DEFINE_ERROR(UnknownCatalogEntry)

#undef WARPCHEN_DEFINE_ERROR

}  // namespace warpchen
