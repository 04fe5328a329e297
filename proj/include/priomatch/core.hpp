#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace priomatch {

// Students and schools are dense indices into the name tables kept by Problem.
// All library-level computation runs on indices; names only matter at the
// serialization boundary.
using StudentId = std::int32_t;
using SchoolId = std::int32_t;
using IdPair = std::pair<StudentId, StudentId>;

// "Unmatched" placeholder. Ranked strictly below every listed school and
// strictly above every unlisted one in a student's preference.
inline constexpr SchoolId kNullSchool = -1;

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: bad ids, broken bijections, capacity
// violations, schema errors. CLI exit code 2.
struct InputError : Error {
  using Error::Error;
};

// A cyclic priority relation was given to an operation that needs a linear
// extension to exist. CLI exit code 2.
struct CyclicRelationError : InputError {
  using InputError::InputError;
};

// A mechanism that needs strict total-order priorities got something weaker.
struct NotTotalOrderError : InputError {
  using InputError::InputError;
};

// An enumeration guard would be exceeded. Guards are explicit parameters with
// defaults chosen for the brute-force ranges; callers may widen them. CLI
// exit code 3.
struct GuardError : Error {
  using Error::Error;
};

// A cross-checked internal invariant failed. Never expected on valid input.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace priomatch
