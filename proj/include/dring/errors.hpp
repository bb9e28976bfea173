// Error taxonomy for the division-ring linear algebra library.
//
// Everything derives from dring::Error (itself a std::runtime_error) so
// callers can catch the whole family at one choke point (the CLI maps any
// Error to exit code 2 unless a more specific contract applies).
#pragma once

#include <stdexcept>
#include <string>

namespace dring {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Division by zero / inversion of the zero scalar.
class ZeroInverse : public Error {
public:
  using Error::Error;
};

// Incompatible matrix shapes; messages name the offending operand or block
// coordinate.
class ShapeMismatch : public Error {
public:
  using Error::Error;
};

// invert_matrix on a square matrix of deficient rank.
class SingularMatrix : public Error {
public:
  using Error::Error;
};

// A theorem-guaranteed internal property failed to hold: always a bug in this
// library, never a property of the input.
class InternalInconsistency : public Error {
public:
  using Error::Error;
};

// Staged elimination could not reach its target shape; carries the stage name.
class DecompositionFailure : public Error {
public:
  using Error::Error;
};

// Hermitian functionality requested over a ring of characteristic 2.
class CharacteristicTwo : public Error {
public:
  using Error::Error;
};

// A Hermitian system kind was given a right-hand side with R != R*.
class NotHermitianRHS : public Error {
public:
  using Error::Error;
};

// A matrix-equation system has no solution. Thrown by the solving entry point
// only; callers that merely want the verdict use the non-throwing variant.
class Infeasible : public Error {
public:
  using Error::Error;
};

// Exhaustive enumeration refused: search space exceeds the documented cap.
class TooLarge : public Error {
public:
  using Error::Error;
};

// Malformed textual/JSON input; messages name the offending field.
class ParseError : public Error {
public:
  using Error::Error;
};

// Ring construction with a modulus that is not a supported prime.
class InvalidModulus : public Error {
public:
  using Error::Error;
};

}  // namespace dring
