#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ari {

enum class ErrorKind {
  kInvalidInput,
  kDegenerateSpectrum,
  kSingularSylvester,
  kNotHurwitz,
  kSingularBlock,
  kNoBaseSolution,
  kBaseResidualTooLarge,
  kNonInvariantSelection,
  kSingularY,
  kUncontrollable,
  kNotRHPSelection,
  kSingularInput,
  kNotASolution,
  kNotAnEquationSolution,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library. kind() is what the CLI maps to exit
// codes; what() carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised when Schur block reordering cannot separate two eigenvalue clusters.
class DegenerateSpectrumError : public Error {
 public:
  DegenerateSpectrumError(const std::string& detail, double cluster_gap)
      : Error(ErrorKind::kDegenerateSpectrum, detail), gap_(cluster_gap) {}

  double cluster_gap() const noexcept { return gap_; }

 private:
  double gap_;
};

}  // namespace ari
