#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ztwo {

enum class Errc {
  invalid_input,
  not_squarefree,
  invalid_modulus,
  non_coprime,
  not_quadratic_residue,
  bad_prime_class,
  indefinite_form,
  mismatched_discriminant,
  enumeration_bound_exceeded,
  no_representation_in_bound,
  no_solution_in_bound,
  precond_violated,
  unsupported_family,
  hypothesis_not_met,
};

constexpr std::string_view errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::invalid_input: return "InvalidInput";
    case Errc::not_squarefree: return "NotSquarefree";
    case Errc::invalid_modulus: return "InvalidModulus";
    case Errc::non_coprime: return "NonCoprime";
    case Errc::not_quadratic_residue: return "NotQuadraticResidue";
    case Errc::bad_prime_class: return "BadPrimeClass";
    case Errc::indefinite_form: return "IndefiniteForm";
    case Errc::mismatched_discriminant: return "MismatchedDiscriminant";
    case Errc::enumeration_bound_exceeded: return "EnumerationBoundExceeded";
    case Errc::no_representation_in_bound: return "NoRepresentationInBound";
    case Errc::no_solution_in_bound: return "NoSolutionInBound";
    case Errc::precond_violated: return "PrecondViolated";
    case Errc::unsupported_family: return "UnsupportedFamily";
    case Errc::hypothesis_not_met: return "HypothesisNotMet";
  }
  return "Unknown";
}

// Every failure in the library is reported through this one exception type;
// callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ztwo
