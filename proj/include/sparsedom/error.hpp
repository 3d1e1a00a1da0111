#pragma once

#include <stdexcept>
#include <string>

namespace sparsedom {

enum class Errc {
  invalid_argument,
  level_exhausted,
  empty_domain,
  no_complement,
  empty_region,
  invalid_exponent_combination,
  nonpositive_weight,
  unknown_name,
  alpha_out_of_range,
  grid_mismatch,
  superlevel_set_full,
  missing_symbol,
  unreachable_threshold,
  support_too_large,
  variant_hypothesis_violation,
  chain_too_long,
  unknown_key,
  type_mismatch,
  missing_required,
  io_error,
  invariant_failure,
};

const char* errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to an exit status and tests can match on the kind.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace sparsedom
