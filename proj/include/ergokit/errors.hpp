#ifndef ERGOKIT_ERRORS_HPP
#define ERGOKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ergokit {

// Every failure mode has a stable code so callers (and the CLI error JSON)
// can dispatch on identity rather than on message text.
enum class errc {
  negative_entry,
  row_sum_violation,
  measure_deviation,
  dimension_mismatch,
  invalid_state,
  out_of_range,
  singular_solve,
  not_closed_class,
  rank_deficiency,
  not_invariant,
  mass_on_transient,
  not_ergodic,
  equal_measures,
  density_level_violation,
  not_unique,
  minorization_violated,
  invalid_spec,
  parse_error,
  certificate_invariant,
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  errc code() const { return code_; }

  // Input/usage errors map to CLI exit 1; internal consistency failures
  // (a certificate that does not verify, a solve that broke down) map to 2.
  bool internal() const {
    return code_ == errc::singular_solve || code_ == errc::rank_deficiency ||
           code_ == errc::density_level_violation ||
           code_ == errc::certificate_invariant;
  }

 private:
  errc code_;
};

}  // namespace ergokit

#endif  // ERGOKIT_ERRORS_HPP
