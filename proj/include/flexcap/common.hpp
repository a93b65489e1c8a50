#pragma once

#include <stdexcept>
#include <string>

namespace flexcap {

// Error codes shared across the library. CLI maps these onto exit codes
// (parse/validation -> 2, infeasible -> 3).
enum class Errc {
  malformed_program,
  not_optimal,
  no_such_row,
  infeasible,
  unbounded,
  empty_market,
  missing_price_cap,
  missing_storage_host,
  soc_violation,
  stranded,
  incomplete_trajectory,
  parse_error,
  validation_error,
  calibration_failed,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace flexcap
