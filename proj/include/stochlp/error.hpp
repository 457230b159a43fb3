#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stochlp {

enum class Errc {
  dimension_mismatch,
  domain_error,
  not_positive_definite,
  rank_deficient,
  singular_system,
  potential_overflow,
  step_unbounded,
  positivity_lost,
  centering_failed,
  oracle_refused,
  parse_error,
  io_error,
};

std::string_view to_string(Errc code) noexcept;

/// Exception type used across the library. `index()` names the offending
/// pivot, coordinate or row when one exists, and is -1 otherwise.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::ptrdiff_t index = -1)
      : std::runtime_error(what), code_(code), index_(index) {}

  Errc code() const noexcept { return code_; }
  std::ptrdiff_t index() const noexcept { return index_; }

 private:
  Errc code_;
  std::ptrdiff_t index_;
};

}  // namespace stochlp
