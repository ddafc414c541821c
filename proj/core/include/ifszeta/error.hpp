#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ifszeta {

enum class Errc {
  invalid_polynomial,
  zero_constant_term,
  root_out_of_unit,
  no_sign_change,
  context_mismatch,
  invalid_params,
  index_out_of_range,
  budget_exceeded,
  nonpositive_weight,
  invalid_argument,
  grid_too_large,
  grid_too_coarse,
  overlap_detected,
  precondition_violated,
};

std::string_view to_string(Errc code) noexcept;

// Every failure raised by the library carries a code and, where one
// applies, the name of the input field that caused it.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, std::string field = {})
      : std::runtime_error(message), code_(code), field_(std::move(field)) {}

  Errc code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  Errc code_;
  std::string field_;
};

// Enumeration stopped because the distinct-cylinder count outgrew the budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(unsigned level_reached, std::size_t budget)
      : Error(Errc::budget_exceeded,
              "distinct cylinder budget of " + std::to_string(budget) +
                  " exceeded while building level " + std::to_string(level_reached + 1),
              "budget"),
        level_reached_(level_reached) {}

  // Last level that was completed within budget (0 if none).
  unsigned level_reached() const noexcept { return level_reached_; }

 private:
  unsigned level_reached_;
};

}  // namespace ifszeta
