#pragma once

#include <stdexcept>

namespace actsearch {

// Bad user-supplied configuration (CLI exit code 1).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// API contract violation by calling code.
struct usage_error : std::logic_error {
  using std::logic_error::logic_error;
};

// Malformed input file; the message carries file name and line number.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Moment pair (m, v) with v >= m(1-m): no beta distribution matches.
struct infeasible_moments_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Moment pair with v <= 0.
struct degenerate_moments_error : std::domain_error {
  using std::domain_error::domain_error;
};

}  // namespace actsearch
