#pragma once

#include <stdexcept>
#include <string>

namespace fpa {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid configuration or parameter ranges (CLI exit code 2).
struct config_error : error {
  using error::error;
};

// Non-finite values, failed quadrature or inversion (CLI exit code 2).
struct numeric_error : error {
  using error::error;
};

// Malformed or insufficient input data (CLI exit code 4).
struct data_error : error {
  using error::error;
};

// Lower/upper tail has too little usable mass for an exponent fit.
struct tail_error : error {
  using error::error;
};

// Model-validity diagnostics failed hard enough to stop a pipeline
// (CLI exit code 3).
struct diagnostics_error : error {
  using error::error;
};

}  // namespace fpa
