#pragma once

#include <stdexcept>
#include <string>

namespace ccnlab {

// Error taxonomy shared by the library and the CLI exit-code contract:
//   0 ok, 2 domain error, 3 degenerate characteristics, 4 I/O or config,
//   5 solver failure.
enum class errc {
  outside_existence,          // wavenumber outside the existence disc
  complex_characteristics,    // delta_zz >= 0, no real characteristics
  coalescing_characteristics, // |delta_zz| below the refusal band
  degenerate_leading_coeff,   // |A_l| too small for the characteristic quadratic
  not_a_characteristic,       // chain solve attempted at non-characteristic C
  degenerate_reduction,       // vanishing KdV coefficient
  parameter,                  // bad scalar parameter (e.g. c3 <= 0)
  dimension_mismatch,
  configuration,              // bad grid/stepper/config input
  io,                         // file read/write failure
  divergence,                 // NaN detected during time stepping
  defect_present,             // phase singularity in amplitude field
  ill_posed,                  // refusing an unbounded spectral multiplier
  internal_consistency        // cross-check between two routes failed
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::outside_existence: return "outside_existence";
    case errc::complex_characteristics: return "complex_characteristics";
    case errc::coalescing_characteristics: return "coalescing_characteristics";
    case errc::degenerate_leading_coeff: return "degenerate_leading_coeff";
    case errc::not_a_characteristic: return "not_a_characteristic";
    case errc::degenerate_reduction: return "degenerate_reduction";
    case errc::parameter: return "parameter";
    case errc::dimension_mismatch: return "dimension_mismatch";
    case errc::configuration: return "configuration";
    case errc::io: return "io";
    case errc::divergence: return "divergence";
    case errc::defect_present: return "defect_present";
    case errc::ill_posed: return "ill_posed";
    case errc::internal_consistency: return "internal_consistency";
  }
  return "unknown";
}

class ccn_error : public std::runtime_error {
 public:
  ccn_error(errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

  // CLI exit-code contract.
  int exit_code() const {
    switch (code_) {
      case errc::outside_existence:
      case errc::complex_characteristics:
      case errc::not_a_characteristic:
      case errc::degenerate_reduction:
      case errc::parameter:
      case errc::dimension_mismatch:
      case errc::defect_present:
        return 2;
      case errc::coalescing_characteristics:
      case errc::degenerate_leading_coeff:
        return 3;
      case errc::configuration:
      case errc::io:
        return 4;
      case errc::divergence:
      case errc::ill_posed:
      case errc::internal_consistency:
        return 5;
    }
    return 1;
  }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
  throw ccn_error(code, std::string(errc_name(code)) + ": " + what);
}

}  // namespace ccnlab
