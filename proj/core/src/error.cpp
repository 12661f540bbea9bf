#include "k3ks/error.hpp"

namespace k3ks {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::malformed_input: return "malformed_input";
    case ErrorCode::invalid_prime: return "invalid_prime";
    case ErrorCode::asymmetric_matrix: return "asymmetric_matrix";
    case ErrorCode::degenerate_form: return "degenerate_form";
    case ErrorCode::codimension_too_small: return "codimension_too_small";
    case ErrorCode::real_obstruction: return "real_obstruction";
    case ErrorCode::local_realization_failed: return "local_realization_failed";
    case ErrorCode::global_assembly_failed: return "global_assembly_failed";
    case ErrorCode::reducible_charpoly: return "reducible_charpoly";
    case ErrorCode::not_totally_real: return "not_totally_real";
    case ErrorCode::no_b_basis: return "no_b_basis";
    case ErrorCode::field_mismatch: return "field_mismatch";
    case ErrorCode::inverse_of_zero: return "inverse_of_zero";
    case ErrorCode::search_exhausted: return "search_exhausted";
    case ErrorCode::zero_phi: return "zero_phi";
    case ErrorCode::invalid_phi_pattern: return "invalid_phi_pattern";
    case ErrorCode::t_out_of_range: return "t_out_of_range";
    case ErrorCode::invalid_lattice_parameter: return "invalid_lattice_parameter";
    case ErrorCode::algebra_mismatch: return "algebra_mismatch";
    case ErrorCode::denominator_divisible_by_p: return "denominator_divisible_by_p";
    case ErrorCode::not_block_diagonal: return "not_block_diagonal";
    case ErrorCode::not_grade_one: return "not_grade_one";
    case ErrorCode::non_orthogonal_pair: return "non_orthogonal_pair";
    case ErrorCode::bad_square: return "bad_square";
    case ErrorCode::missing_polarization_pair: return "missing_polarization_pair";
    case ErrorCode::no_polarization_sign: return "no_polarization_sign";
    case ErrorCode::not_invertible: return "not_invertible";
    case ErrorCode::parity_violation: return "parity_violation";
    case ErrorCode::not_proportional: return "not_proportional";
    case ErrorCode::golden_mismatch: return "golden_mismatch";
    case ErrorCode::io_failure: return "io_failure";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

ErrorKind kind_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::malformed_input:
    case ErrorCode::invalid_prime:
    case ErrorCode::io_failure:
      return ErrorKind::config;
    case ErrorCode::local_realization_failed:
    case ErrorCode::global_assembly_failed:
    case ErrorCode::golden_mismatch:
    case ErrorCode::not_proportional:
      return ErrorKind::verification;
    case ErrorCode::internal:
      return ErrorKind::internal;
    default:
      return ErrorKind::precondition;
  }
}

}  // namespace k3ks
