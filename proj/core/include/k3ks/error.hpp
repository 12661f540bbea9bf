#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace k3ks {

// Broad failure classes; the CLI maps each one to an exit code.
enum class ErrorKind {
  config,        // malformed input or configuration
  precondition,  // input violates an operation's precondition
  verification,  // a computed result failed its own certificate
  internal,
};

// Fine-grained error identities. Distinct values let callers (and tests)
// tell apart e.g. a codimension failure from a real-signature obstruction.
enum class ErrorCode {
  malformed_input,
  invalid_prime,
  asymmetric_matrix,
  degenerate_form,
  codimension_too_small,
  real_obstruction,
  local_realization_failed,
  global_assembly_failed,
  reducible_charpoly,
  not_totally_real,
  no_b_basis,
  field_mismatch,
  inverse_of_zero,
  search_exhausted,
  zero_phi,
  invalid_phi_pattern,
  t_out_of_range,
  invalid_lattice_parameter,
  algebra_mismatch,
  denominator_divisible_by_p,
  not_block_diagonal,
  not_grade_one,
  non_orthogonal_pair,
  bad_square,
  missing_polarization_pair,
  no_polarization_sign,
  not_invertible,
  parity_violation,
  not_proportional,
  golden_mismatch,
  io_failure,
  internal,
};

const char* to_string(ErrorCode code);
ErrorKind kind_of(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorKind kind() const noexcept { return kind_of(code_); }

 private:
  ErrorCode code_;
};

// Raised by operations that need a nondegenerate form.
class DegenerateFormError : public Error {
 public:
  explicit DegenerateFormError(std::size_t radical_dim)
      : Error(ErrorCode::degenerate_form,
              "degenerate quadratic form: radical has dimension " +
                  std::to_string(radical_dim)),
        radical_dim_(radical_dim) {}

  std::size_t radical_dim() const noexcept { return radical_dim_; }

 private:
  std::size_t radical_dim_;
};

}  // namespace k3ks
