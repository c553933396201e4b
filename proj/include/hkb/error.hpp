#ifndef HKB_ERROR_HPP
#define HKB_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace hkb {

enum class errc {
  non_prime_characteristic,
  field_too_large,
  division_by_zero,
  not_a_square,
  not_a_subfield,
  syntax_error,
  variable_index_out_of_range,
  inhomogeneous_where_required,
  dimension_mismatch,
  singular_matrix,
  dependent_points,
  unsupported_dimension,
  ambient_not_supported,
  zero_form,
  non_hermitian_matrix,
  not_a_pencil,
  repeated_form,
  wrong_field,
  invalid_argument,
};

constexpr std::string_view errc_name(errc e) noexcept {
  switch (e) {
    case errc::non_prime_characteristic: return "NonPrimeCharacteristic";
    case errc::field_too_large: return "FieldTooLarge";
    case errc::division_by_zero: return "DivisionByZero";
    case errc::not_a_square: return "NotASquare";
    case errc::not_a_subfield: return "NotASubfield";
    case errc::syntax_error: return "SyntaxError";
    case errc::variable_index_out_of_range: return "VariableIndexOutOfRange";
    case errc::inhomogeneous_where_required: return "InhomogeneousWhereRequired";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::singular_matrix: return "SingularMatrix";
    case errc::dependent_points: return "DependentPoints";
    case errc::unsupported_dimension: return "UnsupportedDimension";
    case errc::ambient_not_supported: return "AmbientNotSupported";
    case errc::zero_form: return "ZeroForm";
    case errc::non_hermitian_matrix: return "NonHermitianMatrix";
    case errc::not_a_pencil: return "NotAPencil";
    case errc::repeated_form: return "RepeatedForm";
    case errc::wrong_field: return "WrongField";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every recoverable failure of the library is reported through this type;
/// `code()` identifies the condition, `what()` carries "<Name>: detail".
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

  errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return errc_name(code_); }

 private:
  errc code_;
};

}  // namespace hkb

#endif  // HKB_ERROR_HPP
