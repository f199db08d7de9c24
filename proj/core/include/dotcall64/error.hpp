#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <string_view>

namespace dc64 {

enum class ErrorKind {
  Capacity,
  Range,
  Spec,
  MissingValue,
  Cast,
  Load,
  Symbol,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base of every engine error.
///
/// An error may be tied to an argument position (1-based, as in
/// "argument 3") and, for element-level failures, to a 0-based element
/// index within that argument. The engine attaches the argument position
/// while unwinding out of the per-argument pipeline, so what() always
/// reflects the most specific location known.
class Error : public std::exception {
 public:
  Error(ErrorKind kind, std::string detail,
        std::optional<std::size_t> argument = std::nullopt,
        std::optional<std::uint64_t> element = std::nullopt);

  const char* what() const noexcept override { return what_.c_str(); }

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }
  std::optional<std::size_t> argument() const noexcept { return argument_; }
  std::optional<std::uint64_t> element() const noexcept { return element_; }

  void set_argument(std::size_t position);

 private:
  void compose();

  ErrorKind kind_;
  std::string detail_;
  std::optional<std::size_t> argument_;
  std::optional<std::uint64_t> element_;
  std::string what_;
};

#define DC64_DECLARE_ERROR(Name, Kind)                                    \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(std::string detail,                                     \
                  std::optional<std::size_t> argument = std::nullopt,     \
                  std::optional<std::uint64_t> element = std::nullopt)    \
        : Error(ErrorKind::Kind, std::move(detail), argument, element) {} \
  }

/// Allocation beyond the 2^52 element ceiling, or allocation failure.
DC64_DECLARE_ERROR(CapacityError, Capacity);
/// Host-level coercion of a value that does not fit the target type.
DC64_DECLARE_ERROR(RangeError, Range);
/// Malformed call declaration, arity violation or bad usage.
DC64_DECLARE_ERROR(SpecError, Spec);
/// NA/NaN/Inf found while NAOK is off.
DC64_DECLARE_ERROR(MissingValueError, MissingValue);
/// double -> int64 cast of a non-finite or out-of-range element.
DC64_DECLARE_ERROR(CastError, Cast);
DC64_DECLARE_ERROR(LoadError, Load);
DC64_DECLARE_ERROR(SymbolError, Symbol);

#undef DC64_DECLARE_ERROR

}  // namespace dc64
