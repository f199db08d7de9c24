#include "dotcall64/error.hpp"

#include <utility>

namespace dc64 {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Capacity: return "CapacityError";
    case ErrorKind::Range: return "RangeError";
    case ErrorKind::Spec: return "SpecError";
    case ErrorKind::MissingValue: return "MissingValueError";
    case ErrorKind::Cast: return "CastError";
    case ErrorKind::Load: return "LoadError";
    case ErrorKind::Symbol: return "SymbolError";
  }
  return "Error";
}

Error::Error(ErrorKind kind, std::string detail,
             std::optional<std::size_t> argument,
             std::optional<std::uint64_t> element)
    : kind_(kind),
      detail_(std::move(detail)),
      argument_(argument),
      element_(element) {
  compose();
}

void Error::set_argument(std::size_t position) {
  argument_ = position;
  compose();
}

void Error::compose() {
  what_.assign(to_string(kind_));
  what_ += ": ";
  if (argument_) {
    what_ += "argument " + std::to_string(*argument_) + ": ";
  }
  what_ += detail_;
  if (element_) {
    what_ += " (element " + std::to_string(*element_) + ")";
  }
}

}  // namespace dc64
