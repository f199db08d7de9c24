#include "dotcall64/diagnostics.hpp"

#include <utility>

namespace dc64 {

std::string format(const Diagnostic& d) {
  std::string out = d.level >= 2 ? "debug" : "tuning";
  if (d.argument) out += " [argument " + std::to_string(*d.argument) + "]";
  out += ": ";
  out += d.message;
  return out;
}

void Diagnostics::emit(int level, std::string message) {
  emit(level, current_, std::move(message));
}

void Diagnostics::emit(int level, std::optional<std::size_t> argument,
                       std::string message) {
  if (!enabled(level)) return;
  entries_.push_back(Diagnostic{level, argument, std::move(message)});
}

}  // namespace dc64
