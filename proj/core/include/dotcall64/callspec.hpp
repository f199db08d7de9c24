#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dotcall64/vector.hpp"

namespace dc64 {

/// A callee accepts at most this many arguments.
inline constexpr std::size_t kMaxArguments = 65;

/// Callee-side element type of one argument.
enum class SignatureTag { Double, Int32, Int64 };

/// Access mode of one argument.
enum class IntentTag { ReadWrite, Read, Write };

std::string_view render(SignatureTag tag) noexcept;
std::string_view render(IntentTag tag) noexcept;

/// Accepts "double", "integer" (alias "int") and "int64". Errors carry the
/// 1-based `argument` when given.
SignatureTag parse_signature_tag(std::string_view text,
                                 std::optional<std::size_t> argument = std::nullopt);
/// Accepts "rw", "r" and "w".
IntentTag parse_intent_tag(std::string_view text,
                           std::optional<std::size_t> argument = std::nullopt);

std::vector<SignatureTag> parse_signature(std::span<const std::string> texts);

/// An absent list expands to `arg_count` x ReadWrite.
std::vector<IntentTag> parse_intent(
    const std::optional<std::vector<std::string>>& texts, std::size_t arg_count);

/// Splits the CLI list grammar ("double,int64,double") on commas.
std::vector<std::string> split_list(std::string_view text);

/// Element type the callee sees.
ElemType callee_type(SignatureTag tag) noexcept;
/// Element type carried at host level (int64 travels as double).
ElemType host_type(SignatureTag tag) noexcept;

/// Length + mode placeholder for write-only arguments; the engine allocates
/// a zero-initialized buffer at call time instead of copying a host vector.
struct VectorDescriptor {
  ElemType mode = ElemType::Double;
  std::uint64_t length = 0;

  /// Throws CapacityError above 2^52 and SpecError for a non-host mode.
  static VectorDescriptor make(ElemType mode, std::uint64_t length);
  static VectorDescriptor numeric(std::uint64_t length) {
    return make(ElemType::Double, length);
  }
  static VectorDescriptor integer(std::uint64_t length) {
    return make(ElemType::Int32, length);
  }
};

struct CallArgument {
  std::optional<std::string> name;
  std::variant<TypedVector, VectorDescriptor> value;

  CallArgument(TypedVector v) : value(std::move(v)) {}
  CallArgument(VectorDescriptor d) : value(d) {}
  CallArgument(std::string n, TypedVector v)
      : name(std::move(n)), value(std::move(v)) {}
  CallArgument(std::string n, VectorDescriptor d)
      : name(std::move(n)), value(d) {}

  bool is_descriptor() const noexcept {
    return std::holds_alternative<VectorDescriptor>(value);
  }
};

struct CallSpec {
  std::string symbol;
  std::vector<SignatureTag> signature;
  /// Empty means "not given": every argument is read-and-write.
  std::vector<IntentTag> intents;
  bool naok = false;
  /// Restricts symbol lookup to one registered library.
  std::optional<std::string> library_filter;
  int verbosity = 0;
  bool fortran_convention = false;
};

/// A call whose declaration agrees with its arguments. Intents are expanded.
struct CallPlan {
  CallSpec spec;
  std::vector<CallArgument> args;

  std::size_t arity() const noexcept { return args.size(); }
};

CallPlan validate(CallSpec spec, std::vector<CallArgument> args);

}  // namespace dc64
