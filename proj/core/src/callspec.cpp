#include "dotcall64/callspec.hpp"

#include <algorithm>

#include "dotcall64/error.hpp"

namespace dc64 {

std::string_view render(SignatureTag tag) noexcept {
  switch (tag) {
    case SignatureTag::Double: return "double";
    case SignatureTag::Int32: return "integer";
    case SignatureTag::Int64: return "int64";
  }
  return "?";
}

std::string_view render(IntentTag tag) noexcept {
  switch (tag) {
    case IntentTag::ReadWrite: return "rw";
    case IntentTag::Read: return "r";
    case IntentTag::Write: return "w";
  }
  return "?";
}

SignatureTag parse_signature_tag(std::string_view text,
                                 std::optional<std::size_t> argument) {
  if (text == "double") return SignatureTag::Double;
  if (text == "integer" || text == "int") return SignatureTag::Int32;
  if (text == "int64") return SignatureTag::Int64;
  throw SpecError("unknown signature \"" + std::string(text) +
                      "\" (expected double, integer or int64)",
                  argument);
}

IntentTag parse_intent_tag(std::string_view text,
                           std::optional<std::size_t> argument) {
  if (text == "rw") return IntentTag::ReadWrite;
  if (text == "r") return IntentTag::Read;
  if (text == "w") return IntentTag::Write;
  throw SpecError("unknown intent \"" + std::string(text) +
                      "\" (expected rw, r or w)",
                  argument);
}

std::vector<SignatureTag> parse_signature(std::span<const std::string> texts) {
  std::vector<SignatureTag> tags;
  tags.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    tags.push_back(parse_signature_tag(texts[i], i + 1));
  }
  return tags;
}

std::vector<IntentTag> parse_intent(
    const std::optional<std::vector<std::string>>& texts,
    std::size_t arg_count) {
  if (!texts) return std::vector<IntentTag>(arg_count, IntentTag::ReadWrite);
  if (texts->size() != arg_count) {
    throw SpecError("INTENT has " + std::to_string(texts->size()) +
                        " entries but there are " + std::to_string(arg_count) +
                        " arguments",
                    std::min(texts->size(), arg_count) + 1);
  }
  std::vector<IntentTag> tags;
  tags.reserve(texts->size());
  for (std::size_t i = 0; i < texts->size(); ++i) {
    tags.push_back(parse_intent_tag((*texts)[i], i + 1));
  }
  return tags;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    auto item = text.substr(start, comma == std::string_view::npos
                                       ? std::string_view::npos
                                       : comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

ElemType callee_type(SignatureTag tag) noexcept {
  switch (tag) {
    case SignatureTag::Double: return ElemType::Double;
    case SignatureTag::Int32: return ElemType::Int32;
    case SignatureTag::Int64: return ElemType::Int64;
  }
  return ElemType::Double;
}

ElemType host_type(SignatureTag tag) noexcept {
  return tag == SignatureTag::Int32 ? ElemType::Int32 : ElemType::Double;
}

VectorDescriptor VectorDescriptor::make(ElemType mode, std::uint64_t length) {
  if (mode == ElemType::Int64) {
    throw SpecError("descriptor mode must be double or integer");
  }
  if (length > kMaxLength) {
    throw CapacityError("descriptor length " + std::to_string(length) +
                        " exceeds the 2^52 element limit");
  }
  return VectorDescriptor{mode, length};
}

CallPlan validate(CallSpec spec, std::vector<CallArgument> args) {
  const std::size_t n = args.size();
  if (n == 0) throw SpecError("a call needs at least one argument");
  if (n > kMaxArguments) {
    throw SpecError("too many arguments (" + std::to_string(n) + "); at most " +
                        std::to_string(kMaxArguments) + " are supported",
                    kMaxArguments + 1);
  }
  if (spec.symbol.empty()) throw SpecError("empty symbol name");
  if (spec.signature.size() != n) {
    throw SpecError("SIGNATURE has " + std::to_string(spec.signature.size()) +
                        " entries but there are " + std::to_string(n) +
                        " arguments",
                    std::min(spec.signature.size(), n) + 1);
  }
  if (spec.intents.empty()) {
    spec.intents.assign(n, IntentTag::ReadWrite);
  } else if (spec.intents.size() != n) {
    throw SpecError("INTENT has " + std::to_string(spec.intents.size()) +
                        " entries but there are " + std::to_string(n) +
                        " arguments",
                    std::min(spec.intents.size(), n) + 1);
  }
  if (spec.verbosity < 0 || spec.verbosity > 2) {
    throw SpecError("VERBOSE must be 0, 1 or 2");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (const auto* v = std::get_if<TypedVector>(&args[i].value)) {
      if (v->elem_type() == ElemType::Int64) {
        throw SpecError("int64 vectors cannot be passed from the host", i + 1);
      }
    }
  }
  return CallPlan{std::move(spec), std::move(args)};
}

}  // namespace dc64
