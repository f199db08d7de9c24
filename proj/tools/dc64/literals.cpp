#include "literals.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "dotcall64/error.hpp"
#include "dotcall64/vector_io.hpp"

namespace dc64::cli {
namespace {

double parse_double(const std::string& item) {
  if (item == "NA" || item == "NaN" || item == "nan") {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (item == "Inf" || item == "inf") return std::numeric_limits<double>::infinity();
  if (item == "-Inf" || item == "-inf") {
    return -std::numeric_limits<double>::infinity();
  }
  double value = 0;
  const char* end = item.data() + item.size();
  auto [ptr, ec] = std::from_chars(item.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw SpecError("bad numeric literal \"" + item + "\"");
  }
  return value;
}

std::int32_t parse_int32(std::string item) {
  if (item == "NA") return kInt32Na;
  item.pop_back();  // trailing L
  std::int32_t value = 0;
  const char* end = item.data() + item.size();
  auto [ptr, ec] = std::from_chars(item.data(), end, value);
  if (ec != std::errc{} || ptr != end || value == kInt32Na) {
    throw SpecError("bad integer literal \"" + item + "L\"");
  }
  return value;
}

ElemType parse_mode(std::string_view mode) {
  if (mode == "double" || mode == "numeric") return ElemType::Double;
  if (mode == "integer" || mode == "int") return ElemType::Int32;
  throw SpecError("unknown descriptor mode \"" + std::string(mode) + "\"");
}

std::uint64_t parse_length(std::string_view text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw SpecError("bad length \"" + std::string(text) + "\"");
  }
  return value;
}

}  // namespace

std::pair<std::string, std::string> split_named(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) return {"", std::string(text)};
  return {std::string(text.substr(0, eq)), std::string(text.substr(eq + 1))};
}

CallArgument parse_argument_value(std::string_view text,
                                  std::uint64_t long_threshold) {
  if (text.starts_with("zeros:")) {
    auto rest = text.substr(6);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) {
      throw SpecError("descriptor must look like zeros:<mode>:<len>");
    }
    return VectorDescriptor::make(parse_mode(rest.substr(0, colon)),
                                  parse_length(rest.substr(colon + 1)));
  }
  if (text.starts_with("@")) {
    return read_dc64(std::filesystem::path(text.substr(1)), long_threshold);
  }
  if (text.ends_with(".dc64") || std::filesystem::is_regular_file(text)) {
    return read_dc64(std::filesystem::path(text), long_threshold);
  }

  const auto items = split_list(text);
  if (items.empty()) throw SpecError("empty argument literal");
  // Integer when every item is L-suffixed or NA, and at least one is suffixed.
  const auto suffixed = [](const auto& s) { return s.size() > 1 && s.back() == 'L'; };
  const bool integer =
      std::any_of(items.begin(), items.end(), suffixed) &&
      std::all_of(items.begin(), items.end(),
                  [&](const auto& s) { return suffixed(s) || s == "NA"; });
  if (integer) {
    std::vector<std::int32_t> values;
    values.reserve(items.size());
    for (const auto& s : items) values.push_back(parse_int32(s));
    return TypedVector::of(std::span<const std::int32_t>(values), long_threshold);
  }
  std::vector<double> values;
  values.reserve(items.size());
  for (const auto& s : items) values.push_back(parse_double(s));
  return TypedVector::of(std::span<const double>(values), long_threshold);
}

}  // namespace dc64::cli
