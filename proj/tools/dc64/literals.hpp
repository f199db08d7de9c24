#pragma once

#include <string_view>

#include "dotcall64/callspec.hpp"

namespace dc64::cli {

/// Parses one `--arg` value:
///   zeros:<mode>:<len>   write-only descriptor (mode double|numeric|integer|int)
///   @<path> or <path>    DC64 file (bare paths must exist or end in .dc64)
///   1,2.5,NA,Inf         double literal
///   1L,NA,2L             integer literal (items suffixed with L, or NA)
CallArgument parse_argument_value(std::string_view text,
                                  std::uint64_t long_threshold);

/// Splits "name=value"; the name is empty when absent.
std::pair<std::string, std::string> split_named(std::string_view text);

}  // namespace dc64::cli
