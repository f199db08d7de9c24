#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dotcall64/callspec.hpp"

namespace dc64::bench {

enum class Suite { Overhead, Large, Write, Scaling };

std::string_view to_string(Suite s) noexcept;
/// Throws SpecError for unknown names.
Suite parse_suite(std::string_view name);

/// One timed call.
struct BenchRecord {
  std::string suite;
  SignatureTag signature = SignatureTag::Double;
  IntentTag intent = IntentTag::ReadWrite;
  bool naok = false;
  std::uint64_t length = 0;
  std::size_t threads = 1;
  std::size_t replicate = 0;
  std::int64_t elapsed_ns = 0;
};

inline constexpr std::string_view kCsvHeader =
    "suite,signature,intent,naok,length,threads,replicate,elapsed_ns";

struct BenchOptions {
  Suite suite = Suite::Overhead;
  std::filesystem::path library;
  /// Empty selects the suite default; only `scaling` uses more than one.
  std::vector<std::uint64_t> lengths;
  std::optional<std::size_t> replicates;
  /// Empty selects the effective thread count (scaling: 1, 2, 4).
  std::vector<std::size_t> threads;
};

/// One timed configuration of a suite grid.
struct BenchConfig {
  SignatureTag signature;
  IntentTag intent;
  bool naok;
  std::uint64_t length;
  std::size_t threads;
};

std::size_t default_replicates(Suite s) noexcept;
std::vector<std::uint64_t> default_lengths(Suite s);

/// Grid in row order. Overhead/large: {double, integer, int64} x {rw, r} x
/// {NAOK off, on}. Write: {double, integer, int64} x {rw, w with descriptor}
/// with NAOK on. Scaling: int64/rw over lengths x threads.
std::vector<BenchConfig> suite_grid(const BenchOptions& options);

/// Calls BENCHMARK once per (configuration, replicate). Throws LoadError
/// when the fixture library is missing.
std::vector<BenchRecord> run(const BenchOptions& options);

void write_csv(std::ostream& out, std::span<const BenchRecord> records);

}  // namespace dc64::bench
