#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dotcall64/callspec.hpp"
#include "dotcall64/diagnostics.hpp"
#include "dotcall64/parcast.hpp"
#include "dotcall64/vector.hpp"

namespace dc64 {

// ---------------------------------------------------------------------------
// double <-> int64 casts
// ---------------------------------------------------------------------------

struct CastReport {
  /// Elements whose value changed (truncation) or, for int64 -> double,
  /// whose magnitude exceeds 2^52.
  std::uint64_t flagged = 0;
  std::optional<std::uint64_t> first_flagged;
};

/// Truncates toward zero. Non-finite values and values outside
/// [-2^63, 2^63) throw CastError carrying the smallest offending index.
/// The output does not depend on the worker count.
CastReport cast_double_to_int64(std::span<const double> src,
                                std::span<std::int64_t> dst,
                                const WorkerConfig& workers);

/// Round-to-nearest-even conversion; exact for |v| <= 2^52.
CastReport cast_int64_to_double(std::span<const std::int64_t> src,
                                std::span<double> dst,
                                const WorkerConfig& workers);

TypedVector cast_double_to_int64(const TypedVector& src,
                                 const WorkerConfig& workers,
                                 Diagnostics* diagnostics = nullptr);
TypedVector cast_int64_to_double(const TypedVector& src,
                                 const WorkerConfig& workers,
                                 Diagnostics* diagnostics = nullptr);

// ---------------------------------------------------------------------------
// Per-argument pipeline
// ---------------------------------------------------------------------------

enum class ArgOrigin { Borrowed, Duplicated, Casted, FreshZero };

std::string_view to_string(ArgOrigin origin) noexcept;

/// One argument ready for the callee.
struct PreparedArg {
  /// The callee receives handoff.data() and may access it in place.
  TypedVector handoff;
  /// The host vector as given (after descriptor materialization), kept for
  /// int64 arguments under intent "r", which return it untouched.
  std::optional<TypedVector> original;
  ArgOrigin origin = ArgOrigin::Borrowed;
  bool needs_backcast = false;
  /// 1-based argument position.
  std::size_t position = 0;

  void* address() noexcept { return handoff.data(); }
};

struct MarshalContext {
  WorkerConfig workers;
  std::uint64_t long_threshold = kDefaultLongThreshold;
  Diagnostics& diagnostics;
  InstrumentationCounters& counters;
};

/// Pre-process one argument according to NAOK, SIGNATURE and INTENT.
///
///  - NAOK off: the host vector is scanned first (skipped for write-only
///    descriptors). A hit is a MissingValueError.
///  - int64 with "rw"/"r": coerce to double if needed, then cast into a
///    fresh int64 buffer. No separate duplication.
///  - other signatures with "rw": always duplicated.
///  - other signatures with "r": the host buffer itself is handed over.
///  - "w" with a descriptor: fresh zero buffer in the callee type.
///  - "w" with a vector: duplicated only when its reference status is not 0.
///
/// Errors are tagged with `position`.
PreparedArg prepare_argument(const CallArgument& arg, std::size_t position,
                             SignatureTag sig, IntentTag intent, bool naok,
                             MarshalContext& ctx);

/// Post-process one argument after the callee returned.
TypedVector postprocess_argument(PreparedArg&& prepared, SignatureTag sig,
                                 IntentTag intent, MarshalContext& ctx);

/// Positional results with optional names, like the argument list handed
/// back by a `.C`-style interface.
class CallResult {
 public:
  CallResult() = default;
  CallResult(std::vector<TypedVector> values,
             std::vector<std::optional<std::string>> names,
             InstrumentationCounters counters,
             std::vector<Diagnostic> diagnostics);

  std::size_t size() const noexcept { return values_.size(); }
  const TypedVector& operator[](std::size_t i) const { return values_.at(i); }
  /// Throws SpecError when no result carries `name`.
  const TypedVector& at(std::string_view name) const;
  std::optional<std::size_t> index_of(std::string_view name) const;
  const std::optional<std::string>& name(std::size_t i) const {
    return names_.at(i);
  }

  const std::vector<TypedVector>& values() const noexcept { return values_; }
  const InstrumentationCounters& counters() const noexcept { return counters_; }
  const std::vector<Diagnostic>& diagnostics() const noexcept {
    return diagnostics_;
  }

 private:
  std::vector<TypedVector> values_;
  std::vector<std::optional<std::string>> names_;
  InstrumentationCounters counters_;
  std::vector<Diagnostic> diagnostics_;
};

CallResult assemble_result(std::vector<TypedVector> values,
                           std::vector<std::optional<std::string>> names,
                           const InstrumentationCounters& counters,
                           std::vector<Diagnostic> diagnostics);

}  // namespace dc64
