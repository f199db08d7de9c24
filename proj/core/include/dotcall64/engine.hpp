#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "dotcall64/callspec.hpp"
#include "dotcall64/dispatch.hpp"
#include "dotcall64/marshal.hpp"
#include "dotcall64/parcast.hpp"
#include "dotcall64/vector.hpp"

namespace dc64 {

struct EngineOptions {
  /// Vectors longer than this use the long-vector header. Tests lower it to
  /// exercise the long path without multi-gigabyte allocations.
  std::uint64_t long_threshold = kDefaultLongThreshold;
  /// Cast/scan workers; unset follows effective_thread_count().
  std::optional<std::size_t> threads;
  std::size_t min_chunk = kDefaultMinChunk;
};

/// Calls compiled functions with declared per-argument signatures and
/// intents. One call runs at a time per engine; separate engines may call
/// concurrently.
class Engine {
 public:
  explicit Engine(EngineOptions options = {});

  const EngineOptions& options() const noexcept { return options_; }
  WorkerConfig workers() const;
  /// Overrides the cast/scan worker count; std::nullopt restores the
  /// process default. Throws SpecError for 0.
  void set_threads(std::optional<std::size_t> threads);

  LibraryRegistry& libraries() noexcept { return registry_; }
  const LibraryRegistry& libraries() const noexcept { return registry_; }

  std::shared_ptr<LibraryHandle> load_library(
      const std::filesystem::path& path,
      std::optional<std::string> registry_name = std::nullopt) {
    return registry_.load(path, std::move(registry_name));
  }

  /// validate -> resolve -> prepare -> invoke -> postprocess -> assemble.
  /// Errors from the per-argument stages name the argument ("argument k").
  CallResult call64(const CallSpec& spec, std::vector<CallArgument> args);

  /// Same pipeline against an already resolved symbol.
  CallResult call64(const ResolvedSymbol& symbol, const CallSpec& spec,
                    std::vector<CallArgument> args);

  /// A fresh host vector honoring this engine's long threshold.
  TypedVector make_vector(ElemType type, std::uint64_t length,
                          bool zero_init = true) const {
    return new_vector(type, length, zero_init, options_.long_threshold);
  }

 private:
  CallResult run(const ResolvedSymbol* symbol, const CallSpec& spec,
                 std::vector<CallArgument> args);

  EngineOptions options_;
  LibraryRegistry registry_;
  std::mutex call_mutex_;
};

}  // namespace dc64
