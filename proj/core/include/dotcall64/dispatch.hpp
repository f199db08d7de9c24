#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dotcall64/marshal.hpp"

namespace dc64 {

/// ".so", ".dylib" or ".dll".
std::string_view shared_library_suffix() noexcept;

/// An open shared library. Closed when the last reference goes away.
class LibraryHandle {
 public:
  LibraryHandle(std::filesystem::path path, std::string registry_name,
                void* native);
  ~LibraryHandle();
  LibraryHandle(const LibraryHandle&) = delete;
  LibraryHandle& operator=(const LibraryHandle&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  const std::string& registry_name() const noexcept { return name_; }
  void* native() const noexcept { return native_; }

  /// Calls currently executing code from this library.
  int pending_calls() const noexcept { return pending_.load(); }

 private:
  friend class PendingCall;
  std::filesystem::path path_;
  std::string name_;
  void* native_;
  std::atomic<int> pending_{0};
};

using RawFunction = void (*)();

/// A callee entry point: takes N addresses, returns nothing.
struct ResolvedSymbol {
  std::string name;
  RawFunction entry = nullptr;
  /// Keeps the defining library loaded; empty for in-process functions.
  std::shared_ptr<LibraryHandle> library;

  /// Wraps a function linked into this process (tests, embedding).
  template <typename Fn>
  static ResolvedSymbol in_process(std::string name, Fn* fn) {
    return ResolvedSymbol{std::move(name), reinterpret_cast<RawFunction>(fn),
                          nullptr};
  }
};

/// Load-ordered set of libraries keyed by unique registry names.
class LibraryRegistry {
 public:
  /// Appends the platform suffix when `path` has no extension. The registry
  /// name defaults to the file stem. Throws LoadError on loader failure or a
  /// duplicate name.
  std::shared_ptr<LibraryHandle> load(
      const std::filesystem::path& path,
      std::optional<std::string> registry_name = std::nullopt);

  /// Throws LoadError for unknown names or libraries with pending calls.
  void unload(std::string_view registry_name);

  std::vector<std::string> names() const;
  std::size_t size() const;

  /// Searches only `filter` when set, else every library in load order.
  /// With `fortran_convention`, `name` is tried first, then its lowercase
  /// form with a trailing underscore. Throws SymbolError listing the
  /// libraries searched.
  ResolvedSymbol resolve(std::string_view name,
                         std::optional<std::string_view> filter = std::nullopt,
                         bool fortran_convention = false) const;

 private:
  mutable std::mutex mutex_;
  std::vector<std::shared_ptr<LibraryHandle>> libraries_;
};

/// Calls `entry` with the given addresses, positionally. 1..65 addresses.
void invoke_addresses(RawFunction entry, std::span<void* const> addresses);

/// Hands every prepared buffer's base address to the callee. Throws
/// SpecError for arity outside [1, 65].
void invoke(const ResolvedSymbol& symbol, std::span<PreparedArg> prepared);

/// Defined, default-visibility function symbols in an ELF shared object's
/// dynamic symbol table, sorted. Throws LoadError on unreadable or non-ELF
/// input.
std::vector<std::string> exported_symbols(const std::filesystem::path& path);

}  // namespace dc64
