#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dc64 {

/// Level 1 carries tuning warnings, level 2 debugging detail.
struct Diagnostic {
  int level = 1;
  std::optional<std::size_t> argument;  // 1-based
  std::string message;
};

std::string format(const Diagnostic& d);

/// Collects diagnostics up to a verbosity level. Verbosity 0 drops everything.
class Diagnostics {
 public:
  explicit Diagnostics(int verbosity = 0) : verbosity_(verbosity) {}

  int verbosity() const noexcept { return verbosity_; }
  bool enabled(int level) const noexcept { return level <= verbosity_; }

  void emit(int level, std::string message);
  void emit(int level, std::optional<std::size_t> argument, std::string message);

  const std::vector<Diagnostic>& entries() const noexcept { return entries_; }
  std::vector<Diagnostic> take() { return std::move(entries_); }

  /// Attributes diagnostics emitted without an explicit position to the
  /// argument currently being marshaled.
  class ArgumentScope {
   public:
    ArgumentScope(Diagnostics& d, std::size_t position)
        : d_(d), saved_(d.current_) {
      d_.current_ = position;
    }
    ~ArgumentScope() { d_.current_ = saved_; }
    ArgumentScope(const ArgumentScope&) = delete;
    ArgumentScope& operator=(const ArgumentScope&) = delete;

   private:
    Diagnostics& d_;
    std::optional<std::size_t> saved_;
  };

 private:
  int verbosity_;
  std::optional<std::size_t> current_;
  std::vector<Diagnostic> entries_;
};

/// Per-call copy ledger.
struct InstrumentationCounters {
  std::uint64_t copies = 0;
  std::uint64_t casts = 0;
  std::uint64_t backcasts = 0;
  std::uint64_t scans = 0;
  std::uint64_t coercions = 0;

  friend bool operator==(const InstrumentationCounters&,
                         const InstrumentationCounters&) = default;
};

}  // namespace dc64
