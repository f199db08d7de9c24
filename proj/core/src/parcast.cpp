#include "dotcall64/parcast.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <string>

#include "dotcall64/error.hpp"

namespace dc64 {
namespace {

std::atomic<std::size_t> g_explicit_threads{0};
std::atomic<std::uint64_t> g_spawned{0};

std::optional<std::size_t> env_threads() {
  const char* raw = std::getenv(kThreadsEnvVar);
  if (raw == nullptr) return std::nullopt;
  std::size_t value = 0;
  const char* end = raw + std::strlen(raw);
  auto [ptr, ec] = std::from_chars(raw, end, value);
  if (ec != std::errc{} || ptr != end || value == 0) return std::nullopt;
  return std::min(value, kMaxThreads);
}

}  // namespace

WorkerConfig WorkerConfig::current() {
  return WorkerConfig{effective_thread_count(), kDefaultMinChunk};
}

void set_thread_count(std::size_t n) {
  if (n == 0) throw SpecError("thread count must be at least 1");
  if (n > kMaxThreads) {
    throw SpecError("thread count exceeds " + std::to_string(kMaxThreads));
  }
  g_explicit_threads.store(n);
}

void clear_thread_count() { g_explicit_threads.store(0); }

std::size_t effective_thread_count() {
  if (auto n = g_explicit_threads.load(); n != 0) return n;
  if (auto n = env_threads()) return *n;
  // Cached: glibc answers this by reading sysfs.
  static const std::size_t hardware =
      std::max<std::size_t>(1, std::thread::hardware_concurrency());
  return hardware;
}

std::uint64_t spawned_thread_count() noexcept { return g_spawned.load(); }

namespace detail {

void note_spawned(std::size_t n) noexcept { g_spawned.fetch_add(n); }

void validate(const WorkerConfig& cfg) {
  if (cfg.threads == 0) throw SpecError("worker threads must be at least 1");
  if (cfg.min_chunk == 0) throw SpecError("min_chunk must be at least 1");
}

}  // namespace detail
}  // namespace dc64
