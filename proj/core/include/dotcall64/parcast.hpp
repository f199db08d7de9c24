#pragma once

// Chunked, order-preserving parallel element transforms.
//
// Work is split statically into `threads` contiguous ranges; the calling
// thread processes range 0. Inputs shorter than `min_chunk` run serially
// without spawning. Any exception thrown by a chunk stops that chunk at the
// failing element, and after joining, the exception from the lowest chunk is
// rethrown, i.e. the failure with the smallest element index wins.

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <stdexcept>
#include <span>
#include <thread>
#include <type_traits>
#include <vector>

namespace dc64 {

inline constexpr std::size_t kDefaultMinChunk = std::size_t{1} << 16;
inline constexpr std::size_t kMaxThreads = 1024;
inline constexpr const char* kThreadsEnvVar = "DOTCALL64_THREADS";

struct WorkerConfig {
  std::size_t threads = 1;
  std::size_t min_chunk = kDefaultMinChunk;

  /// The process-wide effective thread count with the default chunk size.
  static WorkerConfig current();
};

/// Explicit override; wins over DOTCALL64_THREADS. n == 0 is a SpecError.
void set_thread_count(std::size_t n);
/// Drops the explicit override.
void clear_thread_count();
/// Explicit override, else DOTCALL64_THREADS, else hardware parallelism.
std::size_t effective_thread_count();

/// Total worker threads spawned by this process (monotone).
std::uint64_t spawned_thread_count() noexcept;

namespace detail {
void note_spawned(std::size_t n) noexcept;
void validate(const WorkerConfig& cfg);

inline std::size_t chunk_count(std::size_t n, const WorkerConfig& cfg) {
  if (n == 0 || n < cfg.min_chunk || cfg.threads <= 1) return 1;
  return std::min(cfg.threads, n);
}

inline std::size_t chunk_begin(std::size_t n, std::size_t chunks,
                               std::size_t c) {
  const std::size_t base = n / chunks;
  const std::size_t extra = n % chunks;
  return base * c + std::min(c, extra);
}
}  // namespace detail

/// Runs fn(begin, end) over a static partition of [0, n) and returns the
/// per-chunk results in range order.
template <typename ChunkFn>
  requires std::invocable<ChunkFn&, std::size_t, std::size_t>
auto for_each_chunk(std::size_t n, const WorkerConfig& cfg, ChunkFn&& fn)
    -> std::vector<std::invoke_result_t<ChunkFn&, std::size_t, std::size_t>> {
  using Result = std::invoke_result_t<ChunkFn&, std::size_t, std::size_t>;
  static_assert(!std::is_void_v<Result>, "chunk functions must return a value");
  detail::validate(cfg);

  const std::size_t chunks = detail::chunk_count(n, cfg);
  std::vector<Result> results(chunks);
  std::vector<std::exception_ptr> errors(chunks);

  auto run = [&](std::size_t c) {
    try {
      results[c] = fn(detail::chunk_begin(n, chunks, c),
                      detail::chunk_begin(n, chunks, c + 1));
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };

  if (chunks == 1) {
    run(0);
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(chunks - 1);
    for (std::size_t c = 1; c < chunks; ++c) workers.emplace_back(run, c);
    detail::note_spawned(chunks - 1);
    run(0);
  }

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

/// dst[i] = transform(src[i]) (or transform(src[i], i)) for every i.
template <typename In, typename Out, typename Transform>
void parallel_map(std::span<const In> src, std::span<Out> dst,
                  Transform&& transform, const WorkerConfig& cfg) {
  if (dst.size() != src.size()) {
    throw std::invalid_argument("parallel_map: size mismatch");
  }
  for_each_chunk(src.size(), cfg, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      if constexpr (std::is_invocable_v<Transform&, const In&, std::size_t>) {
        dst[i] = transform(src[i], i);
      } else {
        dst[i] = transform(src[i]);
      }
    }
    return true;
  });
}

template <typename Out, typename In, typename Transform>
std::vector<Out> parallel_map(std::span<const In> src, Transform&& transform,
                              const WorkerConfig& cfg) {
  std::vector<Out> dst(src.size());
  parallel_map(src, std::span<Out>(dst), std::forward<Transform>(transform),
               cfg);
  return dst;
}

/// Smallest index i in [0, n) with pred(i), if any.
template <typename Pred>
std::optional<std::size_t> parallel_find_first(std::size_t n, Pred&& pred,
                                               const WorkerConfig& cfg) {
  auto hits = for_each_chunk(
      n, cfg, [&](std::size_t b, std::size_t e) -> std::optional<std::size_t> {
        for (std::size_t i = b; i < e; ++i) {
          if (pred(i)) return i;
        }
        return std::nullopt;
      });
  for (const auto& h : hits) {
    if (h) return h;
  }
  return std::nullopt;
}

}  // namespace dc64
