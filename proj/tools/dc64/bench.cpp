#include "bench.hpp"

#include <chrono>
#include <ostream>

#include "dotcall64/engine.hpp"
#include "dotcall64/error.hpp"

namespace dc64::bench {

std::string_view to_string(Suite s) noexcept {
  switch (s) {
    case Suite::Overhead: return "overhead";
    case Suite::Large: return "large";
    case Suite::Write: return "write";
    case Suite::Scaling: return "scaling";
  }
  return "?";
}

Suite parse_suite(std::string_view name) {
  for (Suite s : {Suite::Overhead, Suite::Large, Suite::Write, Suite::Scaling}) {
    if (name == to_string(s)) return s;
  }
  throw SpecError("unknown bench suite \"" + std::string(name) +
                  "\" (expected overhead, large, write or scaling)");
}

std::size_t default_replicates(Suite s) noexcept {
  switch (s) {
    case Suite::Overhead: return 10'000;
    case Suite::Large:
    case Suite::Write: return 100;
    case Suite::Scaling: return 5;
  }
  return 1;
}

std::vector<std::uint64_t> default_lengths(Suite s) {
  switch (s) {
    case Suite::Overhead: return {1};
    case Suite::Large:
    case Suite::Write: return {std::uint64_t{1} << 24};
    case Suite::Scaling:
      return {std::uint64_t{1} << 16, std::uint64_t{1} << 22,
              std::uint64_t{1} << 24};
  }
  return {1};
}

namespace {

constexpr SignatureTag kSignatures[] = {SignatureTag::Double,
                                        SignatureTag::Int32,
                                        SignatureTag::Int64};

}  // namespace

std::vector<BenchConfig> suite_grid(const BenchOptions& options) {
  const auto lengths =
      options.lengths.empty() ? default_lengths(options.suite) : options.lengths;
  std::vector<std::size_t> threads = options.threads;
  if (threads.empty()) {
    threads = options.suite == Suite::Scaling
                  ? std::vector<std::size_t>{1, 2, 4}
                  : std::vector<std::size_t>{effective_thread_count()};
  }

  std::vector<BenchConfig> grid;
  switch (options.suite) {
    case Suite::Overhead:
    case Suite::Large:
      for (bool naok : {false, true}) {
        for (auto sig : kSignatures) {
          for (auto intent : {IntentTag::ReadWrite, IntentTag::Read}) {
            grid.push_back({sig, intent, naok, lengths.front(), threads.front()});
          }
        }
      }
      break;
    case Suite::Write:
      for (auto sig : kSignatures) {
        for (auto intent : {IntentTag::ReadWrite, IntentTag::Write}) {
          grid.push_back({sig, intent, true, lengths.front(), threads.front()});
        }
      }
      break;
    case Suite::Scaling:
      for (auto length : lengths) {
        for (auto t : threads) {
          grid.push_back({SignatureTag::Int64, IntentTag::ReadWrite, true,
                          length, t});
        }
      }
      break;
  }
  return grid;
}

std::vector<BenchRecord> run(const BenchOptions& options) {
  const auto grid = suite_grid(options);
  const std::size_t replicates =
      options.replicates.value_or(default_replicates(options.suite));
  const std::string suite(to_string(options.suite));

  std::vector<BenchRecord> records;
  records.reserve(grid.size() * replicates);

  Engine engine;
  engine.load_library(options.library, "fixtures");

  for (const auto& cfg : grid) {
    engine.set_threads(cfg.threads);
    CallSpec spec;
    spec.symbol = "BENCHMARK";
    spec.signature = {cfg.signature};
    spec.intents = {cfg.intent};
    spec.naok = cfg.naok;
    spec.library_filter = "fixtures";

    // The write suite hands "w" a descriptor, like integer_dc(n); every other
    // configuration passes a vector bound to a name, like `a <- integer(n)`.
    std::optional<TypedVector> bound;
    if (!(options.suite == Suite::Write && cfg.intent == IntentTag::Write)) {
      bound = engine.make_vector(host_type(cfg.signature), cfg.length, true);
      bound->mark_bound();
    }

    for (std::size_t r = 0; r < replicates; ++r) {
      std::vector<CallArgument> args;
      if (bound) {
        args.emplace_back("a", *bound);
      } else {
        args.emplace_back("a", VectorDescriptor::make(host_type(cfg.signature),
                                                      cfg.length));
      }
      const auto start = std::chrono::steady_clock::now();
      auto result = engine.call64(spec, std::move(args));
      const auto stop = std::chrono::steady_clock::now();
      records.push_back(BenchRecord{
          suite, cfg.signature, cfg.intent, cfg.naok, cfg.length, cfg.threads,
          r,
          std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start)
              .count()});
    }
  }
  return records;
}

void write_csv(std::ostream& out, std::span<const BenchRecord> records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.suite << ',' << render(r.signature) << ',' << render(r.intent)
        << ',' << (r.naok ? "true" : "false") << ',' << r.length << ','
        << r.threads << ',' << r.replicate << ',' << r.elapsed_ns << '\n';
  }
}

}  // namespace dc64::bench
