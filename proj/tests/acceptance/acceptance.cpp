// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// primary failure. Thresholds are fixed below; do not tune them per machine.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bench.hpp"
#include "dotcall64/dotcall64.hpp"

using namespace dc64;

namespace {

constexpr double kExampleBudgetMs = 1.0;
constexpr double kLongPathBudgetMs = 1.0;
constexpr std::uint64_t kDeskLongThreshold = 1000;
constexpr std::size_t kRoundtripCount = 1'000'000;
constexpr double kRoundtripBudgetS = 5.0;
constexpr std::size_t kDeterminismLength = std::size_t{1} << 24;
constexpr std::size_t kScalingLength = std::size_t{1} << 26;
constexpr int kScalingRuns = 5;
constexpr double kScalingRatioLimit = 1.10;
constexpr double kScalingBudgetS = 60.0;
constexpr std::uint64_t kSeed = 20240917;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

std::unique_ptr<Engine> fixture_engine(EngineOptions options = {}) {
  auto engine = std::make_unique<Engine>(options);
  engine->load_library(DC64_FIXTURE_LIBRARY, "fixtures");
  return engine;
}

TypedVector seq(std::size_t n) {
  auto v = new_vector(ElemType::Double, n, false);
  for (std::size_t i = 0; i < n; ++i) v.values<double>()[i] = double(i + 1);
  return v;
}

std::string fmt(double x, int precision = 3) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << x;
  return os.str();
}

// 1
Outcome example_fidelity() {
  auto engine = fixture_engine();
  CallSpec spec;
  spec.symbol = "get_c";
  spec.signature = {SignatureTag::Double, SignatureTag::Int32, SignatureTag::Double};
  std::vector<CallArgument> args;
  args.emplace_back("input", seq(10));
  args.emplace_back("index", TypedVector::of({9.0}));
  args.emplace_back("output", TypedVector::of({0.0}));
  const auto start = Clock::now();
  auto result = engine->call64(spec, std::move(args));
  const double elapsed = ms_since(start);
  const auto& out = result.at("output");
  if (out.length() != 1 || out.values<double>()[0] != 9.0) {
    return fail("output is not exactly [9.0]");
  }
  if (elapsed >= kExampleBudgetMs) return fail("took " + fmt(elapsed) + " ms");
  return {true, "output [9.0] in " + fmt(elapsed) + " ms"};
}

// 2
Outcome long_path_fidelity() {
  auto engine = fixture_engine(EngineOptions{kDeskLongThreshold, std::nullopt,
                                             kDefaultMinChunk});
  auto input = engine->make_vector(ElemType::Double, kDeskLongThreshold + 1, true);
  input.values<double>()[kDeskLongThreshold] = -1.0;
  CallSpec spec;
  spec.symbol = "get64_c";
  spec.signature = {SignatureTag::Double, SignatureTag::Int64, SignatureTag::Double};
  spec.intents = {IntentTag::Read, IntentTag::Read, IntentTag::Write};
  std::vector<CallArgument> args;
  args.emplace_back("input", input);
  args.emplace_back("index", TypedVector::of({double(kDeskLongThreshold + 1)}));
  args.emplace_back("output", VectorDescriptor::numeric(1));
  const auto start = Clock::now();
  auto result = engine->call64(spec, std::move(args));
  const double elapsed = ms_since(start);
  const auto& out = result.at("output");
  if (out.length() != 1 || out.values<double>()[0] != -1.0) {
    return fail("output is not exactly [-1.0]");
  }
  if (input.header().length32 != -1) return fail("length32 is not -1");
  if (header_length(input) != kDeskLongThreshold + 1) {
    return fail("long header does not hold the length");
  }
  if (elapsed >= kLongPathBudgetMs) return fail("took " + fmt(elapsed) + " ms");
  return {true, "output [-1.0], length32 == -1, in " + fmt(elapsed) + " ms"};
}

// Opt-in: the 2^31-element run needs about 16 GB.
Outcome long_path_full_scale() {
  const std::uint64_t n = std::uint64_t{1} << 31;
  auto engine = fixture_engine();
  auto input = engine->make_vector(ElemType::Double, n, true);
  input.values<double>()[n - 1] = -1.0;
  CallSpec spec;
  spec.symbol = "get64_c";
  spec.signature = {SignatureTag::Double, SignatureTag::Int64, SignatureTag::Double};
  spec.intents = {IntentTag::Read, IntentTag::Read, IntentTag::Write};
  std::vector<CallArgument> args;
  args.emplace_back("input", input);
  args.emplace_back("index", TypedVector::of({double(n)}));
  args.emplace_back("output", VectorDescriptor::numeric(1));
  auto result = engine->call64(spec, std::move(args));
  const bool ok = result.at("output").values<double>()[0] == -1.0 &&
                  input.header().length32 == -1;
  return {ok, ok ? "2^31 elements, output [-1.0]" : "wrong output or header"};
}

// 3
Outcome copy_ledger() {
  auto engine = fixture_engine();
  struct Expect {
    SignatureTag sig;
    IntentTag intent;
    InstrumentationCounters counters;  // copies, casts, backcasts, scans, coercions
    bool check_all;
  };
  // Non-int64 rows compare copies only; int64 rows compare copies, casts and
  // backcasts.
  const std::vector<Expect> table = {
      {SignatureTag::Double, IntentTag::Read, {0, 0, 0, 0, 0}, false},
      {SignatureTag::Double, IntentTag::ReadWrite, {1, 0, 0, 0, 0}, false},
      {SignatureTag::Int32, IntentTag::Read, {0, 0, 0, 0, 0}, false},
      {SignatureTag::Int32, IntentTag::ReadWrite, {1, 0, 0, 0, 0}, false},
      {SignatureTag::Int64, IntentTag::Read, {0, 1, 0, 0, 0}, true},
      {SignatureTag::Int64, IntentTag::ReadWrite, {0, 1, 1, 0, 0}, true},
      {SignatureTag::Int64, IntentTag::Write, {0, 0, 1, 0, 0}, true},
  };
  for (const auto& row : table) {
    CallSpec spec;
    spec.symbol = "BENCHMARK";
    spec.signature = {row.sig};
    spec.intents = {row.intent};
    spec.naok = true;
    auto a = engine->make_vector(host_type(row.sig), 1000, true);
    a.mark_bound();
    std::vector<CallArgument> args;
    args.emplace_back(a);
    const auto c = engine->call64(spec, std::move(args)).counters();
    const std::string where =
        std::string(render(row.sig)) + "/" + std::string(render(row.intent));
    if (c.copies != row.counters.copies) {
      return fail(where + ": copies=" + std::to_string(c.copies));
    }
    if (row.check_all && (c.casts != row.counters.casts ||
                          c.backcasts != row.counters.backcasts)) {
      return fail(where + ": casts=" + std::to_string(c.casts) +
                  " backcasts=" + std::to_string(c.backcasts));
    }
  }
  return {true, std::to_string(table.size()) + " signature/intent cells match"};
}

// 4
Outcome cast_roundtrip() {
  std::mt19937_64 rng(kSeed);
  const std::int64_t bound = std::int64_t{1} << 52;
  std::uniform_int_distribution<std::int64_t> dist(-bound, bound);
  std::vector<double> src(kRoundtripCount);
  for (auto& x : src) x = static_cast<double>(dist(rng));
  std::vector<std::int64_t> mid(src.size());
  std::vector<double> back(src.size());
  const auto workers = WorkerConfig::current();
  const auto start = Clock::now();
  cast_double_to_int64(src, mid, workers);
  cast_int64_to_double(mid, back, workers);
  const double seconds = ms_since(start) / 1000.0;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    failures += std::memcmp(&src[i], &back[i], sizeof(double)) != 0;
  }
  if (failures != 0) return fail(std::to_string(failures) + " mismatches");
  if (seconds >= kRoundtripBudgetS) return fail("took " + fmt(seconds) + " s");
  return {true, "10^6 values bitwise equal in " + fmt(seconds) + " s"};
}

// 5
Outcome thread_determinism() {
  std::mt19937_64 rng(kSeed + 1);
  std::uniform_real_distribution<double> dist(-4.0e15, 4.0e15);
  std::vector<double> src(kDeterminismLength);
  for (auto& x : src) x = dist(rng);
  std::vector<std::int64_t> reference(src.size());
  std::vector<double> reference_back(src.size());
  cast_double_to_int64(src, reference, WorkerConfig{1, kDefaultMinChunk});
  cast_int64_to_double(reference, reference_back, WorkerConfig{1, kDefaultMinChunk});
  std::vector<std::int64_t> out(src.size());
  std::vector<double> back(src.size());
  for (std::size_t threads : {2, 4, 8}) {
    std::fill(out.begin(), out.end(), 0);
    std::fill(back.begin(), back.end(), 0.0);
    cast_double_to_int64(src, out, WorkerConfig{threads, kDefaultMinChunk});
    cast_int64_to_double(out, back, WorkerConfig{threads, kDefaultMinChunk});
    if (std::memcmp(out.data(), reference.data(), out.size() * sizeof(std::int64_t)) ||
        std::memcmp(back.data(), reference_back.data(), back.size() * sizeof(double))) {
      return fail(std::to_string(threads) + " threads differ from 1 thread");
    }
  }
  return {true, "2^24 elements identical for 1, 2, 4 and 8 threads"};
}

// 6
Outcome scaling_sanity() {
  const auto total_start = Clock::now();
  std::vector<double> src(kScalingLength);
  for (std::size_t i = 0; i < src.size(); ++i) src[i] = double(i) + 0.25;
  std::vector<std::int64_t> dst(src.size());
  // Fault in the destination before timing.
  cast_double_to_int64(src, dst, WorkerConfig{1, kDefaultMinChunk});

  auto time_once = [&](std::size_t threads) {
    const auto start = Clock::now();
    cast_double_to_int64(src, dst, WorkerConfig{threads, kDefaultMinChunk});
    return ms_since(start);
  };
  std::vector<double> one, four;
  for (int r = 0; r < kScalingRuns; ++r) {
    one.push_back(time_once(1));
    four.push_back(time_once(4));
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  const double m1 = median(one);
  const double m4 = median(four);
  const double ratio = m4 / m1;
  const double total = ms_since(total_start) / 1000.0;
  const std::string detail = "1 thread " + fmt(m1, 1) + " ms, 4 threads " +
                             fmt(m4, 1) + " ms, ratio " + fmt(ratio) + " (" +
                             std::to_string(std::thread::hardware_concurrency()) +
                             " hardware threads), " + fmt(total, 1) + " s total";
  if (ratio > kScalingRatioLimit) return fail(detail);
  if (total >= kScalingBudgetS) return fail(detail);
  return {true, detail};
}

// 7
template <typename E>
std::string expect_error(const std::function<void()>& action,
                         std::optional<std::size_t> argument, const char* label) {
  try {
    action();
  } catch (const E& e) {
    if (argument && e.argument() != argument) {
      return std::string(label) + ": names argument " +
             (e.argument() ? std::to_string(*e.argument()) : "none");
    }
    if (argument && std::string(e.what()).find("argument " + std::to_string(*argument)) ==
                        std::string::npos) {
      return std::string(label) + ": message lacks the argument position";
    }
    return {};
  } catch (const std::exception& e) {
    return std::string(label) + ": wrong error class: " + e.what();
  }
  return std::string(label) + ": no error";
}

Outcome error_surface() {
  auto engine = fixture_engine();
  auto zeros = [](std::size_t n) {
    std::vector<CallArgument> args;
    for (std::size_t i = 0; i < n; ++i) args.emplace_back(TypedVector::of({0.0}));
    return args;
  };
  auto spec_for = [](std::string symbol, std::size_t n) {
    CallSpec spec;
    spec.symbol = std::move(symbol);
    spec.signature.assign(n, SignatureTag::Double);
    return spec;
  };
  std::vector<std::string> problems;
  auto note = [&](std::string p) {
    if (!p.empty()) problems.push_back(std::move(p));
  };

  note(expect_error<SpecError>(
      [&] { engine->call64(spec_for("BENCHMARK", 66), zeros(66)); }, 66,
      "66 arguments"));
  note(expect_error<SpecError>(
      [&] { engine->call64(spec_for("BENCHMARK", 2), zeros(3)); }, 3,
      "signature length"));
  note(expect_error<SpecError>(
      [&] {
        auto spec = spec_for("get_c", 3);
        spec.intents = {IntentTag::Read, IntentTag::Read};
        engine->call64(spec, zeros(3));
      },
      3, "intent length"));
  note(expect_error<SpecError>(
      [&] { parse_signature(std::vector<std::string>{"double", "float", "double"}); },
      2, "unknown signature tag"));
  note(expect_error<SymbolError>(
      [&] { engine->call64(spec_for("no_such_symbol", 1), zeros(1)); }, std::nullopt,
      "unresolved symbol"));
  note(expect_error<MissingValueError>(
      [&] {
        auto spec = spec_for("BENCHMARK", 3);
        std::vector<CallArgument> args;
        args.emplace_back(TypedVector::of({1.0}));
        args.emplace_back(TypedVector::of({1.0, std::numeric_limits<double>::quiet_NaN()}));
        args.emplace_back(TypedVector::of({1.0}));
        engine->call64(spec, std::move(args));
      },
      2, "NaN with NAOK off"));

  if (!problems.empty()) {
    std::string all;
    for (const auto& p : problems) all += (all.empty() ? "" : "; ") + p;
    return fail(all);
  }
  return {true, "6 error cases raise their class and position"};
}

// 8
Outcome naok_grid() {
  bench::BenchOptions options;
  options.suite = bench::Suite::Overhead;
  options.library = DC64_FIXTURE_LIBRARY;
  const std::size_t replicates = bench::default_replicates(bench::Suite::Overhead);
  const auto records = bench::run(options);
  std::ostringstream csv;
  bench::write_csv(csv, records);
  {
    std::ofstream file("acceptance_overhead.csv", std::ios::trunc);
    file << csv.str();
  }

  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  if (line != bench::kCsvHeader) return fail("bad header: " + line);

  std::set<std::string> cells;
  std::map<std::string, std::vector<double>> timings;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::vector<std::string> f;
    std::istringstream fields(line);
    for (std::string item; std::getline(fields, item, ',');) f.push_back(item);
    if (f.size() != 8) return fail("row " + std::to_string(rows) + " has " +
                                   std::to_string(f.size()) + " fields");
    static const std::set<std::string> sigs{"double", "integer", "int64"};
    const bool ok = f[0] == "overhead" && sigs.count(f[1]) &&
                    (f[2] == "rw" || f[2] == "r") &&
                    (f[3] == "true" || f[3] == "false") && f[4] == "1" &&
                    std::all_of(f[5].begin(), f[5].end(), ::isdigit) &&
                    std::all_of(f[6].begin(), f[6].end(), ::isdigit) &&
                    !f[7].empty() && std::all_of(f[7].begin(), f[7].end(), ::isdigit);
    if (!ok) return fail("row " + std::to_string(rows) + " violates the schema: " + line);
    const std::string cell = f[1] + "/" + f[2] + "/naok=" + f[3];
    cells.insert(cell);
    timings[cell].push_back(std::stod(f[7]) / 1000.0);
  }
  if (cells.size() != 12) return fail(std::to_string(cells.size()) + " of 12 cells ran");
  if (rows != 12 * replicates) return fail(std::to_string(rows) + " rows");

  // Recorded, not asserted.
  for (auto& [cell, us] : timings) {
    std::nth_element(us.begin(), us.begin() + us.size() / 2, us.end());
    std::cout << "      " << std::left << std::setw(24) << cell << " median "
              << fmt(us[us.size() / 2], 2) << " us\n";
  }
  return {true, "12 cells x " + std::to_string(replicates) +
                    " replicates, CSV in acceptance_overhead.csv"};
}

// 9
Outcome write_descriptors() {
  auto engine = fixture_engine();
  CallSpec fill;
  fill.symbol = "fill_seq";
  fill.signature = {SignatureTag::Double, SignatureTag::Int64};
  fill.intents = {IntentTag::Write, IntentTag::Read};
  std::vector<CallArgument> args;
  args.emplace_back("out", VectorDescriptor::numeric(10));
  args.emplace_back("n", TypedVector::of({10.0}));
  auto r = engine->call64(fill, std::move(args));
  const auto& out = r.at("out");
  if (out.length() != 10) return fail("fill_seq output length " + std::to_string(out.length()));
  for (std::size_t i = 0; i < 10; ++i) {
    if (out.values<double>()[i] != double(i + 1)) return fail("fill_seq output differs");
  }

  for (auto sig : {SignatureTag::Double, SignatureTag::Int32, SignatureTag::Int64}) {
    CallSpec spec;
    spec.symbol = "BENCHMARK";
    spec.signature = {sig};
    spec.intents = {IntentTag::Write};
    std::vector<CallArgument> one;
    const std::uint64_t n = std::uint64_t{1} << 16;
    one.emplace_back(VectorDescriptor::make(host_type(sig), n));
    auto res = engine->call64(spec, std::move(one));
    const auto& v = res[0];
    if (v.length() != n) return fail("BENCHMARK output has the wrong length");
    const auto* bytes = static_cast<const unsigned char*>(v.data());
    const std::size_t size = n * (v.elem_type() == ElemType::Int32 ? 4 : 8);
    if (std::any_of(bytes, bytes + size, [](unsigned char b) { return b != 0; })) {
      return fail(std::string(render(sig)) + " BENCHMARK output is not all zeros");
    }
  }
  return {true, "fill_seq gives 1..10; BENCHMARK descriptors stay zero"};
}

// Secondary
Outcome fixture_library() {
  const std::vector<std::string> expected{"BENCHMARK", "fill_seq", "get64_c",
                                          "get_c",     "get_f_",   "mutate_all"};
  if (exported_symbols(DC64_FIXTURE_LIBRARY) != expected) {
    return fail("export set differs");
  }
  LibraryRegistry registry;
  registry.load(DC64_FIXTURE_LIBRARY);
  if (registry.resolve("get_f", std::nullopt, true).name != "get_f_") {
    return fail("underscore probe failed");
  }
  return {true, "exports the 6 fixture symbols; get_f resolves to get_f_"};
}

bool report(const char* tier, int number, const char* title,
            const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = fail(std::string("unexpected exception: ") + e.what());
  }
  std::cout << std::right << (o.pass ? "PASS" : "FAIL") << "  [" << tier << "] " << std::setw(2)
            << number << ". " << title << ": " << o.detail << std::endl;
  return o.pass;
}

}  // namespace

int main() {
  bool ok = true;
  ok &= report("PRIMARY", 1, "example fidelity", example_fidelity);
  ok &= report("PRIMARY", 2, "long-path fidelity", long_path_fidelity);
  if (const char* full = std::getenv("DC64_FULL_SCALE"); full && std::string(full) == "1") {
    ok &= report("PRIMARY", 2, "long-path fidelity at 2^31", long_path_full_scale);
  } else {
    std::cout << "SKIP  [PRIMARY]  2. long-path fidelity at 2^31: set DC64_FULL_SCALE=1\n";
  }
  ok &= report("PRIMARY", 3, "copy-avoidance ledger", copy_ledger);
  ok &= report("PRIMARY", 4, "cast roundtrip", cast_roundtrip);
  ok &= report("PRIMARY", 5, "thread determinism", thread_determinism);
  ok &= report("PRIMARY", 6, "scaling sanity", scaling_sanity);
  ok &= report("PRIMARY", 7, "error surface", error_surface);
  ok &= report("PRIMARY", 8, "NAOK grid", naok_grid);
  ok &= report("PRIMARY", 9, "write-descriptor semantics", write_descriptors);
  report("SECONDARY", 10, "fixture library", fixture_library);
  return ok ? 0 : 1;
}
