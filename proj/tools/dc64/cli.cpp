#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bench.hpp"
#include "dotcall64/dotcall64.hpp"
#include "literals.hpp"

namespace dc64::cli {
namespace {

namespace fs = std::filesystem;

struct CallOptions {
  std::string library;
  std::string symbol;
  std::string signature;
  std::string intent;
  bool naok = false;
  bool fortran = false;
  std::string package;
  std::vector<std::string> args;
  std::string out_dir;
  int verbose = 0;
  std::size_t threads = 0;
  std::uint64_t long_threshold = kDefaultLongThreshold;
};

struct BenchCliOptions {
  std::string suite;
  std::string library = DC64_DEFAULT_FIXTURE_LIBRARY;
  std::string lengths;
  std::size_t replicates = 0;
  std::string threads;
  std::string csv;
};

template <typename T>
std::vector<T> parse_numbers(const std::string& text, const char* what) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) {
    T value{};
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc{} || ptr != item.data() + item.size()) {
      throw SpecError(std::string("bad ") + what + " \"" + item + "\"");
    }
    out.push_back(value);
  }
  return out;
}

std::string preview(const TypedVector& v, std::size_t max_items = 6) {
  std::ostringstream os;
  os << std::setprecision(15);
  const std::size_t n = static_cast<std::size_t>(v.length());
  const std::size_t shown = std::min(n, max_items);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i != 0) os << ' ';
    if (v.elem_type() == ElemType::Double) {
      os << v.values<double>()[i];
    } else {
      const auto x = v.values<std::int32_t>()[i];
      if (is_missing(x)) os << "NA"; else os << x;
    }
  }
  if (shown < n) os << " ...";
  return os.str();
}

int cmd_call(const CallOptions& o, std::ostream& out, std::ostream& err) {
  Engine engine(EngineOptions{o.long_threshold,
                              o.threads != 0 ? std::optional(o.threads)
                                             : std::nullopt,
                              kDefaultMinChunk});
  std::optional<std::string> registry_name;
  if (!o.package.empty()) registry_name = o.package;
  engine.load_library(o.library, registry_name);

  CallSpec spec;
  spec.symbol = o.symbol;
  spec.signature = parse_signature(split_list(o.signature));
  if (!o.intent.empty()) {
    spec.intents = parse_intent(split_list(o.intent), spec.signature.size());
  }
  spec.naok = o.naok;
  spec.fortran_convention = o.fortran;
  if (registry_name) spec.library_filter = registry_name;
  spec.verbosity = o.verbose;

  std::vector<CallArgument> args;
  args.reserve(o.args.size());
  for (std::size_t i = 0; i < o.args.size(); ++i) {
    auto [name, value] = split_named(o.args[i]);
    CallArgument arg = [&] {
      try {
        return parse_argument_value(value, o.long_threshold);
      } catch (Error& e) {
        e.set_argument(i + 1);
        throw;
      }
    }();
    arg.name = name.empty() ? "arg" + std::to_string(i + 1) : name;
    args.push_back(std::move(arg));
  }

  const auto result = engine.call64(spec, std::move(args));

  for (const auto& d : result.diagnostics()) err << format(d) << '\n';

  if (!o.out_dir.empty()) fs::create_directories(o.out_dir);
  out << std::left << std::setw(10) << "argument" << std::setw(16) << "name"
      << std::setw(9) << "type" << std::setw(12) << "length" << "values\n";
  for (std::size_t i = 0; i < result.size(); ++i) {
    const auto& v = result[i];
    const std::string& name = *result.name(i);
    out << std::setw(10) << (i + 1) << std::setw(16) << name << std::setw(9)
        << to_string(v.elem_type()) << std::setw(12) << v.length()
        << preview(v) << '\n';
    if (!o.out_dir.empty()) write_dc64(fs::path(o.out_dir) / (name + ".dc64"), v);
  }
  const auto& c = result.counters();
  out << "copies=" << c.copies << " casts=" << c.casts
      << " backcasts=" << c.backcasts << " scans=" << c.scans
      << " coercions=" << c.coercions << '\n';
  return kExitOk;
}

int cmd_inspect(const std::string& library, std::ostream& out) {
  for (const auto& name : exported_symbols(library)) out << name << '\n';
  return kExitOk;
}

int cmd_bench(const BenchCliOptions& o, std::ostream& out, std::ostream& err) {
  bench::BenchOptions options;
  options.suite = bench::parse_suite(o.suite);
  options.library = o.library;
  if (!o.lengths.empty()) {
    options.lengths = parse_numbers<std::uint64_t>(o.lengths, "length");
  }
  if (o.replicates != 0) options.replicates = o.replicates;
  if (!o.threads.empty()) {
    options.threads = parse_numbers<std::size_t>(o.threads, "thread count");
    for (auto t : options.threads) {
      if (t == 0) throw SpecError("thread count must be at least 1");
    }
  }

  const auto records = bench::run(options);
  if (o.csv.empty()) {
    bench::write_csv(out, records);
  } else {
    std::ofstream file(o.csv, std::ios::trunc);
    if (!file) throw SpecError("cannot open " + o.csv + " for writing");
    bench::write_csv(file, records);
    err << "wrote " << records.size() << " rows to " << o.csv << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Call compiled functions with declared signatures and intents"};
  app.name("dc64");
  app.require_subcommand(1);

  CallOptions call;
  auto* call_cmd = app.add_subcommand("call", "Call a symbol in a shared library");
  call_cmd->add_option("library", call.library,
                       "Shared library (platform suffix optional)")->required();
  call_cmd->add_option("symbol", call.symbol, "Function name")->required();
  call_cmd->add_option("-s,--signature", call.signature,
                       "Comma-separated: double, integer (int), int64")
      ->required();
  call_cmd->add_option("-i,--intent", call.intent,
                       "Comma-separated: rw, r, w (default: all rw)");
  call_cmd->add_flag("--naok", call.naok, "Skip the NA/NaN/Inf scan");
  call_cmd->add_flag("--fortran", call.fortran,
                     "Also try the lowercase, underscore-suffixed name");
  call_cmd->add_option("--package", call.package,
                       "Registry name for the library; restricts lookup to it");
  call_cmd->add_option("-a,--arg", call.args,
                       "[name=]value: literal, zeros:<mode>:<len>, or DC64 file")
      ->required();
  call_cmd->add_option("-o,--out", call.out_dir,
                       "Directory receiving <name>.dc64 per result");
  call_cmd->add_option("-v,--verbose", call.verbose, "Diagnostics level")
      ->check(CLI::Range(0, 2));
  call_cmd->add_option("--threads", call.threads, "Cast/scan worker threads")
      ->check(CLI::PositiveNumber);
  call_cmd->add_option("--long-threshold", call.long_threshold,
                       "Length above which vectors use the long header");

  std::string inspect_lib;
  auto* inspect_cmd = app.add_subcommand("inspect", "List exported functions");
  inspect_cmd->add_option("library", inspect_lib, "Shared library")->required();

  BenchCliOptions bench_opts;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark suite, CSV out");
  bench_cmd->add_option("suite", bench_opts.suite,
                        "overhead | large | write | scaling")->required();
  bench_cmd->add_option("--lib", bench_opts.library, "Fixture library")
      ->capture_default_str();
  bench_cmd->add_option("--length", bench_opts.lengths,
                        "Vector length(s), comma-separated");
  bench_cmd->add_option("--replicates", bench_opts.replicates,
                        "Replicates per configuration");
  bench_cmd->add_option("--threads", bench_opts.threads,
                        "Thread count(s), comma-separated");
  bench_cmd->add_option("--csv", bench_opts.csv, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (call_cmd->parsed()) return cmd_call(call, out, err);
    if (inspect_cmd->parsed()) return cmd_inspect(inspect_lib, out);
    if (bench_cmd->parsed()) return cmd_bench(bench_opts, out, err);
  } catch (const Error& e) {
    err << "dc64: " << e.what() << '\n';
    return e.kind() == ErrorKind::Spec || e.kind() == ErrorKind::Load
               ? kExitUsage
               : kExitEngine;
  } catch (const std::exception& e) {
    err << "dc64: " << e.what() << '\n';
    return kExitEngine;
  }
  return kExitUsage;
}

}  // namespace dc64::cli
