#include "dotcall64/engine.hpp"

#include <utility>

#include "dotcall64/error.hpp"

namespace dc64 {

Engine::Engine(EngineOptions options) : options_(std::move(options)) {
  if (options_.threads && *options_.threads == 0) {
    throw SpecError("thread count must be at least 1");
  }
  if (options_.min_chunk == 0) throw SpecError("min_chunk must be at least 1");
  if (options_.long_threshold > static_cast<std::uint64_t>(kInt32Max)) {
    throw SpecError("long-vector threshold must fit the 32-bit length slot");
  }
}

WorkerConfig Engine::workers() const {
  return WorkerConfig{options_.threads.value_or(effective_thread_count()),
                      options_.min_chunk};
}

void Engine::set_threads(std::optional<std::size_t> threads) {
  if (threads && *threads == 0) {
    throw SpecError("thread count must be at least 1");
  }
  std::lock_guard lock(call_mutex_);
  options_.threads = threads;
}

CallResult Engine::call64(const CallSpec& spec, std::vector<CallArgument> args) {
  return run(nullptr, spec, std::move(args));
}

CallResult Engine::call64(const ResolvedSymbol& symbol, const CallSpec& spec,
                          std::vector<CallArgument> args) {
  return run(&symbol, spec, std::move(args));
}

CallResult Engine::run(const ResolvedSymbol* symbol, const CallSpec& spec,
                       std::vector<CallArgument> args) {
  std::lock_guard lock(call_mutex_);

  CallPlan plan = validate(spec, std::move(args));
  ResolvedSymbol resolved =
      symbol != nullptr
          ? *symbol
          : registry_.resolve(plan.spec.symbol, plan.spec.library_filter,
                              plan.spec.fortran_convention);

  Diagnostics diagnostics(plan.spec.verbosity);
  InstrumentationCounters counters;
  MarshalContext ctx{workers(), options_.long_threshold, diagnostics, counters};

  const std::size_t n = plan.arity();
  std::vector<PreparedArg> prepared;
  prepared.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    prepared.push_back(prepare_argument(plan.args[i], i + 1,
                                        plan.spec.signature[i],
                                        plan.spec.intents[i], plan.spec.naok,
                                        ctx));
  }

  invoke(resolved, prepared);

  std::vector<TypedVector> values;
  std::vector<std::optional<std::string>> names;
  values.reserve(n);
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    values.push_back(postprocess_argument(std::move(prepared[i]),
                                          plan.spec.signature[i],
                                          plan.spec.intents[i], ctx));
    names.push_back(std::move(plan.args[i].name));
  }
  return assemble_result(std::move(values), std::move(names), counters,
                         diagnostics.take());
}

}  // namespace dc64
