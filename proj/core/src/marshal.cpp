#include "dotcall64/marshal.hpp"

#include <cmath>
#include <utility>

#include "dotcall64/error.hpp"

namespace dc64 {
namespace {

constexpr double kTwo63 = 0x1p63;
constexpr std::int64_t kExactLimit = std::int64_t{1} << 52;

CastReport merge(const std::vector<CastReport>& parts) {
  CastReport total;
  for (const auto& p : parts) {
    total.flagged += p.flagged;
    if (!total.first_flagged) total.first_flagged = p.first_flagged;
  }
  return total;
}

void flag(CastReport& r, std::uint64_t i) {
  ++r.flagged;
  if (!r.first_flagged) r.first_flagged = i;
}

}  // namespace

CastReport cast_double_to_int64(std::span<const double> src,
                                std::span<std::int64_t> dst,
                                const WorkerConfig& workers) {
  if (src.size() != dst.size()) {
    throw SpecError("cast buffers differ in length");
  }
  return merge(for_each_chunk(
      src.size(), workers, [&](std::size_t b, std::size_t e) {
        CastReport r;
        for (std::size_t i = b; i < e; ++i) {
          const double x = src[i];
          if (!std::isfinite(x)) {
            throw CastError("non-finite value cannot be cast to int64",
                            std::nullopt, i);
          }
          if (x < -kTwo63 || x >= kTwo63) {
            throw CastError("value outside the int64 range", std::nullopt, i);
          }
          const auto v = static_cast<std::int64_t>(x);
          dst[i] = v;
          if (static_cast<double>(v) != x) flag(r, i);
        }
        return r;
      }));
}

CastReport cast_int64_to_double(std::span<const std::int64_t> src,
                                std::span<double> dst,
                                const WorkerConfig& workers) {
  if (src.size() != dst.size()) {
    throw SpecError("cast buffers differ in length");
  }
  return merge(for_each_chunk(
      src.size(), workers, [&](std::size_t b, std::size_t e) {
        CastReport r;
        for (std::size_t i = b; i < e; ++i) {
          const std::int64_t v = src[i];
          dst[i] = static_cast<double>(v);
          if (v > kExactLimit || v < -kExactLimit) flag(r, i);
        }
        return r;
      }));
}

TypedVector cast_double_to_int64(const TypedVector& src,
                                 const WorkerConfig& workers,
                                 Diagnostics* diagnostics) {
  auto out = new_vector(ElemType::Int64, src.length(), false,
                        src.long_threshold());
  const auto report = cast_double_to_int64(src.values<double>(),
                                           out.values<std::int64_t>(), workers);
  if (report.flagged > 0 && diagnostics != nullptr && diagnostics->enabled(1)) {
    diagnostics->emit(1, "int64 cast truncated " +
                             std::to_string(report.flagged) +
                             " non-integral value(s); first at element " +
                             std::to_string(*report.first_flagged));
  }
  return out;
}

TypedVector cast_int64_to_double(const TypedVector& src,
                                 const WorkerConfig& workers,
                                 Diagnostics* diagnostics) {
  auto out = new_vector(ElemType::Double, src.length(), false,
                        src.long_threshold());
  const auto report = cast_int64_to_double(src.values<std::int64_t>(),
                                           out.values<double>(), workers);
  if (report.flagged > 0 && diagnostics != nullptr && diagnostics->enabled(1)) {
    diagnostics->emit(1, "back-cast of " + std::to_string(report.flagged) +
                             " value(s) beyond 2^52 may have lost precision; "
                             "first at element " +
                             std::to_string(*report.first_flagged));
  }
  return out;
}

std::string_view to_string(ArgOrigin origin) noexcept {
  switch (origin) {
    case ArgOrigin::Borrowed: return "borrowed";
    case ArgOrigin::Duplicated: return "duplicated";
    case ArgOrigin::Casted: return "casted";
    case ArgOrigin::FreshZero: return "fresh-zero";
  }
  return "?";
}

namespace {

PreparedArg from_descriptor(const VectorDescriptor& d, std::size_t position,
                            SignatureTag sig, MarshalContext& ctx) {
  const ElemType type = callee_type(sig);
  if (d.mode != host_type(sig) && ctx.diagnostics.enabled(2)) {
    ctx.diagnostics.emit(2, "descriptor of mode " +
                                std::string(to_string(d.mode)) +
                                " allocated as " +
                                std::string(to_string(type)));
  }
  PreparedArg p{new_vector(type, d.length, true, ctx.long_threshold),
                std::nullopt, ArgOrigin::FreshZero, sig == SignatureTag::Int64,
                position};
  return p;
}

TypedVector coerce_counted(const TypedVector& v, ElemType target,
                           MarshalContext& ctx) {
  auto out = coerce(v, target, &ctx.diagnostics, ctx.workers);
  if (!out.same_object(v)) {
    ++ctx.counters.coercions;
    if (ctx.diagnostics.enabled(1)) {
      ctx.diagnostics.emit(1, "coerced " + std::string(to_string(v.elem_type())) +
                                  " to " + std::string(to_string(target)));
    }
  }
  return out;
}

PreparedArg prepare_impl(const CallArgument& arg, std::size_t position,
                         SignatureTag sig, IntentTag intent, bool naok,
                         MarshalContext& ctx) {
  const auto* descriptor = std::get_if<VectorDescriptor>(&arg.value);
  if (descriptor != nullptr && intent == IntentTag::Write) {
    return from_descriptor(*descriptor, position, sig, ctx);
  }

  TypedVector host = descriptor != nullptr
                         ? new_vector(descriptor->mode, descriptor->length, true,
                                      ctx.long_threshold)
                         : std::get<TypedVector>(arg.value);
  if (descriptor != nullptr && ctx.diagnostics.enabled(1)) {
    ctx.diagnostics.emit(1, "descriptor under intent \"" +
                                std::string(render(intent)) +
                                "\" materialized as a zero vector; "
                                "intent \"w\" avoids this");
  }

  if (!naok) {
    ++ctx.counters.scans;
    if (auto hit = scan_missing_infinite(host, ctx.workers)) {
      throw MissingValueError("NA/NaN/Inf value while NAOK is off", position,
                              *hit);
    }
  }

  if (sig == SignatureTag::Int64) {
    if (intent == IntentTag::Write) {
      // The callee only writes, so the host contents are never read.
      return PreparedArg{
          new_vector(ElemType::Int64, host.length(), true, ctx.long_threshold),
          std::nullopt, ArgOrigin::FreshZero, true, position};
    }
    auto as_double = coerce_counted(host, ElemType::Double, ctx);
    auto cast = cast_double_to_int64(as_double, ctx.workers, &ctx.diagnostics);
    ++ctx.counters.casts;
    return PreparedArg{std::move(cast), std::move(host), ArgOrigin::Casted,
                       intent == IntentTag::ReadWrite, position};
  }

  auto v = coerce_counted(host, callee_type(sig), ctx);
  switch (intent) {
    case IntentTag::ReadWrite:
      return PreparedArg{duplicate(v, &ctx.counters), std::nullopt,
                         ArgOrigin::Duplicated, false, position};
    case IntentTag::Read:
      return PreparedArg{std::move(v), std::nullopt, ArgOrigin::Borrowed, false,
                         position};
    case IntentTag::Write:
      if (v.ref_status() != 0) {
        if (ctx.diagnostics.enabled(1)) {
          ctx.diagnostics.emit(1, "bound vector under intent \"w\" was "
                                  "duplicated; pass a descriptor instead");
        }
        return PreparedArg{duplicate(v, &ctx.counters), std::nullopt,
                           ArgOrigin::Duplicated, false, position};
      }
      return PreparedArg{std::move(v), std::nullopt, ArgOrigin::Borrowed, false,
                         position};
  }
  throw SpecError("unhandled intent");
}

}  // namespace

PreparedArg prepare_argument(const CallArgument& arg, std::size_t position,
                             SignatureTag sig, IntentTag intent, bool naok,
                             MarshalContext& ctx) {
  Diagnostics::ArgumentScope scope(ctx.diagnostics, position);
  try {
    auto p = prepare_impl(arg, position, sig, intent, naok, ctx);
    if (ctx.diagnostics.enabled(2)) {
      ctx.diagnostics.emit(
          2, std::string(render(sig)) + "/" + std::string(render(intent)) +
                 ": " + std::string(to_string(p.origin)) + " buffer of " +
                 std::to_string(p.handoff.length()) + " element(s)");
    }
    return p;
  } catch (Error& e) {
    if (!e.argument()) e.set_argument(position);
    throw;
  }
}

TypedVector postprocess_argument(PreparedArg&& prepared, SignatureTag sig,
                                 IntentTag intent, MarshalContext& ctx) {
  Diagnostics::ArgumentScope scope(ctx.diagnostics, prepared.position);
  if (sig != SignatureTag::Int64) return std::move(prepared.handoff);

  if (prepared.needs_backcast) {
    ++ctx.counters.backcasts;
    auto out = cast_int64_to_double(prepared.handoff, ctx.workers,
                                    &ctx.diagnostics);
    return out;
  }
  // int64 under "r": the callee saw a private cast, the host vector stands.
  (void)intent;
  if (prepared.original) return std::move(*prepared.original);
  return cast_int64_to_double(prepared.handoff, ctx.workers, &ctx.diagnostics);
}

CallResult::CallResult(std::vector<TypedVector> values,
                       std::vector<std::optional<std::string>> names,
                       InstrumentationCounters counters,
                       std::vector<Diagnostic> diagnostics)
    : values_(std::move(values)),
      names_(std::move(names)),
      counters_(counters),
      diagnostics_(std::move(diagnostics)) {
  names_.resize(values_.size());
}

std::optional<std::size_t> CallResult::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] && *names_[i] == name) return i;
  }
  return std::nullopt;
}

const TypedVector& CallResult::at(std::string_view name) const {
  if (auto i = index_of(name)) return values_[*i];
  throw SpecError("no result named \"" + std::string(name) + "\"");
}

CallResult assemble_result(std::vector<TypedVector> values,
                           std::vector<std::optional<std::string>> names,
                           const InstrumentationCounters& counters,
                           std::vector<Diagnostic> diagnostics) {
  return CallResult(std::move(values), std::move(names), counters,
                    std::move(diagnostics));
}

}  // namespace dc64
