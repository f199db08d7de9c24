#include "dotcall64/vector.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "dotcall64/error.hpp"

namespace dc64 {

std::string_view to_string(ElemType t) noexcept {
  switch (t) {
    case ElemType::Double: return "double";
    case ElemType::Int32: return "integer";
    case ElemType::Int64: return "int64";
  }
  return "?";
}

std::size_t element_size(ElemType t) noexcept {
  return t == ElemType::Int32 ? 4 : 8;
}

VectorHeader VectorHeader::for_length(std::uint64_t length,
                                      std::uint64_t threshold) {
  if (length <= threshold) {
    return VectorHeader{static_cast<std::int32_t>(length), std::nullopt};
  }
  return VectorHeader{kLongLengthSentinel, length};
}

namespace {
struct FreeDeleter {
  void operator()(void* p) const noexcept { std::free(p); }
};
}  // namespace

struct TypedVector::Storage {
  ElemType type;
  VectorHeader header;
  std::uint64_t length;
  std::uint64_t threshold;
  int ref_status = 0;
  std::unique_ptr<void, FreeDeleter> data;
};

ElemType TypedVector::elem_type() const noexcept { return storage_->type; }
const VectorHeader& TypedVector::header() const noexcept {
  return storage_->header;
}
std::uint64_t TypedVector::length() const noexcept { return storage_->length; }
std::uint64_t TypedVector::long_threshold() const noexcept {
  return storage_->threshold;
}
std::size_t TypedVector::byte_size() const noexcept {
  return static_cast<std::size_t>(storage_->length) *
         element_size(storage_->type);
}
int TypedVector::ref_status() const noexcept { return storage_->ref_status; }
void TypedVector::mark_bound() noexcept {
  if (storage_->ref_status < 2) ++storage_->ref_status;
}
void* TypedVector::data() noexcept { return storage_->data.get(); }
const void* TypedVector::data() const noexcept { return storage_->data.get(); }

void TypedVector::check_type(ElemType wanted) const {
  if (storage_->type != wanted) {
    throw SpecError("vector holds " + std::string(to_string(storage_->type)) +
                    " elements, accessed as " + std::string(to_string(wanted)));
  }
}

TypedVector new_vector(ElemType type, std::uint64_t length, bool zero_init,
                       std::uint64_t long_threshold) {
  if (length > kMaxLength) {
    throw CapacityError("length " + std::to_string(length) +
                        " exceeds the 2^52 element limit");
  }
  if (long_threshold > static_cast<std::uint64_t>(kInt32Max)) {
    throw SpecError("long-vector threshold must fit the 32-bit length slot");
  }
  if (length > std::numeric_limits<std::size_t>::max() / 8) {
    throw CapacityError("length " + std::to_string(length) +
                        " is not addressable on this platform");
  }
  // Length-0 vectors still own one element of scratch so that every address
  // handed to a callee is valid.
  const std::size_t count = length == 0 ? 1 : static_cast<std::size_t>(length);
  const std::size_t bytes = count * element_size(type);
  void* raw = zero_init ? std::calloc(count, element_size(type))
                        : std::malloc(bytes);
  if (raw == nullptr) {
    throw CapacityError("failed to allocate " + std::to_string(bytes) +
                        " bytes");
  }
  auto s = std::make_shared<TypedVector::Storage>();
  s->type = type;
  s->header = VectorHeader::for_length(length, long_threshold);
  s->length = length;
  s->threshold = long_threshold;
  s->data.reset(raw);
  return TypedVector(std::move(s));
}

template <Element T>
TypedVector TypedVector::of(std::span<const T> values,
                            std::uint64_t long_threshold) {
  auto v = new_vector(elem_type_of<T>, values.size(), false, long_threshold);
  if (!values.empty()) {
    std::memcpy(v.data(), values.data(), values.size_bytes());
  }
  return v;
}

template TypedVector TypedVector::of<double>(std::span<const double>,
                                             std::uint64_t);
template TypedVector TypedVector::of<std::int32_t>(
    std::span<const std::int32_t>, std::uint64_t);
template TypedVector TypedVector::of<std::int64_t>(
    std::span<const std::int64_t>, std::uint64_t);

TypedVector TypedVector::of(std::initializer_list<double> values,
                            std::uint64_t long_threshold) {
  return of(std::span<const double>(values.begin(), values.size()),
            long_threshold);
}

TypedVector TypedVector::of_int32(std::initializer_list<std::int32_t> values,
                                  std::uint64_t long_threshold) {
  return of(std::span<const std::int32_t>(values.begin(), values.size()),
            long_threshold);
}

std::uint64_t header_length(const TypedVector& v) noexcept {
  return v.header().length();
}

namespace {

struct NarrowingReport {
  std::uint64_t inexact = 0;
  std::optional<std::uint64_t> first_inexact;
};

TypedVector double_to_int32(const TypedVector& v, Diagnostics* diagnostics,
                            const WorkerConfig& workers) {
  auto out = new_vector(ElemType::Int32, v.length(), false, v.long_threshold());
  auto src = v.values<double>();
  auto dst = out.values<std::int32_t>();

  auto reports = for_each_chunk(
      src.size(), workers, [&](std::size_t b, std::size_t e) {
        NarrowingReport r;
        for (std::size_t i = b; i < e; ++i) {
          const double x = src[i];
          if (!std::isfinite(x)) {
            dst[i] = kInt32Na;
            if (!std::isnan(x)) {
              ++r.inexact;
              if (!r.first_inexact) r.first_inexact = i;
            }
            continue;
          }
          const double t = std::trunc(x);
          if (t < static_cast<double>(kInt32Min) ||
              t > static_cast<double>(kInt32Max)) {
            throw RangeError("value out of 32-bit integer range",
                             std::nullopt, i);
          }
          dst[i] = static_cast<std::int32_t>(t);
          if (t != x) {
            ++r.inexact;
            if (!r.first_inexact) r.first_inexact = i;
          }
        }
        return r;
      });

  NarrowingReport total;
  for (const auto& r : reports) {
    total.inexact += r.inexact;
    if (!total.first_inexact) total.first_inexact = r.first_inexact;
  }
  if (total.inexact > 0 && diagnostics != nullptr && diagnostics->enabled(1)) {
    diagnostics->emit(1, "coercion to integer changed " +
                             std::to_string(total.inexact) +
                             " element(s); first at element " +
                             std::to_string(*total.first_inexact));
  }
  return out;
}

TypedVector int32_to_double(const TypedVector& v, const WorkerConfig& workers) {
  auto out = new_vector(ElemType::Double, v.length(), false, v.long_threshold());
  parallel_map(
      v.values<std::int32_t>(), out.values<double>(),
      [](std::int32_t x) {
        return is_missing(x) ? std::numeric_limits<double>::quiet_NaN()
                             : static_cast<double>(x);
      },
      workers);
  return out;
}

}  // namespace

TypedVector coerce(const TypedVector& v, ElemType target,
                   Diagnostics* diagnostics, const WorkerConfig& workers) {
  if (target == ElemType::Int64) {
    throw SpecError("int64 is not a host vector type");
  }
  if (v.elem_type() == target) return v;
  switch (v.elem_type()) {
    case ElemType::Int32:
      return int32_to_double(v, workers);
    case ElemType::Double:
      return double_to_int32(v, diagnostics, workers);
    case ElemType::Int64:
      break;
  }
  throw SpecError("int64 vectors cannot be coerced at host level");
}

std::optional<std::uint64_t> scan_missing_infinite(const TypedVector& v,
                                                   const WorkerConfig& workers) {
  switch (v.elem_type()) {
    case ElemType::Double: {
      auto xs = v.values<double>();
      return parallel_find_first(
          xs.size(), [&](std::size_t i) { return !std::isfinite(xs[i]); },
          workers);
    }
    case ElemType::Int32: {
      auto xs = v.values<std::int32_t>();
      return parallel_find_first(
          xs.size(), [&](std::size_t i) { return xs[i] == kInt32Na; }, workers);
    }
    case ElemType::Int64:
      break;
  }
  throw SpecError("missing-value scan needs a double or integer vector");
}

TypedVector duplicate(const TypedVector& v, InstrumentationCounters* counters) {
  auto out = new_vector(v.elem_type(), v.length(), false, v.long_threshold());
  if (v.length() != 0) std::memcpy(out.data(), v.data(), v.byte_size());
  if (counters != nullptr) ++counters->copies;
  return out;
}

bool bitwise_equal(const TypedVector& a, const TypedVector& b) noexcept {
  return a.elem_type() == b.elem_type() && a.length() == b.length() &&
         std::memcmp(a.data(), b.data(), a.byte_size()) == 0;
}

}  // namespace dc64
