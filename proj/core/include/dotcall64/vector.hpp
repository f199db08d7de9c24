#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string_view>

#include "dotcall64/diagnostics.hpp"
#include "dotcall64/parcast.hpp"

namespace dc64 {

/// Element types. Int64 only appears in handoff buffers built during
/// marshaling; vectors entering or leaving a call are Double or Int32.
enum class ElemType : std::uint8_t { Double = 0, Int32 = 1, Int64 = 2 };

std::string_view to_string(ElemType t) noexcept;
std::size_t element_size(ElemType t) noexcept;

template <typename T>
concept Element = std::same_as<T, double> || std::same_as<T, std::int32_t> ||
                  std::same_as<T, std::int64_t>;

template <Element T>
inline constexpr ElemType elem_type_of =
    std::same_as<T, double>         ? ElemType::Double
    : std::same_as<T, std::int32_t> ? ElemType::Int32
                                    : ElemType::Int64;

/// Upper bound on element counts.
inline constexpr std::uint64_t kMaxLength = std::uint64_t{1} << 52;
/// Lengths above this are "long" and use the 64-bit header slot.
inline constexpr std::uint64_t kDefaultLongThreshold = 2147483647;  // 2^31 - 1
inline constexpr std::int32_t kLongLengthSentinel = -1;

inline constexpr std::int32_t kInt32Na = std::numeric_limits<std::int32_t>::min();
inline constexpr std::int32_t kInt32Max = std::numeric_limits<std::int32_t>::max();
inline constexpr std::int32_t kInt32Min = -kInt32Max;  // smallest non-NA value

inline bool is_missing(double x) noexcept { return std::isnan(x); }
inline bool is_missing(std::int32_t x) noexcept { return x == kInt32Na; }
inline bool is_infinite(double x) noexcept { return std::isinf(x); }

/// Legacy 32-bit length slot plus the long-vector prefix.
///
/// For lengths up to the threshold, `length32` holds the length and
/// `long_length` is empty. Longer vectors store -1 in `length32` and the
/// real count in `long_length`.
struct VectorHeader {
  std::int32_t length32 = 0;
  std::optional<std::uint64_t> long_length;

  static VectorHeader for_length(std::uint64_t length, std::uint64_t threshold);

  bool is_long() const noexcept { return length32 == kLongLengthSentinel; }
  std::uint64_t length() const noexcept {
    return is_long() ? *long_length : static_cast<std::uint64_t>(length32);
  }

  friend bool operator==(const VectorHeader&, const VectorHeader&) = default;
};

/// Shared handle to an atomic numeric vector.
///
/// Copying a TypedVector copies the handle, not the elements, the same way a
/// host binding refers to one underlying object; use duplicate() for a deep
/// copy. The element buffer is always non-null, even for length 0.
class TypedVector {
 public:
  ElemType elem_type() const noexcept;
  const VectorHeader& header() const noexcept;
  std::uint64_t length() const noexcept;
  std::uint64_t long_threshold() const noexcept;
  std::size_t byte_size() const noexcept;

  /// Reference status: 0 = unbound/fresh, 1 = bound once, 2 = shared.
  int ref_status() const noexcept;
  /// Records one more binding; saturates at 2.
  void mark_bound() noexcept;

  void* data() noexcept;
  const void* data() const noexcept;

  template <Element T>
  std::span<T> values() {
    check_type(elem_type_of<T>);
    return {static_cast<T*>(data()), static_cast<std::size_t>(length())};
  }
  template <Element T>
  std::span<const T> values() const {
    check_type(elem_type_of<T>);
    return {static_cast<const T*>(data()), static_cast<std::size_t>(length())};
  }

  bool same_object(const TypedVector& other) const noexcept {
    return storage_ == other.storage_;
  }

  template <Element T>
  static TypedVector of(std::span<const T> values,
                        std::uint64_t long_threshold = kDefaultLongThreshold);
  static TypedVector of(std::initializer_list<double> values,
                        std::uint64_t long_threshold = kDefaultLongThreshold);
  static TypedVector of_int32(std::initializer_list<std::int32_t> values,
                              std::uint64_t long_threshold = kDefaultLongThreshold);

 private:
  struct Storage;
  explicit TypedVector(std::shared_ptr<Storage> s) : storage_(std::move(s)) {}
  void check_type(ElemType wanted) const;

  friend TypedVector new_vector(ElemType, std::uint64_t, bool, std::uint64_t);

  std::shared_ptr<Storage> storage_;
};

/// Allocates a fresh vector with reference status 0.
/// Throws CapacityError above kMaxLength or when allocation fails.
TypedVector new_vector(ElemType type, std::uint64_t length, bool zero_init,
                       std::uint64_t long_threshold = kDefaultLongThreshold);

/// The true element count, read from whichever header slot holds it.
std::uint64_t header_length(const TypedVector& v) noexcept;

/// Host-level coercion to Double or Int32.
///
/// Returns `v` itself when the type already matches. Int32 -> Double is exact
/// (NA becomes NaN). Double -> Int32 truncates toward zero; NaN maps to NA,
/// and so does +-Inf. Inexact elements are reported at verbosity >= 1.
/// A finite value whose truncation falls outside [-2^31+1, 2^31-1] throws
/// RangeError with the element index.
TypedVector coerce(const TypedVector& v, ElemType target,
                   Diagnostics* diagnostics = nullptr,
                   const WorkerConfig& workers = WorkerConfig{});

/// Smallest index holding NA, NaN or +-Inf.
std::optional<std::uint64_t> scan_missing_infinite(
    const TypedVector& v, const WorkerConfig& workers = WorkerConfig{});

/// Deep copy with reference status 0. Bumps counters->copies when given.
TypedVector duplicate(const TypedVector& v,
                      InstrumentationCounters* counters = nullptr);

/// Bitwise equality of type, length and element bytes.
bool bitwise_equal(const TypedVector& a, const TypedVector& b) noexcept;

}  // namespace dc64
