#include "dotcall64/dispatch.hpp"

#include <dlfcn.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <utility>

#include "dotcall64/error.hpp"

namespace dc64 {

std::string_view shared_library_suffix() noexcept {
#if defined(_WIN32)
  return ".dll";
#elif defined(__APPLE__)
  return ".dylib";
#else
  return ".so";
#endif
}

LibraryHandle::LibraryHandle(std::filesystem::path path,
                             std::string registry_name, void* native)
    : path_(std::move(path)), name_(std::move(registry_name)), native_(native) {}

LibraryHandle::~LibraryHandle() {
  if (native_ != nullptr) dlclose(native_);
}

class PendingCall {
 public:
  explicit PendingCall(LibraryHandle* lib) : lib_(lib) {
    if (lib_ != nullptr) lib_->pending_.fetch_add(1);
  }
  ~PendingCall() {
    if (lib_ != nullptr) lib_->pending_.fetch_sub(1);
  }
  PendingCall(const PendingCall&) = delete;
  PendingCall& operator=(const PendingCall&) = delete;

 private:
  LibraryHandle* lib_;
};

std::shared_ptr<LibraryHandle> LibraryRegistry::load(
    const std::filesystem::path& path, std::optional<std::string> registry_name) {
  std::filesystem::path full = path;
  if (!full.has_extension()) full += std::string(shared_library_suffix());
  std::string name =
      registry_name ? std::move(*registry_name) : path.stem().string();

  std::lock_guard lock(mutex_);
  for (const auto& lib : libraries_) {
    if (lib->registry_name() == name) {
      throw LoadError("a library named \"" + name + "\" is already loaded");
    }
  }
  if (!std::filesystem::exists(full)) {
    throw LoadError("no such file: " + full.string());
  }
  dlerror();
  void* native = dlopen(full.c_str(), RTLD_NOW | RTLD_LOCAL);
  if (native == nullptr) {
    const char* msg = dlerror();
    throw LoadError("cannot load " + full.string() + ": " +
                    (msg != nullptr ? msg : "unknown loader error"));
  }
  auto handle = std::make_shared<LibraryHandle>(full, std::move(name), native);
  libraries_.push_back(handle);
  return handle;
}

void LibraryRegistry::unload(std::string_view registry_name) {
  std::lock_guard lock(mutex_);
  auto it = std::find_if(libraries_.begin(), libraries_.end(),
                         [&](const auto& lib) {
                           return lib->registry_name() == registry_name;
                         });
  if (it == libraries_.end()) {
    throw LoadError("no library named \"" + std::string(registry_name) + "\"");
  }
  if ((*it)->pending_calls() != 0) {
    throw LoadError("library \"" + std::string(registry_name) +
                    "\" has calls in progress");
  }
  libraries_.erase(it);
}

std::vector<std::string> LibraryRegistry::names() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  out.reserve(libraries_.size());
  for (const auto& lib : libraries_) out.push_back(lib->registry_name());
  return out;
}

std::size_t LibraryRegistry::size() const {
  std::lock_guard lock(mutex_);
  return libraries_.size();
}

ResolvedSymbol LibraryRegistry::resolve(std::string_view name,
                                        std::optional<std::string_view> filter,
                                        bool fortran_convention) const {
  std::vector<std::string> candidates{std::string(name)};
  if (fortran_convention) {
    std::string mangled(name);
    std::transform(mangled.begin(), mangled.end(), mangled.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    mangled += '_';
    candidates.push_back(std::move(mangled));
  }

  std::lock_guard lock(mutex_);
  std::vector<const std::shared_ptr<LibraryHandle>*> scope;
  for (const auto& lib : libraries_) {
    if (!filter || lib->registry_name() == *filter) scope.push_back(&lib);
  }

  for (const auto& candidate : candidates) {
    for (const auto* lib : scope) {
      dlerror();
      void* address = dlsym((*lib)->native(), candidate.c_str());
      if (address != nullptr && dlerror() == nullptr) {
        return ResolvedSymbol{candidate,
                              reinterpret_cast<RawFunction>(address), *lib};
      }
    }
  }

  std::string searched;
  for (const auto* lib : scope) {
    if (!searched.empty()) searched += ", ";
    searched += (*lib)->registry_name();
  }
  if (searched.empty()) {
    searched = filter ? "none (no library named \"" + std::string(*filter) + "\")"
                      : "none (no libraries loaded)";
  }
  throw SymbolError("symbol \"" + std::string(name) +
                    "\" not found; searched: " + searched);
}

namespace {

using Thunk = void (*)(RawFunction, void* const*);

template <std::size_t... I>
void call_with(RawFunction entry, void* const* args,
               std::index_sequence<I...>) {
  using Fn = void (*)(decltype((void)I, static_cast<void*>(nullptr))...);
  reinterpret_cast<Fn>(entry)(args[I]...);
}

template <std::size_t N>
void thunk(RawFunction entry, void* const* args) {
  call_with(entry, args, std::make_index_sequence<N>{});
}

template <std::size_t... N>
constexpr std::array<Thunk, sizeof...(N)> make_thunks(
    std::index_sequence<N...>) {
  return {&thunk<N>...};
}

// kThunks[n] calls a function of n pointer parameters.
constexpr auto kThunks = make_thunks(std::make_index_sequence<kMaxArguments + 1>{});

}  // namespace

void invoke_addresses(RawFunction entry, std::span<void* const> addresses) {
  if (addresses.empty() || addresses.size() > kMaxArguments) {
    throw SpecError("callee arity " + std::to_string(addresses.size()) +
                    " outside [1, " + std::to_string(kMaxArguments) + "]");
  }
  if (entry == nullptr) throw SymbolError("null entry point");
  kThunks[addresses.size()](entry, addresses.data());
}

void invoke(const ResolvedSymbol& symbol, std::span<PreparedArg> prepared) {
  std::array<void*, kMaxArguments> addresses{};
  if (prepared.empty() || prepared.size() > kMaxArguments) {
    throw SpecError("callee arity " + std::to_string(prepared.size()) +
                    " outside [1, " + std::to_string(kMaxArguments) + "]");
  }
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    addresses[i] = prepared[i].address();
  }
  PendingCall pending(symbol.library.get());
  invoke_addresses(symbol.entry,
                   std::span<void* const>(addresses.data(), prepared.size()));
}

}  // namespace dc64
