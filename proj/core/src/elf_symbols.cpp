#include <elf.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "dotcall64/dispatch.hpp"
#include "dotcall64/error.hpp"

namespace dc64 {
namespace {

struct Elf64 {
  using Ehdr = Elf64_Ehdr;
  using Shdr = Elf64_Shdr;
  using Sym = Elf64_Sym;
  static unsigned char type(unsigned char info) { return ELF64_ST_TYPE(info); }
  static unsigned char bind(unsigned char info) { return ELF64_ST_BIND(info); }
  static unsigned char visibility(unsigned char other) {
    return ELF64_ST_VISIBILITY(other);
  }
};

struct Elf32 {
  using Ehdr = Elf32_Ehdr;
  using Shdr = Elf32_Shdr;
  using Sym = Elf32_Sym;
  static unsigned char type(unsigned char info) { return ELF32_ST_TYPE(info); }
  static unsigned char bind(unsigned char info) { return ELF32_ST_BIND(info); }
  static unsigned char visibility(unsigned char other) {
    return ELF32_ST_VISIBILITY(other);
  }
};

template <typename T>
T read_at(const std::vector<char>& image, std::size_t offset,
          const std::string& path) {
  if (offset > image.size() || image.size() - offset < sizeof(T)) {
    throw LoadError(path + ": truncated ELF image");
  }
  T out;
  std::memcpy(&out, image.data() + offset, sizeof(T));
  return out;
}

template <typename Elf>
std::vector<std::string> dynamic_functions(const std::vector<char>& image,
                                           const std::string& path) {
  const auto eh = read_at<typename Elf::Ehdr>(image, 0, path);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < eh.e_shnum; ++i) {
    const auto sh = read_at<typename Elf::Shdr>(
        image, eh.e_shoff + i * sizeof(typename Elf::Shdr), path);
    if (sh.sh_type != SHT_DYNSYM || sh.sh_entsize == 0) continue;
    const auto strtab = read_at<typename Elf::Shdr>(
        image, eh.e_shoff + sh.sh_link * sizeof(typename Elf::Shdr), path);

    const std::size_t count = sh.sh_size / sh.sh_entsize;
    for (std::size_t k = 1; k < count; ++k) {
      const auto sym = read_at<typename Elf::Sym>(
          image, sh.sh_offset + k * sh.sh_entsize, path);
      if (sym.st_shndx == SHN_UNDEF) continue;
      if (Elf::type(sym.st_info) != STT_FUNC) continue;
      const auto bind = Elf::bind(sym.st_info);
      if (bind != STB_GLOBAL && bind != STB_WEAK) continue;
      if (Elf::visibility(sym.st_other) != STV_DEFAULT) continue;

      const std::size_t at = strtab.sh_offset + sym.st_name;
      if (at >= image.size()) throw LoadError(path + ": bad symbol name offset");
      const char* begin = image.data() + at;
      const std::size_t max = image.size() - at;
      names.emplace_back(begin, strnlen(begin, max));
    }
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

}  // namespace

std::vector<std::string> exported_symbols(const std::filesystem::path& path) {
  std::filesystem::path full = path;
  if (!full.has_extension()) full += std::string(shared_library_suffix());
  std::ifstream in(full, std::ios::binary);
  if (!in) throw LoadError("cannot open " + full.string());
  std::vector<char> image((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());

  const std::string where = full.string();
  if (image.size() < EI_NIDENT || std::memcmp(image.data(), ELFMAG, SELFMAG) != 0) {
    throw LoadError(where + ": not an ELF shared object");
  }
  if (image[EI_DATA] != ELFDATA2LSB) {
    throw LoadError(where + ": only little-endian ELF images are supported");
  }
  switch (image[EI_CLASS]) {
    case ELFCLASS64: return dynamic_functions<Elf64>(image, where);
    case ELFCLASS32: return dynamic_functions<Elf32>(image, where);
    default: throw LoadError(where + ": unknown ELF class");
  }
}

}  // namespace dc64
