#include <cstdlib>
#include <string>

#include "filterlab/errors.hpp"
#include "filterlab/kernels.hpp"

namespace filterlab::kernels {

const Backend* detail_avx2_backend_if_compiled();

namespace {

bool cpu_has_avx2_fma() {
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Backend* resolve() {
  const Backend* avx2 = avx2_backend();
  if (const char* pick = std::getenv("FILTERLAB_KERNELS")) {
    std::string name(pick);
    if (name == "scalar") return &scalar_backend();
    if (name == "avx2") {
      if (!avx2)
        throw ValidationError("FILTERLAB_KERNELS=avx2 but AVX2 is unavailable");
      return avx2;
    }
    throw ValidationError("unknown FILTERLAB_KERNELS value: " + name);
  }
  return avx2 ? avx2 : &scalar_backend();
}

}  // namespace

const Backend* avx2_backend() {
  const Backend* compiled = detail_avx2_backend_if_compiled();
  if (!compiled || !cpu_has_avx2_fma()) return nullptr;
  return compiled;
}

const Backend& active() {
  static const Backend* chosen = resolve();
  return *chosen;
}

std::vector<std::string> available_backend_names() {
  std::vector<std::string> names = {scalar_backend().name};
  if (const Backend* avx2 = avx2_backend()) names.push_back(avx2->name);
  return names;
}

}  // namespace filterlab::kernels
