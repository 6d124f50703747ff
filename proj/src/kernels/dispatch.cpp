#include <atomic>
#include <cstdlib>
#include <string>

#include "fflab/error.hpp"
#include "fflab/kernels.hpp"

namespace fflab::kernels {

#if defined(FFLAB_HAVE_AVX2)
const KernelSet& avx2_unchecked();
#endif

const KernelSet* avx2() {
#if defined(FFLAB_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelSet* resolve(std::string_view name) {
  if (name == "scalar") return &scalar();
  if (name == "avx2") return avx2();
  if (name == "auto" || name.empty()) {
    const KernelSet* v = avx2();
    return v ? v : &scalar();
  }
  return nullptr;
}

std::atomic<const KernelSet*>& current() {
  static std::atomic<const KernelSet*> cur = [] {
    const char* env = std::getenv("FFLAB_KERNELS");
    const KernelSet* k = resolve(env ? env : "auto");
    return k ? k : resolve("auto");
  }();
  return cur;
}

}  // namespace

const KernelSet& active() { return *current().load(std::memory_order_acquire); }

void select(std::string_view name) {
  const KernelSet* k = resolve(name);
  if (!k) throw Error(ErrorCode::PreconditionViolated, "kernel set unavailable: " + std::string(name));
  current().store(k, std::memory_order_release);
}

}  // namespace fflab::kernels
