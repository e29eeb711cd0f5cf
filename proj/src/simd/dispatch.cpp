#include <atomic>
#include <cstdlib>
#include <string>

#include "fraclab/simd/kernels.hpp"

namespace fraclab::simd {
namespace {

bool cpu_has_avx2() {
#if defined(FRACLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable* find(const std::string& name) {
    for (const KernelTable* t : available())
        if (name == t->name) return t;
    return nullptr;
}

const KernelTable* initial() {
    if (const char* env = std::getenv("FRACLAB_SIMD")) {
        if (const KernelTable* t = find(env)) return t;
    }
    return available().back();
}

std::atomic<const KernelTable*>& slot() {
    static std::atomic<const KernelTable*> s{initial()};
    return s;
}

}  // namespace

std::vector<const KernelTable*> available() {
    std::vector<const KernelTable*> out{&scalar_table()};
#if defined(FRACLAB_HAVE_AVX2)
    if (cpu_has_avx2()) out.push_back(&avx2_table());
#endif
#if defined(FRACLAB_HAVE_NEON)
    out.push_back(&neon_table());
#endif
    return out;
}

const KernelTable& active() { return *slot().load(std::memory_order_relaxed); }

bool select(const std::string& name) {
    const KernelTable* t = find(name);
    if (!t) return false;
    slot().store(t, std::memory_order_relaxed);
    return true;
}

}  // namespace fraclab::simd
