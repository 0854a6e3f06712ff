#include "driftlab/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "driftlab/errors.hpp"

namespace drift::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend resolve_default() {
    if (const char* env = std::getenv("DRIFTLAB_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0) return Backend::avx2;
        if (std::strcmp(env, "neon") == 0) return Backend::neon;
    }
#if defined(__aarch64__)
    return Backend::neon;
#else
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
#endif
}

std::atomic<const Ops*> g_active{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

void install(Backend b) {
    const Ops* t = table_for(b);
    if (t == nullptr) {
        throw ConfigError("kernel backend not available on this machine: " + std::string(
            b == Backend::scalar ? "scalar" : b == Backend::avx2 ? "avx2" : "neon"));
    }
    g_backend.store(b, std::memory_order_relaxed);
    g_active.store(t, std::memory_order_release);
}

} // namespace

const Ops* table_for(Backend b) {
    switch (b) {
    case Backend::scalar:
        return &detail::scalar_ops;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
        if (cpu_has_avx2()) return &detail::avx2_ops;
#endif
        return nullptr;
    case Backend::neon:
#if defined(__aarch64__)
        return &detail::neon_ops;
#endif
        return nullptr;
    }
    return nullptr;
}

const Ops& active() {
    const Ops* t = g_active.load(std::memory_order_acquire);
    if (t == nullptr) {
        install(resolve_default());
        t = g_active.load(std::memory_order_acquire);
    }
    return *t;
}

Backend backend() {
    active();
    return g_backend.load(std::memory_order_relaxed);
}

std::string backend_name() {
    switch (backend()) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
    }
    return "scalar";
}

void set_backend(Backend b) { install(b); }

} // namespace drift::kernels
