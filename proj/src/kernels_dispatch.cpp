#include "mqc/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace mqc::kernels {
namespace {

std::atomic<const Ops*> g_forced{nullptr};

const Ops* detect() {
    if (const char* env = std::getenv("MQC_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return &scalar_ops();
        if (std::strcmp(env, "avx2") == 0 && avx2_ops()) return avx2_ops();
    }
    if (const Ops* v = avx2_ops()) return v;
    return &scalar_ops();
}

}  // namespace

const Ops& active() {
    if (const Ops* f = g_forced.load(std::memory_order_relaxed)) return *f;
    static const Ops* chosen = detect();
    return *chosen;
}

void set_active(const Ops* ops) { g_forced.store(ops, std::memory_order_relaxed); }

}  // namespace mqc::kernels
