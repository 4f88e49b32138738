#include "relab/kernels/kernels.hpp"

#include <cstdlib>

namespace relab::kernels {
namespace {

const Backend* lookup(const std::string& name) {
    if (name == "scalar") return &scalar_backend();
    if (name == "avx2") return avx2_backend();
    if (name == "neon") return neon_backend();
    return nullptr;
}

const Backend* pick() {
    if (const char* env = std::getenv("RELAB_KERNELS")) {
        if (const Backend* b = lookup(env)) return b;
    }
    if (const Backend* b = avx2_backend()) return b;
    if (const Backend* b = neon_backend()) return b;
    return &scalar_backend();
}

const Backend*& slot() {
    static const Backend* current = pick();
    return current;
}

}  // namespace

const Backend& active() { return *slot(); }

bool force_backend(const std::string& name) {
    const Backend* b = lookup(name);
    if (!b) return false;
    slot() = b;
    return true;
}

}  // namespace relab::kernels
