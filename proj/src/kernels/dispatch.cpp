#include <cstdlib>
#include <string_view>
#include <vector>

#include "opalg/kernels.hpp"

namespace opalg::kernels {
namespace {

bool force_scalar() {
    const char* v = std::getenv("OPALG_FORCE_SCALAR");
    return v != nullptr && std::string_view(v) != "0" && std::string_view(v) != "";
}

bool cpu_has_avx2() {
#if defined(OPALG_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

std::vector<const KernelTable*> build_available() {
    std::vector<const KernelTable*> out{&scalar::table()};
#if defined(OPALG_WITH_AVX2)
    if (cpu_has_avx2()) out.push_back(&avx2::table());
#endif
    return out;
}

}  // namespace

std::span<const KernelTable* const> available() {
    static const std::vector<const KernelTable*> tables = build_available();
    return tables;
}

const KernelTable& active() {
    static const KernelTable* chosen = [] {
        auto all = available();
        if (force_scalar()) return all.front();
        return all.back();
    }();
    return *chosen;
}

}  // namespace opalg::kernels
