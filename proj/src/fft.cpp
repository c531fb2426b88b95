#include "wbd/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace wbd::fft {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays (fftw_execute_dft) is. Plans live for the whole process.
fftw_plan get_plan(int d, int n, int direction) {
    static std::mutex mutex;
    static std::map<std::tuple<int, int, int>, fftw_plan> plans;
    std::lock_guard lock(mutex);
    auto key = std::make_tuple(d, n, direction);
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    const std::size_t size = d == 1 ? n : static_cast<std::size_t>(n) * n;
    auto* buf = fftw_alloc_complex(size);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p = d == 1 ? fftw_plan_dft_1d(n, buf, buf, direction, flags)
                         : fftw_plan_dft_2d(n, n, buf, buf, direction, flags);
    fftw_free(buf);
    plans.emplace(key, p);
    return p;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

void forward(const GridSpec& grid, std::span<const cplx> values, std::span<cplx> coeffs) {
    std::vector<cplx> in(values.begin(), values.end());
    fftw_execute_dft(get_plan(grid.dim(), grid.n(), FFTW_FORWARD), as_fftw(in.data()),
                     as_fftw(coeffs.data()));
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (auto& c : coeffs) c *= scale;
}

void inverse(const GridSpec& grid, std::span<const cplx> coeffs, std::span<cplx> values) {
    std::vector<cplx> in(coeffs.begin(), coeffs.end());
    fftw_execute_dft(get_plan(grid.dim(), grid.n(), FFTW_BACKWARD), as_fftw(in.data()),
                     as_fftw(values.data()));
}

}  // namespace wbd::fft
