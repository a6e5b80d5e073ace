#include "nlft/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace nlft {

namespace {
std::mutex planner_mutex;
std::map<int, std::unique_ptr<Fft2>>& plan_cache() {
    static std::map<int, std::unique_ptr<Fft2>> cache;
    return cache;
}
}  // namespace

Fft2::Fft2(int n) : n_(n) {
    // Plan with a scratch buffer; execution later uses the new-array
    // interface, so FFTW_UNALIGNED keeps the plan valid for any storage.
    fftw_complex* scratch = fftw_alloc_complex(static_cast<std::size_t>(n) * n);
    if (!scratch) throw std::bad_alloc();
    fwd_ = fftw_plan_dft_2d(n, n, scratch, scratch, FFTW_FORWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd_ = fftw_plan_dft_2d(n, n, scratch, scratch, FFTW_BACKWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (!fwd_ || !bwd_) throw std::runtime_error("fftw plan creation failed");
}

Fft2::~Fft2() {
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

const Fft2& Fft2::plan_for(int n) {
    std::lock_guard<std::mutex> lock(planner_mutex);
    auto& cache = plan_cache();
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, std::unique_ptr<Fft2>(new Fft2(n))).first;
    return *it->second;
}

void Fft2::forward(std::complex<double>* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(fwd_), p, p);
}

void Fft2::backward(std::complex<double>* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(bwd_), p, p);
    const double scale = 1.0 / (static_cast<double>(n_) * n_);
    const std::size_t total = static_cast<std::size_t>(n_) * n_;
    for (std::size_t i = 0; i < total; ++i) data[i] *= scale;
}

}  // namespace nlft
