#pragma once

#include <complex>

namespace nlft {

// Cached in-place 2-D complex FFTs of size n x n (row-major).  Plans are
// created once per size with FFTW_ESTIMATE so results are reproducible and
// independent of timing; execution is thread-safe, plan creation is guarded
// internally.
class Fft2 {
  public:
    static const Fft2& plan_for(int n);

    // Unnormalized forward DFT (exponent -i).
    void forward(std::complex<double>* data) const;
    // Inverse DFT including the 1/n^2 normalization.
    void backward(std::complex<double>* data) const;

    Fft2(const Fft2&) = delete;
    Fft2& operator=(const Fft2&) = delete;
    ~Fft2();

  private:
    explicit Fft2(int n);

    int n_;
    void* fwd_;
    void* bwd_;
};

}  // namespace nlft
