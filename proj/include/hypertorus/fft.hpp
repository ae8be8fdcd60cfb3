#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

#include "hypertorus/torus.hpp"

namespace hypertorus {

// Dense nx^d complex grid with in-place FFTW transforms. Coefficient index
// k in [0, nx) stands for the frequency k (k <= nx/2) or k - nx.
//
//   to_space():     c_k      -> sum_k c_k e^{2 pi i k.x_j}   (no scaling)
//   to_frequency(): f(x_j)   -> nx^{-d} sum_j f(x_j) e^{-2 pi i k.x_j}
class GridTransform {
 public:
  GridTransform(int d, int nx);
  ~GridTransform();
  GridTransform(const GridTransform&) = delete;
  GridTransform& operator=(const GridTransform&) = delete;
  GridTransform(GridTransform&& other) noexcept;
  GridTransform& operator=(GridTransform&& other) noexcept;

  int dim() const { return d_; }
  int nx() const { return nx_; }
  std::size_t size() const { return size_; }

  std::span<Complex> data();
  std::span<const Complex> data() const;

  void clear();
  void to_space();
  void to_frequency();

  std::size_t index_of(const FreqPoint& xi) const;
  FreqPoint frequency_at(std::size_t index) const;

 private:
  void release();

  int d_ = 0;
  int nx_ = 0;
  std::size_t size_ = 0;
  Complex* buffer_ = nullptr;
  void* forward_ = nullptr;   // fftw_plan
  void* backward_ = nullptr;  // fftw_plan
};

// Smallest integer >= n whose prime factors are all in {2, 3, 5, 7}.
int smooth_fft_size(int n);

}  // namespace hypertorus
