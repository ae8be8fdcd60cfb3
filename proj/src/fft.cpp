#include "hypertorus/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hypertorus {
namespace {

// The FFTW planner is not reentrant; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::int64_t wrap(std::int64_t k, int nx) {
  const std::int64_t r = k % nx;
  return r < 0 ? r + nx : r;
}

}  // namespace

GridTransform::GridTransform(int d, int nx) : d_(d), nx_(nx) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("GridTransform: bad dimension");
  if (nx < 1) throw std::invalid_argument("GridTransform: nx must be positive");
  size_ = 1;
  for (int j = 0; j < d; ++j) size_ *= static_cast<std::size_t>(nx);
  buffer_ = reinterpret_cast<Complex*>(fftw_alloc_complex(size_));
  if (buffer_ == nullptr) throw std::bad_alloc();
  std::vector<int> dims(static_cast<std::size_t>(d), nx);
  auto* raw = reinterpret_cast<fftw_complex*>(buffer_);
  std::lock_guard lock(planner_mutex());
  forward_ = fftw_plan_dft(d, dims.data(), raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_ = fftw_plan_dft(d, dims.data(), raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
  clear();
}

GridTransform::~GridTransform() { release(); }

GridTransform::GridTransform(GridTransform&& other) noexcept
    : d_(other.d_),
      nx_(other.nx_),
      size_(other.size_),
      buffer_(std::exchange(other.buffer_, nullptr)),
      forward_(std::exchange(other.forward_, nullptr)),
      backward_(std::exchange(other.backward_, nullptr)) {}

GridTransform& GridTransform::operator=(GridTransform&& other) noexcept {
  if (this != &other) {
    release();
    d_ = other.d_;
    nx_ = other.nx_;
    size_ = other.size_;
    buffer_ = std::exchange(other.buffer_, nullptr);
    forward_ = std::exchange(other.forward_, nullptr);
    backward_ = std::exchange(other.backward_, nullptr);
  }
  return *this;
}

void GridTransform::release() {
  std::lock_guard lock(planner_mutex());
  if (forward_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  if (backward_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(backward_));
  if (buffer_ != nullptr) fftw_free(buffer_);
  forward_ = backward_ = nullptr;
  buffer_ = nullptr;
}

std::span<Complex> GridTransform::data() { return {buffer_, size_}; }
std::span<const Complex> GridTransform::data() const { return {buffer_, size_}; }

void GridTransform::clear() {
  for (std::size_t i = 0; i < size_; ++i) buffer_[i] = Complex{};
}

void GridTransform::to_space() { fftw_execute(static_cast<fftw_plan>(backward_)); }

void GridTransform::to_frequency() {
  fftw_execute(static_cast<fftw_plan>(forward_));
  const double scale = 1.0 / static_cast<double>(size_);
  for (std::size_t i = 0; i < size_; ++i) buffer_[i] *= scale;
}

std::size_t GridTransform::index_of(const FreqPoint& xi) const {
  std::size_t idx = 0;
  for (int j = 0; j < d_; ++j) {
    idx = idx * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(wrap(xi[j], nx_));
  }
  return idx;
}

FreqPoint GridTransform::frequency_at(std::size_t index) const {
  FreqPoint xi = FreqPoint::zero(d_);
  for (int j = d_ - 1; j >= 0; --j) {
    const auto k = static_cast<std::int64_t>(index % static_cast<std::size_t>(nx_));
    index /= static_cast<std::size_t>(nx_);
    xi[j] = (2 * k <= nx_) ? k : k - nx_;
  }
  return xi;
}

int smooth_fft_size(int n) {
  if (n < 1) return 1;
  for (int m = n;; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

}  // namespace hypertorus
