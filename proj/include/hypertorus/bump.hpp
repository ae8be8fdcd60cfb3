#pragma once

namespace hypertorus {

// Even cutoff profile equal to 1 on [-1, 1] and vanishing outside [-2, 2].
//   Smooth: C^infinity transition built from g(s) = e^{-1/s}.
//   Flat:   the indicator of [-2, 2] (handy for exact finite sums).
class BumpProfile {
 public:
  enum class Kind { Smooth, Flat };

  explicit BumpProfile(Kind kind = Kind::Smooth) : kind_(kind) {}
  static BumpProfile smooth() { return BumpProfile(Kind::Smooth); }
  static BumpProfile flat() { return BumpProfile(Kind::Flat); }

  Kind kind() const { return kind_; }
  double operator()(double s) const;

  // phi_hat(xi) = int phi(s) e^{-2 pi i s xi} ds, real because phi is even.
  double fourier(double xi) const;

 private:
  Kind kind_;
};

}  // namespace hypertorus
