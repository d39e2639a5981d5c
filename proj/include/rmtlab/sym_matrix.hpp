// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rmtlab {

/// Dense real symmetric matrix, row-major.  Writes go through `set`, which
/// stores both (i, j) and (j, i), so the matrix is always exactly symmetric.
class SymMatrix {
  public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}

    std::size_t size() const noexcept { return n_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * n_ + j]; }

    void set(std::size_t i, std::size_t j, double v) noexcept
    {
        a_[i * n_ + j] = v;
        a_[j * n_ + i] = v;
    }

    std::span<const double> row(std::size_t i) const noexcept
    {
        return {a_.data() + i * n_, n_};
    }
    std::span<const double> data() const noexcept { return a_; }

    double trace() const noexcept
    {
        double t = 0.0;
        for (std::size_t i = 0; i < n_; ++i) t += a_[i * n_ + i];
        return t;
    }

    /// Sum of squared entries, i.e. tr(M^2).
    double frobenius_sq() const noexcept
    {
        double s = 0.0;
        for (double x : a_) s += x * x;
        return s;
    }

    friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

  private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

}  // namespace rmtlab
