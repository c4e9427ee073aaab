#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "zipfcode/error.hpp"

namespace zipfcode {

inline void require_base(std::uint64_t base) {
    if (base < 2) throw domain_error("alphabet size N must be >= 2, got " + std::to_string(base));
}

// log_N x computed from natural logs.
inline double log_base(double x, std::uint64_t base) {
    return std::log(x) / std::log(static_cast<double>(base));
}

// Neumaier compensated summation.
class compensated_sum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    compensated_sum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace zipfcode
