#pragma once

#include <cmath>
#include <complex>

namespace hbcs {

// Neumaier's variant of compensated summation: the compensation term also
// catches the case where the addend is larger than the running sum.  For a
// fixed input sequence the result is bit-reproducible.
class compensated_sum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Scalar-generic front end so series code can accumulate either doubles or
// complex doubles through the same loop.
template <class Scalar>
class accumulator;

template <>
class accumulator<double> {
public:
    void add(double v) { s_.add(v); }
    double value() const { return s_.value(); }

private:
    compensated_sum s_;
};

template <>
class accumulator<std::complex<double>> {
public:
    void add(std::complex<double> v) {
        re_.add(v.real());
        im_.add(v.imag());
    }
    std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
    compensated_sum re_, im_;
};

} // namespace hbcs
