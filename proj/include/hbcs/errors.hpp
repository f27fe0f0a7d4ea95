#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hbcs {

// A series hit its term cap before meeting the stopping rule.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& msg, std::size_t terms)
        : std::runtime_error(msg), terms_used_(terms) {}

    std::size_t terms_used() const noexcept { return terms_used_; }

private:
    std::size_t terms_used_;
};

// Evaluation requested at a pole of Gamma.
class pole_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A quadrature truncation estimate exceeded its tolerance; carries the estimate.
class accuracy_error : public std::runtime_error {
public:
    accuracy_error(const std::string& msg, double estimate)
        : std::runtime_error(msg), estimate_(estimate) {}

    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

} // namespace hbcs
