#pragma once

#include <stdexcept>
#include <string>

namespace koch {

// Raised when a construction needs the scaling factor p(m+1) to be
// expanding and the pattern fails the hypothesis |p(m+1)| > 1.
class NotContractingError : public std::domain_error {
public:
    explicit NotContractingError(double modulus)
        : std::domain_error("hypothesis |p(m+1)| > 1 violated: |p(m+1)| = " +
                            std::to_string(modulus)),
          modulus_(modulus) {}

    double modulus() const noexcept { return modulus_; }

private:
    double modulus_;
};

} // namespace koch
