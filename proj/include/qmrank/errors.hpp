#pragma once

#include <stdexcept>
#include <string>

namespace qmrank {

// Input lies outside a function's mathematical domain: non-quantum evaluation
// point, pole of a summand, invalid fraction data, determinant != 1, ...
class domain_error : public std::domain_error {
  public:
    explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

// A computation could not reach the requested accuracy within its configured
// term / refinement budget (divergence guard, too-small Im tau, ...).
class precision_error : public std::runtime_error {
  public:
    explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qmrank
