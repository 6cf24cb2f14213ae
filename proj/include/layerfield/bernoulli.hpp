#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace layerfield {

using Rational = boost::multiprecision::cpp_rational;

/// Largest Bernoulli index held by the shared table.
inline constexpr std::size_t kMaxBernoulliIndex = 24;

/// Exact Bernoulli numbers B_0..B_n for the generating function
/// z / (e^z - 1), so B_1 = -1/2.
class BernoulliTable {
public:
    explicit BernoulliTable(std::size_t max_index);

    std::size_t max_index() const noexcept { return exact_.size() - 1; }
    /// Throws CapabilityError beyond max_index().
    const Rational& exact(std::size_t n) const;
    double value(std::size_t n) const;

private:
    std::vector<Rational> exact_;
    std::vector<double> approx_;
};

/// Table up to kMaxBernoulliIndex, built once on first use.
const BernoulliTable& bernoulli_table();

Rational bernoulli(std::size_t n);
double bernoulli_value(std::size_t n);

/// "p/q" with the sign on the numerator; integers print as "p".
std::string to_string(const Rational& q);

} // namespace layerfield
