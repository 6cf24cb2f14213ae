#include "layerfield/bernoulli.hpp"

#include "layerfield/error.hpp"

namespace layerfield {

namespace {

using boost::multiprecision::cpp_int;

cpp_int binomial(std::size_t n, std::size_t k) {
    cpp_int c = 1;
    for (std::size_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

} // namespace

// sum_{j=0..m} C(m+1, j) B_j = 0 for m >= 1, B_0 = 1.
BernoulliTable::BernoulliTable(std::size_t max_index) {
    exact_.reserve(max_index + 1);
    exact_.emplace_back(1);
    for (std::size_t m = 1; m <= max_index; ++m) {
        Rational acc = 0;
        for (std::size_t j = 0; j < m; ++j) acc += Rational(binomial(m + 1, j)) * exact_[j];
        exact_.push_back(-acc / Rational(m + 1));
    }
    approx_.reserve(exact_.size());
    for (const auto& b : exact_) approx_.push_back(static_cast<double>(b));
}

const Rational& BernoulliTable::exact(std::size_t n) const {
    if (n >= exact_.size())
        throw CapabilityError("Bernoulli index " + std::to_string(n) + " beyond table capacity " +
                              std::to_string(max_index()));
    return exact_[n];
}

double BernoulliTable::value(std::size_t n) const {
    exact(n);
    return approx_[n];
}

const BernoulliTable& bernoulli_table() {
    static const BernoulliTable table(kMaxBernoulliIndex);
    return table;
}

Rational bernoulli(std::size_t n) { return bernoulli_table().exact(n); }

double bernoulli_value(std::size_t n) { return bernoulli_table().value(n); }

std::string to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

} // namespace layerfield
