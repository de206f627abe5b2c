#ifndef OPERCALC_TEST_HELPERS_HPP
#define OPERCALC_TEST_HELPERS_HPP

#include <random>
#include <string>
#include <vector>

#include "opercalc/opercalc.hpp"

namespace testutil {

using namespace opercalc;

inline Rational random_rational(std::mt19937& rng, int num_range = 6, int den_range = 3) {
    std::uniform_int_distribution<long> num(-num_range, num_range);
    std::uniform_int_distribution<long> den(1, den_range);
    return Rational(num(rng), den(rng));
}

inline Polynomial random_polynomial(std::mt19937& rng, int max_degree, bool nonzero = false) {
    std::uniform_int_distribution<int> deg(0, max_degree);
    for (;;) {
        int d = deg(rng);
        std::vector<Rational> c(static_cast<size_t>(d) + 1);
        for (auto& x : c) x = random_rational(rng);
        Polynomial p(std::move(c));
        if (!nonzero || !p.is_zero()) return p;
    }
}

inline RationalFunction random_rf(std::mt19937& rng, int max_degree = 3) {
    return RationalFunction(random_polynomial(rng, max_degree),
                            random_polynomial(rng, max_degree, true));
}

inline RationalFunction rf(const std::string& s) { return parse_rf(s); }

inline WeightedDiffOp op_from_strings(const std::vector<std::string>& ascending) {
    std::vector<RationalFunction> c;
    for (const auto& s : ascending) c.push_back(parse_rf(s));
    int order = static_cast<int>(c.size()) - 1;
    return make_oper_op(order, std::move(c));
}

inline WeightedDiffOp random_oper_op(std::mt19937& rng, int order, int coeff_degree) {
    std::vector<RationalFunction> c;
    for (int k = 0; k < order; ++k) c.push_back(RationalFunction(random_polynomial(rng, coeff_degree)));
    c.push_back(RationalFunction(1));
    return make_oper_op(order, std::move(c));
}

/// Random SL operator assembled from random graded components w_2..w_n.
inline WeightedDiffOp random_sl_op(std::mt19937& rng, int order, int coeff_degree) {
    TensorComponents<RationalFunction> tc;
    tc.n = order;
    tc.components.assign(static_cast<size_t>(order) + 1, RationalFunction(0));
    tc.components[0] = RationalFunction(1);
    for (int j = 2; j <= order; ++j)
        tc.components[static_cast<size_t>(j)] = RationalFunction(random_polynomial(rng, coeff_degree));
    return recompose(tc);
}

inline RfMatrix rf_matrix(int rows, int cols, const std::vector<std::string>& entries) {
    std::vector<RationalFunction> v;
    for (const auto& s : entries) v.push_back(parse_rf(s));
    return RfMatrix(rows, cols, std::move(v));
}

inline RfMatrix random_invertible(std::mt19937& rng, int n, int max_degree = 1) {
    for (;;) {
        RfMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m.at(i, j) = RationalFunction(random_polynomial(rng, max_degree));
        if (!determinant(m).is_zero()) return m;
    }
}

} // namespace testutil

#endif
