#pragma once
// Exact arithmetic on short sums  sum_i c_i * sqrt(k_i)  with integer c_i and
// squarefree kernels k_i.
//
// sqrt(n) canonicalizes to a * sqrt(k) with n = a^2 k, k squarefree.  Square
// roots of distinct squarefree integers are linearly independent over the
// rationals, so such a sum vanishes iff every coefficient vanishes, and two
// sums are equal iff their canonical term lists agree.  This is what lets the
// solution counters decide sqrt(n)+sqrt(m) = sqrt(k)+sqrt(l) with no floating
// tolerance at all.

#include "divmom/arith.hpp"

#include <algorithm>
#include <array>
#include <cstddef>

namespace divmom {

struct SurdForm {
    // Canonical: kernels strictly increasing, coefficients nonzero.  Four
    // slots cover every use here (sums of at most four square roots).
    std::array<u64, 4> kernel{};
    std::array<i64, 4> coeff{};
    std::size_t n_terms = 0;

    bool is_zero() const { return n_terms == 0; }

    bool operator==(const SurdForm& o) const {
        if (n_terms != o.n_terms) return false;
        for (std::size_t i = 0; i < n_terms; ++i)
            if (kernel[i] != o.kernel[i] || coeff[i] != o.coeff[i]) return false;
        return true;
    }

    // Accumulate c * sqrt(a^2 * k); keeps the term list sorted and drops
    // cancelled kernels.
    void add_term(u64 k, i64 c) {
        if (c == 0) return;
        std::size_t pos = 0;
        while (pos < n_terms && kernel[pos] < k) ++pos;
        if (pos < n_terms && kernel[pos] == k) {
            coeff[pos] += c;
            if (coeff[pos] == 0) {
                for (std::size_t i = pos + 1; i < n_terms; ++i) {
                    kernel[i - 1] = kernel[i];
                    coeff[i - 1] = coeff[i];
                }
                --n_terms;
            }
            return;
        }
        for (std::size_t i = n_terms; i > pos; --i) {
            kernel[i] = kernel[i - 1];
            coeff[i] = coeff[i - 1];
        }
        kernel[pos] = k;
        coeff[pos] = c;
        ++n_terms;
    }
};

// sqrt(n) decomposed against sieved kernels; n must lie within the tables.
inline void surd_accumulate_sqrt(SurdForm& f, u64 n, i64 sign, const arith::DivisorTables& t) {
    u64 k = t.kernel[n];
    u64 a = isqrt(n / k);
    f.add_term(k, sign * static_cast<i64>(a));
}

// sqrt(n) + sqrt(m) in canonical form.
inline SurdForm surd_pair_sum(u64 n, u64 m, const arith::DivisorTables& t) {
    SurdForm f;
    surd_accumulate_sqrt(f, n, +1, t);
    surd_accumulate_sqrt(f, m, +1, t);
    return f;
}

} // namespace divmom
