#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "htgame/types.hpp"

namespace htgame {

// Kullback-Leibler divergence in bits, with the 0 log 0 = 0 convention.
// Returns +infinity exactly when some symbol has P(a) > 0 and Q(a) = 0.
double kl_divergence(const Pmf& p, const Pmf& q);

// Shannon entropy in bits.
double entropy(const Pmf& p);

// Generalized log-likelihood ratio statistic for the two-sample problem:
// D(P||U) + c D(Q||U) with U the length-weighted mixture of P and Q.
// Always finite (the mixture covers both supports) and zero iff P = Q.
struct GlrStatistic {
    double bits;
    Pmf mixture;
    double ratio;
};

GlrStatistic glr_statistic(const Pmf& p, const Pmf& q, double ratio);

// Both-types overload: the ratio is taken from the lengths (N over n).
GlrStatistic glr_statistic(const EmpiricalType& test, const EmpiricalType& training);

// Both-types overload with an explicit ratio, validated against N/n to 1e-12.
GlrStatistic glr_statistic(const EmpiricalType& test, const EmpiricalType& training,
                           double ratio);

// Mixed overloads convert the type to its empirical pmf first.
GlrStatistic glr_statistic(const EmpiricalType& test, const Pmf& training, double ratio);
GlrStatistic glr_statistic(const Pmf& test, const EmpiricalType& training, double ratio);

// Equivalent expression D(P||Q) - (1+c) D(U||Q), exposed separately so the
// identity with glr_statistic stays testable. Requires D(P||Q) finite to be
// meaningful; support mismatch propagates through the float arithmetic.
double glr_alternative_form(const Pmf& p, const Pmf& q, double ratio);

// Elementwise sum of counts; the induced pmf is the length-weighted mixture
// of the two input pmfs.
EmpiricalType concat_types(const EmpiricalType& a, const EmpiricalType& b);

constexpr std::int64_t default_enumeration_cap = 10'000'000;

// Number of types with denominator n over the given alphabet: C(n+k-1, k-1).
// Throws enumeration_too_large above the cap.
std::int64_t count_types(std::int64_t n, const Alphabet& alphabet,
                         std::int64_t cap = default_enumeration_cap);

// Streams every composition of n into |X| parts in lexicographic order,
// constant memory per item.
class TypeEnumerator {
public:
    TypeEnumerator(std::int64_t n, const Alphabet& alphabet,
                   std::int64_t cap = default_enumeration_cap);

    // Returns the next type, or nullopt once exhausted.
    std::optional<EmpiricalType> next();

private:
    std::vector<std::int64_t> counts_;
    std::int64_t n_;
    bool done_ = false;
    bool started_ = false;
};

void for_each_type(std::int64_t n, const Alphabet& alphabet,
                   const std::function<void(const EmpiricalType&)>& fn,
                   std::int64_t cap = default_enumeration_cap);

// log2 of the exact multinomial probability that an iid source with pmf p
// emits a sequence of type t. Returns -infinity when t uses a symbol
// outside p's support.
double type_class_log_prob(const EmpiricalType& t, const Pmf& p);

}  // namespace htgame
