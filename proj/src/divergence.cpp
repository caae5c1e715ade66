#include "htgame/divergence.hpp"

#include <cmath>
#include <limits>

namespace htgame {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double validated_ratio(double ratio) {
    if (!(ratio > 0.0) || !std::isfinite(ratio)) {
        throw invalid_ratio("length ratio must be positive and finite, got " +
                            std::to_string(ratio));
    }
    return ratio;
}

}  // namespace

double kl_divergence(const Pmf& p, const Pmf& q) {
    require_same_size(p.size(), q.size(), "kl_divergence");
    double bits = 0.0;
    for (int a = 0; a < p.size(); ++a) {
        const double pa = p[a];
        if (pa == 0.0) continue;
        if (q[a] == 0.0) return kInf;
        bits += pa * std::log2(pa / q[a]);
    }
    return bits;
}

double entropy(const Pmf& p) {
    double bits = 0.0;
    for (int a = 0; a < p.size(); ++a) {
        if (p[a] > 0.0) bits -= p[a] * std::log2(p[a]);
    }
    return bits;
}

GlrStatistic glr_statistic(const Pmf& p, const Pmf& q, double ratio) {
    require_same_size(p.size(), q.size(), "glr_statistic");
    validated_ratio(ratio);
    const double wp = 1.0 / (1.0 + ratio);
    const double wq = ratio / (1.0 + ratio);
    std::vector<double> mix(static_cast<std::size_t>(p.size()));
    for (int a = 0; a < p.size(); ++a) {
        mix[static_cast<std::size_t>(a)] = wp * p[a] + wq * q[a];
    }
    Pmf u(std::move(mix));
    const double bits = kl_divergence(p, u) + ratio * kl_divergence(q, u);
    return GlrStatistic{bits, std::move(u), ratio};
}

GlrStatistic glr_statistic(const EmpiricalType& test, const EmpiricalType& training) {
    const double ratio =
        static_cast<double>(training.length()) / static_cast<double>(test.length());
    return glr_statistic(test.to_pmf(), training.to_pmf(), ratio);
}

GlrStatistic glr_statistic(const EmpiricalType& test, const EmpiricalType& training,
                           double ratio) {
    const double implied =
        static_cast<double>(training.length()) / static_cast<double>(test.length());
    if (std::abs(ratio - implied) > 1e-12 * std::max(1.0, implied)) {
        throw invalid_ratio("ratio " + std::to_string(ratio) +
                            " does not match type lengths (" + std::to_string(implied) + ")");
    }
    return glr_statistic(test.to_pmf(), training.to_pmf(), implied);
}

GlrStatistic glr_statistic(const EmpiricalType& test, const Pmf& training, double ratio) {
    return glr_statistic(test.to_pmf(), training, ratio);
}

GlrStatistic glr_statistic(const Pmf& test, const EmpiricalType& training, double ratio) {
    return glr_statistic(test, training.to_pmf(), ratio);
}

double glr_alternative_form(const Pmf& p, const Pmf& q, double ratio) {
    require_same_size(p.size(), q.size(), "glr_alternative_form");
    validated_ratio(ratio);
    const double wp = 1.0 / (1.0 + ratio);
    const double wq = ratio / (1.0 + ratio);
    std::vector<double> mix(static_cast<std::size_t>(p.size()));
    for (int a = 0; a < p.size(); ++a) {
        mix[static_cast<std::size_t>(a)] = wp * p[a] + wq * q[a];
    }
    Pmf u(std::move(mix));
    return kl_divergence(p, q) - (1.0 + ratio) * kl_divergence(u, q);
}

EmpiricalType concat_types(const EmpiricalType& a, const EmpiricalType& b) {
    require_same_size(a.size(), b.size(), "concat_types");
    std::vector<std::int64_t> counts(static_cast<std::size_t>(a.size()));
    for (int i = 0; i < a.size(); ++i) {
        counts[static_cast<std::size_t>(i)] = a.count(i) + b.count(i);
    }
    return EmpiricalType(std::move(counts), a.length() + b.length());
}

std::int64_t count_types(std::int64_t n, const Alphabet& alphabet, std::int64_t cap) {
    // C(n+k-1, k-1) by incremental multiplication; the running value is the
    // binomial C(n+i, i), integral at every step, and can only grow.
    const int k = alphabet.size();
    std::int64_t exact = 1;
    for (int i = 1; i <= k - 1; ++i) {
        exact = exact * (n + i) / i;
        if (exact > cap) {
            throw enumeration_too_large("type enumeration of size >= " +
                                        std::to_string(exact) + " exceeds cap " +
                                        std::to_string(cap));
        }
    }
    return exact;
}

TypeEnumerator::TypeEnumerator(std::int64_t n, const Alphabet& alphabet, std::int64_t cap)
    : counts_(static_cast<std::size_t>(alphabet.size()), 0), n_(n) {
    if (n <= 0) throw invalid_distribution("type length must be positive");
    count_types(n, alphabet, cap);
    counts_.back() = n;
}

std::optional<EmpiricalType> TypeEnumerator::next() {
    if (done_) return std::nullopt;
    if (!started_) {
        started_ = true;
        return EmpiricalType(counts_, n_);
    }
    // Advance to the next composition in lexicographic order: bump the
    // rightmost position that has mass to its right, move the remainder
    // to the tail.
    const std::size_t k = counts_.size();
    std::int64_t suffix = 0;
    for (std::size_t i = k; i-- > 1;) {
        suffix += counts_[i];
        if (suffix > 0) {
            counts_[i - 1] += 1;
            for (std::size_t j = i; j < k; ++j) counts_[j] = 0;
            counts_[k - 1] = suffix - 1;
            return EmpiricalType(counts_, n_);
        }
    }
    done_ = true;
    return std::nullopt;
}

void for_each_type(std::int64_t n, const Alphabet& alphabet,
                   const std::function<void(const EmpiricalType&)>& fn, std::int64_t cap) {
    TypeEnumerator stream(n, alphabet, cap);
    while (auto t = stream.next()) fn(*t);
}

double type_class_log_prob(const EmpiricalType& t, const Pmf& p) {
    require_same_size(t.size(), p.size(), "type_class_log_prob");
    constexpr double ln2 = 0.693147180559945309417232121458;
    double log2_coeff = std::lgamma(static_cast<double>(t.length()) + 1.0) / ln2;
    double log2_prob = 0.0;
    for (int a = 0; a < t.size(); ++a) {
        const std::int64_t c = t.count(a);
        if (c == 0) continue;
        if (p[a] == 0.0) return -kInf;
        log2_coeff -= std::lgamma(static_cast<double>(c) + 1.0) / ln2;
        log2_prob += static_cast<double>(c) * std::log2(p[a]);
    }
    return log2_coeff + log2_prob;
}

}  // namespace htgame
