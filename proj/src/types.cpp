#include "htgame/types.hpp"

#include <cmath>
#include <numeric>

namespace htgame {

Pmf::Pmf(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.size() < 2) throw invalid_distribution("pmf needs at least 2 entries");
    double sum = 0.0;
    for (double p : probs_) {
        if (!std::isfinite(p) || p < 0.0) {
            throw invalid_distribution("pmf entries must be finite and nonnegative");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > normalization_tolerance) {
        throw invalid_distribution("pmf entries sum to " + std::to_string(sum) +
                                   ", outside tolerance of 1");
    }
    for (double& p : probs_) p /= sum;
}

Pmf Pmf::uniform(const Alphabet& alphabet) {
    return Pmf(std::vector<double>(static_cast<std::size_t>(alphabet.size()),
                                   1.0 / alphabet.size()));
}

bool Pmf::full_support() const {
    for (double p : probs_) {
        if (p <= 0.0) return false;
    }
    return true;
}

EmpiricalType::EmpiricalType(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {
    if (counts_.size() < 2) throw invalid_distribution("type needs at least 2 entries");
    length_ = 0;
    for (std::int64_t c : counts_) {
        if (c < 0) throw invalid_distribution("type counts must be nonnegative");
        length_ += c;
    }
    if (length_ <= 0) throw invalid_distribution("type must have positive length");
}

EmpiricalType::EmpiricalType(std::vector<std::int64_t> counts, std::int64_t length)
    : EmpiricalType(std::move(counts)) {
    if (length_ != length) {
        throw invalid_distribution("type counts sum to " + std::to_string(length_) +
                                   ", expected length " + std::to_string(length));
    }
}

Pmf EmpiricalType::to_pmf() const {
    std::vector<double> probs(counts_.size());
    for (std::size_t a = 0; a < counts_.size(); ++a) {
        probs[a] = static_cast<double>(counts_[a]) / static_cast<double>(length_);
    }
    return Pmf(std::move(probs));
}

Sequence::Sequence(std::vector<int> symbols, Alphabet alphabet)
    : symbols_(std::move(symbols)), alphabet_(alphabet) {
    if (symbols_.empty()) throw invalid_distribution("sequence must be nonempty");
    for (int s : symbols_) {
        if (s < 0 || s >= alphabet_.size()) {
            throw invalid_distribution("sequence symbol " + std::to_string(s) +
                                       " outside alphabet of size " +
                                       std::to_string(alphabet_.size()));
        }
    }
}

EmpiricalType Sequence::type() const {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(alphabet_.size()), 0);
    for (int s : symbols_) counts[static_cast<std::size_t>(s)] += 1;
    return EmpiricalType(std::move(counts), length());
}

}  // namespace htgame
