#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace htgame {

// Error hierarchy. CLI maps these onto exit codes; library code throws.

struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct alphabet_mismatch : config_error {
    using config_error::config_error;
};

struct invalid_ratio : config_error {
    using config_error::config_error;
};

struct invalid_distribution : config_error {
    using config_error::config_error;
};

struct enumeration_too_large : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct infeasible_transport : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct no_convergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Finite symbol alphabet; symbols are the indices 0..size-1.
class Alphabet {
public:
    explicit Alphabet(int size) : size_(size) {
        if (size < 2) throw config_error("alphabet size must be at least 2");
    }

    int size() const { return size_; }

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.size_ == b.size_; }
    friend bool operator!=(const Alphabet& a, const Alphabet& b) { return !(a == b); }

private:
    int size_;
};

// Point on the probability simplex. Construction renormalizes when the sum
// is within 1e-9 of one and rejects otherwise; entries must be nonnegative.
class Pmf {
public:
    static constexpr double normalization_tolerance = 1e-9;

    explicit Pmf(std::vector<double> probs);

    static Pmf uniform(const Alphabet& alphabet);

    int size() const { return static_cast<int>(probs_.size()); }
    double operator[](int a) const { return probs_[static_cast<std::size_t>(a)]; }
    const std::vector<double>& probs() const { return probs_; }

    bool full_support() const;

    friend bool operator==(const Pmf& a, const Pmf& b) { return a.probs_ == b.probs_; }

private:
    std::vector<double> probs_;
};

// Integer symbol counts of a sequence, together with the sequence length.
class EmpiricalType {
public:
    explicit EmpiricalType(std::vector<std::int64_t> counts);
    EmpiricalType(std::vector<std::int64_t> counts, std::int64_t length);

    int size() const { return static_cast<int>(counts_.size()); }
    std::int64_t length() const { return length_; }
    std::int64_t count(int a) const { return counts_[static_cast<std::size_t>(a)]; }
    const std::vector<std::int64_t>& counts() const { return counts_; }

    Pmf to_pmf() const;

    friend bool operator==(const EmpiricalType& a, const EmpiricalType& b) {
        return a.counts_ == b.counts_;
    }

private:
    std::vector<std::int64_t> counts_;
    std::int64_t length_;
};

// A concrete symbol sequence drawn from an alphabet.
class Sequence {
public:
    Sequence(std::vector<int> symbols, Alphabet alphabet);

    const Alphabet& alphabet() const { return alphabet_; }
    std::int64_t length() const { return static_cast<std::int64_t>(symbols_.size()); }
    int operator[](std::int64_t i) const { return symbols_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& symbols() const { return symbols_; }

    EmpiricalType type() const;

private:
    std::vector<int> symbols_;
    Alphabet alphabet_;
};

inline void require_same_size(int a, int b, const char* what) {
    if (a != b) {
        throw alphabet_mismatch(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

}  // namespace htgame
