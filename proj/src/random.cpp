#include "htgame/random.hpp"

namespace htgame {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace

SubstreamRng::SubstreamRng(std::uint64_t seed, std::uint64_t stream) {
    // Mix seed and stream index through splitmix64 so nearby streams land in
    // unrelated states.
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL + stream * 0xbf58476d1ce4e5b9ULL);
    for (auto& s : state_) s = splitmix64(x);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

std::uint64_t SubstreamRng::next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double SubstreamRng::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int SubstreamRng::sample(const Pmf& p) {
    const double u = next_unit();
    double acc = 0.0;
    for (int a = 0; a + 1 < p.size(); ++a) {
        acc += p[a];
        if (u < acc) return a;
    }
    return p.size() - 1;
}

}  // namespace htgame
