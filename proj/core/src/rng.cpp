#include "wfrec/rng.hpp"

#include <cmath>

namespace wfrec {
namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

// Key material separating this stream family from any other use of the same
// master seed.
constexpr std::uint64_t kStreamSalt = 0x77666265636D6331ull;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                    std::uint64_t& lo) {
    const unsigned __int128 prod = (unsigned __int128)a * b;
    hi = (std::uint64_t)(prod >> 64);
    lo = (std::uint64_t)prod;
}

// (r >> 11) leaves 53 uniform bits; +1 shifts the lattice into (0,1].
inline double to_unit_open0(std::uint64_t r) {
    return ((r >> 11) + 1) * 0x1.0p-53;
}
// Plain 53-bit mantissa in [0,1).
inline double to_unit_open1(std::uint64_t r) { return (r >> 11) * 0x1.0p-53; }

}  // namespace

std::array<std::uint64_t, 4> Philox4x64::block(std::array<std::uint64_t, 4> ctr,
                                               std::array<std::uint64_t, 2> key) {
    for (int round = 0; round < kRounds; ++round) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

NormalStream::NormalStream(std::uint64_t master_seed, std::uint64_t path_index)
    : key_{master_seed, kStreamSalt}, ctr_{0, path_index, 0, 0}, pos_(4) {}

void NormalStream::refill() {
    const std::array<std::uint64_t, 4> words = Philox4x64::block(ctr_, key_);
    ctr_[0] += 1;  // next block of this stream
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (int pair = 0; pair < 2; ++pair) {
        const double u1 = to_unit_open0(words[2 * pair]);
        const double u2 = to_unit_open1(words[2 * pair + 1]);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        buf_[2 * pair] = radius * std::cos(two_pi * u2);
        buf_[2 * pair + 1] = radius * std::sin(two_pi * u2);
    }
    pos_ = 0;
}

double NormalStream::next() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
}

}  // namespace wfrec
