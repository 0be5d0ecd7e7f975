#pragma once

#include <array>
#include <cstdint>

namespace wfrec {

// Philox4x64 counter-based generator, 10 rounds. Pure function of
// (counter, key), so any path can own an independent, reproducible stream
// without jump-ahead bookkeeping: stream i uses counter word 1 = i and
// advances counter word 0 block by block.
struct Philox4x64 {
    static constexpr int kRounds = 10;

    // One 256-bit block for the given counter/key.
    static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> ctr,
                                              std::array<std::uint64_t, 2> key);
};

// Standard normal stream for one simulation path, derived deterministically
// from (master_seed, path_index): key = {master_seed, salt}, counter =
// {block_index, path_index, 0, 0}. Each block's four 64-bit words are mapped
// to four normals by Box-Muller on two uniform pairs; u1 is taken in (0,1]
// so log(u1) is always finite.
class NormalStream {
  public:
    NormalStream(std::uint64_t master_seed, std::uint64_t path_index);

    double next();

  private:
    void refill();

    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> ctr_;
    std::array<double, 4> buf_;
    int pos_;
};

}  // namespace wfrec
