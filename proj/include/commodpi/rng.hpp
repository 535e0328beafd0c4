#pragma once

#include <cstdint>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace commodpi {

/// Identifies one reproducible random stream. Equal configs give bit-identical draws.
struct RngConfig {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    /// Child stream i of this stream; used to give every Monte Carlo path its own
    /// generator so results do not depend on execution order.
    [[nodiscard]] RngConfig substream(std::uint64_t i) const;

    friend bool operator==(const RngConfig&, const RngConfig&) = default;
};

/// SplitMix64 finalizer.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x);

/// Standard normal and uniform draws from a single stream.
class NormalSource {
public:
    explicit NormalSource(const RngConfig& config);

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }

private:
    boost::random::mt19937_64 engine_;
    boost::random::normal_distribution<double> normal_;
    boost::random::uniform_01<double> uniform_;
};

}  // namespace commodpi
