#include "commodpi/rng.hpp"

namespace commodpi {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RngConfig RngConfig::substream(std::uint64_t i) const {
    return {seed, mix64(stream_id ^ mix64(i + 0x632BE59BD9B4E019ULL))};
}

NormalSource::NormalSource(const RngConfig& config)
    : engine_(mix64(config.seed) ^ mix64(config.stream_id + 0xD1B54A32D192ED03ULL)) {}

}  // namespace commodpi
