#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "commodpi/density.hpp"
#include "commodpi/futures_pricing.hpp"
#include "commodpi/indifference.hpp"
#include "commodpi/model.hpp"

namespace commodpi::cli {

using nlohmann::json;

/// Invalid configuration; the message starts with the field path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Axis {
    double lo = 0.0;
    double hi = 0.0;
    int n = 1;

    [[nodiscard]] double at(int i) const;
};

struct SimulateBlock {
    bool physical = true;
    double horizon = 1.0;
    int n_steps = 250;
    int n_paths = 1;
};

struct FilterBlock {
    double horizon = 1.0;
    int n_steps = 250;
    std::optional<std::string> path_file;
};

struct FuturesBlock {
    double t = 0.0;
    double maturity = 1.0;
    std::vector<double> f_t;
    std::vector<double> vol_breaks;
    std::vector<double> vol_values;
    std::string payoff_kind;
    double strike = 1.0;
    double cap = 0.0;
    int nodes = 0;

    [[nodiscard]] FuturesPayoff payoff() const;
    [[nodiscard]] VolCurve vol() const;
};

struct IndifferenceBlock {
    double maturity = 1.0;
    double gamma = 1.0;
    McConfig mc;
    bool hedge = false;
};

struct DensityBlock {
    double t = 1.0;
    Axis y, p, q;
    InversionConfig inversion;
    TransformForm form = TransformForm::Derived;
};

struct CumulantsBlock {
    std::vector<double> times;
    DiscreteLaw speed;
    DiscreteLaw level;
};

/// Which blocks a subcommand reads; others are still checked for unknown keys.
enum class Command { Simulate, Filter, PriceFutures, PriceIndifference, Density, Cumulants };

struct RunConfig {
    std::uint64_t seed = 1;
    ModelParams model;
    std::optional<Prior> prior;
    std::optional<PayoffSpec> payoff;
    SimulateBlock simulate;
    FilterBlock filter;
    FuturesBlock futures;
    IndifferenceBlock indifference;
    DensityBlock density;
    CumulantsBlock cumulants;

    /// The configuration with every default resolved; feeding it back yields the same run.
    json effective;
};

/// Validates `input` for `command` and resolves defaults. `seed_override` replaces
/// the config's seed. Throws ConfigError with a field-path message.
[[nodiscard]] RunConfig parse_config(const json& input, Command command,
                                     std::optional<std::uint64_t> seed_override);

}  // namespace commodpi::cli
