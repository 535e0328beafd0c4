#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "commodpi/model.hpp"
#include "commodpi/rng.hpp"

namespace commodpi {

/// A path of the augmented state on a uniform grid starting at t = 0.
struct PathGrid {
    std::vector<double> times;
    std::vector<AugmentedState> values;

    [[nodiscard]] std::size_t size() const { return times.size(); }
    [[nodiscard]] const AugmentedState& terminal() const { return values.back(); }
    /// F_t = exp(Y_t) along the path.
    [[nodiscard]] std::vector<double> futures_prices() const;
};

struct DrawnPath {
    ThetaAtom theta;
    PathGrid path;
};

/// Y under the physical measure for a fixed theta: exact Gaussian OU transitions,
/// P and Q by the trapezoid rule on the same grid. Requires horizon in (0, T1].
[[nodiscard]] PathGrid simulate_physical(const ThetaAtom& theta, const ModelParams& params,
                                         double horizon, int n_steps, const RngConfig& rng);

/// Draws theta from the prior independently per path, then simulates it.
/// Path i uses rng.substream(i); its atom is drawn from that stream first.
[[nodiscard]] std::vector<DrawnPath> simulate_physical_with_prior(const Prior& prior,
                                                                  const ModelParams& params,
                                                                  double horizon, int n_steps,
                                                                  int n_paths,
                                                                  const RngConfig& rng);

/// Y = log F0 - sigma^2 t / 2 + sigma W under the pricing measure. (Y, P) steps are
/// drawn from their exact joint Gaussian law; Q is accumulated by trapezoid.
[[nodiscard]] PathGrid simulate_risk_neutral(const ModelParams& params, double horizon,
                                             int n_steps, const RngConfig& rng);

/// Same dynamics started from an arbitrary state at start.t and run to end_time.
/// Grid times are start.t + i (end_time - start.t) / n_steps.
[[nodiscard]] PathGrid simulate_risk_neutral_from(const AugmentedState& start, double end_time,
                                                  const ModelParams& params, int n_steps,
                                                  const RngConfig& rng);

/// Terminal state of simulate_risk_neutral_from without storing the path; consumes
/// the stream identically, so it equals that path's terminal() bit for bit.
[[nodiscard]] AugmentedState simulate_risk_neutral_terminal(const AugmentedState& start,
                                                            double end_time,
                                                            const ModelParams& params,
                                                            int n_steps, const RngConfig& rng);

/// Discretized self-financing gains G_{i+1} = G_i e^{r dt_i} + pi_i (F_{i+1} - F_i) / F_i,
/// G_0 = 0; pi_i is the money amount held over (t_i, t_{i+1}]. All three
/// sequences share the grid; the last strategy entry is unused.
[[nodiscard]] double accrue_gains(std::span<const double> times,
                                  std::span<const double> futures_path,
                                  std::span<const double> strategy, const ModelParams& params);

/// CSV with header `t,y,p,q`.
void write_path_csv(std::ostream& out, const PathGrid& path);
/// Reads the format written by write_path_csv; throws ContractError on malformed input.
[[nodiscard]] PathGrid read_path_csv(std::istream& in);

}  // namespace commodpi
