#include "commodpi/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "commodpi/errors.hpp"
#include "commodpi/parallel.hpp"

namespace commodpi {

namespace {

void check_grid(double horizon, int n_steps, const ModelParams& params) {
    params.validate();
    if (!(horizon > 0.0 && horizon <= params.t1))
        throw DomainError("horizon: must lie in (0, T1]");
    if (n_steps < 1) throw DomainError("n_steps: must be >= 1");
}

PathGrid empty_grid(const AugmentedState& start, double end_time, int n_steps) {
    PathGrid path;
    path.times.resize(static_cast<std::size_t>(n_steps) + 1);
    path.values.resize(path.times.size());
    const double h = (end_time - start.t) / n_steps;
    for (int i = 0; i <= n_steps; ++i) path.times[static_cast<std::size_t>(i)] = start.t + i * h;
    path.times.back() = end_time;
    path.values.front() = start;
    return path;
}

std::size_t draw_atom(const Prior& prior, double u) {
    double cumulative = 0.0;
    for (std::size_t i = 0; i + 1 < prior.size(); ++i) {
        cumulative += prior.weight(i);
        if (u < cumulative) return i;
    }
    return prior.size() - 1;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::vector<double> PathGrid::futures_prices() const {
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(),
                   [](const AugmentedState& s) { return std::exp(s.y); });
    return out;
}

PathGrid simulate_physical(const ThetaAtom& theta, const ModelParams& params, double horizon,
                           int n_steps, const RngConfig& rng) {
    check_grid(horizon, n_steps, params);
    PathGrid path = empty_grid(AugmentedState::initial(params), horizon, n_steps);
    const double h = horizon / n_steps;
    const double decay = std::exp(-theta.theta1 * h);
    const double shift = ou_cond_mean(theta, 0.0, h, params);  // mean given Y_s = 0
    const double sd = std::sqrt(ou_cond_var(theta, h, params));
    NormalSource source(rng);
    for (std::size_t i = 1; i < path.values.size(); ++i) {
        const auto& prev = path.values[i - 1];
        auto& next = path.values[i];
        next.t = path.times[i];
        next.y = decay * prev.y + shift + sd * source.normal();
        next.p = prev.p + 0.5 * h * (prev.y + next.y);
        next.q = prev.q + 0.5 * h * (prev.y * prev.y + next.y * next.y);
    }
    return path;
}

std::vector<DrawnPath> simulate_physical_with_prior(const Prior& prior, const ModelParams& params,
                                                    double horizon, int n_steps, int n_paths,
                                                    const RngConfig& rng) {
    check_grid(horizon, n_steps, params);
    if (n_paths < 1) throw DomainError("n_paths: must be >= 1");
    std::vector<DrawnPath> out(static_cast<std::size_t>(n_paths));
    parallel_for(out.size(), [&](std::size_t i) {
        const RngConfig stream = rng.substream(i);
        NormalSource picker(stream.substream(0));
        const ThetaAtom theta = prior.atom(draw_atom(prior, picker.uniform()));
        out[i] = DrawnPath{theta, simulate_physical(theta, params, horizon, n_steps,
                                                    stream.substream(1))};
    });
    return out;
}

namespace {

// One exact (Y, P) step of length h under the pricing measure plus the trapezoid Q update.
class RiskNeutralStepper {
public:
    RiskNeutralStepper(const ModelParams& params, double h, const RngConfig& rng)
        : h_(h),
          sigma_(params.sigma),
          sqrt_h_(std::sqrt(h)),
          area_sd_(std::sqrt(h * h * h / 12.0)),
          source_(rng) {}

    AugmentedState step(const AugmentedState& prev, double next_t) {
        // (W_h, int_0^h W) ~ N(0, [[h, h^2/2], [h^2/2, h^3/3]]) via its Cholesky factor.
        const double dw = sqrt_h_ * source_.normal();
        const double area = 0.5 * h_ * dw + area_sd_ * source_.normal();
        const double s2 = sigma_ * sigma_;
        AugmentedState next;
        next.t = next_t;
        next.y = prev.y - 0.5 * s2 * h_ + sigma_ * dw;
        next.p = prev.p + prev.y * h_ - 0.25 * s2 * h_ * h_ + sigma_ * area;
        next.q = prev.q + 0.5 * h_ * (prev.y * prev.y + next.y * next.y);
        return next;
    }

private:
    double h_;
    double sigma_;
    double sqrt_h_;
    double area_sd_;
    NormalSource source_;
};

void check_continuation(const AugmentedState& start, double end_time, const ModelParams& params,
                        int n_steps) {
    params.validate();
    if (!(end_time > start.t)) throw DomainError("end_time: must exceed the start time");
    if (n_steps < 1) throw DomainError("n_steps: must be >= 1");
}

}  // namespace

PathGrid simulate_risk_neutral_from(const AugmentedState& start, double end_time,
                                    const ModelParams& params, int n_steps,
                                    const RngConfig& rng) {
    check_continuation(start, end_time, params, n_steps);
    PathGrid path = empty_grid(start, end_time, n_steps);
    RiskNeutralStepper stepper(params, (end_time - start.t) / n_steps, rng);
    for (std::size_t i = 1; i < path.values.size(); ++i)
        path.values[i] = stepper.step(path.values[i - 1], path.times[i]);
    return path;
}

AugmentedState simulate_risk_neutral_terminal(const AugmentedState& start, double end_time,
                                              const ModelParams& params, int n_steps,
                                              const RngConfig& rng) {
    check_continuation(start, end_time, params, n_steps);
    const double h = (end_time - start.t) / n_steps;
    RiskNeutralStepper stepper(params, h, rng);
    AugmentedState state = start;
    for (int i = 1; i <= n_steps; ++i)
        state = stepper.step(state, i == n_steps ? end_time : start.t + i * h);
    return state;
}

PathGrid simulate_risk_neutral(const ModelParams& params, double horizon, int n_steps,
                               const RngConfig& rng) {
    check_grid(horizon, n_steps, params);
    return simulate_risk_neutral_from(AugmentedState::initial(params), horizon, params, n_steps,
                                      rng);
}

double accrue_gains(std::span<const double> times, std::span<const double> futures_path,
                    std::span<const double> strategy, const ModelParams& params) {
    if (futures_path.size() != times.size() || strategy.size() != times.size())
        throw ContractError("accrue_gains: times, futures and strategy must share the grid");
    double gains = 0.0;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        const double dt = times[i + 1] - times[i];
        gains = gains * std::exp(params.r * dt) +
                strategy[i] * (futures_path[i + 1] - futures_path[i]) / futures_path[i];
    }
    return gains;
}

void write_path_csv(std::ostream& out, const PathGrid& path) {
    out << "t,y,p,q\n";
    for (const auto& s : path.values)
        out << fmt(s.t) << ',' << fmt(s.y) << ',' << fmt(s.p) << ',' << fmt(s.q) << '\n';
}

PathGrid read_path_csv(std::istream& in) {
    PathGrid path;
    std::string line;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != "t,y,p,q")
                throw ContractError("path csv: expected header t,y,p,q at line " +
                                    std::to_string(line_no));
            header_seen = true;
            continue;
        }
        std::istringstream fields(line);
        AugmentedState s;
        char c1 = 0, c2 = 0, c3 = 0;
        if (!(fields >> s.t >> c1 >> s.y >> c2 >> s.p >> c3 >> s.q) || c1 != ',' || c2 != ',' ||
            c3 != ',')
            throw ContractError("path csv: malformed row at line " + std::to_string(line_no));
        path.times.push_back(s.t);
        path.values.push_back(s);
    }
    if (path.values.empty()) throw ContractError("path csv: no rows");
    for (std::size_t i = 1; i < path.times.size(); ++i)
        if (!(path.times[i] > path.times[i - 1]))
            throw ContractError("path csv: times must be strictly increasing");
    return path;
}

}  // namespace commodpi
