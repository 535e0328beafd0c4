#include "commodpi/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "commodpi/cumulants.hpp"
#include "commodpi/errors.hpp"
#include "commodpi/filtering.hpp"
#include "commodpi/parallel.hpp"
#include "commodpi/simulate.hpp"
#include "config.hpp"

namespace commodpi::cli {

namespace {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Subcommand {
    const char* name;
    Command command;
    const char* help;
};

constexpr Subcommand kSubcommands[] = {
    {"simulate", Command::Simulate, "Simulate futures paths and their augmented state"},
    {"filter", Command::Filter, "Filter the hidden parameters along a path"},
    {"price-futures", Command::PriceFutures, "Price a derivative on the futures price"},
    {"price-indifference", Command::PriceIndifference,
     "Indifference price (and optionally hedge) of a spot derivative"},
    {"density", Command::Density, "Density of (Y, P, Q) on a grid"},
    {"cumulants", Command::Cumulants, "Cumulants of the log futures price"},
};

double finite(double x, const char* what) {
    if (!std::isfinite(x)) throw NumericalError(std::string("non-finite ") + what);
    return x;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void check_csv_finite(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::string lower = line;
        std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) {
            return static_cast<char>(std::tolower(c));
        });
        // The asymptotic cumulant row is labeled "inf" in its first column only.
        const auto comma = lower.find(',');
        const std::string rest = comma == std::string::npos ? lower : lower.substr(comma + 1);
        if (rest.find("nan") != std::string::npos || rest.find("inf") != std::string::npos)
            throw NumericalError("non-finite value in output");
    }
}

json read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file `" + path + "`");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

RngConfig rng_of(const RunConfig& cfg) { return {cfg.seed, 0}; }

void run_simulate(const RunConfig& cfg, std::ostream& out) {
    const auto& b = cfg.simulate;
    out << "t,y,p,q\n";
    if (b.physical) {
        const auto paths = simulate_physical_with_prior(*cfg.prior, cfg.model, b.horizon, b.n_steps,
                                                        b.n_paths, rng_of(cfg));
        for (std::size_t i = 0; i < paths.size(); ++i) {
            out << "# path " << i << " theta0=" << fmt(paths[i].theta.theta0)
                << " theta1=" << fmt(paths[i].theta.theta1) << '\n';
            std::ostringstream rows;
            write_path_csv(rows, paths[i].path);
            out << rows.str().substr(rows.str().find('\n') + 1);
        }
        return;
    }
    std::vector<PathGrid> paths(static_cast<std::size_t>(b.n_paths));
    parallel_for(paths.size(), [&](std::size_t i) {
        paths[i] = simulate_risk_neutral(cfg.model, b.horizon, b.n_steps, rng_of(cfg).substream(i));
    });
    for (std::size_t i = 0; i < paths.size(); ++i) {
        out << "# path " << i << '\n';
        std::ostringstream rows;
        write_path_csv(rows, paths[i]);
        out << rows.str().substr(rows.str().find('\n') + 1);
    }
}

void run_filter(const RunConfig& cfg, std::ostream& out) {
    PathGrid path;
    if (cfg.filter.path_file) {
        std::ifstream in(*cfg.filter.path_file);
        if (!in) throw IoError("cannot read path file `" + *cfg.filter.path_file + "`");
        path = read_path_csv(in);
    } else {
        auto drawn = simulate_physical_with_prior(*cfg.prior, cfg.model, cfg.filter.horizon,
                                                  cfg.filter.n_steps, 1, rng_of(cfg));
        out << "# theta0=" << fmt(drawn[0].theta.theta0)
            << " theta1=" << fmt(drawn[0].theta.theta1) << '\n';
        path = std::move(drawn[0].path);
    }
    const auto posteriors = filter_along_path(*cfg.prior, path, cfg.model);
    write_filter_csv(out, path.times, posteriors);
}

void run_price_futures(const RunConfig& cfg, std::ostream& out) {
    const auto& b = cfg.futures;
    const FuturesPayoff payoff = b.payoff();
    const VolCurve vol = b.vol();
    out << "t,f,price,delta\n";
    for (double f : b.f_t) {
        const double price = price_futures_derivative(payoff, b.t, f, b.maturity, vol, cfg.model.r,
                                                      b.nodes);
        const double delta = b.t < b.maturity
                                 ? delta_futures_derivative(payoff, b.t, f, b.maturity, vol,
                                                            cfg.model.r, b.nodes)
                                 : 0.0;
        out << fmt(b.t) << ',' << fmt(f) << ',' << fmt(price) << ',' << fmt(delta) << '\n';
    }
}

json run_price_indifference(const RunConfig& cfg) {
    const auto& b = cfg.indifference;
    const auto result =
        indifference_price(*cfg.payoff, b.maturity, b.gamma, *cfg.prior, cfg.model, b.mc);
    json doc;
    doc["price"] = finite(result.price, "price");
    doc["std_error"] = finite(result.std_error, "std_error");
    doc["gamma"] = b.gamma;
    doc["n_paths"] = b.mc.n_paths;
    if (b.hedge) {
        const auto hedge = optimal_hedge(AugmentedState::initial(cfg.model), *cfg.payoff,
                                         b.maturity, b.gamma, *cfg.prior, cfg.model, b.mc);
        doc["hedge"] = finite(hedge.hedge, "hedge");
        doc["hedge_std_error"] = finite(hedge.hedge_se, "hedge_std_error");
        doc["hedge_total"] = finite(hedge.total, "hedge_total");
        doc["hedge_total_std_error"] = finite(hedge.total_se, "hedge_total_std_error");
        doc["investment"] = finite(hedge.investment, "investment");
    }
    doc["config"] = cfg.effective;
    return doc;
}

void run_density(const RunConfig& cfg, std::ostream& out) {
    const auto& b = cfg.density;
    const std::size_t ny = static_cast<std::size_t>(b.y.n), np = static_cast<std::size_t>(b.p.n),
                      nq = static_cast<std::size_t>(b.q.n);
    std::vector<DensityPoint> points(ny * np * nq);
    parallel_for(points.size(), [&](std::size_t idx) {
        const int k = static_cast<int>(idx % nq);
        const int j = static_cast<int>((idx / nq) % np);
        const int i = static_cast<int>(idx / (nq * np));
        DensityPoint& pt = points[idx];
        pt.y = b.y.at(i);
        pt.p = b.p.at(j);
        pt.q = b.q.at(k);
        pt.phi = phi(b.t, pt.y, pt.p, pt.q, cfg.model, b.inversion, b.form);
    });
    write_density_csv(out, points);
}

void run_cumulants(const RunConfig& cfg, std::ostream& out) {
    const auto& b = cfg.cumulants;
    std::vector<CumulantRow> rows;
    for (double t : b.times) rows.push_back({t, cumulants_from_prior(*cfg.prior, t, cfg.model)});
    const auto k = cumulants_asymptotic(b.speed, b.level, cfg.model, 4);
    write_cumulants_csv(out, rows, Cumulants{k[0], k[1], k[2], k[3]});
}

std::string execute(const RunConfig& cfg, Command command) {
    std::ostringstream out;
    if (command == Command::PriceIndifference) {
        out << run_price_indifference(cfg).dump(2) << '\n';
        return out.str();
    }
    out << "# config: " << cfg.effective.dump() << '\n';
    switch (command) {
        case Command::Simulate: run_simulate(cfg, out); break;
        case Command::Filter: run_filter(cfg, out); break;
        case Command::PriceFutures: run_price_futures(cfg, out); break;
        case Command::Density: run_density(cfg, out); break;
        case Command::Cumulants: run_cumulants(cfg, out); break;
        case Command::PriceIndifference: break;
    }
    check_csv_finite(out.str());
    return out.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Commodity futures and spot derivatives under partial information", "commodpi"};
    app.require_subcommand(1);
    std::string config_path, out_path;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::vector<std::pair<CLI::App*, Command>> subs;
    std::vector<CLI::Option*> seed_options;
    for (const auto& sc : kSubcommands) {
        CLI::App* sub = app.add_subcommand(sc.name, sc.help);
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        seed_options.push_back(sub->add_option("--seed", seed, "Override the config seed"));
        sub->add_option("--out", out_path, "Output file (default: standard output)");
        sub->add_option("--threads", threads, "Maximum worker threads")
            ->check(CLI::PositiveNumber);
        subs.emplace_back(sub, sc.command);
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    Command command = Command::Simulate;
    bool seed_given = false;
    for (std::size_t i = 0; i < subs.size(); ++i)
        if (subs[i].first->parsed()) {
            command = subs[i].second;
            seed_given = seed_options[i]->count() > 0;
        }

    try {
        if (threads > 0) set_thread_count(threads);
        const RunConfig cfg = parse_config(read_config(config_path), command,
                                           seed_given ? std::optional<std::uint64_t>(seed)
                                                      : std::nullopt);
        const std::string result = execute(cfg, command);
        if (out_path.empty()) {
            out << result;
            out.flush();
            if (!out) throw IoError("cannot write to standard output");
        } else {
            std::ofstream file(out_path, std::ios::binary);
            file << result;
            file.close();
            if (!file) throw IoError("cannot write output file `" + out_path + "`");
        }
        return 0;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const ContractError& e) {
        err << "input error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace commodpi::cli
