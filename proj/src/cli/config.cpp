#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "commodpi/errors.hpp"

namespace commodpi::cli {

namespace {

const json kEmpty = json::object();

// Reads one JSON object, recording every resolved value into `out` and rejecting
// keys that were never asked for.
class Section {
public:
    Section(const json& in, std::string path, json& out) : in_(in), path_(std::move(path)), out_(out) {
        if (!in_.is_object()) fail(path_.empty() ? "config" : path_, "expected an object");
        out_ = json::object();
    }

    [[nodiscard]] bool has(const std::string& key) const { return in_.contains(key); }
    [[nodiscard]] const std::string& path() const { return path_; }

    /// Accepts a key without reading it.
    void ignore(const std::string& key) { used_.insert(key); }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
        const json* v = lookup(key, fallback.has_value());
        double x = v ? read_number(*v, key) : *fallback;
        out_[key] = x;
        return x;
    }

    int integer(const std::string& key, std::optional<int> fallback = std::nullopt) {
        const json* v = lookup(key, fallback.has_value());
        int x = fallback.value_or(0);
        if (v) {
            if (!v->is_number_integer()) fail(field(key), "expected an integer");
            const auto wide = v->get<std::int64_t>();
            if (wide < -2147483647 || wide > 2147483647) fail(field(key), "integer out of range");
            x = static_cast<int>(wide);
        }
        out_[key] = x;
        return x;
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
        const json* v = lookup(key, true);
        std::uint64_t x = fallback;
        if (v) {
            if (!v->is_number_unsigned()) fail(field(key), "expected a non-negative integer");
            x = v->get<std::uint64_t>();
        }
        out_[key] = x;
        return x;
    }

    std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
        const json* v = lookup(key, fallback.has_value());
        std::string x = fallback.value_or("");
        if (v) {
            if (!v->is_string()) fail(field(key), "expected a string");
            x = v->get<std::string>();
        }
        out_[key] = x;
        return x;
    }

    std::optional<std::string> optional_text(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return text(key);
    }

    std::optional<double> optional_number(const std::string& key) {
        if (!has(key) || in_.at(key).is_null()) {
            used_.insert(key);
            return std::nullopt;
        }
        return number(key);
    }

    bool flag(const std::string& key, bool fallback) {
        const json* v = lookup(key, true);
        bool x = fallback;
        if (v) {
            if (!v->is_boolean()) fail(field(key), "expected true or false");
            x = v->get<bool>();
        }
        out_[key] = x;
        return x;
    }

    std::vector<double> numbers(const std::string& key,
                                std::optional<std::vector<double>> fallback = std::nullopt) {
        const json* v = lookup(key, fallback.has_value());
        std::vector<double> x = fallback.value_or(std::vector<double>{});
        if (v) {
            if (!v->is_array() || v->empty()) fail(field(key), "expected a non-empty array of numbers");
            x.clear();
            for (std::size_t i = 0; i < v->size(); ++i)
                x.push_back(read_number((*v)[i], key + "[" + std::to_string(i) + "]"));
        }
        out_[key] = x;
        return x;
    }

    Section child(const std::string& key) {
        const json* v = lookup(key, false);
        return Section(*v, field(key), out_[key]);
    }

    /// Elements of an array of objects, each read through its own Section.
    std::vector<Section> children(const std::string& key) {
        const json* v = lookup(key, false);
        if (!v->is_array() || v->empty()) fail(field(key), "expected a non-empty array of objects");
        out_[key] = json::array();
        std::vector<Section> out;
        auto& slots = out_[key];
        for (std::size_t i = 0; i < v->size(); ++i) slots.push_back(json::object());
        for (std::size_t i = 0; i < v->size(); ++i)
            out.emplace_back((*v)[i], field(key) + "[" + std::to_string(i) + "]", slots[i]);
        return out;
    }

    void finish() const {
        for (const auto& item : in_.items())
            if (!used_.contains(item.key())) fail(field(item.key()), "unknown key");
    }

    [[nodiscard]] std::string field(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    [[noreturn]] static void fail(const std::string& where, const std::string& what) {
        throw ConfigError(where + ": " + what);
    }

private:
    const json* lookup(const std::string& key, bool optional) {
        used_.insert(key);
        if (!in_.contains(key)) {
            if (!optional) fail(field(key), "required");
            return nullptr;
        }
        return &in_.at(key);
    }

    double read_number(const json& v, const std::string& key) const {
        if (!v.is_number()) fail(field(key), "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail(field(key), "must be finite");
        return x;
    }

    const json& in_;
    std::string path_;
    json& out_;
    std::set<std::string> used_;
};

// Re-raises a library validation error under the given path prefix.
template <typename F>
auto validated(const std::string& prefix, F&& body) {
    try {
        return body();
    } catch (const DomainError& e) {
        throw ConfigError(prefix + "." + e.what());
    } catch (const ContractError& e) {
        throw ConfigError(prefix + ": " + e.what());
    }
}

void require(bool ok, const std::string& where, const std::string& what) {
    if (!ok) Section::fail(where, what);
}

ModelParams read_model(Section s) {
    ModelParams m;
    m.f = s.number("f", 0.0);
    m.sigma = s.number("sigma", 0.2);
    m.r = s.number("r", 0.0);
    m.f0 = s.number("f0", 1.0);
    m.t1 = s.number("t1", 1.0);
    m.gamma = s.number("gamma", 1.0);
    s.finish();
    validated("model", [&] { m.validate(); return 0; });
    return m;
}

Prior read_prior(Section s) {
    if (s.has("atoms") == s.has("grid"))
        Section::fail(s.field("atoms"), "give exactly one of `atoms` or `grid`");
    if (s.has("atoms")) {
        std::vector<ThetaAtom> atoms;
        std::vector<double> weights;
        for (auto& a : s.children("atoms")) {
            atoms.push_back({a.number("theta0"), a.number("theta1")});
            weights.push_back(a.number("weight", 1.0));
            a.finish();
        }
        s.finish();
        return validated("prior.atoms", [&] { return Prior(atoms, weights); });
    }
    Section g = s.child("grid");
    const auto r0 = g.numbers("theta0");
    const int n0 = g.integer("n0");
    const auto r1 = g.numbers("theta1");
    const int n1 = g.integer("n1");
    g.finish();
    s.finish();
    require(r0.size() == 2, g.field("theta0"), "expected [lo, hi]");
    require(r1.size() == 2, g.field("theta1"), "expected [lo, hi]");
    return validated("prior.grid", [&] {
        return Prior::uniform_grid({r0[0], r0[1]}, n0, {r1[0], r1[1]}, n1);
    });
}

PayoffSpec read_payoff(Section s) {
    PayoffSpec p;
    const std::string kind = s.text("kind");
    const auto parsed = parse_payoff_kind(kind);
    if (!parsed) Section::fail(s.field("kind"), "unknown payoff kind `" + kind + "`");
    p.kind = *parsed;
    p.strike = s.number("strike", 0.0);
    p.cap = s.optional_number("cap");
    s.finish();
    validated("payoff", [&] { p.validate(); return 0; });
    return p;
}

DiscreteLaw read_law(Section s) {
    const auto values = s.numbers("values");
    const auto weights = s.numbers("weights", std::vector<double>(values.size(), 1.0));
    s.finish();
    return validated(s.path(), [&] { return DiscreteLaw::make(values, weights); });
}

Axis read_axis(Section s) {
    Axis a;
    a.lo = s.number("lo");
    a.hi = s.number("hi");
    a.n = s.integer("n", 1);
    s.finish();
    require(a.n >= 1, s.field("n"), "must be >= 1");
    require(a.n == 1 || a.hi > a.lo, s.field("hi"), "must exceed lo");
    return a;
}

}  // namespace

double Axis::at(int i) const {
    return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
}

FuturesPayoff FuturesBlock::payoff() const {
    if (payoff_kind == "call") return FuturesPayoff::call(strike);
    if (payoff_kind == "put") return FuturesPayoff::put(strike);
    if (payoff_kind == "digital") return FuturesPayoff::digital(strike);
    return FuturesPayoff::capped_call(strike, cap);
}

VolCurve FuturesBlock::vol() const { return VolCurve::piecewise(vol_breaks, vol_values); }

RunConfig parse_config(const json& input, Command command,
                       std::optional<std::uint64_t> seed_override) {
    RunConfig cfg;
    Section root(input, "", cfg.effective);
    cfg.seed = root.unsigned_integer("seed", 1);
    if (seed_override) {
        cfg.seed = *seed_override;
        cfg.effective["seed"] = cfg.seed;
    }
    auto block = [&](const std::string& key) {
        return root.has(key) ? root.child(key) : Section(kEmpty, key, cfg.effective[key]);
    };
    cfg.model = read_model(block("model"));
    const ModelParams& m = cfg.model;

    // Blocks of other subcommands are accepted but neither read nor echoed.
    for (const char* key : {"prior", "payoff", "simulate", "filter", "futures", "indifference",
                            "density", "cumulants"})
        root.ignore(key);

    auto need_prior = [&] { cfg.prior = read_prior(root.child("prior")); };

    switch (command) {
        case Command::Simulate: {
            Section s = block("simulate");
            const std::string measure = s.text("measure", "physical");
            require(measure == "physical" || measure == "risk-neutral", s.field("measure"),
                    "expected `physical` or `risk-neutral`");
            cfg.simulate.physical = measure == "physical";
            cfg.simulate.horizon = s.number("horizon", m.t1);
            cfg.simulate.n_steps = s.integer("n_steps", 250);
            cfg.simulate.n_paths = s.integer("n_paths", 1);
            s.finish();
            require(cfg.simulate.horizon > 0.0 && cfg.simulate.horizon <= m.t1,
                    s.field("horizon"), "must lie in (0, model.t1]");
            require(cfg.simulate.n_steps >= 1, s.field("n_steps"), "must be >= 1");
            require(cfg.simulate.n_paths >= 1, s.field("n_paths"), "must be >= 1");
            if (cfg.simulate.physical) need_prior();
            break;
        }
        case Command::Filter: {
            Section s = block("filter");
            cfg.filter.horizon = s.number("horizon", m.t1);
            cfg.filter.n_steps = s.integer("n_steps", 250);
            cfg.filter.path_file = s.optional_text("path_file");
            s.finish();
            require(cfg.filter.horizon > 0.0 && cfg.filter.horizon <= m.t1, s.field("horizon"),
                    "must lie in (0, model.t1]");
            require(cfg.filter.n_steps >= 1, s.field("n_steps"), "must be >= 1");
            need_prior();
            break;
        }
        case Command::PriceFutures: {
            Section s = block("futures");
            auto& b = cfg.futures;
            b.t = s.number("t", 0.0);
            b.maturity = s.number("maturity", m.t1);
            b.f_t = s.numbers("f_t", std::vector<double>{m.f0});
            b.vol_breaks = s.numbers("vol_breaks", std::vector<double>{0.0});
            b.vol_values = s.numbers("vol_values", std::vector<double>{m.sigma});
            b.payoff_kind = s.text("payoff", "call");
            b.strike = s.number("strike", m.f0);
            b.cap = s.number("cap", 0.0);
            b.nodes = s.integer("nodes", 0);
            s.finish();
            require(b.payoff_kind == "call" || b.payoff_kind == "put" ||
                        b.payoff_kind == "digital" || b.payoff_kind == "capped-call",
                    s.field("payoff"), "expected call, put, digital or capped-call");
            require(b.strike > 0.0, s.field("strike"), "must be > 0");
            require(b.payoff_kind != "capped-call" || b.cap > 0.0, s.field("cap"),
                    "must be > 0 for capped-call");
            require(b.t >= 0.0 && b.t <= b.maturity, s.field("t"), "must lie in [0, maturity]");
            require(b.nodes >= 0, s.field("nodes"), "must be >= 0");
            for (std::size_t i = 0; i < b.f_t.size(); ++i)
                require(b.f_t[i] > 0.0, s.field("f_t[" + std::to_string(i) + "]"), "must be > 0");
            validated("futures.vol", [&] { return b.vol(); });
            break;
        }
        case Command::PriceIndifference: {
            cfg.payoff = read_payoff(root.child("payoff"));
            Section s = block("indifference");
            auto& b = cfg.indifference;
            b.maturity = s.number("maturity", m.t1);
            b.gamma = s.number("gamma", m.gamma);
            b.mc.n_paths = s.integer("n_paths", 10000);
            b.mc.n_steps = s.integer("n_steps", 64);
            b.mc.bump_y = s.number("bump_y", 0.01);
            b.hedge = s.flag("hedge", false);
            s.finish();
            require(b.maturity > 0.0 && b.maturity <= m.t1, s.field("maturity"),
                    "must lie in (0, model.t1]");
            require(b.gamma > 0.0, s.field("gamma"), "must be > 0");
            validated("indifference", [&] { b.mc.validate(); return 0; });
            require(cfg.payoff->bounded(), "payoff.cap", "required for call and forward payoffs");
            need_prior();
            break;
        }
        case Command::Density: {
            Section s = block("density");
            auto& b = cfg.density;
            b.t = s.number("t", m.t1);
            b.y = read_axis(s.child("y"));
            b.p = read_axis(s.child("p"));
            b.q = read_axis(s.child("q"));
            b.inversion.n_nodes = s.integer("n_nodes", 32);
            b.inversion.series_threshold = s.number("series_threshold", 2.0);
            const std::string form = s.text("transform", "derived");
            s.finish();
            require(form == "derived" || form == "as-printed", s.field("transform"),
                    "expected `derived` or `as-printed`");
            b.form = form == "derived" ? TransformForm::Derived : TransformForm::AsPrinted;
            require(b.t > 0.0, s.field("t"), "must be > 0");
            validated("density", [&] { b.inversion.validate(); return 0; });
            break;
        }
        case Command::Cumulants: {
            need_prior();
            Section s = block("cumulants");
            auto& b = cfg.cumulants;
            b.times = s.numbers("times", std::vector<double>{m.t1});
            for (std::size_t i = 0; i < b.times.size(); ++i)
                require(b.times[i] >= 0.0, s.field("times[" + std::to_string(i) + "]"),
                        "must be >= 0");
            if (s.has("speed") != s.has("level"))
                Section::fail(s.field("speed"), "give both `speed` and `level` or neither");
            if (s.has("speed")) {
                b.speed = read_law(s.child("speed"));
                b.level = read_law(s.child("level"));
            } else {
                // Marginals of theta1 and theta2 = (theta0 + f) / theta1 under the prior.
                std::vector<double> speeds, levels, weights;
                for (std::size_t i = 0; i < cfg.prior->size(); ++i) {
                    const ThetaAtom& a = cfg.prior->atom(i);
                    require(a.theta1 > 0.0, "cumulants.speed",
                            "prior has theta1 <= 0; give speed and level laws explicitly");
                    speeds.push_back(a.theta1);
                    levels.push_back(a.level(m.f));
                    weights.push_back(cfg.prior->weight(i));
                }
                b.speed = DiscreteLaw::make(speeds, weights);
                b.level = DiscreteLaw::make(levels, weights);
            }
            s.finish();
            for (std::size_t i = 0; i < b.speed.size(); ++i)
                require(b.speed.values[i] > 0.0, "cumulants.speed.values", "every atom must be > 0");
            break;
        }
    }
    root.finish();
    return cfg;
}

}  // namespace commodpi::cli
