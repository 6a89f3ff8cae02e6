// delaystab command-line front end. Links only the C API.
//
//   delaystab check     --a A --alpha AL --b B --c C --tau T
//   delaystab windows   --a A --alpha AL --b B --c C [--tau-max M]
//   delaystab roots     --a A --alpha AL --b B --c C --tau T [--left-edge S]
//   delaystab crossings --a A --alpha AL --b B --c C --tau-max M
//   delaystab simulate  --a A --alpha AL --b B --c C --tau T [--step H --horizon H --x0 X --y0 Y --seed N]
//   delaystab sweep     --axis1 name:lo:hi:count [--axis2 ...] [--oracle] + fixed coefficients
//
// Data goes to stdout (or --out), diagnostics to stderr.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "delaystab/delaystab.h"

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitExcluded = 2;
constexpr int kExitFailure = 3;
constexpr int kExitIo = 74;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LibraryError : std::runtime_error {
    dstab_status status;
    LibraryError(dstab_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(dstab_status s) {
    if (s != DSTAB_OK) {
        std::string msg = dstab_last_error();
        if (msg.empty()) msg = dstab_status_message(s);
        throw LibraryError(s, msg);
    }
}

template <class H, class F>
std::string fetch_text(const H* handle, F&& fn) {
    size_t len = 0;
    const dstab_status probe = fn(handle, nullptr, 0, &len);
    if (probe != DSTAB_ERR_BUFFER_TOO_SMALL) check(probe);
    std::string out(len + 1, '\0');
    check(fn(handle, out.data(), out.size(), &len));
    out.resize(len);
    return out;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string shortest(double v) {
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, r.ptr};
}

// Numeric flags shared by every subcommand; values may also come from --config.
struct Inputs {
    std::map<std::string, double> num;
    std::multimap<std::string, CLI::Option*> opts;
    std::map<std::string, double> from_config;
    std::string config_path;
    std::string out_path;
    std::string axis1, axis2;
    bool oracle = false;
    std::optional<std::uint64_t> seed;
    std::uint64_t seed_value = 0;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* oracle_opt = nullptr;
    unsigned threads = 0;

    void add_numeric(CLI::App* app, const std::string& name, const std::string& help) {
        num[name] = 0.0;
        opts.emplace(name, app->add_option("--" + name, num[name], help));
    }

    void load_config() {
        if (config_path.empty()) return;
        std::ifstream is(config_path);
        if (!is) throw UsageError("--config: cannot open '" + config_path + "'");
        nlohmann::json j;
        try {
            is >> j;
        } catch (const std::exception& e) {
            throw UsageError("--config: invalid JSON (" + std::string(e.what()) + ")");
        }
        if (!j.is_object()) throw UsageError("--config: top level must be an object");
        for (auto it = j.begin(); it != j.end(); ++it) {
            std::string key = it.key();
            std::replace(key.begin(), key.end(), '_', '-');
            if (key == "axis1" && axis1.empty()) axis1 = it.value().get<std::string>();
            else if (key == "axis2" && axis2.empty()) axis2 = it.value().get<std::string>();
            else if (key == "out" && out_path.empty()) out_path = it.value().get<std::string>();
            else if (key == "oracle") {
                if (!oracle_opt || oracle_opt->count() == 0) oracle = it.value().get<bool>();
            } else if (key == "seed") {
                if (!seed_opt || seed_opt->count() == 0) seed = it.value().get<std::uint64_t>();
            } else if (it.value().is_number()) {
                from_config[key] = it.value().get<double>();
            } else {
                throw UsageError("--config: unsupported value for key '" + it.key() + "'");
            }
        }
        if (seed_opt && seed_opt->count() > 0) seed = seed_value;
    }

    [[nodiscard]] std::optional<double> get(const std::string& name) const {
        const auto [first, last] = opts.equal_range(name);
        for (auto o = first; o != last; ++o) {
            if (o->second->count() > 0) return num.at(name);
        }
        const auto c = from_config.find(name);
        if (c != from_config.end()) return c->second;
        return std::nullopt;
    }

    [[nodiscard]] double require(const std::string& name) const {
        const auto v = get(name);
        if (!v) throw UsageError("missing required flag --" + name);
        if (!std::isfinite(*v)) throw UsageError("--" + name + " must be a finite number");
        return *v;
    }

    [[nodiscard]] dstab_coefficients coefficients() const {
        return {require("a"), require("alpha"), require("b"), require("c")};
    }

    [[nodiscard]] dstab_params params() const {
        const auto k = coefficients();
        const double tau = require("tau");
        if (!(tau > 0.0)) throw UsageError("--tau must be positive");
        return {k.a, k.alpha, k.b, k.c, tau};
    }
};

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw LibraryError(DSTAB_ERR_IO, "cannot open --out file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

int cmd_check(const Inputs& in) {
    const auto p = in.params();
    dstab_verdict* v = nullptr;
    check(dstab_check(&p, &v));
    std::string text;
    try {
        text = fetch_text(v, dstab_verdict_to_json);
    } catch (...) {
        dstab_verdict_free(v);
        throw;
    }
    const auto status = dstab_verdict_get_status(v);
    dstab_verdict_free(v);
    Output out(in.out_path);
    out.stream() << text << "\n";
    switch (status) {
        case DSTAB_STABLE: return 0;
        case DSTAB_UNSTABLE: return 1;
        case DSTAB_EXCLUDED_BY_HYPOTHESIS: return kExitExcluded;
    }
    return 1;
}

int cmd_windows(const Inputs& in) {
    const auto k = in.coefficients();
    const auto tau_max = in.get("tau-max");
    if (tau_max && !(*tau_max > 0.0)) throw UsageError("--tau-max must be positive");
    dstab_windows* w = nullptr;
    check(dstab_stability_windows(&k, &w));
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(fetch_text(w, dstab_windows_to_json));
    } catch (...) {
        dstab_windows_free(w);
        throw;
    }
    dstab_windows_free(w);

    bool truncated = false;
    if (tau_max) {
        nlohmann::json kept = nlohmann::json::array();
        for (auto& iv : j["intervals"]) {
            const double lo = iv["lo"].get<double>();
            if (lo >= *tau_max) {
                truncated = true;
                continue;
            }
            if (!iv.contains("hi") || iv["hi"].get<double>() > *tau_max) {
                iv["hi"] = *tau_max;
                truncated = true;
            }
            kept.push_back(iv);
        }
        j["intervals"] = kept;
        j["tau_max"] = *tau_max;
    }
    j["truncated"] = truncated;
    Output out(in.out_path);
    out.stream() << j.dump() << "\n";
    return 0;
}

int cmd_roots(const Inputs& in) {
    const auto p = in.params();
    int count = 0;
    dstab_status s = DSTAB_OK;
    if (const auto edge = in.get("left-edge")) {
        dstab_contour c{};
        check(dstab_default_contour(&p, &c));
        c.left_edge = *edge;
        s = dstab_count_rhp_roots(&p, &c, &count);
    } else {
        s = dstab_count_rhp_roots(&p, nullptr, &count);
    }
    if (s == DSTAB_ERR_ROOT_NEAR_CONTOUR) {
        throw LibraryError(s, std::string(dstab_last_error()) + " (hint: retry with --left-edge 1e-3)");
    }
    check(s);

    nlohmann::json j;
    j["count"] = count;
    int found = 0;
    double re = 0.0, im = 0.0;
    check(dstab_rightmost_root(&p, -1e-6, &found, &re, &im));
    if (found) j["rightmost"] = {{"re", re}, {"im", im}};
    Output out(in.out_path);
    out.stream() << j.dump() << "\n";
    return 0;
}

int cmd_crossings(const Inputs& in) {
    const auto k = in.coefficients();
    const double tau_max = in.require("tau-max");
    dstab_crossings* c = nullptr;
    check(dstab_imaginary_crossings(&k, tau_max, &c));
    std::string text;
    try {
        text = fetch_text(c, dstab_crossings_to_json);
    } catch (...) {
        dstab_crossings_free(c);
        throw;
    }
    dstab_crossings_free(c);
    Output out(in.out_path);
    out.stream() << text << "\n";
    return 0;
}

int cmd_simulate(const Inputs& in) {
    const auto p = in.params();
    dstab_sim_config cfg{};
    cfg.step = in.get("step").value_or(p.tau / 20.0);
    cfg.horizon = in.get("horizon").value_or(40.0 * p.tau);
    cfg.x0 = in.get("x0").value_or(1.0);
    cfg.y0 = in.get("y0").value_or(0.0);
    cfg.random_history = in.seed ? 1 : 0;
    cfg.seed = in.seed.value_or(0);
    dstab_trajectory* tr = nullptr;
    check(dstab_simulate(&p, &cfg, &tr));
    std::string csv;
    try {
        csv = fetch_text(tr, dstab_trajectory_to_csv);
    } catch (...) {
        dstab_trajectory_free(tr);
        throw;
    }
    double rate = 0.0;
    dstab_decay_hint hint = DSTAB_INCONCLUSIVE;
    const bool have_rate = dstab_estimate_decay(tr, &rate, &hint) == DSTAB_OK;
    dstab_trajectory_free(tr);
    Output out(in.out_path);
    out.stream() << csv;
    if (have_rate) {
        static const char* names[] = {"decaying", "growing", "inconclusive"};
        std::cerr << "decay rate " << fmt17(rate) << " (" << names[hint] << ")\n";
    }
    return 0;
}

struct Axis {
    std::string name;
    std::vector<double> values;
};

Axis parse_axis(const std::string& spec, const char* flag) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 4) throw UsageError(std::string(flag) + " expects name:lo:hi:count");
    static const std::vector<std::string> names{"a", "alpha", "b", "c", "tau"};
    Axis ax;
    ax.name = parts[0];
    if (std::find(names.begin(), names.end(), ax.name) == names.end()) {
        throw UsageError(std::string(flag) + ": unknown parameter '" + ax.name + "'");
    }
    double lo = 0.0, hi = 0.0;
    long count = 0;
    try {
        lo = std::stod(parts[1]);
        hi = std::stod(parts[2]);
        count = std::stol(parts[3]);
    } catch (const std::exception&) {
        throw UsageError(std::string(flag) + ": malformed range '" + spec + "'");
    }
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) throw UsageError(std::string(flag) + ": need finite lo < hi");
    if (count < 2) throw UsageError(std::string(flag) + ": count must be >= 2");
    for (long i = 0; i < count; ++i) {
        // The delay axis is half-open (lo, hi]; the others include both ends.
        const double v = ax.name == "tau" ? lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(count)
                                          : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        ax.values.push_back(v);
    }
    if (ax.name == "tau" && !(ax.values.front() > 0.0)) throw UsageError(std::string(flag) + ": tau values must be positive");
    return ax;
}

int cmd_sweep(const Inputs& in) {
    if (in.axis1.empty()) throw UsageError("missing required flag --axis1");
    std::vector<Axis> axes{parse_axis(in.axis1, "--axis1")};
    if (!in.axis2.empty()) axes.push_back(parse_axis(in.axis2, "--axis2"));
    if (axes.size() == 2 && axes[0].name == axes[1].name) throw UsageError("--axis1 and --axis2 must name distinct parameters");

    std::map<std::string, double> fixed;
    for (const char* name : {"a", "alpha", "b", "c", "tau"}) {
        const bool swept = std::any_of(axes.begin(), axes.end(), [&](const Axis& ax) { return ax.name == name; });
        if (!swept) fixed[name] = in.require(name);
    }
    if (fixed.count("tau") && !(fixed["tau"] > 0.0)) throw UsageError("--tau must be positive");

    const std::size_t n1 = axes[0].values.size();
    const std::size_t n2 = axes.size() == 2 ? axes[1].values.size() : 1;
    const std::size_t total = n1 * n2;

    struct Row {
        dstab_params p{};
        int verdict = -1;
        int count = -1;
    };
    std::vector<Row> rows(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::map<std::string, double> v = fixed;
        v[axes[0].name] = axes[0].values[idx / n2];
        if (axes.size() == 2) v[axes[1].name] = axes[1].values[idx % n2];
        rows[idx].p = {v["a"], v["alpha"], v["b"], v["c"], v["tau"]};
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t idx = next++; idx < total; idx = next++) {
            Row& r = rows[idx];
            dstab_verdict* vd = nullptr;
            if (dstab_check(&r.p, &vd) == DSTAB_OK) {
                r.verdict = static_cast<int>(dstab_verdict_get_status(vd));
                dstab_verdict_free(vd);
            }
            if (in.oracle) {
                int c = 0;
                if (dstab_count_rhp_roots(&r.p, nullptr, &c) == DSTAB_OK) r.count = c;
            }
        }
    };
    unsigned n_threads = in.threads ? in.threads : std::max(1u, std::thread::hardware_concurrency());
    n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, total));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    Output out(in.out_path);
    auto& os = out.stream();
    os << "a,alpha,b,c,tau,verdict" << (in.oracle ? ",oracle_count" : "") << "\n";
    for (const auto& r : rows) {
        os << shortest(r.p.a) << ',' << shortest(r.p.alpha) << ',' << shortest(r.p.b) << ',' << shortest(r.p.c)
           << ',' << shortest(r.p.tau) << ',' << r.verdict;
        if (in.oracle) os << ',' << r.count;
        os << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Delay-system stability analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(dstab_version()));

    Inputs in;
    struct Sub {
        const char* name;
        const char* help;
        int (*run)(const Inputs&);
    };
    const Sub subs[] = {
        {"check", "Decide asymptotic stability at one delay (exit 0 stable, 1 unstable, 2 excluded)", cmd_check},
        {"windows", "List the delay windows of asymptotic stability", cmd_windows},
        {"roots", "Count right-half-plane characteristic roots", cmd_roots},
        {"crossings", "List purely imaginary root crossings up to --tau-max", cmd_crossings},
        {"simulate", "Integrate the system and write a t,x,y CSV", cmd_simulate},
        {"sweep", "Evaluate the verdict on a parameter grid and write CSV", cmd_sweep},
    };

    std::map<CLI::App*, const Sub*> dispatch;
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        in.add_numeric(sub, "a", "Instantaneous self-coupling a");
        in.add_numeric(sub, "alpha", "Delayed self-coupling alpha");
        in.add_numeric(sub, "b", "Cross-coupling b");
        in.add_numeric(sub, "c", "Cross-coupling c");
        in.add_numeric(sub, "tau", "Delay tau > 0");
        in.add_numeric(sub, "tau-max", "Upper delay for display or enumeration");
        sub->add_option("--config", in.config_path, "JSON file with the same keys as the flags");
        sub->add_option("--out", in.out_path, "Write data to this file instead of stdout");
        if (std::string(s.name) == "roots") in.add_numeric(sub, "left-edge", "Real part of the contour's vertical edge");
        if (std::string(s.name) == "simulate") {
            in.add_numeric(sub, "step", "Integration step (default tau/20)");
            in.add_numeric(sub, "horizon", "Final time (default 40 tau)");
            in.add_numeric(sub, "x0", "Constant history for x (default 1)");
            in.add_numeric(sub, "y0", "Constant history for y (default 0)");
            in.seed_opt = sub->add_option("--seed", in.seed_value, "Add a seeded random smooth history perturbation");
        }
        if (std::string(s.name) == "sweep") {
            sub->add_option("--axis1", in.axis1, "First axis: name:lo:hi:count");
            sub->add_option("--axis2", in.axis2, "Optional second axis: name:lo:hi:count");
            in.oracle_opt = sub->add_flag("--oracle", in.oracle, "Add the root-count oracle column");
            sub->add_option("--threads", in.threads, "Worker threads (default: hardware concurrency)");
        }
        dispatch[sub] = &s;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    CLI::App* chosen = app.get_subcommands().front();
    try {
        in.load_config();
        return dispatch.at(chosen)->run(in);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const LibraryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.status == DSTAB_ERR_EXCLUDED_BY_HYPOTHESIS) return kExitExcluded;
        if (e.status == DSTAB_ERR_INVALID_ARGUMENT) return kExitUsage;
        if (e.status == DSTAB_ERR_IO) return kExitIo;
        return kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}
