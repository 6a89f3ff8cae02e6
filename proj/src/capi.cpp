#include "delaystab/delaystab.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "delaystab/criterion.hpp"
#include "delaystab/json_io.hpp"
#include "delaystab/simulate.hpp"
#include "delaystab/spectrum.hpp"

struct dstab_verdict {
    dstab::Verdict v;
};
struct dstab_windows {
    dstab::TauWindows w;
};
struct dstab_crossings {
    std::vector<dstab::Crossing> c;
};
struct dstab_trajectory {
    dstab::Trajectory tr;
};

namespace {

thread_local std::string g_last_error;

dstab_status map_code(dstab::ErrorCode c) noexcept {
    using dstab::ErrorCode;
    switch (c) {
        case ErrorCode::InvalidArgument: return DSTAB_ERR_INVALID_ARGUMENT;
        case ErrorCode::Precondition: return DSTAB_ERR_PRECONDITION;
        case ErrorCode::ExcludedByHypothesis: return DSTAB_ERR_EXCLUDED_BY_HYPOTHESIS;
        case ErrorCode::UndefinedAtResonance: return DSTAB_ERR_UNDEFINED_AT_RESONANCE;
        case ErrorCode::NoImaginaryRoots: return DSTAB_ERR_NO_IMAGINARY_ROOTS;
        case ErrorCode::RootNearContour: return DSTAB_ERR_ROOT_NEAR_CONTOUR;
        case ErrorCode::InsufficientSamples: return DSTAB_ERR_INSUFFICIENT_SAMPLES;
        case ErrorCode::NotACrossing: return DSTAB_ERR_NOT_A_CROSSING;
        case ErrorCode::Degenerate: return DSTAB_ERR_DEGENERATE;
    }
    return DSTAB_ERR_INTERNAL;
}

dstab_status fail(dstab_status s, const char* msg) {
    g_last_error = msg;
    return s;
}

// Runs body and converts every exception into a status code.
template <class F>
dstab_status guarded(F&& body) noexcept {
    try {
        g_last_error.clear();
        return body();
    } catch (const dstab::Error& e) {
        return fail(map_code(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(DSTAB_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(DSTAB_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(DSTAB_ERR_INTERNAL, "unknown exception");
    }
}

dstab_status copy_out(const std::string& text, char* buf, size_t cap, size_t* len) {
    if (len) *len = text.size();
    if (!buf || cap < text.size() + 1) return fail(DSTAB_ERR_BUFFER_TOO_SMALL, "buffer too small");
    std::memcpy(buf, text.data(), text.size());
    buf[text.size()] = '\0';
    return DSTAB_OK;
}

dstab::Coefficients to_core(const dstab_coefficients& k) { return {k.a, k.alpha, k.b, k.c}; }
dstab::SystemParams to_core(const dstab_params& p) { return {p.a, p.alpha, p.b, p.c, p.tau}; }

dstab_direction to_c(dstab::Direction d) noexcept {
    switch (d) {
        case dstab::Direction::LeftToRight: return DSTAB_LEFT_TO_RIGHT;
        case dstab::Direction::RightToLeft: return DSTAB_RIGHT_TO_LEFT;
        case dstab::Direction::Degenerate: break;
    }
    return DSTAB_DEGENERATE;
}

#define DSTAB_REQUIRE(cond)                                                         \
    do {                                                                            \
        if (!(cond)) return fail(DSTAB_ERR_INVALID_ARGUMENT, "null argument: " #cond); \
    } while (0)

}  // namespace

extern "C" {

const char* dstab_version(void) { return DELAYSTAB_VERSION; }

const char* dstab_status_message(dstab_status status) {
    switch (status) {
        case DSTAB_OK: return "ok";
        case DSTAB_ERR_INVALID_ARGUMENT: return "invalid argument";
        case DSTAB_ERR_PRECONDITION: return "precondition violated";
        case DSTAB_ERR_EXCLUDED_BY_HYPOTHESIS: return "excluded by hypothesis";
        case DSTAB_ERR_UNDEFINED_AT_RESONANCE: return "undefined at resonance";
        case DSTAB_ERR_NO_IMAGINARY_ROOTS: return "no purely imaginary roots";
        case DSTAB_ERR_ROOT_NEAR_CONTOUR: return "root near contour";
        case DSTAB_ERR_INSUFFICIENT_SAMPLES: return "insufficient samples";
        case DSTAB_ERR_NOT_A_CROSSING: return "not a crossing";
        case DSTAB_ERR_DEGENERATE: return "degenerate";
        case DSTAB_ERR_BUFFER_TOO_SMALL: return "buffer too small";
        case DSTAB_ERR_IO: return "i/o error";
        case DSTAB_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* dstab_last_error(void) { return g_last_error.c_str(); }

dstab_status dstab_derive(const dstab_coefficients* k, dstab_derived* out) {
    DSTAB_REQUIRE(k && out);
    return guarded([&] {
        const auto core = to_core(*k);
        core.validate();
        const auto dq = dstab::derive(core);
        dstab_derived r{};
        r.bc = dq.bc;
        if (dq.beta) { r.has_beta = 1; r.beta = *dq.beta; }
        if (dq.d) { r.has_d = 1; r.d = *dq.d; }
        if (dq.D) { r.has_D = 1; r.D = *dq.D; }
        if (dq.sqrtD) { r.has_sqrtD = 1; r.sqrtD = *dq.sqrtD; }
        if (dq.E) { r.has_E = 1; r.E = *dq.E; }
        if (dq.omega1) { r.has_omega = 1; r.omega1 = *dq.omega1; r.omega2 = *dq.omega2; }
        if (dq.k) { r.has_kl = 1; r.k = *dq.k; r.l = *dq.l; }
        *out = r;
        return DSTAB_OK;
    });
}

dstab_status dstab_derived_to_json(const dstab_coefficients* k, char* buf, size_t cap, size_t* len) {
    DSTAB_REQUIRE(k);
    return guarded([&] {
        const auto core = to_core(*k);
        core.validate();
        return copy_out(dstab::to_json(dstab::derive(core)).dump(), buf, cap, len);
    });
}

dstab_status dstab_hayes_stable(double p, double q, double tau, int* stable) {
    DSTAB_REQUIRE(stable);
    if (!std::isfinite(p) || !std::isfinite(q) || !std::isfinite(tau) || !(tau > 0.0)) {
        return fail(DSTAB_ERR_INVALID_ARGUMENT, "p, q must be finite and tau positive");
    }
    *stable = dstab::hayes_stable(p, q, tau) ? 1 : 0;
    return DSTAB_OK;
}

dstab_status dstab_hayes_threshold(double p, double q, dstab_hayes_kind* kind, double* bound) {
    DSTAB_REQUIRE(kind && bound);
    if (!std::isfinite(p) || !std::isfinite(q)) return fail(DSTAB_ERR_INVALID_ARGUMENT, "p, q must be finite");
    const auto t = dstab::hayes_threshold(p, q);
    switch (t.kind) {
        case dstab::HayesThreshold::Kind::AllTau: *kind = DSTAB_HAYES_ALL_TAU; *bound = INFINITY; break;
        case dstab::HayesThreshold::Kind::UpTo: *kind = DSTAB_HAYES_UP_TO; *bound = t.bound; break;
        case dstab::HayesThreshold::Kind::None: *kind = DSTAB_HAYES_NONE; *bound = 0.0; break;
    }
    return DSTAB_OK;
}

dstab_status dstab_switch_time_r1(const dstab_coefficients* k, long long n, double* out) {
    DSTAB_REQUIRE(k && out);
    return guarded([&] {
        const auto core = to_core(*k);
        core.validate();
        const auto sgn = core.alpha > 0.0 ? dstab::Sign::Positive : dstab::Sign::Negative;
        *out = dstab::switch_time_r1(dstab::derive(core), sgn, n);
        return DSTAB_OK;
    });
}

dstab_status dstab_switch_time_r2(const dstab_coefficients* k, long long n, double* out) {
    DSTAB_REQUIRE(k && out);
    return guarded([&] {
        const auto core = to_core(*k);
        core.validate();
        const auto sgn = core.alpha > 0.0 ? dstab::Sign::Positive : dstab::Sign::Negative;
        *out = dstab::switch_time_r2(dstab::derive(core), sgn, n);
        return DSTAB_OK;
    });
}

dstab_status dstab_check(const dstab_params* p, dstab_verdict** out) {
    DSTAB_REQUIRE(p && out);
    *out = nullptr;
    return guarded([&] {
        *out = new dstab_verdict{dstab::is_asymptotically_stable(to_core(*p))};
        return DSTAB_OK;
    });
}

dstab_verdict_status dstab_verdict_get_status(const dstab_verdict* v) {
    if (!v) return DSTAB_UNSTABLE;
    switch (v->v.status) {
        case dstab::Status::Stable: return DSTAB_STABLE;
        case dstab::Status::Unstable: return DSTAB_UNSTABLE;
        case dstab::Status::ExcludedByHypothesis: break;
    }
    return DSTAB_EXCLUDED_BY_HYPOTHESIS;
}

const char* dstab_verdict_branch(const dstab_verdict* v) { return v ? v->v.branch.c_str() : ""; }

const char* dstab_verdict_witness(const dstab_verdict* v) {
    return v && v->v.witness ? v->v.witness->c_str() : nullptr;
}

dstab_status dstab_verdict_to_json(const dstab_verdict* v, char* buf, size_t cap, size_t* len) {
    DSTAB_REQUIRE(v);
    return guarded([&] { return copy_out(dstab::to_json(v->v).dump(), buf, cap, len); });
}

void dstab_verdict_free(dstab_verdict* v) { delete v; }

dstab_status dstab_stability_windows(const dstab_coefficients* k, dstab_windows** out) {
    DSTAB_REQUIRE(k && out);
    *out = nullptr;
    return guarded([&] {
        *out = new dstab_windows{dstab::stability_windows(to_core(*k))};
        return DSTAB_OK;
    });
}

size_t dstab_windows_count(const dstab_windows* w) { return w ? w->w.intervals.size() : 0; }

dstab_status dstab_windows_get(const dstab_windows* w, size_t i, double* lo, double* hi) {
    DSTAB_REQUIRE(w && lo && hi);
    if (i >= w->w.intervals.size()) return fail(DSTAB_ERR_INVALID_ARGUMENT, "window index out of range");
    *lo = w->w.intervals[i].lo;
    *hi = w->w.intervals[i].hi;
    return DSTAB_OK;
}

int dstab_windows_contains(const dstab_windows* w, double tau) { return w && w->w.contains(tau) ? 1 : 0; }

dstab_status dstab_windows_to_json(const dstab_windows* w, char* buf, size_t cap, size_t* len) {
    DSTAB_REQUIRE(w);
    return guarded([&] { return copy_out(dstab::to_json(w->w).dump(), buf, cap, len); });
}

void dstab_windows_free(dstab_windows* w) { delete w; }

dstab_status dstab_char_G(const dstab_params* p, double re, double im, double* out_re, double* out_im) {
    DSTAB_REQUIRE(p && out_re && out_im);
    const auto v = dstab::char_G({re, im}, to_core(*p));
    *out_re = v.real();
    *out_im = v.imag();
    return DSTAB_OK;
}

dstab_status dstab_char_F(const dstab_params* p, double re, double im, double* out_re, double* out_im) {
    DSTAB_REQUIRE(p && out_re && out_im);
    return guarded([&] {
        const auto v = dstab::char_F({re, im}, to_core(*p));
        *out_re = v.real();
        *out_im = v.imag();
        return DSTAB_OK;
    });
}

dstab_status dstab_default_contour(const dstab_params* p, dstab_contour* out) {
    DSTAB_REQUIRE(p && out);
    return guarded([&] {
        const auto c = dstab::default_contour(to_core(*p));
        *out = {c.radius, c.left_edge, c.samples};
        return DSTAB_OK;
    });
}

dstab_status dstab_count_rhp_roots(const dstab_params* p, const dstab_contour* contour, int* count) {
    DSTAB_REQUIRE(p && count);
    return guarded([&] {
        const auto params = to_core(*p);
        *count = contour ? dstab::count_rhp_roots(params, {contour->radius, contour->left_edge, contour->samples})
                         : dstab::count_rhp_roots(params);
        return DSTAB_OK;
    });
}

dstab_status dstab_rightmost_root(const dstab_params* p, double search_left, int* found, double* re, double* im) {
    DSTAB_REQUIRE(p && found && re && im);
    return guarded([&] {
        const auto r = dstab::rightmost_root(to_core(*p), search_left);
        *found = r ? 1 : 0;
        *re = r ? r->real() : 0.0;
        *im = r ? r->imag() : 0.0;
        return DSTAB_OK;
    });
}

dstab_status dstab_imaginary_crossings(const dstab_coefficients* k, double tau_max, dstab_crossings** out) {
    DSTAB_REQUIRE(k && out);
    *out = nullptr;
    return guarded([&] {
        *out = new dstab_crossings{dstab::imaginary_crossings(to_core(*k), tau_max)};
        return DSTAB_OK;
    });
}

size_t dstab_crossings_count(const dstab_crossings* c) { return c ? c->c.size() : 0; }

dstab_status dstab_crossings_get(const dstab_crossings* c, size_t i, double* omega, double* tau, dstab_direction* dir) {
    DSTAB_REQUIRE(c && omega && tau && dir);
    if (i >= c->c.size()) return fail(DSTAB_ERR_INVALID_ARGUMENT, "crossing index out of range");
    *omega = c->c[i].omega;
    *tau = c->c[i].tau;
    *dir = to_c(c->c[i].direction);
    return DSTAB_OK;
}

dstab_status dstab_crossings_to_json(const dstab_crossings* c, char* buf, size_t cap, size_t* len) {
    DSTAB_REQUIRE(c);
    return guarded([&] {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& x : c->c) arr.push_back(dstab::to_json(x));
        return copy_out(arr.dump(), buf, cap, len);
    });
}

void dstab_crossings_free(dstab_crossings* c) { delete c; }

dstab_status dstab_crossing_direction(const dstab_params* p, double omega, dstab_direction* dir) {
    DSTAB_REQUIRE(p && dir);
    return guarded([&] {
        *dir = to_c(dstab::crossing_direction(omega, p->tau, to_core(*p)));
        return DSTAB_OK;
    });
}

dstab_status dstab_continue_root(const dstab_params* p, double omega, double tau, int* found, double* re, double* im) {
    DSTAB_REQUIRE(p && found && re && im);
    return guarded([&] {
        const auto r = dstab::continue_root(to_core(*p), omega, tau);
        *found = r ? 1 : 0;
        *re = r ? r->real() : 0.0;
        *im = r ? r->imag() : 0.0;
        return DSTAB_OK;
    });
}

dstab_status dstab_simulate(const dstab_params* p, const dstab_sim_config* cfg, dstab_trajectory** out) {
    DSTAB_REQUIRE(p && cfg && out);
    *out = nullptr;
    return guarded([&] {
        dstab::SimConfig c;
        c.step = cfg->step;
        c.horizon = cfg->horizon;
        c.history.x0 = cfg->x0;
        c.history.y0 = cfg->y0;
        if (cfg->random_history) c.history.random_seed = cfg->seed;
        *out = new dstab_trajectory{dstab::simulate(to_core(*p), c)};
        return DSTAB_OK;
    });
}

size_t dstab_trajectory_size(const dstab_trajectory* tr) { return tr ? tr->tr.times.size() : 0; }

dstab_status dstab_trajectory_get(const dstab_trajectory* tr, size_t i, double* t, double* x, double* y) {
    DSTAB_REQUIRE(tr && t && x && y);
    if (i >= tr->tr.times.size()) return fail(DSTAB_ERR_INVALID_ARGUMENT, "sample index out of range");
    *t = tr->tr.times[i];
    *x = tr->tr.states[i].x;
    *y = tr->tr.states[i].y;
    return DSTAB_OK;
}

double dstab_trajectory_step(const dstab_trajectory* tr) { return tr ? tr->tr.step : 0.0; }

int dstab_trajectory_overflowed(const dstab_trajectory* tr) { return tr && tr->tr.overflowed ? 1 : 0; }

dstab_status dstab_trajectory_to_csv(const dstab_trajectory* tr, char* buf, size_t cap, size_t* len) {
    DSTAB_REQUIRE(tr);
    return guarded([&] {
        std::ostringstream os;
        dstab::write_csv(tr->tr, os);
        return copy_out(os.str(), buf, cap, len);
    });
}

dstab_status dstab_trajectory_write_csv(const dstab_trajectory* tr, const char* path) {
    DSTAB_REQUIRE(tr && path);
    return guarded([&] {
        std::ofstream os(path);
        if (!os) return fail(DSTAB_ERR_IO, "cannot open output file");
        dstab::write_csv(tr->tr, os);
        if (!os) return fail(DSTAB_ERR_IO, "write failed");
        return DSTAB_OK;
    });
}

dstab_status dstab_trajectory_to_json(const dstab_trajectory* tr, char* buf, size_t cap, size_t* len) {
    DSTAB_REQUIRE(tr);
    return guarded([&] { return copy_out(dstab::to_json(tr->tr).dump(), buf, cap, len); });
}

dstab_status dstab_estimate_decay(const dstab_trajectory* tr, double* rate, dstab_decay_hint* hint) {
    DSTAB_REQUIRE(tr && rate && hint);
    return guarded([&] {
        const auto est = dstab::estimate_decay(tr->tr);
        *rate = est.rate;
        switch (est.verdict_hint) {
            case dstab::DecayHint::Decaying: *hint = DSTAB_DECAYING; break;
            case dstab::DecayHint::Growing: *hint = DSTAB_GROWING; break;
            case dstab::DecayHint::Inconclusive: *hint = DSTAB_INCONCLUSIVE; break;
        }
        return DSTAB_OK;
    });
}

void dstab_trajectory_free(dstab_trajectory* tr) { delete tr; }

}  // extern "C"
