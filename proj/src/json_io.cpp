#include "delaystab/json_io.hpp"

namespace dstab {

namespace {

template <class T>
void put(nlohmann::json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

}  // namespace

nlohmann::json to_json(const DerivedQuantities& dq) {
    nlohmann::json j;
    j["bc"] = dq.bc;
    put(j, "beta", dq.beta);
    put(j, "d", dq.d);
    put(j, "D", dq.D);
    put(j, "sqrtD", dq.sqrtD);
    put(j, "E", dq.E);
    put(j, "omega1", dq.omega1);
    put(j, "omega2", dq.omega2);
    put(j, "k", dq.k);
    put(j, "l", dq.l);
    return j;
}

nlohmann::json to_json(const Verdict& v) {
    nlohmann::json j;
    j["status"] = to_string(v.status);
    j["branch"] = v.branch;
    put(j, "witness", v.witness);
    return j;
}

nlohmann::json to_json(const TauWindows& w) {
    nlohmann::json intervals = nlohmann::json::array();
    for (const auto& iv : w.intervals) {
        nlohmann::json e;
        e["lo"] = iv.lo;
        if (!iv.unbounded()) e["hi"] = iv.hi;
        intervals.push_back(std::move(e));
    }
    nlohmann::json j;
    j["intervals"] = std::move(intervals);
    if (!w.diagnostics.empty()) j["diagnostics"] = w.diagnostics;
    return j;
}

nlohmann::json to_json(const Trajectory& tr) {
    nlohmann::json states = nlohmann::json::array();
    for (const auto& s : tr.states) states.push_back({s.x, s.y});
    nlohmann::json j;
    j["times"] = tr.times;
    j["states"] = std::move(states);
    j["step"] = tr.step;
    if (tr.overflowed) j["overflowed"] = true;
    return j;
}

nlohmann::json to_json(const Crossing& c) {
    return {{"omega", c.omega}, {"tau", c.tau}, {"direction", to_string(c.direction)}};
}

}  // namespace dstab
