#include "frontlab/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <openssl/opensslv.h>

#include "frontlab/errors.hpp"

namespace frontlab {

namespace {

Json state_means(const std::vector<SteadyState>& states) {
    Json out = Json::array();
    for (const auto& s : states) out.push_back(s.profile.mean());
    return out;
}

Json indices(const std::vector<int>& v) { return Json(v); }

}  // namespace

std::string format_number(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

Json to_json(const GridMetadata& g) {
    return {{"h_s", g.h_s}, {"h_r", g.h_r}, {"tau", g.tau}, {"dt_max", g.dt_max},
            {"window_min", g.window_min}, {"window_max", g.window_max}};
}

Json to_json(const SpeedEstimate& s) {
    return {{"value", s.value}, {"lower", s.lower}, {"upper", s.upper},
            {"method", to_string(s.method)}, {"grid", to_json(s.grid)}};
}

Json to_json(const SteadyState& s) {
    const auto& v = s.profile.values();
    return {{"mean", s.profile.mean()},
            {"min", *std::min_element(v.begin(), v.end())},
            {"max", *std::max_element(v.begin(), v.end())},
            {"residual", s.residual},
            {"lambda", s.lambda},
            {"stability", to_string(s.stability)},
            {"polished", s.polished}};
}

Json to_json(const TerraceReport& r) {
    Json fronts = Json::array();
    for (std::size_t j = 0; j < r.speeds.size(); ++j) {
        Json f{{"upper_mean", r.states[j].profile.mean()},
               {"lower_mean", r.states[j + 1].profile.mean()},
               {"cstar", to_json(r.speeds[j])}};
        if (j < r.front_speeds.size()) f["front_speed"] = r.front_speeds[j];
        if (j < r.residuals.size()) f["residual"] = r.residuals[j];
        fronts.push_back(f);
    }
    Json states = Json::array();
    for (const auto& s : r.states) states.push_back(to_json(s));
    return {{"direction", {r.direction.m, r.direction.n}},
            {"floors", r.floors()},
            {"states", states},
            {"fronts", fronts},
            {"equal_within_resolution", r.equal_within_resolution},
            {"ordered", r.ordered},
            {"residuals_ok", r.residuals_ok},
            {"bracketing_ok", r.bracketing_ok},
            {"telescoping_error", r.telescoping_error},
            {"notes", r.notes}};
}

Json to_json(const CounterPropagation& c) {
    Json out{{"state_index", c.state_index},
             {"c_bar", to_json(c.c_bar)},
             {"c_under", to_json(c.c_under)},
             {"pass", c.pass},
             {"cross_check_ok", c.cross_check_ok}};
    if (c.c_under_direct) out["c_under_direct"] = to_json(*c.c_under_direct);
    return out;
}

Json to_json(const AssumptionReport& r, const std::vector<SteadyState>& states) {
    Json counter = Json::array();
    for (const auto& c : r.counter) counter.push_back(to_json(c));
    Json catalog = Json::array();
    for (const auto& s : states) catalog.push_back(to_json(s));
    return {{"label", to_string(r.label)},
            {"stable", indices(r.stable)},
            {"unstable", indices(r.unstable)},
            {"marginal", indices(r.marginal)},
            {"states", catalog},
            {"counter_propagation", counter},
            {"counter_propagation_ok", r.counter_propagation_ok},
            {"notes", r.notes}};
}

Json to_json(const TimeStepReport& r) {
    Json entries = Json::array();
    for (const auto& e : r.entries)
        entries.push_back({{"tau", e.tau},
                           {"cstar", to_json(e.cstar)},
                           {"front_speed", e.front_speed},
                           {"displacement", e.displacement}});
    return {{"entries", entries}, {"ratio_errors", r.ratio_errors}, {"speed_spread", r.speed_spread}};
}

Json to_json(const DirectionalSpeeds& s) {
    Json out{{"M", s.M}, {"e1", to_json(s.e1)}, {"e2", to_json(s.e2)},
             {"e1_disagrees", s.e1_disagrees}, {"e2_disagrees", s.e2_disagrees}};
    if (s.e1_check) out["e1_check"] = to_json(*s.e1_check);
    if (s.e2_check) out["e2_check"] = to_json(*s.e2_check);
    return out;
}

Json to_json(const DemoReport& r) {
    Json trace = Json::array();
    for (const auto& s : r.m.trace) trace.push_back(to_json(s));
    Json mp = Json::array();
    for (const auto& [m, c] : r.mprime.trace) mp.push_back({m, c});
    Json dirs = Json::array();
    for (const auto& d : r.directions)
        dirs.push_back({{"name", d.name}, {"terrace", to_json(d.terrace)}});
    return {{"L", r.L},
            {"eps", r.eps},
            {"S", r.S},
            {"M", r.m.M},
            {"M_threshold", r.m.threshold},
            {"M_trace_monotone", r.m.monotone},
            {"M_trace", trace},
            {"c", r.c},
            {"Mprime", r.mprime.Mprime},
            {"Mprime_speed", r.mprime.speed},
            {"Mprime_trace", mp},
            {"Mprime_trace_monotone", r.mprime.monotone},
            {"problem_class", to_string(r.assumptions.label)},
            {"catalog_means", state_means(r.catalog)},
            {"directions", dirs},
            {"bound", r.bound},
            {"bound_holds", r.bound_holds},
            {"counts_differ", r.counts_differ},
            {"two_floor_direction", r.two_floor_direction},
            {"two_floor_ordered", r.two_floor_ordered},
            {"single_front_spans", r.single_front_spans},
            {"speeds_positive", r.speeds_positive},
            {"ok", r.ok()},
            {"stage", r.stage},
            {"notes", r.notes}};
}

Json version_info() {
    return {{"frontlab", "0.1.0"},
            {"compiler", __VERSION__},
            {"cxx_standard", __cplusplus},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                          "." + std::to_string(EIGEN_MINOR_VERSION)},
            {"boost", BOOST_LIB_VERSION},
            {"openssl", OPENSSL_VERSION_TEXT},
            {"json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

Json to_json(const Manifest& m) {
    return {{"command", m.command},
            {"config_hash", m.config_hash},
            {"config", m.config_text},
            {"grid", to_json(m.grid)},
            {"seed", m.seed},
            {"started", m.started},
            {"outputs", m.outputs},
            {"versions", version_info()}};
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows, const std::string& manifest_ref) {
    std::ofstream out(path);
    if (!out) throw ConfigurationError("cannot write '" + path + "'");
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << cells[k];
        out << '\n';
    };
    line(header);
    for (const auto& r : rows) {
        if (r.size() != header.size()) throw ParameterError("CSV row width does not match its header");
        line(r);
    }
    out << "# manifest: " << manifest_ref << '\n';
}

void append_json_line(const std::string& path, const Json& record) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw ConfigurationError("cannot write '" + path + "'");
    out << record.dump() << '\n';
}

}  // namespace frontlab
