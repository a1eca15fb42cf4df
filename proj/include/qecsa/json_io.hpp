#pragma once

// JSON views of the domain types. Field elements serialize as decimal
// integers, matrices as row-major nested arrays. Server indices and message
// indices are 1-based on the wire (matching the CLI), 0-based in the API.

#include <json.hpp>

#include "codes.hpp"
#include "protocol.hpp"
#include "rational.hpp"

namespace qecsa {

inline void to_json(nlohmann::json& j, const Fe& e) { j = e.value(); }

inline void to_json(nlohmann::json& j, const Mat& m) {
    j = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < m.cols(); ++c)
            row.push_back(m(i, c).value());
        j.push_back(std::move(row));
    }
}

inline void to_json(nlohmann::json& j, const Rational& r) {
    j = nlohmann::json{{"num", r.num}, {"den", r.den}, {"text", r.str()}};
}

inline void to_json(nlohmann::json& j, const InstancePlan& ip) {
    j = nlohmann::json{{"t_effective", ip.t_effective},
                       {"l_symbols", ip.l_symbols}};
}

namespace detail {

inline nlohmann::json one_based(const std::vector<std::size_t>& idx) {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t i : idx) out.push_back(i + 1);
    return out;
}

} // namespace detail

inline void to_json(nlohmann::json& j, const SchemeParams& p) {
    j = nlohmann::json{{"N", p.n_servers},
                       {"K", p.n_messages},
                       {"X", p.x_secure},
                       {"T", p.t_private},
                       {"E", p.erasures},
                       {"q", p.field.modulus()},
                       {"regime", regime_name(p.regime)},
                       {"per_instance", p.per_instance},
                       {"alpha", p.points.alpha},
                       {"f", p.points.f},
                       {"u", p.mult.u},
                       {"v", p.mult.v},
                       {"rate", p.achieved_rate()}};
}

inline void to_json(nlohmann::json& j, const ServerShare& s) { j = s.s; }
inline void to_json(nlohmann::json& j, const QueryShare& q) { j = q.q; }

inline void to_json(nlohmann::json& j, const Transcript& t) {
    nlohmann::json deltas1 = nlohmann::json::array();
    nlohmann::json deltas2 = nlohmann::json::array();
    for (const auto& d : t.deltas) {
        deltas1.push_back(d.first.value());
        deltas2.push_back(d.second.value());
    }
    j = nlohmann::json{
        {"params", t.params},
        {"theta", t.theta + 1},
        {"seed", t.seed},
        {"messages", t.messages.w},
        {"shares", t.shares},
        {"queries", t.queries},
        {"answers", t.answers},
        {"erasures",
         {{"actual", detail::one_based(t.actual_erasures)},
          {"declared", detail::one_based(t.declared_erasures)}}},
        {"deltas", {{"delta1", deltas1}, {"delta2", deltas2}}},
        {"box_input", t.box_input},
        {"box_output", t.box_output},
        {"decoded",
         {{"w", t.decoded_w},
          {"nu", t.decoded_nu},
          {"delta1", t.recovered_delta1},
          {"delta2", t.recovered_delta2}}},
        {"download_qudits", t.download_qudits},
        {"rate", t.achieved_rate()}};
}

inline void to_json(nlohmann::json& j, const GhPair& gh) {
    j = nlohmann::json{{"G", gh.g}, {"H", gh.h}};
}

inline void to_json(nlohmann::json& j, const MdsReport& r) {
    j = nlohmann::json{
        {"ok", r.ok},
        {"mode", r.mode == CheckMode::exhaustive ? "exhaustive" : "sampled"},
        {"checked", r.checked},
        {"witness_rows", detail::one_based(r.witness_rows)}};
}

} // namespace qecsa
