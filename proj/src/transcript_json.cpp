#include "qsdc/transcript_json.hpp"

namespace qsdc {

using nlohmann::json;

json params_to_json(const ChannelParams& p) {
    return json{{"eta_d", p.eta_d},
                {"zeta", p.zeta},
                {"p_d", p.p_d},
                {"e_0", p.e_0},
                {"delta", p.delta},
                {"mu", p.mu},
                {"nu", p.nu},
                {"f_ec", p.f_ec},
                {"T", p.T},
                {"lambda_threshold", p.lambda_threshold},
                {"phase_slices", p.phase_slices}};
}

json report_to_json(const EstimationReport& r) {
    return json{{"q_emp", r.q_emp},
                {"ez_emp", r.ez_emp},
                {"x_qber_emp", r.x_qber_emp},
                {"q_match_emp", r.q_match_emp},
                {"delta_1", r.delta_1},
                {"e_x11", r.e_x11},
                {"r_est", r.r_est},
                {"n_valid", r.n_valid},
                {"n_matched", r.n_matched},
                {"n_matched_z", r.n_matched_z},
                {"n_matched_x", r.n_matched_x},
                {"isolation_count", r.isolation_count},
                {"aborted", r.aborted}};
}

namespace {

json pattern_to_json(const PatternStats& s) {
    return json{{"rounds", s.rounds},
                {"at_least_one_click", s.at_least_one_click},
                {"exactly_one_click", s.exactly_one_click}};
}

std::string bits_to_string(const std::vector<std::uint8_t>& bits) {
    std::string s;
    s.reserve(bits.size());
    for (std::uint8_t b : bits) s.push_back(b ? '1' : '0');
    return s;
}

}  // namespace

json transcript_to_json(const SimTranscript& t, bool dump_rounds) {
    json j;
    json params = params_to_json(t.config.params);
    params["d_km"] = t.config.d_km;
    params["n_rounds"] = t.config.n_rounds;
    params["seed"] = t.config.seed;
    j["params"] = params;

    j["rounds_summary"] = json{{"n_rounds", t.summary.n_rounds},
                               {"both_on", pattern_to_json(t.summary.both_on)},
                               {"alice_only", pattern_to_json(t.summary.alice_only)},
                               {"bob_only", pattern_to_json(t.summary.bob_only)},
                               {"both_off", pattern_to_json(t.summary.both_off)},
                               {"click_none", t.summary.click_none},
                               {"click_d0_only", t.summary.click_d0_only},
                               {"click_d1_only", t.summary.click_d1_only},
                               {"click_both", t.summary.click_both}};

    json valid_indices = json::array();
    for (const auto& v : t.valid) valid_indices.push_back(v.round_index);
    j["valid_indices"] = std::move(valid_indices);
    j["isolation"] =
        json{{"isolated_count", t.isolation.isolated_count}, {"pass", t.isolation.pass}};

    json pairs = json::array();
    for (const auto& p : t.assignment.pairs) {
        json jp{{"i", p.i}, {"j", p.j}, {"kind", to_string(p.kind)}};
        if (p.kind == BasisKind::Z0 || p.kind == BasisKind::Z1) {
            jp["bit"] = p.kind == BasisKind::Z1 ? 1 : 0;
            jp["position"] = p.z_pos;
        }
        pairs.push_back(std::move(jp));
    }
    j["assignment"] = json{{"n_x", t.assignment.n_x},
                           {"n_z", t.assignment.n_z},
                           {"n_o", t.assignment.n_o},
                           {"pairs", std::move(pairs)}};

    json matched = json::array();
    for (const auto& m : t.matched) {
        matched.push_back(json{{"i", m.pair.i},
                               {"j", m.pair.j},
                               {"kind", to_string(m.pair.kind)},
                               {"alice",
                                {{"intensity_i", m.alice_intensity_i},
                                 {"intensity_j", m.alice_intensity_j},
                                 {"phase_i", m.alice_phase_i},
                                 {"phase_j", m.alice_phase_j}}},
                               {"bob",
                                {{"intensity_i", m.bob_intensity_i},
                                 {"intensity_j", m.bob_intensity_j},
                                 {"phase_i", m.bob_phase_i},
                                 {"phase_j", m.bob_phase_j}}}});
    }
    j["matched"] = std::move(matched);

    j["bits"] = json{{"alice", bits_to_string(t.bits.alice)},
                     {"bob", bits_to_string(t.bits.bob)}};
    j["report"] = report_to_json(t.report);

    if (dump_rounds) {
        json rounds = json::array();
        for (std::size_t i = 0; i < t.rounds.size(); ++i) {
            const PulseRound& r = t.rounds[i];
            rounds.push_back(json{{"index", r.index},
                                  {"alice_intensity", r.alice_intensity},
                                  {"alice_phase", r.alice_phase},
                                  {"bob_intensity", r.bob_intensity},
                                  {"bob_phase", r.bob_phase},
                                  {"d0", t.detections[i].d0},
                                  {"d1", t.detections[i].d1}});
        }
        j["rounds"] = std::move(rounds);
    }
    return j;
}

std::string transcript_to_string(const SimTranscript& t, bool dump_rounds) {
    return transcript_to_json(t, dump_rounds).dump();
}

}  // namespace qsdc
