#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lts/bandit/presets.hpp"
#include "lts/mdp/poi.hpp"
#include "lts/mdp/riverswim.hpp"
#include "lts/samplers/mld.hpp"
#include "lts/samplers/sgld.hpp"

namespace lts::lpsrl {

enum class MdpKind { kRiverSwim, kPoi };

inline std::string to_string(MdpKind k) { return k == MdpKind::kRiverSwim ? "riverswim" : "poi"; }

struct PoiSpec {
    std::vector<double> base_probs;
    std::vector<double> rewards;
    double theta_true = 2.0;
    double prior_mean = 1.0;
    double prior_variance = 1.0;
    double theta_floor = 0.05;

    friend bool operator==(const PoiSpec&, const PoiSpec&) = default;
};

struct MdpPreset {
    std::string name;
    MdpKind kind = MdpKind::kRiverSwim;
    std::uint64_t horizon = 3000;
    double prior_count = 1.0;
    MldConfig mld;
    SgldOverrides sgld;
    PoiSpec poi;

    friend bool operator==(const MdpPreset&, const MdpPreset&) = default;
};

inline mdp::PoiMdp make_poi(const PoiSpec& p) { return {p.base_probs, p.rewards, p.theta_true}; }

/// SGLD target for a POI spec. The smoothness constants are the Fisher
/// information at the prior mean, so nothing about theta* leaks in.
inline mdp::PoiModel make_poi_model(const PoiSpec& p) {
    const double info = mdp::poi_fisher_information(p.base_probs, p.prior_mean);
    return {p.base_probs, GaussianPrior::scalar(p.prior_mean, p.prior_variance), {info, info, info}, p.theta_floor};
}

inline std::vector<MdpPreset> mdp_presets() {
    MdpPreset river;
    river.name = "riverswim";
    river.kind = MdpKind::kRiverSwim;
    river.horizon = 3000;

    MdpPreset poi;
    poi.name = "poi5";
    poi.kind = MdpKind::kPoi;
    poi.horizon = 2048;
    poi.sgld.gamma = bandit::kPresetGamma;
    poi.poi.base_probs = {0.16, 0.22, 0.18, 0.25, 0.19};
    poi.poi.rewards = {6.0, 8.0, 10.0, 7.0, 9.0};
    return {river, poi};
}

inline std::optional<MdpPreset> find_mdp_preset(const std::string& name) {
    for (auto& p : mdp_presets())
        if (p.name == name) return p;
    return std::nullopt;
}

}  // namespace lts::lpsrl
