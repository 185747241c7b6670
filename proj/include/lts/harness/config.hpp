#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "lts/bandit/batching.hpp"
#include "lts/bandit/presets.hpp"
#include "lts/lpsrl/presets.hpp"
#include "lts/lpsrl/schedule.hpp"

namespace lts::harness {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind { kBandit, kMdp };

inline std::string to_string(ExperimentKind k) { return k == ExperimentKind::kBandit ? "bandit" : "mdp"; }

inline constexpr std::uint64_t kDefaultBanditHorizon = 650;

struct AlgorithmSpec {
    std::string name;
    std::string scheme;

    friend bool operator==(const AlgorithmSpec&, const AlgorithmSpec&) = default;
};

/// A fully resolved experiment: the preset (if any) has already been expanded
/// into `bandit` or `mdp` and every inline override applied.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::kBandit;
    std::string preset;
    bandit::BanditPreset bandit;
    lpsrl::MdpPreset mdp;
    std::vector<AlgorithmSpec> algorithms;
    std::uint64_t horizon = kDefaultBanditHorizon;
    std::vector<std::uint64_t> seeds;
    std::uint64_t master_seed = 0;
    std::string output;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

inline const std::vector<std::string>& bandit_algorithms() {
    static const std::vector<std::string> names{"sgld-ts", "exact-ts", "ucb1", "bayes-ucb", "eps-greedy"};
    return names;
}

inline const std::vector<std::string>& mdp_algorithms() {
    static const std::vector<std::string> names{"mld-psrl", "sgld-psrl", "ds-psrl", "db-psrl", "tsde", "optimal"};
    return names;
}

/// Scheme used when an algorithm entry names none.
inline std::string default_scheme(ExperimentKind kind, const std::string& algorithm) {
    if (kind == ExperimentKind::kBandit)
        return algorithm == "sgld-ts" || algorithm == "exact-ts" ? "dynamic" : "sequential";
    if (algorithm == "db-psrl") return "dynamic";
    if (algorithm == "tsde") return "tsde";
    if (algorithm == "optimal") return "none";
    return "static";
}

/// Schemes an MDP algorithm accepts. The exact-posterior baselines are defined
/// by their schedule, so they accept only their own.
inline std::vector<std::string> allowed_mdp_schemes(const std::string& algorithm) {
    if (algorithm == "mld-psrl" || algorithm == "sgld-psrl") return {"static", "dynamic", "tsde"};
    return {default_scheme(ExperimentKind::kMdp, algorithm)};
}

inline lpsrl::SwitchKind parse_switch_kind(const std::string& s) {
    if (s == "static") return lpsrl::SwitchKind::kStaticDoubling;
    if (s == "dynamic") return lpsrl::SwitchKind::kDynamicDoubling;
    if (s == "tsde") return lpsrl::SwitchKind::kTsde;
    throw std::invalid_argument("unknown switch schedule '" + s + "'");
}

namespace detail {

inline std::string at_line(const YAML::Mark& mark) {
    if (mark.is_null()) return "";
    return "line " + std::to_string(mark.line + 1) + ": ";
}

[[noreturn]] inline void fail(const YAML::Node& n, const std::string& msg) {
    throw ConfigError(at_line(n.Mark()) + msg);
}

/// Mapping view that remembers which keys were read so leftovers can be
/// reported as unknown.
class MapReader {
public:
    MapReader(const YAML::Node& node, std::string where) : node_(node), where_(std::move(where)) {
        if (!node_.IsMap()) fail(node_, where_ + " must be a mapping");
    }

    [[nodiscard]] bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }

    YAML::Node child(const std::string& key) {
        used_.insert(key);
        return node_[key];
    }

    template <class T>
    std::optional<T> get(const std::string& key) {
        const YAML::Node n = child(key);
        if (!n) return std::nullopt;
        if (!n.IsScalar()) fail(n, where_ + "." + key + " must be a scalar");
        try {
            return n.as<T>();
        } catch (const YAML::BadConversion&) {
            fail(n, where_ + "." + key + " has an invalid value '" + n.Scalar() + "'");
        }
    }

    template <class T>
    void read(const std::string& key, T& into) {
        if (auto v = get<T>(key)) into = *v;
    }

    std::optional<std::vector<double>> get_list(const std::string& key) {
        const YAML::Node n = child(key);
        if (!n) return std::nullopt;
        if (!n.IsSequence()) fail(n, where_ + "." + key + " must be a list");
        std::vector<double> out;
        for (const auto& item : n) {
            try {
                out.push_back(item.as<double>());
            } catch (const YAML::BadConversion&) {
                fail(item, where_ + "." + key + " entries must be numbers");
            }
        }
        return out;
    }

    void finish() const {
        for (const auto& kv : node_) {
            const std::string key = kv.first.as<std::string>();
            if (!used_.count(key)) fail(kv.first, "unknown key '" + key + "' in " + where_);
        }
    }

    [[nodiscard]] const YAML::Node& node() const { return node_; }

private:
    YAML::Node node_;
    std::string where_;
    std::set<std::string> used_;
};

inline std::uint64_t read_count(const YAML::Node& n, const std::string& what) {
    long long v = 0;
    try {
        v = n.as<long long>();
    } catch (const YAML::BadConversion&) {
        fail(n, what + " must be a non-negative integer");
    }
    if (v < 0) fail(n, what + " must be a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

inline void read_sgld(MapReader& r, SgldOverrides& o) {
    if (auto v = r.get<long long>("minibatch_size")) {
        if (*v <= 0) fail(r.node()["minibatch_size"], "sgld.minibatch_size must be positive");
        o.minibatch_size = static_cast<std::size_t>(*v);
    }
    if (auto v = r.get<double>("step_size")) {
        if (!(*v > 0.0)) fail(r.node()["step_size"], "sgld.step_size must be positive");
        o.step_size = *v;
    }
    if (auto v = r.get<long long>("num_iters")) {
        if (*v < 0) fail(r.node()["num_iters"], "sgld.num_iters must be non-negative");
        o.num_iters = static_cast<std::size_t>(*v);
    }
    if (auto v = r.get<double>("gamma")) {
        if (!(*v > 0.0)) fail(r.node()["gamma"], "sgld.gamma must be positive");
        o.gamma = *v;
    }
    r.finish();
}

inline void read_mld(MapReader& r, MldConfig& m) {
    r.read("step_constant", m.step_constant);
    r.read("iter_constant", m.iter_constant);
    if (auto v = r.get<long long>("min_iters")) {
        if (*v < 0) fail(r.node()["min_iters"], "mld.min_iters must be non-negative");
        m.min_iters = static_cast<std::size_t>(*v);
    }
    if (auto v = r.get<std::string>("budget")) {
        if (*v == "linear") m.budget = MldBudget::kLinear;
        else if (*v == "state-action") m.budget = MldBudget::kStateAction;
        else fail(r.node()["budget"], "mld.budget must be 'linear' or 'state-action'");
    }
    if (!(m.step_constant > 0.0) || !(m.iter_constant >= 0.0))
        fail(r.node(), "mld.step_constant must be positive and mld.iter_constant non-negative");
    r.finish();
}

inline void read_bandit_env(MapReader& r, bandit::BanditPreset& p) {
    if (auto v = r.get<std::string>("type")) {
        if (*v == "gaussian") p.kind = bandit::RewardKind::kGaussian;
        else if (*v == "laplace") p.kind = bandit::RewardKind::kLaplace;
        else fail(r.node()["type"], "bandit environment type must be 'gaussian' or 'laplace'");
    }
    if (auto v = r.get<long long>("num_arms")) {
        if (*v <= 0) fail(r.node()["num_arms"], "environment.num_arms must be positive");
        p.num_arms = static_cast<std::size_t>(*v);
    }
    r.read("mean_lo", p.mean_lo);
    r.read("mean_hi", p.mean_hi);
    r.read("scale", p.scale);
    r.read("informative", p.informative);
    r.read("prior_lo", p.prior_lo);
    r.read("prior_hi", p.prior_hi);
    r.read("prior_variance", p.prior_variance);
    if (!(p.scale > 0.0)) fail(r.node(), "environment.scale must be positive");
    if (!(p.prior_variance > 0.0)) fail(r.node(), "environment.prior_variance must be positive");
    r.finish();
}

inline void read_mdp_env(MapReader& r, lpsrl::MdpPreset& p) {
    if (auto v = r.get<std::string>("type")) {
        if (*v == "riverswim") p.kind = lpsrl::MdpKind::kRiverSwim;
        else if (*v == "poi") p.kind = lpsrl::MdpKind::kPoi;
        else fail(r.node()["type"], "mdp environment type must be 'riverswim' or 'poi'");
    }
    r.read("prior_count", p.prior_count);
    if (auto v = r.get_list("base_probs")) p.poi.base_probs = *v;
    if (auto v = r.get_list("rewards")) p.poi.rewards = *v;
    r.read("theta_true", p.poi.theta_true);
    r.read("prior_mean", p.poi.prior_mean);
    r.read("prior_variance", p.poi.prior_variance);
    r.read("theta_floor", p.poi.theta_floor);
    if (!(p.prior_count > 0.0)) fail(r.node(), "environment.prior_count must be positive");
    if (p.kind == lpsrl::MdpKind::kPoi) {
        try {
            (void)lpsrl::make_poi(p.poi);
        } catch (const std::exception& e) {
            fail(r.node(), std::string("invalid POI environment: ") + e.what());
        }
        if (!(p.poi.prior_variance > 0.0) || !(p.poi.theta_floor > 0.0))
            fail(r.node(), "environment.prior_variance and theta_floor must be positive");
    }
    r.finish();
}

}  // namespace detail

/// Semantic checks that do not depend on YAML positions.
inline void validate(const ExperimentConfig& cfg) {
    if (cfg.seeds.empty()) throw ConfigError("seeds must be a non-empty list");
    if (cfg.horizon == 0) throw ConfigError("horizon must be >= 1");
    if (cfg.algorithms.empty()) throw ConfigError("algorithms must be a non-empty list");
    const bool bandit_kind = cfg.kind == ExperimentKind::kBandit;
    const auto& known = bandit_kind ? bandit_algorithms() : mdp_algorithms();
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& a : cfg.algorithms) {
        if (std::find(known.begin(), known.end(), a.name) == known.end())
            throw ConfigError("unknown " + to_string(cfg.kind) + " algorithm '" + a.name + "'");
        if (!seen.insert({a.name, a.scheme}).second)
            throw ConfigError("algorithm '" + a.name + "' with scheme '" + a.scheme + "' is listed twice");
        if (bandit_kind) {
            try {
                (void)bandit::parse_scheme(a.scheme);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string(e.what()) + " for algorithm '" + a.name + "'");
            }
            if ((a.name == "exact-ts" || a.name == "bayes-ucb") && cfg.bandit.kind != bandit::RewardKind::kGaussian)
                throw ConfigError("algorithm '" + a.name + "' needs Gaussian rewards");
        } else {
            const auto ok = allowed_mdp_schemes(a.name);
            if (std::find(ok.begin(), ok.end(), a.scheme) == ok.end())
                throw ConfigError("algorithm '" + a.name + "' does not support scheme '" + a.scheme + "'");
            if (a.name == "sgld-psrl" && cfg.mdp.kind != lpsrl::MdpKind::kPoi)
                throw ConfigError("sgld-psrl needs the POI environment");
        }
    }
}

/// Parses and validates a config document. Unknown keys are rejected.
inline ExperimentConfig parse_config(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(detail::at_line(e.mark) + e.msg);
    }
    if (!root || root.IsNull()) throw ConfigError("config is empty");
    detail::MapReader r(root, "config");

    ExperimentConfig cfg;
    const auto kind = r.get<std::string>("experiment");
    if (!kind) throw ConfigError("missing required key 'experiment' (bandit or mdp)");
    if (*kind == "bandit") cfg.kind = ExperimentKind::kBandit;
    else if (*kind == "mdp") cfg.kind = ExperimentKind::kMdp;
    else detail::fail(root["experiment"], "experiment must be 'bandit' or 'mdp'");
    const bool bandit_kind = cfg.kind == ExperimentKind::kBandit;

    if (auto name = r.get<std::string>("preset")) {
        cfg.preset = *name;
        if (bandit_kind) {
            auto p = bandit::find_bandit_preset(*name);
            if (!p) detail::fail(root["preset"], "unknown bandit preset '" + *name + "'");
            cfg.bandit = *p;
        } else {
            auto p = lpsrl::find_mdp_preset(*name);
            if (!p) detail::fail(root["preset"], "unknown mdp preset '" + *name + "'");
            cfg.mdp = *p;
        }
    } else if (!r.has("environment")) {
        throw ConfigError("either 'preset' or 'environment' is required");
    }
    if (!bandit_kind) cfg.horizon = cfg.mdp.horizon;

    if (const YAML::Node env = r.child("environment")) {
        detail::MapReader er(env, "environment");
        if (bandit_kind) detail::read_bandit_env(er, cfg.bandit);
        else detail::read_mdp_env(er, cfg.mdp);
    }
    if (const YAML::Node s = r.child("sgld")) {
        detail::MapReader sr(s, "sgld");
        detail::read_sgld(sr, bandit_kind ? cfg.bandit.sgld : cfg.mdp.sgld);
    }
    if (const YAML::Node m = r.child("mld")) {
        if (bandit_kind) detail::fail(m, "mld settings apply to mdp experiments only");
        detail::MapReader mr(m, "mld");
        detail::read_mld(mr, cfg.mdp.mld);
    }

    const YAML::Node algs = r.child("algorithms");
    if (!algs) throw ConfigError("missing required key 'algorithms'");
    if (!algs.IsSequence()) detail::fail(algs, "algorithms must be a list");
    for (const auto& item : algs) {
        AlgorithmSpec spec;
        if (item.IsScalar()) {
            spec.name = item.as<std::string>();
        } else {
            detail::MapReader ar(item, "algorithm entry");
            const auto name = ar.get<std::string>("name");
            if (!name) detail::fail(item, "algorithm entry needs a 'name'");
            spec.name = *name;
            if (auto sch = ar.get<std::string>("scheme")) spec.scheme = *sch;
            ar.finish();
        }
        if (spec.scheme.empty()) spec.scheme = default_scheme(cfg.kind, spec.name);
        cfg.algorithms.push_back(spec);
    }

    if (const YAML::Node h = r.child("horizon")) cfg.horizon = detail::read_count(h, "horizon");

    const YAML::Node seeds = r.child("seeds");
    if (!seeds) throw ConfigError("missing required key 'seeds'");
    if (!seeds.IsSequence()) detail::fail(seeds, "seeds must be a list");
    for (const auto& s : seeds) cfg.seeds.push_back(detail::read_count(s, "seed"));
    if (cfg.seeds.empty()) detail::fail(seeds, "seeds must be a non-empty list");

    if (const YAML::Node ms = r.child("master_seed")) cfg.master_seed = detail::read_count(ms, "master_seed");
    r.read("output", cfg.output);
    r.finish();

    try {
        validate(cfg);
    } catch (const ConfigError& e) {
        throw ConfigError(detail::at_line(root.Mark()) + e.what());
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

/// Writes the resolved config back out; parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const ExperimentConfig& cfg) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "experiment" << YAML::Value << to_string(cfg.kind);
    if (!cfg.preset.empty()) out << YAML::Key << "preset" << YAML::Value << cfg.preset;

    const SgldOverrides* sgld = nullptr;
    out << YAML::Key << "environment" << YAML::Value << YAML::BeginMap;
    if (cfg.kind == ExperimentKind::kBandit) {
        const auto& b = cfg.bandit;
        out << YAML::Key << "type" << YAML::Value << bandit::to_string(b.kind);
        out << YAML::Key << "num_arms" << YAML::Value << b.num_arms;
        out << YAML::Key << "mean_lo" << YAML::Value << b.mean_lo;
        out << YAML::Key << "mean_hi" << YAML::Value << b.mean_hi;
        out << YAML::Key << "scale" << YAML::Value << b.scale;
        out << YAML::Key << "informative" << YAML::Value << b.informative;
        out << YAML::Key << "prior_lo" << YAML::Value << b.prior_lo;
        out << YAML::Key << "prior_hi" << YAML::Value << b.prior_hi;
        out << YAML::Key << "prior_variance" << YAML::Value << b.prior_variance;
        sgld = &b.sgld;
    } else {
        const auto& m = cfg.mdp;
        out << YAML::Key << "type" << YAML::Value << lpsrl::to_string(m.kind);
        out << YAML::Key << "prior_count" << YAML::Value << m.prior_count;
        if (m.kind == lpsrl::MdpKind::kPoi) {
            out << YAML::Key << "base_probs" << YAML::Value << YAML::Flow << m.poi.base_probs;
            out << YAML::Key << "rewards" << YAML::Value << YAML::Flow << m.poi.rewards;
            out << YAML::Key << "theta_true" << YAML::Value << m.poi.theta_true;
            out << YAML::Key << "prior_mean" << YAML::Value << m.poi.prior_mean;
            out << YAML::Key << "prior_variance" << YAML::Value << m.poi.prior_variance;
            out << YAML::Key << "theta_floor" << YAML::Value << m.poi.theta_floor;
        }
        sgld = &m.sgld;
    }
    out << YAML::EndMap;

    if (sgld->minibatch_size || sgld->step_size || sgld->num_iters || sgld->gamma) {
        out << YAML::Key << "sgld" << YAML::Value << YAML::BeginMap;
        if (sgld->minibatch_size) out << YAML::Key << "minibatch_size" << YAML::Value << *sgld->minibatch_size;
        if (sgld->step_size) out << YAML::Key << "step_size" << YAML::Value << *sgld->step_size;
        if (sgld->num_iters) out << YAML::Key << "num_iters" << YAML::Value << *sgld->num_iters;
        if (sgld->gamma) out << YAML::Key << "gamma" << YAML::Value << *sgld->gamma;
        out << YAML::EndMap;
    }
    if (cfg.kind == ExperimentKind::kMdp) {
        const auto& m = cfg.mdp.mld;
        out << YAML::Key << "mld" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "step_constant" << YAML::Value << m.step_constant;
        out << YAML::Key << "iter_constant" << YAML::Value << m.iter_constant;
        out << YAML::Key << "min_iters" << YAML::Value << m.min_iters;
        out << YAML::Key << "budget" << YAML::Value << (m.budget == MldBudget::kLinear ? "linear" : "state-action");
        out << YAML::EndMap;
    }

    out << YAML::Key << "algorithms" << YAML::Value << YAML::BeginSeq;
    for (const auto& a : cfg.algorithms)
        out << YAML::Flow << YAML::BeginMap << YAML::Key << "name" << YAML::Value << a.name << YAML::Key << "scheme"
            << YAML::Value << a.scheme << YAML::EndMap;
    out << YAML::EndSeq;
    out << YAML::Key << "horizon" << YAML::Value << cfg.horizon;
    out << YAML::Key << "seeds" << YAML::Value << YAML::Flow << cfg.seeds;
    out << YAML::Key << "master_seed" << YAML::Value << cfg.master_seed;
    if (!cfg.output.empty()) out << YAML::Key << "output" << YAML::Value << cfg.output;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace lts::harness
