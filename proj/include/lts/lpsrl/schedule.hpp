#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lts/mdp/tabular.hpp"

namespace lts::lpsrl {

using mdp::Action;
using mdp::State;

enum class SwitchKind { kStaticDoubling, kDynamicDoubling, kTsde };

inline std::string to_string(SwitchKind k) {
    switch (k) {
        case SwitchKind::kStaticDoubling: return "static";
        case SwitchKind::kDynamicDoubling: return "dynamic";
        case SwitchKind::kTsde: return "tsde";
    }
    return "?";
}

/// Start and length (t_k, T_k) of policy k >= 1 under static doubling: both 2^{k-1}.
inline std::pair<std::uint64_t, std::uint64_t> static_schedule_next(std::uint64_t k) {
    if (k == 0 || k > 63) throw std::invalid_argument("static_schedule_next: k must lie in [1, 63]");
    const std::uint64_t len = std::uint64_t{1} << (k - 1);
    return {len, len};
}

/// Number of static policies used over T steps: smallest K with 2^K - 1 >= T.
inline std::uint64_t static_switch_count(std::uint64_t horizon) {
    std::uint64_t k = 0;
    while (((std::uint64_t{1} << k) - 1) < horizon) ++k;
    return k;
}

/// Decides at the start of each step t = 1, 2, ... whether a new policy
/// begins. The first step always starts policy 1.
///   static:  t_k = 2^{k-1}
///   dynamic: some n_t(s,a) > 2 n_{t_k}(s,a)
///   tsde:    t - t_k > T_{k-1} (T_0 = 1) or the dynamic condition
/// where n_t counts visits strictly before t.
class SwitchSchedule {
public:
    SwitchSchedule(SwitchKind kind, std::size_t num_states, std::size_t num_actions)
        : kind_(kind), A_(num_actions), visits_(num_states * num_actions, 0),
          visits_at_switch_(num_states * num_actions, 0) {
        if (num_states == 0 || num_actions == 0) throw std::invalid_argument("SwitchSchedule: empty state/action set");
    }

    [[nodiscard]] SwitchKind kind() const { return kind_; }

    /// Whether step t opens a new policy. Records the switch if so. Steps must
    /// be queried in order.
    bool begin_step(std::uint64_t t) {
        if (t != time_ + 1) throw std::logic_error("SwitchSchedule: steps must be consecutive");
        time_ = t;
        if (fires(t)) {
            if (!log_.empty()) last_length_ = t - log_.back();
            log_.push_back(t);
            visits_at_switch_ = visits_;
            return true;
        }
        return false;
    }

    /// Records the visit made during the current step.
    void visit(State s, Action a) { ++visits_.at(s * A_ + a); }

    [[nodiscard]] const std::vector<std::uint64_t>& switch_times() const { return log_; }
    [[nodiscard]] std::size_t switch_count() const { return log_.size(); }
    [[nodiscard]] std::uint64_t visits(State s, Action a) const { return visits_.at(s * A_ + a); }

private:
    [[nodiscard]] bool fires(std::uint64_t t) const {
        if (log_.empty()) return true;
        switch (kind_) {
            case SwitchKind::kStaticDoubling: return (t & (t - 1)) == 0;
            case SwitchKind::kDynamicDoubling: return doubled();
            case SwitchKind::kTsde: return t - log_.back() > last_length_ || doubled();
        }
        return false;
    }

    [[nodiscard]] bool doubled() const {
        for (std::size_t i = 0; i < visits_.size(); ++i)
            if (visits_[i] > 2 * visits_at_switch_[i]) return true;
        return false;
    }

    SwitchKind kind_;
    std::size_t A_;
    std::vector<std::uint64_t> visits_;
    std::vector<std::uint64_t> visits_at_switch_;
    std::vector<std::uint64_t> log_;
    std::uint64_t last_length_ = 1;
    std::uint64_t time_ = 0;
};

}  // namespace lts::lpsrl
