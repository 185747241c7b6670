#pragma once

#include "lts/mdp/tabular.hpp"

namespace lts::mdp {

namespace riverswim_actions {
inline constexpr Action kLeft = 0;
inline constexpr Action kRight = 1;
}  // namespace riverswim_actions

/// Five-state, two-action RiverSwim variant. Swimming right succeeds w.p. 0.8,
/// swimming left w.p. 0.2; a failed move stays put. At the right end a right
/// move stays w.p. 0.8 and drifts back w.p. 0.2; at the left end a left move
/// always stays. Reward 2 in the leftmost state, 10 in the rightmost, else 0,
/// regardless of action. Episodes start in state 0.
inline TabularMdp riverswim() {
    using namespace riverswim_actions;
    constexpr std::size_t S = 5;
    TabularMdp m(S, 2);
    for (State s = 0; s < S; ++s) {
        if (s + 1 < S) {
            m.p(s, kRight, s + 1) = 0.8;
            m.p(s, kRight, s) = 0.2;
        } else {
            m.p(s, kRight, s) = 0.8;
            m.p(s, kRight, s - 1) = 0.2;
        }
        if (s > 0) {
            m.p(s, kLeft, s - 1) = 0.2;
            m.p(s, kLeft, s) = 0.8;
        } else {
            m.p(s, kLeft, s) = 1.0;
        }
        const double r = s == 0 ? 2.0 : (s + 1 == S ? 10.0 : 0.0);
        m.reward(s, kLeft) = r;
        m.reward(s, kRight) = r;
    }
    m.validate();
    return m;
}

inline constexpr State kRiverSwimStart = 0;

}  // namespace lts::mdp
