#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lts::bandit {

enum class BatchScheme { kSequential, kDynamic, kStatic };

inline std::string to_string(BatchScheme s) {
    switch (s) {
        case BatchScheme::kSequential: return "sequential";
        case BatchScheme::kDynamic: return "dynamic";
        case BatchScheme::kStatic: return "static";
    }
    return "?";
}

inline BatchScheme parse_scheme(const std::string& s) {
    if (s == "sequential") return BatchScheme::kSequential;
    if (s == "dynamic") return BatchScheme::kDynamic;
    if (s == "static") return BatchScheme::kStatic;
    throw std::invalid_argument("unknown batch scheme '" + s + "'");
}

/// Dynamic doubling: the current batch ends as soon as the pulled arm's count
/// reaches 2^{l_a}; l_a is then incremented. All counters start at zero.
class DynamicDoublingState {
public:
    explicit DynamicDoublingState(std::size_t num_arms)
        : k_(num_arms, 0), l_(num_arms, 0), k_at_boundary_(num_arms, 0) {}

    /// Records a pull at the next time step; true iff that step closes the batch.
    bool update(std::size_t arm) {
        ++t_;
        const std::uint64_t count = ++k_.at(arm);
        if (count != (std::uint64_t{1} << l_[arm])) return false;
        ++l_[arm];
        batch_log_.emplace_back(batch_start_, t_);
        ++batch_index_;
        batch_start_ = t_ + 1;
        k_at_boundary_ = k_;
        return true;
    }

    [[nodiscard]] const std::vector<std::uint64_t>& pulls() const { return k_; }
    [[nodiscard]] const std::vector<std::uint32_t>& exponents() const { return l_; }
    /// Counts as of the most recent boundary at or before the current step.
    [[nodiscard]] const std::vector<std::uint64_t>& pulls_at_last_boundary() const { return k_at_boundary_; }
    [[nodiscard]] std::size_t batch_index() const { return batch_index_; }
    [[nodiscard]] std::uint64_t batch_start() const { return batch_start_; }
    [[nodiscard]] std::uint64_t time() const { return t_; }
    [[nodiscard]] const std::vector<std::pair<std::uint64_t, std::uint64_t>>& batch_log() const { return batch_log_; }

private:
    std::vector<std::uint64_t> k_;
    std::vector<std::uint32_t> l_;
    std::vector<std::uint64_t> k_at_boundary_;
    std::size_t batch_index_ = 0;
    std::uint64_t batch_start_ = 1;
    std::uint64_t t_ = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> batch_log_;
};

/// Upper bound N * ceil(log2(T + 1)) on the number of dynamic batches.
inline std::uint64_t dynamic_batch_bound(std::size_t num_arms, std::uint64_t horizon) {
    return num_arms * static_cast<std::uint64_t>(std::ceil(std::log2(static_cast<double>(horizon) + 1.0)));
}

/// Static scheme with batch sizes 2, 4, 8, ...: boundaries at 2, 6, 14, ...,
/// with the last batch truncated at T.
inline std::vector<std::uint64_t> static_batch_boundaries(std::uint64_t horizon) {
    if (horizon == 0) throw std::invalid_argument("static_batch_boundaries: horizon must be >= 1");
    std::vector<std::uint64_t> out;
    std::uint64_t size = 2;
    std::uint64_t end = 0;
    while (true) {
        end += size;
        if (end >= horizon) {
            out.push_back(horizon);
            return out;
        }
        out.push_back(end);
        size *= 2;
    }
}

/// Per-step boundary oracle for any of the three schemes.
class BatchClock {
public:
    BatchClock(BatchScheme scheme, std::size_t num_arms, std::uint64_t horizon)
        : scheme_(scheme), dynamic_(num_arms) {
        if (scheme == BatchScheme::kStatic) static_ = static_batch_boundaries(horizon);
    }

    /// Advances one step with the given pulled arm; true iff the batch ends here.
    bool step(std::size_t arm) {
        ++t_;
        switch (scheme_) {
            case BatchScheme::kSequential: return true;
            case BatchScheme::kDynamic: return dynamic_.update(arm);
            case BatchScheme::kStatic:
                if (next_static_ < static_.size() && static_[next_static_] == t_) {
                    ++next_static_;
                    return true;
                }
                return false;
        }
        return false;
    }

    [[nodiscard]] BatchScheme scheme() const { return scheme_; }
    [[nodiscard]] const DynamicDoublingState& dynamic_state() const { return dynamic_; }

private:
    BatchScheme scheme_;
    DynamicDoublingState dynamic_;
    std::vector<std::uint64_t> static_;
    std::size_t next_static_ = 0;
    std::uint64_t t_ = 0;
};

}  // namespace lts::bandit
