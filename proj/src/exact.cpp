#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "pdp/backends.hpp"

namespace pdp {

namespace {

// Depth-first enumeration of ordered order subsets. Time windows and
// capacity are prefix-monotone (appending a stop never lowers an earlier
// arrival or load), so an infeasible prefix is cut with its whole subtree.
// Duration is checked per candidate only: without the triangle inequality a
// longer route can come back sooner.
class ExactSearch {
public:
    ExactSearch(const FilteredSubproblem& sub, double reward) : sub_(sub), reward_(reward) {
        const std::size_t n = sub.size();
        min_in_.assign(n, std::numeric_limits<double>::infinity());
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t i = 0; i <= n; ++i) {
                if (i != r + 1) min_in_[r] = std::min(min_in_[r], sub.travel.dist(i, r + 1));
            }
        }
        allowed_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            allowed_[i] = sub.filtered || can_serve(sub.vehicle.type, sub.orders[i]);
        }
        used_.assign(n, false);
    }

    void run() {
        State root;
        visit(root);
    }

    const std::vector<std::size_t>& best() const { return best_path_; }
    double best_objective() const { return best_objective_; }
    std::uint64_t evaluations() const { return evaluations_; }

private:
    struct State {
        std::size_t last_node = 0;  // local node
        double clock = 0.0;
        double distance = 0.0;
        Load peak;                  // max load so far, departure included
        Load final;                 // on board after the last stop
    };

    static constexpr double kTol = kFeasibilityTolerance;

    void visit(const State& s) {
        ++evaluations_;
        const double duration = path_.empty() ? 0.0 : s.clock + sub_.travel.time(s.last_node, 0);
        const auto& rt = sub_.vehicle.max_duration;
        if (!rt || duration <= *rt + kTol) {
            const double objective = (path_.empty() ? 0.0 : s.distance + sub_.travel.dist(s.last_node, 0)) -
                                     reward_ * static_cast<double>(path_.size());
            if (objective < best_objective_) {
                best_objective_ = objective;
                best_path_ = path_;
            }
        }

        const std::size_t n = sub_.size();
        std::vector<std::size_t> children;
        for (std::size_t j = 0; j < n; ++j) {
            if (!used_[j] && allowed_[j]) children.push_back(j);
        }
        std::stable_sort(children.begin(), children.end(), [&](std::size_t a, std::size_t b) {
            return sub_.travel.dist(s.last_node, a + 1) < sub_.travel.dist(s.last_node, b + 1);
        });

        for (std::size_t j : children) {
            const Order& o = sub_.orders[j];
            State next;
            next.last_node = j + 1;
            next.clock = s.clock + sub_.travel.time(s.last_node, j + 1);
            if (next.clock < sub_.lower[j] - kTol) continue;
            if (sub_.upper[j] && next.clock > *sub_.upper[j] + kTol) continue;
            next.peak.weight = std::max(s.peak.weight + o.delivery_weight, s.final.weight + o.pickup_weight);
            next.peak.dim = std::max(s.peak.dim + o.delivery_dim, s.final.dim + o.pickup_dim);
            if (next.peak.weight > sub_.vehicle.weight_capacity + kTol) continue;
            if (next.peak.dim > sub_.vehicle.dim_capacity + kTol) continue;
            next.final.weight = s.final.weight + o.pickup_weight;
            next.final.dim = s.final.dim + o.pickup_dim;
            next.distance = s.distance + sub_.travel.dist(s.last_node, j + 1);

            used_[j] = true;
            path_.push_back(j);
            if (lower_bound(next) < best_objective_ - 1e-9 * std::max(1.0, std::abs(best_objective_))) {
                visit(next);
            }
            path_.pop_back();
            used_[j] = false;
        }
    }

    // Any completion serves each remaining order at most once, paying at least
    // its cheapest incoming edge, and closes with some edge into the depot.
    double lower_bound(const State& s) const {
        double bound = s.distance - reward_ * static_cast<double>(path_.size());
        double back = sub_.travel.dist(s.last_node, 0);
        for (std::size_t r = 0; r < sub_.size(); ++r) {
            if (used_[r] || !allowed_[r]) continue;
            bound += std::min(0.0, min_in_[r] - reward_);
            back = std::min(back, sub_.travel.dist(r + 1, 0));
        }
        return bound + back;
    }

    const FilteredSubproblem& sub_;
    double reward_;
    std::vector<double> min_in_;
    std::vector<bool> allowed_;
    std::vector<bool> used_;
    std::vector<std::size_t> path_;
    std::vector<std::size_t> best_path_;
    double best_objective_ = std::numeric_limits<double>::infinity();
    std::uint64_t evaluations_ = 0;
};

}  // namespace

SolveOutcome solve_exact(const QuadraticModel& model, const FilteredSubproblem& sub,
                         const SolverConfig& config) {
    if (sub.size() > config.exact_max_orders) {
        throw SizeError("exact backend: " + std::to_string(sub.size()) + " orders exceeds the cap of " +
                        std::to_string(config.exact_max_orders));
    }
    if (model.orders() != sub.size()) {
        throw InputError("exact backend: model and subproblem disagree on the order count");
    }
    const auto start = std::chrono::steady_clock::now();
    ExactSearch search(sub, model.serve_reward());
    search.run();

    SolveOutcome out;
    out.sequence = search.best();
    out.best = encode(model, out.sequence);
    score_outcome(model, out);
    out.objective = search.best_objective();
    out.energy = out.objective;
    out.diagnostics.evaluations = search.evaluations();
    out.diagnostics.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace pdp
