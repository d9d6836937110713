#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "pdp/backends.hpp"
#include "pdp/random.hpp"

namespace pdp {

std::string_view backend_name(Backend b) {
    switch (b) {
        case Backend::exact: return "exact";
        case Backend::anneal: return "anneal";
        case Backend::external_stub: return "external-stub";
    }
    return "?";
}

void check_config(const SolverConfig& c) {
    if (!(c.time_limit > 0.0)) throw InputError("solver config: time_limit must be > 0");
    if (c.anneal.sweeps < 1) throw InputError("solver config: sweeps must be >= 1");
    if (c.anneal.restarts < 1) throw InputError("solver config: restarts must be >= 1");
    if (!(c.anneal.initial_temperature > 0.0) || !(c.anneal.final_temperature > 0.0)) {
        throw InputError("solver config: temperatures must be positive");
    }
    if (!(c.anneal.initial_penalty > 0.0) || !(c.anneal.final_penalty > 0.0)) {
        throw InputError("solver config: penalty weights must be positive");
    }
    if (c.threads < 1) throw InputError("solver config: threads must be >= 1");
}

void score_outcome(const QuadraticModel& model, SolveOutcome& out) {
    out.diagnostics.violations = violations(model, out.best);
    out.feasible = std::all_of(out.diagnostics.violations.begin(), out.diagnostics.violations.end(),
                               [](double v) { return v <= kFeasibilityTolerance; });
    out.objective = evaluate_objective(model, out.best);
}

// SequenceEvaluator ----------------------------------------------------------

SequenceEvaluator::SequenceEvaluator(const QuadraticModel& model) : model_(&model) {
    const auto& cons = model.constraints();
    const std::size_t nc = cons.size();
    const std::size_t nv = model.num_variables();
    senses_.reserve(nc);
    rhs_.reserve(nc);
    for (const auto& c : cons) {
        senses_.push_back(c.sense);
        rhs_.push_back(c.rhs);
    }

    const auto each_expression = [&](auto&& fn) {
        for (std::size_t k = 0; k < nc; ++k) fn(static_cast<std::uint32_t>(k), cons[k].lhs);
        fn(static_cast<std::uint32_t>(nc), model.objective());
    };

    linear_start_.assign(nv + 1, 0);
    pair_start_.assign(nv * nv + 1, 0);
    each_expression([&](std::uint32_t, const Expression& e) {
        for (const auto& t : e.linear) ++linear_start_[t.var + 1];
        for (const auto& t : e.quadratic) ++pair_start_[pair_index(t.u, t.v) + 1];
    });
    for (std::size_t k = 1; k < linear_start_.size(); ++k) linear_start_[k] += linear_start_[k - 1];
    for (std::size_t k = 1; k < pair_start_.size(); ++k) pair_start_[k] += pair_start_[k - 1];
    linear_hits_.resize(linear_start_.back());
    pair_hits_.resize(pair_start_.back());

    std::vector<std::uint32_t> lfill(linear_start_.begin(), linear_start_.end() - 1);
    std::vector<std::uint32_t> pfill(pair_start_.begin(), pair_start_.end() - 1);
    each_expression([&](std::uint32_t target, const Expression& e) {
        for (const auto& t : e.linear) linear_hits_[lfill[t.var]++] = {target, t.coef};
        for (const auto& t : e.quadratic) pair_hits_[pfill[pair_index(t.u, t.v)]++] = {target, t.coef};
    });
}

std::size_t SequenceEvaluator::pair_index(std::size_t u, std::size_t v) const {
    if (u > v) std::swap(u, v);
    return u * model_->num_variables() + v;
}

SequenceEvaluator::Result SequenceEvaluator::evaluate(std::span<const std::size_t> sequence,
                                                      std::vector<double>& lhs) const {
    const std::size_t nc = senses_.size();
    lhs.assign(nc + 1, 0.0);
    std::size_t on[64];
    std::vector<std::size_t> on_heap;
    std::size_t* vars = on;
    if (sequence.size() > 64) {
        on_heap.resize(sequence.size());
        vars = on_heap.data();
    }
    for (std::size_t p = 0; p < sequence.size(); ++p) vars[p] = model_->var(sequence[p], p);

    for (std::size_t p = 0; p < sequence.size(); ++p) {
        for (std::uint32_t h = linear_start_[vars[p]]; h < linear_start_[vars[p] + 1]; ++h) {
            lhs[linear_hits_[h].target] += linear_hits_[h].coef;
        }
        for (std::size_t q = p + 1; q < sequence.size(); ++q) {
            const std::size_t idx = pair_index(vars[p], vars[q]);
            for (std::uint32_t h = pair_start_[idx]; h < pair_start_[idx + 1]; ++h) {
                lhs[pair_hits_[h].target] += pair_hits_[h].coef;
            }
        }
    }

    Result r;
    r.objective = lhs[nc] + model_->objective().offset;
    for (std::size_t k = 0; k < nc; ++k) {
        double v = 0.0;
        switch (senses_[k]) {
            case Sense::le: v = lhs[k] - rhs_[k]; break;
            case Sense::ge: v = rhs_[k] - lhs[k]; break;
            case Sense::eq: v = std::abs(lhs[k] - rhs_[k]); break;
        }
        if (v > 0.0) {
            r.penalty += v * v;
            r.max_violation = std::max(r.max_violation, v);
        }
    }
    return r;
}

// Annealer ---------------------------------------------------------------------

namespace {

struct RestartResult {
    std::vector<std::size_t> sequence;
    Rank rank{false, std::numeric_limits<double>::infinity()};
    std::vector<Rank> trace;
    std::uint64_t evaluations = 0;
};

class Annealer {
public:
    Annealer(const QuadraticModel& model, const SolverConfig& config,
             std::chrono::steady_clock::time_point deadline, std::atomic<bool>& timed_out)
        : model_(model), eval_(model), config_(config), deadline_(deadline), timed_out_(timed_out) {
        const double reward = std::max(model.serve_reward(), 1e-9);
        t0_ = config.anneal.initial_temperature * reward;
        t1_ = std::min(config.anneal.final_temperature, t0_);
        l0_ = config.anneal.initial_penalty * reward;
        l1_ = config.anneal.final_penalty * reward;
    }

    RestartResult run(std::size_t restart) {
        RestartResult res;
        Rng rng(config_.seed, restart);
        const std::size_t n = model_.orders();
        const int sweeps = config_.anneal.sweeps;
        const std::size_t per_sweep = std::max<std::size_t>(1, n);

        std::vector<std::size_t> seq;
        std::vector<std::size_t> unserved(n);
        for (std::size_t i = 0; i < n; ++i) unserved[i] = i;
        std::vector<double> scratch;

        auto cur = eval_.evaluate(seq, scratch);
        ++res.evaluations;
        consider(res, seq, cur);

        std::vector<std::size_t> cand_seq;
        std::vector<std::size_t> cand_unserved;
        for (int sweep = 0; sweep < sweeps; ++sweep) {
            if (timed_out_.load(std::memory_order_relaxed)) break;
            if (std::chrono::steady_clock::now() > deadline_) {
                timed_out_.store(true);
                break;
            }
            const double frac = sweeps > 1 ? static_cast<double>(sweep) / (sweeps - 1) : 1.0;
            const double temp = t0_ * std::pow(t1_ / t0_, frac);
            const double lambda = l0_ * std::pow(l1_ / l0_, frac);
            double cur_energy = cur.objective + lambda * cur.penalty;

            for (std::size_t step = 0; step < per_sweep; ++step) {
                cand_seq = seq;
                cand_unserved = unserved;
                propose(rng, cand_seq, cand_unserved);
                const auto cand = eval_.evaluate(cand_seq, scratch);
                ++res.evaluations;
                const double cand_energy = cand.objective + lambda * cand.penalty;
                const double delta = cand_energy - cur_energy;
                if (delta <= 0.0 || rng.unit() < std::exp(-delta / temp)) {
                    seq.swap(cand_seq);
                    unserved.swap(cand_unserved);
                    cur = cand;
                    cur_energy = cand_energy;
                    consider(res, seq, cur);
                }
            }
        }
        return res;
    }

private:
    // Best-so-far uses the final penalty weight so ranks are comparable across
    // the whole run and across restarts.
    void consider(RestartResult& res, const std::vector<std::size_t>& seq,
                  const SequenceEvaluator::Result& r) {
        const Rank rank{r.max_violation <= kFeasibilityTolerance, r.objective + l1_ * r.penalty};
        if (res.trace.empty() || rank.better_than(res.rank)) {
            res.rank = rank;
            res.sequence = seq;
            res.trace.push_back(rank);
        }
    }

    // Structure-preserving moves: the candidate is always a valid one-hot
    // sequence, so slot uniqueness, serve-once and contiguity hold by
    // construction.
    static void propose(Rng& rng, std::vector<std::size_t>& seq, std::vector<std::size_t>& unserved) {
        enum Move { insert, remove, swap, relocate };
        Move options[4];
        int count = 0;
        if (!unserved.empty()) options[count++] = insert;
        if (!seq.empty()) options[count++] = remove;
        if (seq.size() >= 2) {
            options[count++] = swap;
            options[count++] = relocate;
        }
        if (count == 0) return;
        switch (options[rng.below(static_cast<std::uint64_t>(count))]) {
            case insert: {
                const std::size_t u = rng.below(unserved.size());
                const std::size_t pos = rng.below(seq.size() + 1);
                seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(pos), unserved[u]);
                unserved[u] = unserved.back();
                unserved.pop_back();
                break;
            }
            case remove: {
                const std::size_t pos = rng.below(seq.size());
                unserved.push_back(seq[pos]);
                seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(pos));
                break;
            }
            case swap: {
                const std::size_t a = rng.below(seq.size());
                std::size_t b = rng.below(seq.size() - 1);
                if (b >= a) ++b;
                std::swap(seq[a], seq[b]);
                break;
            }
            case relocate: {
                const std::size_t a = rng.below(seq.size());
                std::size_t b = rng.below(seq.size() - 1);
                if (b >= a) ++b;
                const std::size_t moved = seq[a];
                seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(a));
                seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(b), moved);
                break;
            }
        }
    }

    const QuadraticModel& model_;
    SequenceEvaluator eval_;
    const SolverConfig& config_;
    std::chrono::steady_clock::time_point deadline_;
    std::atomic<bool>& timed_out_;
    double t0_ = 1.0, t1_ = 1.0, l0_ = 1.0, l1_ = 1.0;
};

}  // namespace

SolveOutcome solve_anneal(const QuadraticModel& model, const SolverConfig& config) {
    check_config(config);
    const auto start = std::chrono::steady_clock::now();
    const auto deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                      std::chrono::duration<double>(config.time_limit));
    std::atomic<bool> timed_out{false};
    Annealer annealer(model, config, deadline, timed_out);

    const std::size_t restarts = static_cast<std::size_t>(config.anneal.restarts);
    std::vector<RestartResult> results(restarts);
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(config.threads), restarts);
    if (workers <= 1) {
        for (std::size_t r = 0; r < restarts; ++r) results[r] = annealer.run(r);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t r = next++; r < restarts; r = next++) results[r] = annealer.run(r);
            });
        }
        for (auto& t : pool) t.join();
    }

    // Strict comparison in index order: ties go to the lowest restart.
    std::size_t winner = 0;
    for (std::size_t r = 1; r < restarts; ++r) {
        if (results[r].rank.better_than(results[winner].rank)) winner = r;
    }

    SolveOutcome out;
    out.sequence = results[winner].sequence;
    out.best = encode(model, out.sequence);
    score_outcome(model, out);
    out.energy = results[winner].rank.energy;
    for (auto& r : results) {
        out.diagnostics.evaluations += r.evaluations;
        out.diagnostics.best_traces.push_back(std::move(r.trace));
    }
    out.diagnostics.timed_out = timed_out.load();
    out.diagnostics.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace pdp
