#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdp/cqm.hpp"

namespace pdp {

enum class Backend { exact, anneal, external_stub };

std::string_view backend_name(Backend b);

/// Annealer knobs. Temperatures and penalties are expressed as multiples of
/// the model's serve reward so one setting fits every instance scale.
struct AnnealParams {
    int sweeps = 2000;
    int restarts = 20;
    double initial_temperature = 2.0;  // x serve reward
    double final_temperature = 1e-3;   // absolute
    double initial_penalty = 1.0;      // x serve reward
    double final_penalty = 1.0;        // x serve reward, reached geometrically
};

struct SolverConfig {
    Backend backend = Backend::anneal;
    double time_limit = 60.0;  // seconds, per solve call
    std::uint64_t seed = 20240607;
    AnnealParams anneal;
    std::size_t exact_max_orders = 10;
    int threads = 1;
    /// Where the external stub writes the serialized model. Empty: taken from
    /// the PDP_EXTERNAL_MODEL_PATH environment variable.
    std::string external_model_path;
};

/// Throws InputError when a field is out of range.
void check_config(const SolverConfig& config);

class SizeError : public InputError {
public:
    using InputError::InputError;
};

/// Solutions are ranked feasible-first, then by energy.
struct Rank {
    bool feasible = false;
    double energy = 0.0;

    bool better_than(const Rank& other) const {
        if (feasible != other.feasible) return feasible;
        return energy < other.energy;
    }
};

struct SolveDiagnostics {
    std::uint64_t evaluations = 0;
    double wall_seconds = 0.0;
    bool timed_out = false;
    std::vector<double> violations;  // per constraint, at the best point
    std::vector<std::vector<Rank>> best_traces;  // per restart, appended on every improvement
};

struct SolveOutcome {
    bool available = true;                // false: backend produced no solution
    Assignment best;
    std::vector<std::size_t> sequence;    // decoded visiting order (local indices)
    bool feasible = false;                // every violation <= 1e-9
    double objective = 0.0;
    double energy = 0.0;
    SolveDiagnostics diagnostics;
};

/// Enumerates every ordered subset of the orders with feasibility pruning and
/// a distance bound. Throws SizeError above config.exact_max_orders.
SolveOutcome solve_exact(const QuadraticModel& model, const FilteredSubproblem& sub,
                         const SolverConfig& config);

/// Penalty-method annealing over visiting sequences. Deterministic for a
/// fixed seed unless the wall-clock limit is hit.
SolveOutcome solve_anneal(const QuadraticModel& model, const SolverConfig& config);

/// Writes the model in the documented JSON shape and returns an unavailable
/// outcome. Throws IoError if the file cannot be written.
SolveOutcome solve_external_stub(const QuadraticModel& model, const SolverConfig& config);

/// Fills feasible/objective/violations for `outcome.best` from the model.
void score_outcome(const QuadraticModel& model, SolveOutcome& outcome);

/// Sequence-space view of a model: evaluates objective and constraint
/// left-hand sides for one-hot sequence assignments without touching the
/// zero variables.
class SequenceEvaluator {
public:
    explicit SequenceEvaluator(const QuadraticModel& model);

    struct Result {
        double objective = 0.0;
        double penalty = 0.0;        // sum of squared violations
        double max_violation = 0.0;
    };

    /// `lhs` is scratch space owned by the caller (one per thread).
    Result evaluate(std::span<const std::size_t> sequence, std::vector<double>& lhs) const;

    std::size_t num_constraints() const { return senses_.size(); }

private:
    struct Hit {
        std::uint32_t target;  // constraint index, or num_constraints() for the objective
        double coef;
    };
    const QuadraticModel* model_;
    std::vector<Sense> senses_;
    std::vector<double> rhs_;
    std::vector<std::uint32_t> linear_start_;  // CSR by variable
    std::vector<Hit> linear_hits_;
    std::vector<std::uint32_t> pair_start_;    // CSR by dense pair index
    std::vector<Hit> pair_hits_;
    std::size_t pair_index(std::size_t u, std::size_t v) const;
};

}  // namespace pdp
