#include <chrono>
#include <cstdlib>

#include "pdp/backends.hpp"
#include "pdp/io.hpp"

namespace pdp {

SolveOutcome solve_external_stub(const QuadraticModel& model, const SolverConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    std::string path = config.external_model_path;
    if (path.empty()) {
        if (const char* env = std::getenv("PDP_EXTERNAL_MODEL_PATH")) path = env;
    }
    if (path.empty()) {
        throw IoError("external-stub backend: no output path (set PDP_EXTERNAL_MODEL_PATH)");
    }
    write_file(path, model_to_json(model));

    SolveOutcome out;
    out.available = false;
    out.best.values.assign(model.num_variables(), 0);
    out.diagnostics.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace pdp
