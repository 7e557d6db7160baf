#pragma once

#include <string>

#include "msos/conic.hpp"

namespace msos {

enum class SdpBackend { kBundled, kExternalAdapter };

struct SolverSettings {
    double feasibility_tol = 1e-9;
    double gap_tol = 1e-9;
    int max_iterations = 200;
    SdpBackend backend = SdpBackend::kBundled;
    // Adapter executable; falls back to the MSOS_SDP_ADAPTER environment
    // variable when empty.
    std::string adapter_path;
    // Objective floor: a feasible iterate below this value (in the
    // minimization sense) is declared unbounded.
    double unbounded_floor = 1e9;
    // Per-iteration trace on stderr.
    bool verbose = false;

    void validate() const;
};

// Solve a conic program. The bundled backend is a dense primal-dual
// interior-point method with Nesterov-Todd scaling and a Mehrotra
// predictor-corrector step; it is deterministic (fixed starting point,
// no randomized pivoting) and tends to the max-rank solution on the
// optimal face, which is what the downstream rank tests want.
SolveResult solve(const ConicProgram& prog, const SolverSettings& settings = {});

// Force the bundled backend (used by the adapter executable itself).
SolveResult solve_bundled(const ConicProgram& prog, const SolverSettings& settings = {});

// Run an external adapter process: the program and settings are written
// to its stdin as JSON and a SolveResult JSON is read from its stdout.
SolveResult solve_via_adapter(const ConicProgram& prog, const SolverSettings& settings,
                              const std::string& adapter_path);

}  // namespace msos
