#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cdlab/grid.hpp"
#include "cdlab/model.hpp"

namespace cdlab {

enum class Scheme { SemiImplicit, Explicit };
enum class LinearSolverKind { SparseLU, BiCGStab };

struct SolverConfig {
    double epsilon = 0.0;  // regularization a + eps*Id applied at assembly
    double dt = 1e-3;
    double t_end = 1.0;
    Scheme scheme = Scheme::SemiImplicit;
    LinearSolverKind linear_solver = LinearSolverKind::SparseLU;
    double linear_tol = 1e-12;               // BiCGStab relative tolerance
    int stride = 1;                          // snapshot/diagnostics stride (steps)
    std::vector<double> grad_norm_powers{};  // 2p exponents for ||DW||_{L^2p} diagnostics
};

struct BlowUpError : std::runtime_error {
    double time;
    explicit BlowUpError(double t)
        : std::runtime_error("solution lost finiteness at t=" + std::to_string(t)), time(t) {}
};

struct SolveError : std::runtime_error {
    double time;
    double residual;
    SolveError(double t, double r)
        : std::runtime_error("linear solve diverged at t=" + std::to_string(t) +
                             " (residual " + std::to_string(r) + ")"),
          time(t),
          residual(r) {}
};

struct DiagnosticsRow {
    double time = 0.0;
    std::vector<double> mass;  // per component
    double l2 = 0.0;
    std::vector<double> min_value, max_value;
    std::vector<double> grad_norms;  // matches SolverConfig::grad_norm_powers
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Field> snapshots;
    std::vector<DiagnosticsRow> diagnostics;
    double final_time = 0.0;
    bool blew_up = false;
    double blow_up_time = 0.0;
    std::string error;

    const Field& last() const { return snapshots.back(); }
};

/// Frozen-coefficient semi-implicit (or explicit) update over one dt.
/// Diffusion uses the conservative flux form with face-averaged
/// coefficients; reaction terms are explicit. Throws SolveError/BlowUpError.
Field step(const Field& w, double t, const DiffusionModel& model, const SolverConfig& config);

/// Div([a(W)+eps*Id] DW) in flux form, the operator `step` freezes.
Field diffusion_operator(const Field& w, const DiffusionModel& model, double eps);

/// Largest explicit-scheme dt: h^2 / (2N (max Lambda + eps)) over the
/// current state. Advisory; oversized explicit steps run and blow up.
double stability_limit(const Field& w, const DiffusionModel& model, const SolverConfig& config);

/// Iterate `step` to t_end, recording snapshots and diagnostics every
/// `stride` steps (plus the final state). On blow-up or solver failure the
/// partial trajectory is returned with `blew_up`/`error` set.
Trajectory simulate(const DiffusionModel& model, const SolverConfig& config, const Field& w0);

DiagnosticsRow compute_diagnostics(const Field& w, double t,
                                   const std::vector<double>& grad_norm_powers);

}  // namespace cdlab
