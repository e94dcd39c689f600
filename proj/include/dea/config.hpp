#pragma once

#include "dea/solver.hpp"

namespace dea {

/// Tolerances shared by the analysis layers on top of the LP/MILP solver.
struct AnalysisConfig {
  solver::SolverConfig solver;
  /// Width of the window a pinned slack may occupy in later LMOP stages.
  double lex_pin_tol = 1e-6;
  /// Reference weights in (borderline_tol, zero_tol] are reported as borderline.
  double borderline_tol = 1e-9;
};

}  // namespace dea
