#pragma once

#include <optional>
#include <vector>

#include "renflow/density.hpp"

namespace renflow {

// Dyadic block scheme: space-time dimension d+1, block factor m = 2^{d+1},
// scale index k (lattice of hyper-cubes of side 1/2^k). Refinement takes k to
// k+1 by subdividing each cube into m children.
struct BlockScheme {
  int d = 1;
  int m = 4;
  int k = 0;

  static BlockScheme from_dimension(int d, int k = 0);
  static BlockScheme from_factor(int m, int k = 0);
  void validate() const;
};

// Parameters of the stable family u^(xi) = exp(-alpha |xi|^beta).
struct StableParams {
  double alpha = 1.0;
  double beta = 2.0;
};

struct StableFit {
  StableParams params;
  double rms_residual = 0.0;  // of the log(-log u^) regression
};

enum class FlowDirection { coarsen, refine };

// Per-step grid control. Auto mode classifies the density by its boundary
// behavior: interior-supported windows are zero-padded and the output window
// tracks the block-mean standard deviation; windows with residual boundary
// mass (heavy tails) keep the pure sample pipeline, contracting the period by
// exactly m.
struct StepOptions {
  std::optional<GridSpec> out_grid;  // force the output grid (must be reachable)
};

// One exact block-spin step: u^_coarse(xi) = u^_fine(xi/m)^m, i.e. the
// density of the mean of m iid site variables, computed spectrally.
GridDensity coarsen(const GridDensity& u_fine, const BlockScheme& scheme,
                    const StepOptions& opts = {});

// Inverse step: u^_fine(xi) = u^_coarse(m xi)^{1/m} along the principal branch
// continued from xi = 0. Throws BranchError if u^ vanishes inside the needed
// band, NotInfinitelyDivisibleError if the root is not a density.
GridDensity refine(const GridDensity& u_coarse, const BlockScheme& scheme,
                   const StepOptions& opts = {});

// Inverse transform of exp(-alpha |xi|^beta), normalized. 1 <= beta <= 2.
GridDensity stable_density(const StableParams& p,
                           const std::optional<GridSpec>& grid = {});

// alpha_k = m^{1-beta} alpha_{k+1}
double stable_flow_alpha(double alpha_fine, double beta, int m);

// c_n(k+1) = m^{n-1} c_n(k): refine multiplies, coarsen divides. The factors
// are powers of two, so a round trip is exact.
CumulantVector cumulant_flow_step(const CumulantVector& c, int m, FlowDirection dir);

// Least-squares fit of log(-log|u^(xi)|) against log xi over the window
// xi in [0.1, 2.0].
StableFit fit_stable(const GridDensity& u);

struct FlowRecord {
  int k = 0;
  GridDensity density;
  CumulantVector cumulants;
  std::optional<StableFit> stable;
  // per order n: |c_n(step) - flow-law prediction| / max(|prediction|, eps)
  std::vector<double> flow_residual;
};

struct FlowReport {
  int m = 0;
  FlowDirection direction = FlowDirection::coarsen;
  std::vector<FlowRecord> records;
};

struct FlowOptions {
  int n_max = 6;
  bool fit_stable_family = false;
  bool keep_densities = true;
};

FlowReport run_flow(const GridDensity& u0, const BlockScheme& scheme, int steps,
                    FlowDirection dir, const FlowOptions& opts = {});

// Density of the sum of m iid copies (relabeled block mean; used by the
// cumulant-additivity checks).
GridDensity self_convolution(const GridDensity& u, int m);

}  // namespace renflow
