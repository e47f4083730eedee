#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gapforge/mpo.hpp"
#include "gapforge/numeric.hpp"

namespace gapforge {

enum class MpoLayout { Paired, SiteResolved };

struct DmrgConfig {
  int chi = 80;
  int max_sweeps = 40;
  double energy_tol = 1e-8;  // on successive full-sweep energies
  std::uint64_t seed = 2024;
  int min_sweeps = 2;
  int initial_chi = 4;
  int ramp_sweeps = 2;  // leading sweeps at reduced chi: chi/4 then chi/2 for 2
  double svd_cutoff = 1e-8;  // relative to the largest singular value at the cut
  int krylov_dim = 24;
  double local_tol = 1e-8;  // residual; the energy error is of its square
  // operator applications per local eigensolve; later sweeps refine what one
  // step leaves unconverged
  long local_max_iterations = 96;
  bool check_chi = false;  // rerun with 1.2 chi and flag ChiTooSmall on disagreement
  MpoLayout layout = MpoLayout::Paired;
};

struct SweepRecord {
  int sweep = 0;
  double energy = 0.0;  // ground energy of -H after the sweep
  double delta = 0.0;   // change from the previous sweep
  double max_entropy = 0.0;
  int max_bond = 0;
};

struct DmrgResult {
  GapResult gap;
  std::vector<SweepRecord> history;
  std::vector<int> bond_dims;
};

// Two-site DMRG for the ground state of -H, H = mpo - P. lambda = -E.
DmrgResult dmrg_gap(const MpoOperator& mpo, const DmrgConfig& cfg);
DmrgResult dmrg_gap(const CircuitSpec& spec, const DmrgConfig& cfg);

std::string history_csv(const std::vector<SweepRecord>& h);

}  // namespace gapforge
