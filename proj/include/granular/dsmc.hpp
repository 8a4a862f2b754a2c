#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "granular/collision.hpp"
#include "granular/error.hpp"
#include "granular/ensemble.hpp"
#include "granular/kernel.hpp"

namespace granular {

struct SimConfig {
  std::size_t n = 1000;
  double dt = 0.01;
  double horizon = 1.0;
  std::uint64_t seed = 1;
  double energy_floor = 1e-6;  // relative to E0
  int refresh_interval = 50;
  KernelSpec kernel{};
  InitialDistribution initial = Maxwellian{1.0};
  double initial_energy = 0.0;  // 0 keeps the sampled energy

  void validate() const;
};

// Upper bound g_max on pairwise relative speeds used by the rejection step.
struct MajorantTracker {
  double g_max = 0.0;
  int refresh_interval = 50;
  int steps_since_refresh = 0;
  std::uint64_t refreshes = 0;
  std::uint64_t violations = 0;

  void refresh(const ParticleEnsemble& ens);
};

// Raised when a particle velocity becomes non-finite. Carries the ensemble
// as it was when the failure was detected.
struct SimulationAbort : NumericError {
  SimulationAbort(const std::string& what, ParticleEnsemble state)
      : NumericError(what), state(std::move(state)) {}
  ParticleEnsemble state;
};

struct StepStats {
  std::uint64_t candidates = 0;
  std::uint64_t collisions = 0;
  double energy_lost = 0.0;
};

class DsmcEngine {
 public:
  DsmcEngine(KernelSpec kernel, ParticleEnsemble ensemble, std::uint64_t seed,
             int refresh_interval = 50);

  // Advances by dt with alpha(E) and e(E) frozen at the energy at step start.
  StepStats step(double dt);

  // Collides particles i and j now, drawing z from the kernel (or using the
  // given z). Time is not advanced.
  CollisionOutcome force_collision(std::size_t i, std::size_t j);
  CollisionOutcome force_collision(std::size_t i, std::size_t j, const Velocity& z);

  const ParticleEnsemble& ensemble() const { return ens_; }
  const KernelSpec& kernel() const { return kernel_; }
  const MajorantTracker& majorant() const { return tracker_; }
  double energy() const { return energy_; }
  std::uint64_t collisions() const { return collisions_; }

 private:
  CollisionOutcome apply(std::size_t i, std::size_t j, const Velocity& z);

  KernelSpec kernel_;
  ParticleEnsemble ens_;
  Rng rng_;
  MajorantTracker tracker_;
  double energy_ = 0.0;
  std::uint64_t collisions_ = 0;
};

struct TrajectoryRow {
  double t = 0.0;
  double energy = 0.0;
  double m32 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  std::uint64_t collisions = 0;
  double dEdt_measured = 0.0;  // NaN on the first row
  double d_estimate = 0.0;  // NaN when not computed
};

struct DiagnosticsSchedule {
  double record_interval = 0.1;
  bool estimate_dissipation = false;
  DissipationOptions dissipation{};
  bool stop_on_cooling = true;
  // Called on every record with a read-only snapshot.
  std::function<void(const ParticleEnsemble&, double t)> on_record;
};

struct TrajectoryRecord {
  std::vector<TrajectoryRow> rows;
  std::optional<double> cooling_time;
  double initial_energy = 0.0;
  std::uint64_t collisions = 0;
  std::uint64_t majorant_refreshes = 0;
  std::uint64_t majorant_violations = 0;
  std::uint64_t seed = 0;
  ParticleEnsemble final_state;
};

TrajectoryRecord run(const SimConfig& config, const DiagnosticsSchedule& schedule);
TrajectoryRecord run(const SimConfig& config, ParticleEnsemble initial,
                     const DiagnosticsSchedule& schedule);

struct DissipationWindow {
  std::uint64_t min_collisions = 1000;  // expected collisions per replica
  int replicas = 32;
  std::uint64_t seed = 7;
};

struct DissipationCheck {
  double lhs = 0.0;  // mean Delta E / Delta t over replicas
  double rhs = 0.0;  // -D(f) at window start
  double relative_gap = 0.0;
  double lhs_standard_error = 0.0;
  double window = 0.0;
  double mean_collisions = 0.0;
};

// Runs independent short windows from the same snapshot and compares the
// measured energy slope with -D(f).
DissipationCheck measured_dissipation_check(const ParticleEnsemble& ensemble,
                                            const KernelSpec& spec,
                                            const DissipationWindow& window = {});

}  // namespace granular
