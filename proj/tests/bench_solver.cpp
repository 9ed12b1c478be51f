// Development driver: solves the first subproblem of a seeded scenario, or a dumped program.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include "trsco/io.hpp"
#include "trsco/planner.hpp"
#include "trsco/subproblem.hpp"

using namespace trsco;

static double env_or(const char* name, double fallback) {
  const char* v = std::getenv(name);
  return v ? std::atof(v) : fallback;
}

int main(int argc, char** argv) {
  ConicProgram program;
  std::optional<WarmStart> warm;
  if (argc > 1 && std::strstr(argv[1], ".json")) {
    std::ifstream in(argv[1]);
    program = conic_from_json(Json::parse(in));
  } else {
    const int seed = argc > 1 ? std::atoi(argv[1]) : 1;
    CityParams cp;
    cp.seed = seed;
    ScenarioParams sp;
    sp.seed = seed;
    const Scenario sc = make_scenario(generate_city(cp), sp);
    // Optional second argument: rebuild the subproblem after q outer iterations.
    const int q = argc > 2 ? std::atoi(argv[2]) : 0;
    Trajectories ref = init_reference(sc);
    PlannerSettings ps;
    double delta = ps.delta0;
    if (q > 0) {
      ps.max_outer_iterations = q;
      const PlanResult r = plan(sc, ps, Variant::enhanced, SolverSettings{});
      ref = r.trajectories;
      for (const auto& rec : r.trace) delta = update_radius(delta, rec.violation, ps);
    }
    const auto active = filter_constraints(build_constraints(sc, ref), ref, delta, sc);
    program = assemble_subproblem(active, ref, delta, {1.0, 2}, sc);
    warm = reference_warm_start(ref, sc.layout());
    std::ofstream("/tmp/sub.json") << dump(conic_to_json(program));
  }
  SolverSettings s;
  s.rho = env_or("RHO", s.rho);
  s.sigma = env_or("SIGMA", s.sigma);
  s.alpha = env_or("ALPHA", s.alpha);
  s.scaling = env_or("SCALE", 1) > 0;
  s.eps_primal = s.eps_dual = env_or("EPS", s.eps_primal);
  const Solution sol = AdmmSolver{}.solve(program, s, warm);
  std::printf("n=%d m=%d status=%s iters=%d obj=%.8f rp=%.2e rd=%.2e time=%.3f\n", program.n_variables,
              program.n_rows(), to_string(sol.status), sol.iterations, sol.objective, sol.primal_residual,
              sol.dual_residual, sol.wall_time);
}
