"""
The oracle agent and the three normalized scores
================================================

"""

from hopmaze.env import Environment, TaskParams
from hopmaze.mazegen import GenConfig, generate_set
from hopmaze.metrics import evaluation_report, rho_actions, rho_goals, rho_plan
from hopmaze.oracle import optimal_plan_length, run_oracle_episode
from hopmaze.reference import reference_maze

params = TaskParams(max_opt_len=5, trials_per_episode=10)

# the oracle reads panels, never the maze: it probes on the first trial,
# then replays the merged plan on the remaining nine
log = run_oracle_episode(Environment(reference_maze(), params))
print("moves per trial:", [t.length for t in log.trials])

optimal = optimal_plan_length(reference_maze(), params.max_opt_len)
print(f"optimal plan length: {optimal}")
print(f"rho_actions {rho_actions(log):.2f}   rho_goals {rho_goals(log):.2f}   "
      f"rho_plan {rho_plan(log, optimal):.2f}")

# the same machinery scales to a whole problem set
problems = generate_set(GenConfig(seed=3), 10)
logs = [run_oracle_episode(Environment(m, params, problem_id=i))
        for i, m in enumerate(problems.mazes)]
report = evaluation_report(
    logs, {i: optimal_plan_length(m, 5) for i, m in enumerate(problems.mazes)}
)
for name, agg in report["summary"].items():
    print(f"{name:12} mean {agg['mean']:.4f}   std {agg['std']:.4f}")
