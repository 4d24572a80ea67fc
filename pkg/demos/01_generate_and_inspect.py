"""
Generating a problem set and reading its statistics
===================================================

"""

from hopmaze.mazegen import GenConfig, generate_set, save_problem_set, set_statistics

# a config is a plain dataclass; the seed pins every maze bit-for-bit
cfg = GenConfig(seed=7)
problems = generate_set(cfg, 20)

maze = problems.mazes[0]
print(f"maze 0: {len(maze.open_cells)} open cells on a {maze.grid_size} grid")
print(f"start ({maze.start.x}, {maze.start.y}) -> goal ({maze.goal.x}, {maze.goal.y}), "
      f"{len(maze.optimal_path) - 1} hops on the optimal path")

# the generator balances digit colors across the whole set
stats = set_statistics(problems)
print("color counts:", stats["color_counts"])
print("digits per panel:", stats["panel_sizes"])
print(f"panels with 3..6 digits: {stats['share_3_to_6']:.1%}")

# sets round-trip through a line-delimited JSON file
save_problem_set(problems, "demo_train.jsonl")
print("wrote demo_train.jsonl")
