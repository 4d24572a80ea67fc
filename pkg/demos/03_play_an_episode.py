"""
Stepping the environment by hand
================================

"""

from hopmaze.core import Direction, Move
from hopmaze.env import Environment, TaskParams, episode_return
from hopmaze.reference import reference_maze

# two trials on the same maze; every trial respawns at the start cell
params = TaskParams(max_opt_len=3, trials_per_episode=2)
env = Environment(reference_maze(), params)

obs = env.reset()
print("symbolic observation shape:", obs["symbolic"].shape)

# a move is a direction plus 1..max_opt_len primitive strides;
# rewards are distance shaping, -5 for invalid, +100 on the goal
for move in [
    Move(Direction.RIGHT, (3, 2)),
    Move(Direction.UP, (1,)),          # runs into a wall
    Move(Direction.DOWN, (1,)),
    Move(Direction.RIGHT, (2,)),
    Move(Direction.DOWN, (1,)),
]:
    obs, reward, trial_done, episode_done, info = env.step(move)
    print(f"{move.direction.name.lower():5} {move.primitives}  "
          f"reward {reward:7.2f}  valid={info['valid']}  trial_done={trial_done}")

print("trials so far:", [(t.length, t.reached_goal) for t in env.log.trials])
print("episode done:", env.episode_done)

# the log keeps everything; the discounted return reads it back
env2 = Environment(reference_maze(), params)
env2.reset()
for move in [Move(Direction.RIGHT, (3, 2)), Move(Direction.DOWN, (1,)),
             Move(Direction.RIGHT, (2,)), Move(Direction.DOWN, (1,))] * 2:
    env2.step(move)
print(f"oracle-style episode return: {episode_return(env2.log):.3f}")
