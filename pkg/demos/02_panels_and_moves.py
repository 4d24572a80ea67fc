"""
Reading panels and enumerating the move lexicon
===============================================

"""

from hopmaze.concept import affordable, describe_state, enumerate_moves, transition
from hopmaze.core import Direction, Move
from hopmaze.reference import reference_maze

maze = reference_maze()

# a panel is everything an agent sees from one cell: wall distances,
# crossing distances, the signed goal offset, and (on junctions) a hint
desc = describe_state(maze, maze.start)
print("from the start cell:")
print("  walls    ", {d.name.lower(): v for d, v in desc.wall_dist.items()})
print("  crossings", {d.name.lower(): v for d, v in desc.crossing_dist.items()})
print("  goal offset", desc.goal_offset, " hint:", desc.hint)

# moves bundle up to max_opt_len primitive strides of 1..3 cells
for limit in (1, 3, 5):
    print(f"move lexicon at max_opt_len={limit}: {len(enumerate_moves(limit))} moves")

# affordability is readable straight off the panel; the maze agrees
move = Move(Direction.RIGHT, (3, 2))
print(f"right (3,2) affordable here: {affordable(desc, move)}")
landing, valid = transition(maze, maze.start, move)
print(f"applying it lands on ({landing.x}, {landing.y}), valid={valid}")
