"""
Rendering panels as colored-digit images
========================================

"""

import numpy as np
from PIL import Image

from hopmaze.concept import describe_state
from hopmaze.env import Environment, TaskParams
from hopmaze.reference import reference_maze
from hopmaze.render import DigitBank, render_panel

# the synthetic bank stands in when no IDX digit files are around;
# DigitBank.from_idx("train-images-idx3-ubyte", "train-labels-idx1-ubyte")
# loads the real thing with the same train/heldout split
bank = DigitBank.synthetic()
print("exemplars per digit (train, heldout):", bank.pool_sizes()[5])

maze = reference_maze()
desc = describe_state(maze, maze.start)
img = render_panel(desc, bank, np.random.default_rng(0))
print("image:", img.shape, img.dtype, f"values in [{img.min():.2f}, {img.max():.2f}]")

Image.fromarray((img * 255).astype(np.uint8)).save("demo_panel.png")
print("wrote demo_panel.png")

# environments render on every observation once they hold a bank
env = Environment(maze, TaskParams(), digit_bank=bank)
obs = env.reset()
print("observation keys with a bank:", sorted(obs))
