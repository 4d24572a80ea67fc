"""
From interaction memory to out-of-distribution probes
=====================================================

"""

import numpy as np

from hopmaze.env import Environment, TaskParams
from hopmaze.kb import SUBCATEGORIES, build_kb, kb_dump, memory_from_log, query_subcategory
from hopmaze.mazegen import GenConfig, generate_set
from hopmaze.oracle import run_oracle_episode
from hopmaze.testgen import generate_suite, save_suite

# collect transitions the way an agent would: by playing episodes
problems = generate_set(GenConfig(seed=5), 30)
memory = []
for pid, maze in enumerate(problems.mazes):
    log = run_oracle_episode(Environment(maze, TaskParams(), problem_id=pid))
    memory.extend(memory_from_log(log))
print(f"{len(memory)} remembered transitions")

# the knowledge base counts digit relations; theta splits understood
# pairs from merely-glimpsed ones
kb = build_kb(memory, theta=3)
print(kb_dump(kb).splitlines()[0])
for sub in SUBCATEGORIES:
    print(f"{sub:6} {len(query_subcategory(kb, sub)):4} candidate pairs")

# each candidate becomes a maze that shows its pair exactly once; units
# without candidates stay empty (oracle play rarely produces the rarer
# relation gaps, so expect zeros for some AfT/AnT units here)
suite = generate_suite(kb, rng=np.random.default_rng(0), per_category_target=2)
save_suite("demo_suite.jsonl", suite)
print("wrote demo_suite.jsonl:",
      "  ".join(f"{sub}:{len(suite[sub])}" for sub in SUBCATEGORIES))
