"""
Driving a serve process over the line protocol
==============================================

"""

import subprocess
import sys

from hopmaze.mazegen import GenConfig, generate_set, save_problem_set
from hopmaze.proto import ProtocolClient, ProtocolError

save_problem_set(generate_set(GenConfig(seed=1), 3), "demo_serve.jsonl")

# one JSON request per line on stdin, one JSON reply per line on stdout
server = subprocess.Popen(
    [sys.executable, "-m", "hopmaze.cli", "serve", "--set", "demo_serve.jsonl"],
    stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True,
)
client = ProtocolClient(server.stdin, server.stdout)

reply = client.reset(problem_id=0)
print("reset reply keys:", sorted(reply))
print("symbolic payload length:", len(reply["obs"]["symbolic"]))

# bad requests never kill the session; they come back as {"error": ...},
# which the client surfaces as an exception
try:
    client.request({"op": "step", "direction": "sideways", "primitives": [1]})
except ProtocolError as err:
    print("server said:", err)

reply = client.step("right", [1])
print(f"stepped right: reward {reply['reward']}, valid {reply['info']['valid']}")

client.close()
server.wait(timeout=10)
print("server exited with", server.returncode)
