"""Run the obstacle-course protocol and print the summary table.

Four generated walking paths, a handful of artifact seeds per path, both
feedback modalities, plus the feedback-blind random-walk baseline for
contrast. Expect the scripted follower to finish every path with a
collision count an order of magnitude below the baseline's.

Takes a minute or two; pass a smaller seed count as argv[1] to hurry.
"""

import sys

from depthnav import navigation_config, run_paths, summarize

n_seeds = int(sys.argv[1]) if len(sys.argv) > 1 else 3

config = navigation_config()
records = run_paths(
    config, artifact_seeds=range(n_seeds), modalities=("audio", "tactile")
)
text, _ = summarize(records)
print("feedback-driven policy:")
print(text)

goals = sum(r.result.reached_goal for r in records)
print(f"\ngoals reached: {goals}/{len(records)}")

baseline = run_paths(config, artifact_seeds=range(n_seeds), policy="random")
text, _ = summarize(baseline)
print("\nfeedback-blind random walk (audio column only):")
print(text)
