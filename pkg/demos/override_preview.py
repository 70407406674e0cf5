"""Preview every branch of a dependent-assignment script by freezing.

The banner script assigns feed stories with a probability that depends
on the banner itself.  Freezing has_banner to each value shows exactly
what a user in that condition would experience, without touching the
underlying randomization.
"""

from collections import Counter

from planout.corpus import get
from planout.interpreter import evaluate
from planout.overrides import parse_override_string

script = get("voter_banner")
print(script.source)

for freeze in ("", "has_banner:0", "has_banner:1"):
    overrides = parse_override_string(freeze)
    stories = Counter()
    for userid in range(20000):
        a = evaluate(script.ir, {"userid": userid}, overrides)
        stories[a.peek("has_feed_stories")] += 1
    label = freeze or "(no freeze)"
    rate = stories[1] / 20000
    print(f"{label:>14}: P(has_feed_stories=1) = {rate:.3f}")
