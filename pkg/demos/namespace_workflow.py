"""The lifecycle of an experiment inside a namespace.

Creates a namespace, allocates two concurrent experiments over disjoint
segments, routes some users, launches a winning value as a default, and
deallocates — all against an in-memory store.  Pass a file path as the
only argument to make the same sequence durable.
"""

import sys
from collections import Counter

from planout.namespaces import NamespaceStore, segment_of

path = sys.argv[1] if len(sys.argv) > 1 else None
store = NamespaceStore(path=path)

store.create_namespace("news_feed", "userid", num_segments=1000)
store.allocate_experiment(
    "news_feed", "button_color",
    "button_color = uniformChoice(choices=['red', 'blue'], unit=userid);",
    num_segments=300)
store.allocate_experiment(
    "news_feed", "story_count",
    "story_count = uniformChoice(choices=[10, 20, 40], unit=userid);",
    num_segments=200)

ns = store.namespace("news_feed")
print(f"segments: {Counter(x or '(default)' for x in ns.segment_map)}")

routed = Counter()
for userid in range(2000):
    experiment, view = store.assign("news_feed", userid)
    routed[experiment or "(default)"] += 1
    if experiment == "button_color" and userid < 50:
        print(f"  user {userid} -> segment {segment_of(ns, userid)}, "
              f"button_color={view.get('button_color')}")
print(f"routing over 2000 users: {routed}")

# the red button won; launch it for everyone and retire the experiment
store.set_launch_value("news_feed", "button_color", "red")
store.deallocate_experiment("news_feed", "button_color")

_, view = store.assign("news_feed", 7)
print(f"after launch, user 7 sees button_color={view.get('button_color')} "
      f"via {view.experiment or 'launch defaults'}")
