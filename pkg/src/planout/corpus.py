"""A corpus of small assignment scripts used throughout tests and demos.

Each entry pairs DSL source with a generator of well-typed inputs, so any
script can be swept over sequential unit ids.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .dsl import parse_or_raise
from .ir import ScriptIR


@dataclass(frozen=True)
class CorpusScript:
    name: str
    source: str
    make_inputs: Callable[[int], dict]

    @property
    def ir(self) -> ScriptIR:
        return parse_or_raise(self.source)


_COUNTRIES = ["US", "BR", "IN", "DE"]
_FRIENDS = ["alice", "bob", "carol", "dave", "erin"]


CORPUS: dict[str, CorpusScript] = {}


def _add(name, source, make_inputs):
    CORPUS[name] = CorpusScript(name, source, make_inputs)


_add(
    "button_color_ab",
    """\
button_color = uniformChoice(
  choices=['#3c539a', '#5f9647', '#b33316'],
  unit=cookieid);
""",
    lambda i: {"cookieid": i},
)

_add(
    "signup_factorial",
    """\
button_color = uniformChoice(
  choices=['#3c539a', '#5f9647', '#b33316'],
  unit=cookieid);
button_text = weightedChoice(
  choices=['Sign up', 'Join now'],
  weights=[0.8, 0.2],
  unit=cookieid);
""",
    lambda i: {"cookieid": i},
)

_add(
    "translate_stratified_if",
    """\
if (country == 'US') {
  has_translate = bernoulliTrial(p=0.2, unit=userid);
} else {
  has_translate = bernoulliTrial(p=0.05, unit=userid);
}
""",
    lambda i: {"userid": i, "country": _COUNTRIES[i % len(_COUNTRIES)]},
)

_add(
    "translate_stratified_index",
    """\
strata_p = [0.05, 0.2];
has_translate = bernoulliTrial(
  p=strata_p[country == 'US'],
  unit=userid);
""",
    lambda i: {"userid": i, "country": _COUNTRIES[i % len(_COUNTRIES)]},
)

_add(
    "collapse_within_subjects",
    """\
collapse_story = bernoulliTrial(p=0.05, unit=[viewerid, storyid]);
""",
    lambda i: {"viewerid": i // 20, "storyid": i % 20},
)

_add(
    "goal_setting",
    """\
group_size = uniformChoice(choices=[1, 10], unit=userid);
specific_goal = bernoulliTrial(p=0.8, unit=userid);
if (specific_goal) {
  ratings_per_user_goal = uniformChoice(
    choices=[8, 16, 32, 64], unit=userid);
  ratings_goal = group_size * ratings_per_user_goal;
}
""",
    lambda i: {"userid": i},
)

_add(
    "social_cues",
    """\
num_cues = randomInteger(
  min=1, max=min(length(liking_friends), 3),
  unit=[userid, pageid]);
friends_shown = sample(
  choices=liking_friends, draws=num_cues,
  unit=[userid, pageid]);
""",
    lambda i: {"userid": i // 10, "pageid": i % 10,
               "liking_friends": list(_FRIENDS[: 2 + i % 4])},
)

_add(
    "voter_banner",
    """\
has_banner = bernoulliTrial(p=0.97, unit=userid);
cond_probs = [0.5, 0.98];
has_feed_stories = bernoulliTrial(
  p=cond_probs[has_banner],
  unit=userid);
button_text = uniformChoice(
  choices=["I'm a voter", "I'm voting"],
  unit=userid);
""",
    lambda i: {"userid": i},
)

_add(
    "collapse_encouragement",
    """\
prob_collapse = randomFloat(min=0.0, max=1.0, unit=sourceid);
collapse = bernoulliTrial(p=prob_collapse, unit=[storyid, viewerid]);
""",
    lambda i: {"sourceid": i // 50, "storyid": i % 50, "viewerid": i % 7},
)


def get(name: str) -> CorpusScript:
    return CORPUS[name]


def names() -> list[str]:
    return list(CORPUS)
