"""Monte-Carlo verification of assignment procedures.

Sweeps a script over generated units, tabulating per-parameter value
frequencies, joint tables for requested parameter pairs, and chi-square
statistics.  Everything is deterministic: reports are identical across
runs because the underlying hashing is.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field

from .errors import ExpectedTooSmall, UnknownParameter
from .interpreter import evaluate
from .ir import ScriptIR, list_parameters
from .random_ops import SaltContext


def freeze(value):
    """Hashable form of a parameter value (lists become tuples)."""
    if isinstance(value, list):
        return tuple(freeze(v) for v in value)
    if isinstance(value, dict):
        return tuple(sorted((k, freeze(v)) for k, v in value.items()))
    return value


@dataclass
class SimulationReport:
    n: int
    counts: dict = field(default_factory=dict)   # param -> Counter(value)
    joint: dict = field(default_factory=dict)    # (a, b) -> Counter((va, vb))

    def frequencies(self, param) -> dict:
        counter = self._counter(param)
        return {value: count / self.n for value, count in counter.items()}

    def joint_frequencies(self, a, b) -> dict:
        counter = self.joint.get((a, b))
        if counter is None:
            raise UnknownParameter(f"pair ({a!r}, {b!r}) was not tabulated")
        return {pair: count / self.n for pair, count in counter.items()}

    def conditional(self, param, given, given_value) -> dict:
        """P(param | given = given_value) from the joint table."""
        counter = self.joint.get((param, given))
        flipped = False
        if counter is None:
            counter = self.joint.get((given, param))
            flipped = True
        if counter is None:
            raise UnknownParameter(
                f"pair ({param!r}, {given!r}) was not tabulated")
        matching = Counter()
        for pair, count in counter.items():
            p_val, g_val = (pair[1], pair[0]) if flipped else pair
            if g_val == given_value:
                matching[p_val] += count
        total = sum(matching.values())
        return {v: c / total for v, c in matching.items()} if total else {}

    def _counter(self, param) -> Counter:
        if param not in self.counts:
            raise UnknownParameter(f"no parameter {param!r} in report")
        return self.counts[param]

    def merge(self, other: "SimulationReport") -> "SimulationReport":
        """Associative merge of partial tables."""
        merged = SimulationReport(n=self.n + other.n)
        for src in (self, other):
            for param, counter in src.counts.items():
                merged.counts.setdefault(param, Counter()).update(counter)
            for pair, counter in src.joint.items():
                merged.joint.setdefault(pair, Counter()).update(counter)
        return merged

    def to_dict(self) -> dict:
        """JSON-compatible form (values rendered as strings for keys)."""
        return {
            "n": self.n,
            "frequencies": {
                param: {_label(v): c / self.n for v, c in counter.items()}
                for param, counter in self.counts.items()
            },
            "joint": {
                f"{a},{b}": {
                    f"{_label(va)}|{_label(vb)}": c / self.n
                    for (va, vb), c in counter.items()
                }
                for (a, b), counter in self.joint.items()
            },
        }

    def table(self) -> str:
        """Aligned human-readable rendering."""
        lines = [f"n = {self.n}"]
        for param, counter in self.counts.items():
            lines.append(param)
            width = max((len(_label(v)) for v in counter), default=1)
            for value, count in sorted(counter.items(), key=lambda kv: _label(kv[0])):
                lines.append(f"  {_label(value):<{width}}  "
                             f"{count / self.n:8.4f}  ({count})")
        for (a, b), counter in self.joint.items():
            lines.append(f"{a} x {b}")
            labels = {pair: f"{_label(pair[0])}, {_label(pair[1])}"
                      for pair in counter}
            width = max((len(s) for s in labels.values()), default=1)
            for pair, count in sorted(counter.items(),
                                      key=lambda kv: labels[kv[0]]):
                lines.append(f"  {labels[pair]:<{width}}  "
                             f"{count / self.n:8.4f}  ({count})")
        return "\n".join(lines)


def _label(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _hashed_id(name, index) -> str:
    return hashlib.sha1(f"{name}:{index}".encode()).hexdigest()[:16]


def _unit_grid(unit_spec, n, hashed_ids):
    """Yields input dicts for the sweep.

    unit_spec: a single input name (sequential ids 0..n-1), a list of names
    (ids split across a near-square grid), or a dict name -> axis size
    (full grid; n is ignored).
    """
    if isinstance(unit_spec, str):
        names, sizes = [unit_spec], [n]
    elif isinstance(unit_spec, dict):
        names, sizes = list(unit_spec), list(unit_spec.values())
    else:
        names = list(unit_spec)
        axis = max(1, round(n ** (1 / len(names))))
        sizes = [axis] * len(names)
    indices = [0] * len(names)
    while True:
        yield {
            name: (_hashed_id(name, i) if hashed_ids else i)
            for name, i in zip(names, indices)
        }
        pos = len(names) - 1
        while pos >= 0:
            indices[pos] += 1
            if indices[pos] < sizes[pos]:
                break
            indices[pos] = 0
            pos -= 1
        if pos < 0:
            return


def simulate(ir: ScriptIR, unit_spec="userid", n=10000,
             extra_input_generator=None, pairs=(), ctx=None,
             overrides=None, hashed_ids=False) -> SimulationReport:
    """Evaluates the script for each generated unit and aggregates.

    `extra_input_generator` is called with each unit input dict and returns
    additional inputs (e.g. liking_friends).  Evaluation errors propagate
    with the offending inputs attached to the exception.
    """
    if ctx is None:
        ctx = SaltContext("simulation", "simulation")
    params = list_parameters(ir)
    report = SimulationReport(n=0)
    for param in params:
        report.counts[param] = Counter()
    for pair in pairs:
        report.joint[tuple(pair)] = Counter()
    for inputs in _unit_grid(unit_spec, n, hashed_ids):
        if extra_input_generator is not None:
            inputs = {**inputs, **extra_input_generator(inputs)}
        try:
            assignment = evaluate(ir, inputs, overrides, ctx)
        except Exception as exc:
            exc.simulation_inputs = inputs
            raise
        report.n += 1
        values = assignment.params
        for param, value in values.items():
            report.counts[param][freeze(value)] += 1
        for pair in report.joint:
            a, b = pair
            if a in values and b in values:
                report.joint[pair][(freeze(values[a]),
                                    freeze(values[b]))] += 1
    # Drop parameters that never materialized (e.g. branch-gated ones keep
    # their rows only when at least one unit set them).
    report.counts = {p: c for p, c in report.counts.items() if c}
    return report


def chi_square(observed, expected_probs):
    """Pearson goodness-of-fit statistic and degrees of freedom.

    `observed` is a sequence of counts aligned with `expected_probs`, which
    must sum to 1.  Every expected count must be at least 5.
    """
    if abs(sum(expected_probs) - 1.0) > 1e-9:
        raise ValueError("expected probabilities must sum to 1")
    n = sum(observed)
    statistic = 0.0
    for obs, prob in zip(observed, expected_probs, strict=True):
        expected = n * prob
        if expected < 5:
            raise ExpectedTooSmall(
                f"expected count {expected:.2f} below 5")
        statistic += (obs - expected) ** 2 / expected
    return statistic, len(observed) - 1


def independence_table(report: SimulationReport, param_a, param_b) -> float:
    """Max per-cell |P(a,b) - P(a)P(b)| over the joint support."""
    freq_a = report.frequencies(param_a)
    freq_b = report.frequencies(param_b)
    joint = report.joint_frequencies(param_a, param_b)
    worst = 0.0
    for va in freq_a:
        for vb in freq_b:
            observed = joint.get((va, vb), 0.0)
            worst = max(worst, abs(observed - freq_a[va] * freq_b[vb]))
    return worst
