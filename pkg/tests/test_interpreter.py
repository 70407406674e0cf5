"""Script evaluation semantics: environments, control flow, freezing,
exposure hooks, and the assignment cache."""

import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planout import corpus, errors
from planout.dsl import parse_or_raise
from planout.interpreter import Assignment, AssignmentCache, evaluate, truthy
from planout.random_ops import SaltContext, bernoulli_trial, uniform_choice
from strategies import script_irs


def run(source, inputs=None, **kwargs):
    return evaluate(parse_or_raise(source), inputs or {}, **kwargs)


class TestBasics:
    def test_constants_and_arithmetic(self):
        a = run("x = 2; y = x * 3 + 1; z = 7 / 2; r = 7 % 2;")
        assert a.peek("x") == 2
        assert a.peek("y") == 7
        assert a.peek("z") == 3.5
        assert a.peek("r") == 1

    def test_inputs_are_readable_but_not_parameters(self):
        a = run("y = n + 1;", {"n": 41})
        assert a.peek("y") == 42
        assert "n" not in a.params

    def test_missing_input(self):
        with pytest.raises(errors.MissingInput) as exc_info:
            run("y = n + 1;")
        assert exc_info.value.name == "n"

    def test_reassignment_takes_last_value(self):
        a = run("x = 1; x = 2;")
        assert a.peek("x") == 2
        assert list(a.params) == ["x"]

    def test_array_and_indexing(self):
        a = run("probs = [0.1, 0.9]; p = probs[flag];", {"flag": 1})
        assert a.peek("p") == 0.9

    def test_index_out_of_range(self):
        with pytest.raises(errors.IndexOutOfRange):
            run("x = [1, 2][5];")

    def test_division_by_zero(self):
        with pytest.raises(errors.TypeMismatch):
            run("x = 1 / 0;")

    def test_modulo_requires_integers(self):
        with pytest.raises(errors.TypeMismatch):
            run("x = 7.5 % 2;")

    def test_string_arithmetic_rejected(self):
        with pytest.raises(errors.TypeMismatch):
            run("x = 'a' + 1;")


class TestTruthinessAndControlFlow:
    @pytest.mark.parametrize("value", [None, False, 0, 0.0, "", []])
    def test_falsy_values(self, value):
        assert truthy(value) is False

    @pytest.mark.parametrize("value", [True, 1, -1, 0.5, "no", [0]])
    def test_truthy_values(self, value):
        assert truthy(value) is True

    def test_branch_selection(self):
        source = ("if (country == 'US') { x = 1; }"
                  "else if (country == 'UK') { x = 2; }"
                  "else { x = 3; }")
        assert run(source, {"country": "US"}).peek("x") == 1
        assert run(source, {"country": "UK"}).peek("x") == 2
        assert run(source, {"country": "FR"}).peek("x") == 3

    def test_return_stops_execution(self):
        a = run("x = 1; return; y = 2;")
        assert a.peek("x") == 1
        assert "y" not in a.params

    def test_short_circuit_and(self):
        # rhs would raise MissingInput if evaluated
        assert run("x = false && boom;").peek("x") is False

    def test_short_circuit_or(self):
        assert run("x = true || boom;").peek("x") is True


class TestRandomAssignment:
    def test_parameter_name_is_default_salt(self):
        a = run("color = uniformChoice(choices=['r', 'g', 'b'], unit=uid);",
                {"uid": 42}, ctx=SaltContext("ns", "exp"))
        expected = uniform_choice(["r", "g", "b"],
                                  SaltContext("ns", "exp", "color"), [42])
        assert a.peek("color") == expected

    def test_explicit_salt_wins(self):
        base = "x = bernoulliTrial(p=0.5, unit=uid{salt});"
        ctx = SaltContext("ns", "exp")
        salted = [run(base.format(salt=s), {"uid": u}, ctx=ctx).peek("x")
                  for s in ("", ", salt='x'") for u in range(300)]
        half = len(salted) // 2
        assert salted[:half] == salted[half:]

    def test_tuple_unit(self):
        source = ("collapse = bernoulliTrial(p=0.05, "
                  "unit=[viewerid, storyid]);")
        ctx = SaltContext("ns", "exp")
        a = run(source, {"viewerid": 3, "storyid": 9}, ctx=ctx)
        expected = bernoulli_trial(
            0.05, SaltContext("ns", "exp", "collapse"), [3, 9])
        assert a.peek("collapse") == expected

    def test_dependent_randomization(self):
        script = corpus.get("voter_banner")
        ctx = SaltContext("ns", "exp")
        for uid in range(500):
            a = evaluate(script.ir, script.make_inputs(uid), ctx=ctx)
            if not a.peek("has_banner"):
                # P(feed stories | no banner) = 0.5 comes from cond_probs[0]
                assert a.peek("cond_probs") == [0.5, 0.98]

    @pytest.mark.parametrize("name", corpus.names())
    def test_corpus_is_deterministic(self, name):
        script = corpus.get(name)
        ctx = SaltContext("demo", name)
        for uid in range(50):
            inputs = script.make_inputs(uid)
            first = evaluate(script.ir, inputs, ctx=ctx)
            second = evaluate(script.ir, inputs, ctx=ctx)
            assert first.canonical() == second.canonical()


class TestOverrides:
    def test_override_freezes_value(self):
        a = run("x = uniformChoice(choices=[1, 2, 3], unit=uid);",
                {"uid": 7}, overrides={"x": 99})
        assert a.peek("x") == 99

    def test_frozen_rhs_never_evaluated(self):
        # the RHS divides by zero; freezing must skip it entirely
        a = run("x = 1 / 0;", overrides={"x": 5})
        assert a.peek("x") == 5

    def test_downstream_reads_see_frozen_value(self):
        a = run("x = 2; y = x * 10;", overrides={"x": 3})
        assert a.peek("y") == 30

    def test_frozen_parameter_in_untaken_branch_still_set(self):
        a = run("if (false) { x = 1; } y = 2;", overrides={"x": 42})
        assert a.peek("x") == 42

    def test_override_of_non_parameter_ignored(self):
        a = run("y = 1;", overrides={"zzz": 9})
        assert "zzz" not in a.params


class TestExposure:
    def test_get_fires_hook_once(self):
        fired = []
        a = run("x = 1; y = 2;", on_exposure=fired.append)
        assert not a.exposed
        a.get("x")
        a.get("y")
        a.get_all()
        assert a.exposed
        assert fired == [a]

    def test_peek_never_fires(self):
        fired = []
        a = run("x = 1;", on_exposure=fired.append)
        assert a.peek("x") == 1
        assert not a.exposed
        assert fired == []

    def test_get_of_unset_parameter_does_not_fire(self):
        fired = []
        a = run("x = 1;", on_exposure=fired.append)
        assert a.get("missing", "fallback") == "fallback"
        assert fired == []

    def test_concurrent_get_fires_once(self):
        fired = []
        a = run("x = 1;", on_exposure=fired.append)
        threads = [threading.Thread(target=a.get, args=("x",))
                   for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert fired == [a]


class TestAssignmentCache:
    def test_hit_returns_same_object(self):
        cache = AssignmentCache()
        ir = parse_or_raise("x = uniformChoice(choices=[1, 2], unit=uid);")
        a = cache.get_or_evaluate(ir, {"uid": 1})
        b = cache.get_or_evaluate(ir, {"uid": 1})
        assert a is b
        assert len(cache) == 1

    def test_distinct_inputs_distinct_entries(self):
        cache = AssignmentCache()
        ir = parse_or_raise("x = 1;")
        a = cache.get_or_evaluate(ir, {"uid": 1})
        b = cache.get_or_evaluate(ir, {"uid": 2})
        assert a is not b

    def test_overrides_are_part_of_the_key(self):
        cache = AssignmentCache()
        ir = parse_or_raise("x = 1;")
        plain = cache.get_or_evaluate(ir, {"uid": 1})
        frozen = cache.get_or_evaluate(ir, {"uid": 1}, overrides={"x": 9})
        assert plain.peek("x") == 1
        assert frozen.peek("x") == 9

    def test_lru_eviction(self):
        cache = AssignmentCache(maxsize=3)
        ir = parse_or_raise("x = 1;")
        for uid in range(5):
            cache.get_or_evaluate(ir, {"uid": uid})
        assert len(cache) == 3

    def test_exposure_state_survives_cache_hits(self):
        cache = AssignmentCache()
        fired = []
        ir = parse_or_raise("x = 1;")
        first = cache.get_or_evaluate(ir, {"uid": 1},
                                      on_exposure=fired.append)
        first.get("x")
        again = cache.get_or_evaluate(ir, {"uid": 1},
                                      on_exposure=fired.append)
        again.get("x")
        assert fired == [first]


@settings(max_examples=100)
@given(script_irs, st.integers(min_value=0, max_value=10**6))
def test_generated_scripts_are_deterministic(ir, uid):
    inputs = {name: uid for name in
              ["a", "b", "c", "x", "y", "score", "unit_a"]}
    try:
        first = evaluate(ir, inputs)
    except errors.PlanoutError:
        return
    second = evaluate(ir, inputs)
    assert first.canonical() == second.canonical()
