"""Acceptance suite: one test per release criterion, each printing a
pass/fail line (visible with ``pytest -s tests/test_acceptance.py``) and
enforcing its stated runtime budget."""

import difflib
import inspect
import json
import random
import time
from contextlib import contextmanager

import requests

from dpkit import (
    DEFAULT_COLORS,
    build_trace,
    deserialize_trace,
    frame_snapshot,
    serialize_trace,
)
from dpkit.array import OpKind
from dpkit.problems import (
    TimeAllocInstance,
    brute_force_edit_distance,
    brute_force_time_allocation,
    brute_force_wis,
    random_edit_pair,
    random_time_allocation,
    random_wis_instance,
    solve_edit_distance,
    solve_time_allocation,
    solve_wis,
)
from dpkit.quiz import Answer, QuestionKind, check_answer, questions_for_frame, start_session, submit
from dpkit.server import serve

import wis_plain
import wis_recorded
from _util import corpus_instance, random_recorded_array


@contextmanager
def criterion(name: str, budget_seconds: float):
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < budget_seconds, f"{name} took {elapsed:.2f}s, budget {budget_seconds}s"
    except BaseException:
        print(f"[acceptance] {name}: FAIL")
        raise
    print(f"[acceptance] {name}: PASS ({elapsed:.2f}s)")


def test_two_line_contract():
    with criterion("two-line contract", 1.0):
        plain_src = inspect.getsource(wis_plain.compute_opt).splitlines()
        recorded_src = inspect.getsource(wis_recorded.compute_opt).splitlines()
        assert len(plain_src) == len(recorded_src)

        matcher = difflib.SequenceMatcher(a=plain_src, b=recorded_src, autojunk=False)
        replaced_pairs = []
        for tag, a0, a1, b0, b1 in matcher.get_opcodes():
            if tag == "equal":
                continue
            assert tag == "replace", f"unexpected {tag} in the diff"
            replaced_pairs.extend(zip(plain_src[a0:a1], recorded_src[b0:b1]))
        # exactly two changed lines: the array construction and the emission
        assert len(replaced_pairs) == 2
        (construction_old, construction_new), (emission_old, emission_new) = replaced_pairs
        assert "[None] * (n + 1)" in construction_old and "DPArray(n + 1)" in construction_new
        assert emission_old.strip() == "return arr"
        assert emission_new.strip() == "return build_trace(arr)"

        # both versions run, and the recording changes nothing about the values
        inst = corpus_instance()
        weights = [None] + [iv.weight for iv in inst.intervals]
        preds = [None] + list(inst.predecessors)
        table = wis_plain.compute_opt(inst.n, weights, preds)
        trace = wis_recorded.compute_opt(inst.n, weights, preds)
        assert table == [0, 2, 4, 6]
        assert frame_snapshot(trace, len(trace.frames)) == table
        # and it agrees with the full corpus solver on the same instance
        assert solve_wis(inst).value == table[-1]


def test_segmentation():
    with criterion("segmentation", 1.0):
        inst = corpus_instance()
        assert inst.predecessors[0] == 0  # p_1 = i-1 = 0: the duplicate-read case
        trace = solve_wis(inst).trace
        computation = [frame for frame in trace.frames if not frame.terminal]
        assert len(computation) == 4  # one base WRITE + three recurrence WRITEs
        for frame in computation:
            assert frame.ops[-1].kind is OpKind.WRITE
            assert sum(1 for op in frame.ops if op.kind is OpKind.WRITE) == 1
        assert len(trace.frames[1].read) == 1


def test_oracle_equivalence():
    with criterion("oracle equivalence", 30.0):
        rng = random.Random(20240601)
        for _ in range(100):
            inst = random_wis_instance(rng, rng.randint(0, 12), max_weight=10)
            assert solve_wis(inst).value == brute_force_wis(inst)
        for _ in range(100):
            x, y = random_edit_pair(rng, max_len=6, alphabet="abc")
            assert solve_edit_distance(x, y).cost == brute_force_edit_distance(x, y)
        for _ in range(100):
            inst = random_time_allocation(rng, rng.randint(1, 3), rng.randint(0, 6))
            assert solve_time_allocation(inst).gpa == brute_force_time_allocation(inst)


def test_fixed_values():
    with criterion("fixed values", 1.0):
        oracle = brute_force_edit_distance("kitten", "sitting")
        assert oracle == 24  # two replacements + one insertion at costs 10/12/7
        assert solve_edit_distance("kitten", "sitting").cost == oracle
        assert solve_edit_distance("", "").cost == 0
        assert solve_edit_distance("ab", "ab").cost == 0
        assert solve_edit_distance("a", "").cost == 12 == brute_force_edit_distance("a", "")
        assert solve_edit_distance("", "a").cost == 10 == brute_force_edit_distance("", "a")


def test_replay_and_round_trip():
    with criterion("replay & round-trip", 5.0):
        rng = random.Random(7301)
        for _ in range(50):
            arr = random_recorded_array(rng)
            trace = build_trace(arr)
            if trace.frames:
                assert frame_snapshot(trace, len(trace.frames)) == arr.snapshot()
            data = serialize_trace(trace)
            again = deserialize_trace(data)
            assert again == trace
            assert serialize_trace(again) == data


def corpus_traces():
    return [
        solve_wis(corpus_instance()).trace,
        solve_edit_distance("kitten", "sitting").trace,
        solve_time_allocation(TimeAllocInstance(2, [[0, 1, 4], [0, 3, 5]])).trace,
    ]


def all_cells(shape):
    if len(shape) == 1:
        return [(i,) for i in range(shape[0])]
    return [(i, j) for i in range(shape[0]) for j in range(shape[1])]


def test_quiz_soundness():
    with criterion("quiz soundness", 5.0):
        for trace in corpus_traces():
            cells = all_cells(trace.shape)
            state = start_session(trace, frozenset(QuestionKind), 1)
            for t in range(1, len(trace.frames) + 1):
                assert state.t == t
                questions = list(state.pending)
                for question in questions:
                    if question.kind is QuestionKind.CELL_VALUE:
                        truth = question.truth_value
                        assert check_answer(question, Answer.of_value(truth)).correct
                        assert not check_answer(question, Answer.of_value(truth + 1)).correct
                        assert not check_answer(question, Answer.of_value(truth - 1)).correct
                        if not float(truth).is_integer():
                            bumped = truth * (1 + 1e-6)
                            assert not check_answer(question, Answer.of_value(bumped)).correct
                        state = submit(state, question, Answer.of_value(truth))
                    else:
                        truth = question.truth_cells
                        assert check_answer(question, Answer.of_cells(truth)).correct
                        for cell in truth:  # drop any one index
                            assert not check_answer(question, Answer.of_cells(truth - {cell})).correct
                        for cell in cells:  # add any one index
                            if cell not in truth:
                                assert not check_answer(question, Answer.of_cells(truth | {cell})).correct
                        state = submit(state, question, Answer.of_cells(truth))
                # all questions answered correctly: advanced exactly one frame
                assert state.t == t + 1
                assert state.mistakes == 0
            assert state.complete


def test_colors():
    with criterion("colors", 1.0):
        assert DEFAULT_COLORS.read == "B7609A"
        assert DEFAULT_COLORS.write == "5C53A5"
        assert DEFAULT_COLORS.maxmin == "EB7F86"
        doc = json.loads(serialize_trace(solve_wis(corpus_instance()).trace))
        assert doc["colors"] == {"READ": "B7609A", "WRITE": "5C53A5", "MAXMIN": "EB7F86"}


def test_http_contract():
    with criterion("HTTP contract", 10.0):
        trace = solve_wis(corpus_instance()).trace
        handle = serve(trace, port=0)
        try:
            base = handle.url.rstrip("/")
            started = requests.post(
                f"{base}/api/sessions",
                json={"enabled": ["WRITE_CELLS", "READ_CELLS", "CELL_VALUE"], "start_t": 1},
                timeout=5,
            ).json()
            sid = started["session"]

            # ground-truth secrecy: while frame-1 questions are pending, no GET
            # response carries frame 1's written cell, read set, or value
            for path in ["/api/trace"] + [f"/api/frames/{t}" for t in range(1, len(trace.frames) + 1)]:
                body = requests.get(f"{base}{path}", timeout=5).json()
                flat = json.dumps(body)
                assert '"written":[[0]]' not in flat.replace(" ", "")
                assert '"deltas":[[[0],0]]' not in flat.replace(" ", "")
                frames = body["frames"] if path == "/api/trace" else [body["frame"]]
                for frame_doc in frames:
                    assert frame_doc["ops"] == []
                    assert frame_doc["written"] == []
                    assert frame_doc["deltas"] == []
            # the CELL_VALUE prompt hides its target while WRITE_CELLS is open
            value_question = next(q for q in started["questions"] if q["kind"] == "CELL_VALUE")
            assert value_question["index"] is None

            # equivalence: one wrong then one right answer per question, both
            # through the engine and through HTTP
            state = start_session(trace, frozenset(QuestionKind), 1)
            engine_verdicts, http_verdicts = [], []
            while not state.complete:
                question = state.pending[0]
                if question.kind is QuestionKind.CELL_VALUE:
                    attempts = [
                        (Answer.of_value(question.truth_value + 1), {"value": question.truth_value + 1}),
                        (Answer.of_value(question.truth_value), {"value": question.truth_value}),
                    ]
                    qid = f"{question.t}:CELL_VALUE:0"
                else:
                    wrong = {(0,)} ^ question.truth_cells
                    attempts = [
                        (Answer.of_cells(wrong), {"cells": [list(c) for c in sorted(wrong)]}),
                        (Answer.of_cells(question.truth_cells), {"cells": [list(c) for c in sorted(question.truth_cells)]}),
                    ]
                    qid = f"{question.t}:{question.kind.value}"
                for engine_answer, payload in attempts:
                    state = submit(state, question, engine_answer)
                    engine_verdicts.append(state.history[-1][1].correct)
                    reply = requests.post(
                        f"{base}/api/sessions/{sid}/answers",
                        json={"question_id": qid, **payload},
                        timeout=5,
                    ).json()
                    http_verdicts.append(reply["correct"])
            assert engine_verdicts == http_verdicts
            assert reply["complete"] is True
            assert reply["t"] == state.t == len(trace.frames) + 1
        finally:
            handle.shutdown()
            handle.server_close()
