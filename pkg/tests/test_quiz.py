import pytest
from hypothesis import given, settings

from dpkit import DPArray, build_trace
from dpkit.problems import (
    TimeAllocInstance,
    solve_edit_distance,
    solve_time_allocation,
    solve_wis,
)
from dpkit.quiz import (
    Answer,
    Question,
    QuestionKind,
    StaleQuestionError,
    check_answer,
    questions_for_frame,
    start_session,
    submit,
)

from _util import apply_program, corpus_instance, op_programs

ALL_KINDS = frozenset(QuestionKind)


@pytest.fixture(scope="module")
def wis_trace():
    return solve_wis(corpus_instance()).trace


def corpus_traces():
    return [
        solve_wis(corpus_instance()).trace,
        solve_edit_distance("ab", "ca").trace,
        solve_time_allocation(TimeAllocInstance(2, [[0, 1, 4], [0, 3, 5]])).trace,
    ]


def truth_answer(question: Question) -> Answer:
    if question.kind is QuestionKind.CELL_VALUE:
        return Answer.of_value(question.truth_value)
    return Answer.of_cells(question.truth_cells)


class TestQuestionsForFrame:
    def test_frame_two_of_wis_gives_three_questions(self, wis_trace):
        questions = questions_for_frame(wis_trace, 2, ALL_KINDS)
        assert [q.kind for q in questions] == [
            QuestionKind.WRITE_CELLS,
            QuestionKind.READ_CELLS,
            QuestionKind.CELL_VALUE,
        ]
        write_q, read_q, value_q = questions
        assert write_q.truth_cells == {(1,)}
        assert read_q.truth_cells == {(0,)}
        assert value_q.target == (1,)
        assert value_q.truth_value == 2

    def test_kind_filtering(self, wis_trace):
        questions = questions_for_frame(wis_trace, 2, {QuestionKind.READ_CELLS})
        assert len(questions) == 1
        assert questions[0].kind is QuestionKind.READ_CELLS

    def test_terminal_frame_has_empty_write_truth_and_no_value_question(self, wis_trace):
        last = len(wis_trace.frames)
        assert wis_trace.frames[-1].terminal
        questions = questions_for_frame(wis_trace, last, ALL_KINDS)
        kinds = [q.kind for q in questions]
        assert QuestionKind.CELL_VALUE not in kinds
        write_q = questions[0]
        assert write_q.kind is QuestionKind.WRITE_CELLS
        assert write_q.truth_cells == frozenset()

    def test_frame_out_of_range(self, wis_trace):
        with pytest.raises(IndexError):
            questions_for_frame(wis_trace, 0, ALL_KINDS)
        with pytest.raises(IndexError):
            questions_for_frame(wis_trace, len(wis_trace.frames) + 1, ALL_KINDS)

    def test_empty_enabled_set(self, wis_trace):
        with pytest.raises(ValueError):
            questions_for_frame(wis_trace, 1, set())

    def test_deterministic(self, wis_trace):
        first = questions_for_frame(wis_trace, 3, ALL_KINDS)
        second = questions_for_frame(wis_trace, 3, ALL_KINDS)
        assert first == second


class TestCheckAnswer:
    def test_truth_echo_is_correct(self):
        q = Question(kind=QuestionKind.WRITE_CELLS, t=1, truth_cells=frozenset({(1,)}))
        assert check_answer(q, Answer.of_cells({(1,)})).correct

    def test_superset_is_incorrect_with_extra_named(self):
        q = Question(kind=QuestionKind.WRITE_CELLS, t=1, truth_cells=frozenset({(1,)}))
        verdict = check_answer(q, Answer.of_cells({(0,), (1,)}))
        assert not verdict.correct
        assert verdict.extra == {(0,)}
        assert verdict.missing == frozenset()

    def test_missing_cells_named(self):
        q = Question(kind=QuestionKind.READ_CELLS, t=1, truth_cells=frozenset({(0,), (2,)}))
        verdict = check_answer(q, Answer.of_cells({(2,)}))
        assert not verdict.correct
        assert verdict.missing == {(0,)}

    def test_wis_final_value_graded_exactly(self, wis_trace):
        # cell (3,) of the corpus trace holds the optimum 6
        questions = questions_for_frame(wis_trace, 4, {QuestionKind.CELL_VALUE})
        (value_q,) = questions
        assert check_answer(value_q, Answer.of_value(6)).correct
        verdict = check_answer(value_q, Answer.of_value(4))
        assert not verdict.correct
        assert verdict.message == "value mismatch"
        assert "6" not in verdict.message

    def test_integral_truth_requires_exact_match(self):
        q = Question(kind=QuestionKind.CELL_VALUE, t=1, target=(0,), truth_value=6)
        assert check_answer(q, Answer.of_value(6.0)).correct
        assert not check_answer(q, Answer.of_value(6.0000001)).correct

    def test_fractional_truth_uses_relative_tolerance(self):
        q = Question(kind=QuestionKind.CELL_VALUE, t=1, target=(0,), truth_value=2.5)
        assert check_answer(q, Answer.of_value(2.5 * (1 + 1e-12))).correct
        assert not check_answer(q, Answer.of_value(2.5 + 1e-6)).correct

    def test_variant_mismatch_rejected(self):
        cell_q = Question(kind=QuestionKind.WRITE_CELLS, t=1, truth_cells=frozenset())
        value_q = Question(kind=QuestionKind.CELL_VALUE, t=1, target=(0,), truth_value=1)
        with pytest.raises(TypeError):
            check_answer(cell_q, Answer.of_value(3))
        with pytest.raises(TypeError):
            check_answer(value_q, Answer.of_cells({(0,)}))

    def test_bare_int_cells_normalized(self):
        q = Question(kind=QuestionKind.WRITE_CELLS, t=1, truth_cells=frozenset({(1,)}))
        assert check_answer(q, Answer.of_cells({1})).correct


class TestSubmit:
    def test_correct_final_answer_advances_one_frame(self, wis_trace):
        state = start_session(wis_trace, ALL_KINDS, start_t=1)
        assert state.t == 1
        for question in list(state.pending):
            state = submit(state, question, truth_answer(question))
        assert state.t == 2
        assert state.mistakes == 0

    def test_incorrect_keeps_question_pending_and_counts_mistake(self, wis_trace):
        state = start_session(wis_trace, ALL_KINDS, start_t=1)
        question = state.pending[0]
        state = submit(state, question, Answer.of_cells({(2,)}))
        assert question in state.pending
        assert state.t == 1
        assert state.mistakes == 1

    def test_completing_final_frame_completes_session(self, wis_trace):
        last = len(wis_trace.frames)
        state = start_session(wis_trace, ALL_KINDS, start_t=last)
        for question in list(state.pending):
            state = submit(state, question, truth_answer(question))
        assert state.complete
        assert state.pending == ()
        assert state.t == last + 1

    def test_not_pending_question_rejected(self, wis_trace):
        state = start_session(wis_trace, ALL_KINDS, start_t=1)
        stale = questions_for_frame(wis_trace, 2, ALL_KINDS)[0]
        with pytest.raises(StaleQuestionError):
            submit(state, stale, Answer.of_cells(set()))

    def test_value_only_session_skips_frames_without_writes(self, wis_trace):
        # the trailing terminal frame writes nothing, so a CELL_VALUE-only
        # session finishes after the last computation frame
        state = start_session(wis_trace, {QuestionKind.CELL_VALUE}, start_t=len(wis_trace.frames) - 1)
        (question,) = state.pending
        state = submit(state, question, truth_answer(question))
        assert state.complete


def drive_session_with_truths(trace, start_t=1, enabled=ALL_KINDS):
    state = start_session(trace, enabled, start_t=start_t)
    steps = 0
    while not state.complete:
        before_t = state.t
        for question in list(state.pending):
            state = submit(state, question, truth_answer(question))
        assert state.t == before_t + 1
        steps += 1
        assert steps <= len(trace.frames) + 1
    return state


@pytest.mark.parametrize("trace", corpus_traces(), ids=["wis", "edit", "alloc"])
def test_self_consistency_over_corpus(trace):
    state = drive_session_with_truths(trace)
    assert state.mistakes == 0
    assert state.t == len(trace.frames) + 1


@pytest.mark.parametrize("trace", corpus_traces(), ids=["wis", "edit", "alloc"])
def test_adversarial_perturbations_rejected(trace):
    in_bounds = (0,) * len(trace.shape)
    for t in range(1, len(trace.frames) + 1):
        for question in questions_for_frame(trace, t, ALL_KINDS):
            if question.kind is QuestionKind.CELL_VALUE:
                assert not check_answer(question, Answer.of_value(question.truth_value + 1)).correct
                assert not check_answer(
                    question, Answer.of_value(question.truth_value * (1 + 1e-6) + 1e-6)
                ).correct
            else:
                truth = question.truth_cells
                added = Answer.of_cells(truth | {in_bounds} if in_bounds not in truth else truth - {in_bounds})
                assert not check_answer(question, added).correct
                for cell in truth:
                    assert not check_answer(question, Answer.of_cells(truth - {cell})).correct


@settings(max_examples=40)
@given(op_programs())
def test_session_monotonicity_on_random_traces(program):
    shape, ops = program
    arr, _ = apply_program(shape, ops)
    trace = build_trace(arr)
    if not trace.frames:
        return
    state = start_session(trace, ALL_KINDS, start_t=1)
    last_t, last_mistakes = state.t, state.mistakes
    wrong = Answer.of_cells({tuple(e - 1 for e in shape)})
    while not state.complete:
        question = state.pending[0]
        # one wrong poke (cell questions only), then the truth
        if question.kind is not QuestionKind.CELL_VALUE and wrong.cells != question.truth_cells:
            state = submit(state, question, wrong)
        state = submit(state, question, truth_answer(question))
        assert state.t >= last_t
        assert state.mistakes >= last_mistakes
        last_t, last_mistakes = state.t, state.mistakes
    assert state.t == len(trace.frames) + 1
