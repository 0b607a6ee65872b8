"""Metric suite tests: frozen oracle cases plus structural invariants."""

import itertools
import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from openminutes.errors import ConfigError, LoadError
from openminutes.evaluation import (
    EvalReport,
    F1Score,
    METADATA_FIELDS,
    MatchOutcome,
    NgramEmbeddingProvider,
    RemoteEmbeddingProvider,
    SubjectMatch,
    VOTE_CLASSES,
    bleu,
    evaluate_directories,
    evaluate_results,
    load_results_dir,
    match_subjects,
    metadata_macro_f1,
    rouge_l,
    subject_text,
    voting_macro_f1,
)
from openminutes.extraction import (
    ExtractionResult,
    RawMetadata,
    RawParticipant,
    RawSubject,
    RawVote,
)
from openminutes.report import render_table, write_report

from .oracles import (
    BLEU_CASES,
    GREEDY_FIXTURE,
    METADATA_CASES,
    ROUGE_CASES,
    VOTING_CASES,
    trigram_cosine,
)

TOL = 1e-6

word = st.text(alphabet="abcdefor ", min_size=0, max_size=40)


def raw_subject(title, summary="", votes=None):
    if votes is not None:
        votes = tuple(RawVote(participant_name=n, position=p) for n, p in votes)
    return RawSubject(title=title, summary=summary, votes=votes)


class TestF1Score:
    def test_from_counts(self):
        score = F1Score.from_counts(tp=2, fp=1, fn=1)
        assert score.precision == pytest.approx(2 / 3)
        assert score.recall == pytest.approx(2 / 3)
        assert score.f1 == pytest.approx(2 / 3)

    def test_zero_counts_are_zero_not_nan(self):
        score = F1Score.from_counts(tp=0, fp=0, fn=0)
        assert (score.precision, score.recall, score.f1) == (0.0, 0.0, 0.0)

    def test_to_dict_keys(self):
        assert set(F1Score.from_counts(1, 0, 0).to_dict()) == {"precision", "recall", "f1"}


class TestMetadataMacroF1:
    @pytest.mark.parametrize("case_index", range(len(METADATA_CASES)))
    def test_frozen_cases(self, case_index):
        gold, pred, per_field, macro = METADATA_CASES[case_index]
        report = metadata_macro_f1(gold, pred)
        assert report["macro_f1"] == pytest.approx(macro, abs=TOL)
        for field_name, expected in per_field.items():
            assert report["per_field"][field_name]["f1"] == pytest.approx(
                expected, abs=TOL
            ), field_name

    def test_identical_inputs_score_exactly_one(self):
        gold, _, _, _ = METADATA_CASES[1]
        report = metadata_macro_f1(gold, gold)
        assert report["macro_f1"] == 1.0
        for field_name in METADATA_FIELDS:
            assert report["per_field"][field_name]["f1"] == 1.0

    def test_empty_sides_score_zero(self):
        report = metadata_macro_f1({}, {})
        assert report["macro_f1"] == 0.0
        assert report["pred_only_docs"] == []
        assert report["gold_only_docs"] == []

    def test_doc_only_in_pred_is_pure_false_positive(self):
        gold, pred, _, _ = METADATA_CASES[3]
        report = metadata_macro_f1(gold, pred)
        assert report["pred_only_docs"] == ["b"]
        assert report["per_field"]["meeting_date"]["precision"] == pytest.approx(0.5)
        assert report["per_field"]["meeting_date"]["recall"] == pytest.approx(1.0)

    def test_scores_within_unit_interval(self):
        for gold, pred, _, _ in METADATA_CASES:
            report = metadata_macro_f1(gold, pred)
            assert 0.0 <= report["macro_f1"] <= 1.0
            for field_name in METADATA_FIELDS:
                for key in ("precision", "recall", "f1"):
                    assert 0.0 <= report["per_field"][field_name][key] <= 1.0

    def test_participant_order_does_not_matter(self):
        gold = {
            "a": {
                "meeting_date": "2025-01-10",
                "location": "hall",
                "meeting_type": "ordinary",
                "participants": [{"name": "Ana"}, {"name": "Rui"}],
            }
        }
        pred = {
            "a": {
                "meeting_date": "2025-01-10",
                "location": "hall",
                "meeting_type": "ordinary",
                "participants": [{"name": "Rui"}, {"name": "Ana"}],
            }
        }
        assert metadata_macro_f1(gold, pred)["macro_f1"] == 1.0

    def test_swapping_sides_swaps_precision_and_recall(self):
        for gold, pred, _, _ in METADATA_CASES:
            forward = metadata_macro_f1(gold, pred)
            backward = metadata_macro_f1(pred, gold)
            for field_name in METADATA_FIELDS:
                f = forward["per_field"][field_name]
                b = backward["per_field"][field_name]
                assert f["precision"] == pytest.approx(b["recall"], abs=TOL)
                assert f["recall"] == pytest.approx(b["precision"], abs=TOL)


class TestNgramProvider:
    def test_self_similarity_is_exactly_one(self):
        provider = NgramEmbeddingProvider()
        for text in ("flood prevention plan", "ab", "Orçamento Municipal 2025"):
            vector = provider.embed(text)
            assert provider.similarity(vector, vector) == 1.0

    def test_disjoint_texts_are_exactly_zero(self):
        provider = NgramEmbeddingProvider()
        assert provider.similarity(provider.embed("aaaa"), provider.embed("bbbb")) == 0.0

    def test_empty_text_has_zero_similarity_to_everything(self):
        provider = NgramEmbeddingProvider()
        assert provider.similarity(provider.embed(""), provider.embed("budget")) == 0.0

    def test_accent_folding(self):
        provider = NgramEmbeddingProvider()
        a = provider.embed("aprovação")
        b = provider.embed("APROVACAO")
        assert provider.similarity(a, b) == 1.0

    def test_short_text_falls_back_to_whole_string(self):
        provider = NgramEmbeddingProvider()
        assert provider.embed("ab") == {"ab": 1}
        assert provider.embed("") == {}

    @given(a=word, b=word)
    @settings(max_examples=200, deadline=None)
    def test_matches_reference_cosine(self, a, b):
        provider = NgramEmbeddingProvider()
        got = provider.similarity(provider.embed(a), provider.embed(b))
        assert got == pytest.approx(trigram_cosine(a, b), abs=1e-12)
        assert 0.0 <= got <= 1.0


class TestRemoteProvider:
    def test_missing_env_var_raises_config_error(self, monkeypatch):
        monkeypatch.delenv("TEST_EMBED_KEY", raising=False)
        provider = RemoteEmbeddingProvider(
            endpoint_url="http://127.0.0.1:9/embed",
            api_key_env_var_name="TEST_EMBED_KEY",
            model_id="toy",
        )
        with pytest.raises(ConfigError) as err:
            provider.embed("text")
        assert "TEST_EMBED_KEY" in str(err.value)

    def test_cosine_on_dense_vectors(self):
        provider = RemoteEmbeddingProvider(
            endpoint_url="http://127.0.0.1:9/embed",
            api_key_env_var_name="TEST_EMBED_KEY",
            model_id="toy",
        )
        assert provider.similarity([1.0, 0.0], [0.0, 2.0]) == 0.0
        assert provider.similarity([1.0, 1.0], [2.0, 2.0]) == pytest.approx(1.0)
        assert provider.similarity([0.0, 0.0], [1.0, 0.0]) == 0.0


class TestMatchSubjects:
    def test_greedy_fixture_pairs(self):
        gold = tuple(raw_subject(t) for t in GREEDY_FIXTURE["gold"])
        pred = tuple(raw_subject(t) for t in GREEDY_FIXTURE["pred"])
        outcome = match_subjects(gold, pred, NgramEmbeddingProvider())
        pairs = tuple((m.gold_index, m.pred_index) for m in outcome.pairs)
        assert pairs == GREEDY_FIXTURE["greedy_pairs"]
        assert pairs != GREEDY_FIXTURE["optimal_pairs"]

    def test_greedy_total_below_optimal_on_fixture(self):
        # the fixture is built so the greedy total is strictly worse
        provider = NgramEmbeddingProvider()
        gold = [provider.embed(t + "\n") for t in GREEDY_FIXTURE["gold"]]
        pred = [provider.embed(t + "\n") for t in GREEDY_FIXTURE["pred"]]
        sim = {
            (gi, pi): provider.similarity(g, p)
            for gi, g in enumerate(gold)
            for pi, p in enumerate(pred)
        }
        greedy_total = sum(sim[p] for p in GREEDY_FIXTURE["greedy_pairs"])
        optimal_total = sum(sim[p] for p in GREEDY_FIXTURE["optimal_pairs"])
        assert greedy_total < optimal_total

    def test_perfect_match_similarities_are_one(self):
        subjects = (raw_subject("budget", "approved"), raw_subject("roads", "paved"))
        outcome = match_subjects(subjects, subjects, NgramEmbeddingProvider())
        assert all(m.similarity == 1.0 for m in outcome.pairs)
        assert outcome.unmatched_gold == ()
        assert outcome.unmatched_pred == ()

    def test_surplus_pred_subjects_are_unmatched(self):
        gold = (raw_subject("budget", "x"),)
        pred = (raw_subject("budget", "x"), raw_subject("roads", "y"))
        outcome = match_subjects(gold, pred, NgramEmbeddingProvider())
        assert [(m.gold_index, m.pred_index) for m in outcome.pairs] == [(0, 0)]
        assert outcome.unmatched_pred == (1,)

    def test_empty_sides(self):
        outcome = match_subjects((), (), NgramEmbeddingProvider())
        assert outcome == MatchOutcome(pairs=(), unmatched_gold=(), unmatched_pred=())
        one = (raw_subject("t", "s"),)
        assert match_subjects(one, (), NgramEmbeddingProvider()).unmatched_gold == (0,)

    def test_tie_breaks_on_gold_then_pred_order(self):
        # identical titles everywhere: all similarities are 1.0
        gold = (raw_subject("same title"), raw_subject("same title"))
        pred = (raw_subject("same title"), raw_subject("same title"))
        outcome = match_subjects(gold, pred, NgramEmbeddingProvider())
        assert [(m.gold_index, m.pred_index) for m in outcome.pairs] == [(0, 0), (1, 1)]

    @given(
        gold_titles=st.lists(st.text("abcdef ", min_size=1, max_size=12), max_size=5),
        pred_titles=st.lists(st.text("abcdef ", min_size=1, max_size=12), max_size=5),
    )
    @settings(max_examples=100, deadline=None)
    def test_matching_is_one_to_one(self, gold_titles, pred_titles):
        gold = tuple(raw_subject(t) for t in gold_titles)
        pred = tuple(raw_subject(t) for t in pred_titles)
        outcome = match_subjects(gold, pred, NgramEmbeddingProvider())
        gold_used = [m.gold_index for m in outcome.pairs]
        pred_used = [m.pred_index for m in outcome.pairs]
        assert len(set(gold_used)) == len(gold_used)
        assert len(set(pred_used)) == len(pred_used)
        assert sorted(gold_used + list(outcome.unmatched_gold)) == list(range(len(gold)))
        assert sorted(pred_used + list(outcome.unmatched_pred)) == list(range(len(pred)))
        assert len(outcome.pairs) == min(len(gold), len(pred))

    def test_subject_text_joins_title_and_summary(self):
        assert subject_text(raw_subject("t", "s")) == "t\ns"
        assert subject_text({"title": "t", "summary": "s"}) == "t\ns"


class TestRougeL:
    @pytest.mark.parametrize("case_index", range(len(ROUGE_CASES)))
    def test_frozen_cases(self, case_index):
        reference, hypothesis, (precision, recall, f1) = ROUGE_CASES[case_index]
        score = rouge_l(reference, hypothesis)
        assert score.precision == pytest.approx(precision, abs=TOL)
        assert score.recall == pytest.approx(recall, abs=TOL)
        assert score.f1 == pytest.approx(f1, abs=TOL)

    def test_identical_text_is_exactly_one(self):
        score = rouge_l("the council approved the budget", "the council approved the budget")
        assert (score.precision, score.recall, score.f1) == (1.0, 1.0, 1.0)

    def test_empty_either_side_is_zero(self):
        assert rouge_l("", "budget").f1 == 0.0
        assert rouge_l("budget", "").f1 == 0.0
        assert rouge_l("", "") == F1Score(0.0, 0.0, 0.0)

    @given(a=word, b=word)
    @settings(max_examples=150, deadline=None)
    def test_swapping_sides_swaps_precision_and_recall(self, a, b):
        forward = rouge_l(a, b)
        backward = rouge_l(b, a)
        assert forward.precision == pytest.approx(backward.recall, abs=1e-12)
        assert forward.recall == pytest.approx(backward.precision, abs=1e-12)
        assert forward.f1 == pytest.approx(backward.f1, abs=1e-12)
        assert 0.0 <= forward.f1 <= 1.0


class TestBleu:
    @pytest.mark.parametrize("case_index", range(len(BLEU_CASES)))
    def test_frozen_cases(self, case_index):
        references, hypotheses, expected = BLEU_CASES[case_index]
        assert bleu(references, hypotheses) == pytest.approx(expected, abs=TOL)

    def test_identical_corpus_is_exactly_one(self):
        texts = ("the council approved the budget for 2025",)
        assert bleu(texts, texts) == 1.0

    def test_empty_corpus_warns_and_scores_zero(self):
        with pytest.warns(RuntimeWarning):
            assert bleu((), ()) == 0.0

    def test_misaligned_corpora_raise(self):
        with pytest.raises(ValueError):
            bleu(("a",), ("a", "b"))

    def test_brevity_penalty_only_when_shorter(self):
        # same n-gram precisions, so the gap is exactly the brevity factor
        short = bleu(("a b c d e f",), ("a b c",))
        assert short == pytest.approx(math.exp(-1) * bleu(("a b c",), ("a b c",)), abs=TOL)

    def test_scores_within_unit_interval(self):
        for references, hypotheses, _ in BLEU_CASES:
            assert 0.0 <= bleu(references, hypotheses) <= 1.0


def build_voting_outcome(doc):
    pairs = tuple(
        SubjectMatch(gold_index=gi, pred_index=pi, similarity=1.0)
        for gi, pi in doc["pairs"]
    )
    return MatchOutcome(
        pairs=pairs,
        unmatched_gold=tuple(doc.get("unmatched_gold", ())),
        unmatched_pred=tuple(doc.get("unmatched_pred", ())),
    )


def to_raw_subjects(dicts):
    return tuple(
        raw_subject(d["title"], votes=d["votes"]) if d["votes"] is not None else raw_subject(d["title"])
        for d in dicts
    )


class TestVotingMacroF1:
    @pytest.mark.parametrize("case_index", range(len(VOTING_CASES)))
    def test_frozen_cases(self, case_index):
        case, per_class, macro = VOTING_CASES[case_index]
        doc_pairs = [
            (to_raw_subjects(doc["gold"]), to_raw_subjects(doc["pred"]), build_voting_outcome(doc))
            for doc in case
        ]
        report = voting_macro_f1(doc_pairs)
        assert report["macro_f1"] == pytest.approx(macro, abs=TOL)
        for cls, expected in per_class.items():
            assert report["per_class"][cls]["f1"] == pytest.approx(expected, abs=TOL), cls

    def test_no_documents_scores_zero(self):
        report = voting_macro_f1([])
        assert report["macro_f1"] == 0.0
        assert set(report["per_class"]) == set(VOTE_CLASSES)

    def test_perfect_agreement_is_exactly_one(self):
        case, _, _ = VOTING_CASES[0]
        doc = case[0]
        doc_pairs = [
            (to_raw_subjects(doc["gold"]), to_raw_subjects(doc["pred"]), build_voting_outcome(doc))
        ]
        report = voting_macro_f1(doc_pairs)
        assert report["macro_f1"] == 1.0
        for cls in VOTE_CLASSES:
            assert report["per_class"][cls]["f1"] == 1.0


# --------------------------------------------------------------------------
# Directory harness


def result_for(date, subjects, names=("Ana Prata",)):
    return ExtractionResult(
        metadata_raw=RawMetadata(
            meeting_date=date,
            location="Salão Nobre",
            meeting_type="ordinary",
            participants=tuple(RawParticipant(name=n) for n in names),
        ),
        subjects_raw=subjects,
        extractor_id="rule",
    )


def write_results(directory, results):
    directory.mkdir(parents=True, exist_ok=True)
    for doc_id, result in results.items():
        path = directory / f"{doc_id}.json"
        path.write_text(
            json.dumps(result.to_dict(), ensure_ascii=False), encoding="utf-8"
        )


@pytest.fixture()
def gold_results():
    return {
        "doc-1": result_for(
            "2025-01-10",
            (
                raw_subject("Budget approval", "Annual budget approved.", [("Ana Prata", "favor"), ("Rui Costa", "contra")]),
                raw_subject("Road repairs", "Potholes on the main road."),
            ),
        ),
        "doc-2": result_for(
            "2025-02-01",
            (
                raw_subject(
                    "School lunches",
                    "Subsidy for school lunches.",
                    [("Ana Prata", "favor"), ("Maria Lopes", "abstention")],
                ),
            ),
        ),
    }


class TestLoadResultsDir:
    def test_round_trip(self, tmp_path, gold_results):
        write_results(tmp_path / "gold", gold_results)
        loaded = load_results_dir(tmp_path / "gold")
        assert loaded == gold_results

    def test_missing_directory_raises(self, tmp_path):
        with pytest.raises(LoadError):
            load_results_dir(tmp_path / "nope")

    def test_unparseable_file_raises_with_path(self, tmp_path):
        directory = tmp_path / "bad"
        directory.mkdir()
        (directory / "doc-1.json").write_text('{"metadata_raw": {}}', encoding="utf-8")
        with pytest.raises(LoadError) as err:
            load_results_dir(directory)
        assert "doc-1.json" in str(err.value)

    def test_non_json_files_are_ignored(self, tmp_path, gold_results):
        write_results(tmp_path / "gold", gold_results)
        (tmp_path / "gold" / "README.txt").write_text("notes", encoding="utf-8")
        assert set(load_results_dir(tmp_path / "gold")) == {"doc-1", "doc-2"}


class TestEvaluateResults:
    def test_gold_vs_itself_is_all_ones(self, gold_results):
        report = evaluate_results(gold_results, gold_results)
        assert report.metadata["macro_f1"] == 1.0
        assert report.subjects["rouge_l"]["f1"] == 1.0
        assert report.subjects["bleu"] == 1.0
        assert report.voting["macro_f1"] == 1.0
        assert report.corpus == {
            "documents": 2,
            "gold_subjects": 3,
            "pred_subjects": 3,
            "matched_subjects": 3,
        }
        assert report.provider_id == "ngram"

    def test_pred_only_document_is_reported(self, gold_results):
        pred = dict(gold_results)
        pred["doc-3"] = result_for("2025-03-01", (raw_subject("Extra", "Not in gold."),))
        report = evaluate_results(gold_results, pred)
        assert report.metadata["pred_only_docs"] == ["doc-3"]
        assert report.metadata["macro_f1"] < 1.0
        assert report.corpus["pred_subjects"] == 4

    def test_degraded_summary_lowers_rouge_and_bleu(self, gold_results):
        pred = {
            "doc-1": result_for(
                "2025-01-10",
                (
                    raw_subject("Budget approval", "Annual budget approved today.", [("Ana Prata", "favor"), ("Rui Costa", "contra")]),
                    raw_subject("Road repairs", "Potholes on the main road."),
                ),
            ),
            "doc-2": gold_results["doc-2"],
        }
        report = evaluate_results(gold_results, pred)
        assert 0.0 < report.subjects["rouge_l"]["f1"] < 1.0
        assert 0.0 < report.subjects["bleu"] < 1.0
        assert report.voting["macro_f1"] == 1.0

    def test_empty_inputs(self):
        report = evaluate_results({}, {})
        assert report.metadata["macro_f1"] == 0.0
        assert report.subjects["bleu"] == 0.0
        assert report.subjects["rouge_l"] == {"precision": 0.0, "recall": 0.0, "f1": 0.0}
        assert report.corpus["documents"] == 0

    def test_report_serializes_to_json(self, gold_results):
        report = evaluate_results(gold_results, gold_results)
        round_tripped = json.loads(json.dumps(report.to_dict()))
        assert round_tripped["provider_id"] == "ngram"
        assert round_tripped["metadata"]["macro_f1"] == 1.0
        assert isinstance(round_tripped["notes"], list) and round_tripped["notes"]

    def test_matched_pairs_listed_with_similarity(self, gold_results):
        report = evaluate_results(gold_results, gold_results)
        assert all(m["similarity"] == 1.0 for m in report.subjects["matched"])
        assert {m["doc"] for m in report.subjects["matched"]} == {"doc-1", "doc-2"}


class TestEvaluateDirectories:
    def test_gold_equals_pred_scores_one(self, tmp_path, gold_results):
        write_results(tmp_path / "gold", gold_results)
        write_results(tmp_path / "pred", gold_results)
        report = evaluate_directories(tmp_path / "gold", tmp_path / "pred")
        assert report.metadata["macro_f1"] == 1.0
        assert report.voting["macro_f1"] == 1.0

    def test_missing_pred_dir_raises(self, tmp_path, gold_results):
        write_results(tmp_path / "gold", gold_results)
        with pytest.raises(LoadError):
            evaluate_directories(tmp_path / "gold", tmp_path / "pred")


class TestReportRendering:
    def test_render_table_lists_every_metric(self, gold_results):
        report = evaluate_results(gold_results, gold_results)
        table = render_table(report)
        for needle in (
            "metadata/macro_f1",
            "subjects/rouge_l/f1",
            "subjects/bleu",
            "voting/macro_f1",
            "documents=2",
        ):
            assert needle in table
        for field_name in METADATA_FIELDS:
            assert f"metadata/{field_name}/f1" in table

    def test_write_report_produces_all_artifacts(self, tmp_path, gold_results):
        report = evaluate_results(gold_results, gold_results)
        paths = write_report(report, tmp_path / "out")
        out = tmp_path / "out"
        assert (out / "eval-report.json").is_file()
        assert (out / "metrics.csv").is_file()
        assert (out / "overview.png").is_file()
        assert (out / "metadata_fields.png").is_file()
        assert paths["report"] == str(out / "eval-report.json")
        assert paths["csv"] == str(out / "metrics.csv")
        assert sorted(paths["figures"]) == sorted(
            [str(out / "overview.png"), str(out / "metadata_fields.png")]
        )
        parsed = json.loads((out / "eval-report.json").read_text(encoding="utf-8"))
        assert parsed["metadata"]["macro_f1"] == 1.0

    def test_csv_has_metric_value_rows(self, tmp_path, gold_results):
        report = evaluate_results(gold_results, gold_results)
        write_report(report, tmp_path / "out")
        lines = (tmp_path / "out" / "metrics.csv").read_text(encoding="utf-8").strip().splitlines()
        assert lines[0] == "metric,value"
        names = [line.split(",")[0] for line in lines[1:]]
        assert "subjects/bleu" in names
        values = [float(line.split(",")[1]) for line in lines[1:]]
        assert all(0.0 <= v <= 1.0 for v in values)
