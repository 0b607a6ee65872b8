"""Extraction quality metrics over gold vs predicted result directories.

Four metric families: per-field metadata F1 (multiset matching of
normalized values per document), greedy one-to-one subject matching by
embedding cosine, ROUGE-L and corpus BLEU-4 over matched summaries, and
per-class voting F1 aligned by participant name within matched subjects.

The default embedding provider is offline and deterministic (character
3-gram term frequencies); a remote provider implementing the same
interface can replace it.
"""

from __future__ import annotations

import json
import math
import os
import warnings
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Protocol, Sequence

from .errors import ConfigError, LoadError, TransportError
from .extraction import (
    ExtractionResult,
    RawSubject,
    normalize_position,
    parse_minute_date,
)
from .text import normalize_name, strip_marks, tokenize

METADATA_FIELDS = ("meeting_date", "location", "meeting_type", "participants")

VOTE_CLASSES = ("favor", "against", "abstention")

BLEU_MAX_ORDER = 4


@dataclass(frozen=True)
class F1Score:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int) -> "F1Score":
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        return cls(precision=precision, recall=recall, f1=f1)

    def to_dict(self) -> dict[str, float]:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


# --------------------------------------------------------------------------
# Metadata field F1


def _canonical_date(raw: str) -> str:
    try:
        return parse_minute_date(raw).isoformat()
    except Exception:
        return normalize_name(raw)


def _field_values(metadata: dict[str, Any], field_name: str) -> list[str]:
    if field_name == "participants":
        return [
            normalize_name(p.get("name", ""))
            for p in metadata.get("participants", ())
            if normalize_name(p.get("name", ""))
        ]
    raw = metadata.get(field_name) or ""
    if not str(raw).strip():
        return []
    if field_name == "meeting_date":
        return [_canonical_date(str(raw))]
    return [normalize_name(str(raw))]


def metadata_macro_f1(
    gold: dict[str, dict[str, Any]], pred: dict[str, dict[str, Any]]
) -> dict[str, Any]:
    """Precision/recall/F1 per metadata field plus their unweighted mean.

    Inputs map document id to the ``metadata_raw`` dict of an extraction
    result. Values are compared as multisets of normalized strings per
    document; a document present on one side only contributes pure false
    positives or negatives.
    """
    per_field: dict[str, F1Score] = {}
    all_docs = sorted(set(gold) | set(pred))
    for field_name in METADATA_FIELDS:
        tp = fp = fn = 0
        for doc_id in all_docs:
            gold_counts = Counter(_field_values(gold.get(doc_id, {}), field_name))
            pred_counts = Counter(_field_values(pred.get(doc_id, {}), field_name))
            overlap = sum((gold_counts & pred_counts).values())
            tp += overlap
            fp += sum(pred_counts.values()) - overlap
            fn += sum(gold_counts.values()) - overlap
        per_field[field_name] = F1Score.from_counts(tp, fp, fn)
    macro = sum(score.f1 for score in per_field.values()) / len(METADATA_FIELDS)
    return {
        "per_field": {name: score.to_dict() for name, score in per_field.items()},
        "macro_f1": macro,
        "pred_only_docs": sorted(set(pred) - set(gold)),
        "gold_only_docs": sorted(set(gold) - set(pred)),
    }


# --------------------------------------------------------------------------
# Embedding providers and subject matching


class EmbeddingProvider(Protocol):
    provider_id: str

    def embed(self, text: str) -> Any: ...

    def similarity(self, a: Any, b: Any) -> float: ...


class NgramEmbeddingProvider:
    """Character-3-gram term-frequency vectors with cosine similarity.

    Offline and deterministic. Sparse vectors over the unbounded 3-gram
    space; integer arithmetic makes self-similarity exactly 1.0 and
    similarity of 3-gram-disjoint texts exactly 0.0.
    """

    provider_id = "ngram"
    dimension = None  # sparse: one axis per distinct 3-gram

    def embed(self, text: str) -> Counter:
        folded = strip_marks(text.casefold())
        if len(folded) < 3:
            return Counter({folded: 1}) if folded else Counter()
        return Counter(folded[i : i + 3] for i in range(len(folded) - 2))

    def similarity(self, a: Counter, b: Counter) -> float:
        if not a or not b:
            return 0.0
        dot = sum(count * b[gram] for gram, count in a.items())
        if dot == 0:
            return 0.0
        norm_a = sum(count * count for count in a.values())
        norm_b = sum(count * count for count in b.values())
        if dot * dot == norm_a * norm_b:
            return 1.0  # parallel vectors, avoids sqrt rounding
        return dot / math.sqrt(norm_a * norm_b)


class RemoteEmbeddingProvider:
    """Dense embeddings from an HTTP service, cosine similarity.

    POSTs ``{model, input}`` and expects ``{"embedding": [...]}`` back;
    the API key comes from the named environment variable.
    """

    provider_id = "remote"

    def __init__(
        self,
        endpoint_url: str,
        api_key_env_var_name: str,
        model_id: str,
        timeout: float = 60.0,
    ):
        self.endpoint_url = endpoint_url
        self.api_key_env_var_name = api_key_env_var_name
        self.model_id = model_id
        self.timeout = timeout

    def embed(self, text: str) -> list[float]:
        import httpx

        api_key = os.environ.get(self.api_key_env_var_name)
        if not api_key:
            raise ConfigError(
                f"environment variable {self.api_key_env_var_name} is not set"
            )
        try:
            response = httpx.post(
                self.endpoint_url,
                json={"model": self.model_id, "input": text},
                headers={"Authorization": f"Bearer {api_key}"},
                timeout=self.timeout,
            )
            response.raise_for_status()
            return [float(x) for x in response.json()["embedding"]]
        except httpx.HTTPError as exc:
            raise TransportError(f"embedding request failed: {exc}") from exc

    def similarity(self, a: list[float], b: list[float]) -> float:
        dot = sum(x * y for x, y in zip(a, b))
        norm_a = math.sqrt(sum(x * x for x in a))
        norm_b = math.sqrt(sum(y * y for y in b))
        if norm_a == 0 or norm_b == 0:
            return 0.0
        return dot / (norm_a * norm_b)


def subject_text(subject: RawSubject | dict[str, Any]) -> str:
    if isinstance(subject, RawSubject):
        return subject.title + "\n" + subject.summary
    return str(subject.get("title", "")) + "\n" + str(subject.get("summary", ""))


@dataclass(frozen=True)
class SubjectMatch:
    gold_index: int
    pred_index: int
    similarity: float


@dataclass(frozen=True)
class MatchOutcome:
    pairs: tuple[SubjectMatch, ...]
    unmatched_gold: tuple[int, ...]
    unmatched_pred: tuple[int, ...]


def match_subjects(
    gold: Sequence[RawSubject],
    pred: Sequence[RawSubject],
    provider: EmbeddingProvider,
) -> MatchOutcome:
    """Greedy one-to-one matching by descending similarity.

    Ties break on gold order, then pred order. Greedy can diverge from
    the optimal assignment; that is the documented behavior.
    """
    gold_vectors = [provider.embed(subject_text(s)) for s in gold]
    pred_vectors = [provider.embed(subject_text(s)) for s in pred]
    candidates = [
        (provider.similarity(gv, pv), gi, pi)
        for gi, gv in enumerate(gold_vectors)
        for pi, pv in enumerate(pred_vectors)
    ]
    candidates.sort(key=lambda c: (-c[0], c[1], c[2]))
    matched_gold: set[int] = set()
    matched_pred: set[int] = set()
    pairs: list[SubjectMatch] = []
    for similarity, gi, pi in candidates:
        if gi in matched_gold or pi in matched_pred:
            continue
        pairs.append(SubjectMatch(gold_index=gi, pred_index=pi, similarity=similarity))
        matched_gold.add(gi)
        matched_pred.add(pi)
    return MatchOutcome(
        pairs=tuple(pairs),
        unmatched_gold=tuple(i for i in range(len(gold)) if i not in matched_gold),
        unmatched_pred=tuple(i for i in range(len(pred)) if i not in matched_pred),
    )


# --------------------------------------------------------------------------
# ROUGE-L and BLEU


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for x in a:
        current = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[len(b)]


def rouge_l(reference: str, hypothesis: str) -> F1Score:
    """LCS-based ROUGE-L with the balanced (beta = 1) F-measure."""
    ref_tokens = tokenize(reference)
    hyp_tokens = tokenize(hypothesis)
    if not ref_tokens or not hyp_tokens:
        return F1Score(0.0, 0.0, 0.0)
    lcs = _lcs_length(ref_tokens, hyp_tokens)
    precision = lcs / len(hyp_tokens)
    recall = lcs / len(ref_tokens)
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return F1Score(precision=precision, recall=recall, f1=f1)


def _ngram_counts(tokens: list[str], order: int) -> Counter:
    return Counter(tuple(tokens[i : i + order]) for i in range(len(tokens) - order + 1))


def bleu(references: Sequence[str], hypotheses: Sequence[str]) -> float:
    """Corpus-level BLEU-4, uniform weights, clipped n-gram precision.

    Orders with zero matches get add-one smoothing on numerator and
    denominator (subject summaries are short). Brevity penalty
    exp(1 - r/c) when the hypothesis corpus is shorter than the
    reference corpus; an empty hypothesis corpus scores 0.
    """
    if len(references) != len(hypotheses):
        raise ValueError("references and hypotheses must be aligned")
    if not references:
        warnings.warn("empty corpus scores 0", RuntimeWarning, stacklevel=2)
        return 0.0
    ref_token_lists = [tokenize(r) for r in references]
    hyp_token_lists = [tokenize(h) for h in hypotheses]
    c = sum(len(tokens) for tokens in hyp_token_lists)
    r = sum(len(tokens) for tokens in ref_token_lists)
    if c == 0:
        return 0.0
    log_precision_sum = 0.0
    for order in range(1, BLEU_MAX_ORDER + 1):
        matches = 0
        total = 0
        for ref_tokens, hyp_tokens in zip(ref_token_lists, hyp_token_lists):
            hyp_counts = _ngram_counts(hyp_tokens, order)
            if not hyp_counts:
                continue
            ref_counts = _ngram_counts(ref_tokens, order)
            matches += sum((hyp_counts & ref_counts).values())
            total += sum(hyp_counts.values())
        if matches == 0:
            precision = (matches + 1) / (total + 1)
        else:
            precision = matches / total
        log_precision_sum += math.log(precision) / BLEU_MAX_ORDER
    brevity = 1.0 if c > r else math.exp(1 - r / c)
    return brevity * math.exp(log_precision_sum)


# --------------------------------------------------------------------------
# Voting F1


def _vote_map(subject: RawSubject) -> dict[str, str]:
    votes: dict[str, str] = {}
    for vote in subject.votes or ():
        name = normalize_name(vote.participant_name)
        position = normalize_position(vote.position)
        if name and position and name not in votes:
            votes[name] = position
    return votes


def voting_macro_f1(
    doc_pairs: Iterable[tuple[Sequence[RawSubject], Sequence[RawSubject], MatchOutcome]],
) -> dict[str, Any]:
    """Per-class and macro F1 over votes aligned by participant name.

    Votes align within matched subject pairs; an aligned pair with
    differing classes counts as a false positive for the predicted class
    and a false negative for the gold class. Votes on unmatched subjects
    are pure false negatives (gold side) or false positives (pred side).
    """
    tp: Counter = Counter()
    fp: Counter = Counter()
    fn: Counter = Counter()
    for gold_subjects, pred_subjects, outcome in doc_pairs:
        for match in outcome.pairs:
            gold_votes = _vote_map(gold_subjects[match.gold_index])
            pred_votes = _vote_map(pred_subjects[match.pred_index])
            for name in set(gold_votes) | set(pred_votes):
                gold_class = gold_votes.get(name)
                pred_class = pred_votes.get(name)
                if gold_class and pred_class:
                    if gold_class == pred_class:
                        tp[gold_class] += 1
                    else:
                        fp[pred_class] += 1
                        fn[gold_class] += 1
                elif gold_class:
                    fn[gold_class] += 1
                elif pred_class:
                    fp[pred_class] += 1
        for gi in outcome.unmatched_gold:
            for position in _vote_map(gold_subjects[gi]).values():
                fn[position] += 1
        for pi in outcome.unmatched_pred:
            for position in _vote_map(pred_subjects[pi]).values():
                fp[position] += 1
    per_class = {
        cls: F1Score.from_counts(tp[cls], fp[cls], fn[cls]) for cls in VOTE_CLASSES
    }
    macro = sum(score.f1 for score in per_class.values()) / len(VOTE_CLASSES)
    return {
        "per_class": {cls: score.to_dict() for cls, score in per_class.items()},
        "macro_f1": macro,
    }


# --------------------------------------------------------------------------
# Directory-level harness


@dataclass(frozen=True)
class EvalReport:
    metadata: dict[str, Any]
    subjects: dict[str, Any]
    voting: dict[str, Any]
    corpus: dict[str, Any]
    provider_id: str
    notes: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict[str, Any]:
        return {
            "metadata": self.metadata,
            "subjects": self.subjects,
            "voting": self.voting,
            "corpus": self.corpus,
            "provider_id": self.provider_id,
            "notes": list(self.notes),
        }


def load_results_dir(directory: str | Path) -> dict[str, ExtractionResult]:
    """Read per-document extraction JSON files; doc id = file stem."""
    directory = Path(directory)
    if not directory.is_dir():
        raise LoadError(f"not a directory: {directory}")
    results: dict[str, ExtractionResult] = {}
    for path in sorted(directory.glob("*.json")):
        try:
            results[path.stem] = ExtractionResult.from_dict(
                json.loads(path.read_text(encoding="utf-8"))
            )
        except (ValueError, KeyError, TypeError) as exc:
            raise LoadError(f"cannot parse {path}: {exc}") from exc
    return results


def evaluate_results(
    gold: dict[str, ExtractionResult],
    pred: dict[str, ExtractionResult],
    provider: EmbeddingProvider | None = None,
) -> EvalReport:
    provider = provider or NgramEmbeddingProvider()
    metadata_report = metadata_macro_f1(
        {doc: r.metadata_raw.to_dict() for doc, r in gold.items()},
        {doc: r.metadata_raw.to_dict() for doc, r in pred.items()},
    )

    doc_pairs: list[tuple[Sequence[RawSubject], Sequence[RawSubject], MatchOutcome]] = []
    matched: list[dict[str, Any]] = []
    rouge_scores: list[F1Score] = []
    matched_refs: list[str] = []
    matched_hyps: list[str] = []
    for doc_id in sorted(set(gold) | set(pred)):
        gold_subjects = gold[doc_id].subjects_raw if doc_id in gold else ()
        pred_subjects = pred[doc_id].subjects_raw if doc_id in pred else ()
        outcome = match_subjects(gold_subjects, pred_subjects, provider)
        doc_pairs.append((gold_subjects, pred_subjects, outcome))
        for pair in outcome.pairs:
            reference = gold_subjects[pair.gold_index].summary
            hypothesis = pred_subjects[pair.pred_index].summary
            rouge_scores.append(rouge_l(reference, hypothesis))
            matched_refs.append(reference)
            matched_hyps.append(hypothesis)
            matched.append(
                {
                    "doc": doc_id,
                    "gold_index": pair.gold_index,
                    "pred_index": pair.pred_index,
                    "similarity": pair.similarity,
                }
            )

    if rouge_scores:
        rouge_aggregate = {
            "precision": sum(s.precision for s in rouge_scores) / len(rouge_scores),
            "recall": sum(s.recall for s in rouge_scores) / len(rouge_scores),
            "f1": sum(s.f1 for s in rouge_scores) / len(rouge_scores),
        }
    else:
        rouge_aggregate = {"precision": 0.0, "recall": 0.0, "f1": 0.0}
    if matched_refs:
        bleu_score = bleu(matched_refs, matched_hyps)
    else:
        bleu_score = 0.0

    voting_report = voting_macro_f1(doc_pairs)
    corpus = {
        "documents": len(set(gold) | set(pred)),
        "gold_subjects": sum(len(r.subjects_raw) for r in gold.values()),
        "pred_subjects": sum(len(r.subjects_raw) for r in pred.values()),
        "matched_subjects": len(matched),
    }
    notes = (
        "subject matching: greedy one-to-one without replacement, ties by (gold, pred) order",
        "BLEU: corpus BLEU-4, add-one smoothing on zero-match orders",
        "ROUGE-L: beta=1 F-measure, mean over matched pairs",
    )
    return EvalReport(
        metadata=metadata_report,
        subjects={"matched": matched, "rouge_l": rouge_aggregate, "bleu": bleu_score},
        voting=voting_report,
        corpus=corpus,
        provider_id=provider.provider_id,
        notes=notes,
    )


def evaluate_directories(
    gold_dir: str | Path,
    pred_dir: str | Path,
    provider: EmbeddingProvider | None = None,
) -> EvalReport:
    return evaluate_results(load_results_dir(gold_dir), load_results_dir(pred_dir), provider)
