"""End-to-end orchestration: load, annotate, select, cluster, label, align, chart, eval.

Every stage consumes and produces plain JSON-able documents, so each one can
also run standalone against the previous stage's serialized artifact. All
artifacts are written with sorted keys and a trailing newline; rerunning the
same configuration over the same inputs reproduces every file byte for byte.

Artifacts written into the output directory:

    annotations.json   term annotations per sentence (raw + canonical form)
    salient.json       selected sentence ids per comment
    clusters.json      per topic and side: clusters, unclustered ids,
                       and (for the xmeans method) the reduced points
    labels.json        one label per cluster
    alignment.json     aligned pairs and dropped clusters per topic
    chart_<topic>.json / .html   the Chart Summary per topic
    evaluation.json    ROUGE table per feature and silhouette per method
    manifest.json      config echo plus sha256 of every artifact
"""

from __future__ import annotations

import hashlib
import json
import re
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from .alignment import LabeledCluster, align_clusters
from .annotate import (
    Gazetteer,
    SynonymTable,
    annotate_sentence,
    canonical_label,
    load_gazetteer,
    load_synonyms,
    term_text,
)
from .assets import default_stopwords
from .chart import AlignedPair, ChartSummary, build_chart, render_chart
from .corpus import DebateTopic, Side, load_corpus, load_gold
from .errors import ComputationError, ConfigError, DebatesumError
from .evalkit import RougeVariant, rouge, silhouette
from .labeling import UNLABELED, mi_label, shared_term_label, tfidf_labels
from .saliency import (
    Feature,
    LLR_THRESHOLD_P001,
    Lexicons,
    extract_topic_signatures,
    load_embeddings,
    load_lexicon_terms,
    score_comment,
    select_salient,
)
from .term_clustering import TermCluster, cluster_by_shared_term, merge_synonymous_clusters
from .vector_clustering import build_similarity_matrix, build_term_vectors, pca_fit_transform, xmeans

CLUSTER_METHODS = ("term", "xmeans")
LABEL_METHODS = ("shared", "tfidf", "mi")


@dataclass
class PipelineConfig:
    corpus_path: Path
    gazetteer_path: Path
    synonyms_path: Path
    output_dir: Path
    gold_path: Path | None = None
    embeddings_path: Path | None = None
    feature: Feature = Feature.SP
    ratio: float = 0.2
    signature_threshold: float = LLR_THRESHOLD_P001
    clustering_method: str = "xmeans"
    labeling_method: str = "mi"
    alignment_threshold: float = 0.6
    variance_target: float = 0.95
    k_min: int = 2
    k_max: int = 25
    seed: int = 0
    jobs: int = 1

    def echo(self) -> dict:
        out = asdict(self)
        for key, value in out.items():
            if isinstance(value, Path):
                out[key] = str(value)
            elif isinstance(value, Feature):
                out[key] = value.value
        return out


_CONFIG_KEYS = {
    "corpus_path", "gold_path", "gazetteer_path", "synonyms_path", "embeddings_path",
    "feature", "ratio", "signature_threshold", "clustering_method", "labeling_method",
    "alignment_threshold", "variance_target", "k_min", "k_max", "seed", "jobs",
    "output_dir",
}


def load_config(path: str | Path, overrides: Mapping[str, object] | None = None) -> PipelineConfig:
    """Read a JSON config; relative paths resolve against the config file.

    ``overrides`` (command-line flags) win over file values.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    merged = dict(raw)
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value

    base = path.parent

    def _path(key: str, required: bool) -> Path | None:
        value = merged.get(key)
        if value is None:
            if required:
                raise ConfigError(f"config key {key!r} is required")
            return None
        p = Path(str(value))
        if not p.is_absolute():
            p = base / p
        return p

    config = PipelineConfig(
        corpus_path=_path("corpus_path", True),
        gazetteer_path=_path("gazetteer_path", True),
        synonyms_path=_path("synonyms_path", True),
        output_dir=_path("output_dir", True),
        gold_path=_path("gold_path", False),
        embeddings_path=_path("embeddings_path", False),
        feature=Feature(str(merged.get("feature", "SP")).upper()),
        ratio=float(merged.get("ratio", 0.2)),
        signature_threshold=float(merged.get("signature_threshold", LLR_THRESHOLD_P001)),
        clustering_method=str(merged.get("clustering_method", "xmeans")),
        labeling_method=str(merged.get("labeling_method", "mi")),
        alignment_threshold=float(merged.get("alignment_threshold", 0.6)),
        variance_target=float(merged.get("variance_target", 0.95)),
        k_min=int(merged.get("k_min", 2)),
        k_max=int(merged.get("k_max", 25)),
        seed=int(merged.get("seed", 0)),
        jobs=int(merged.get("jobs", 1)),
    )
    validate_config(config)
    return config


def validate_config(config: PipelineConfig) -> None:
    for key in ("corpus_path", "gazetteer_path", "synonyms_path"):
        p = getattr(config, key)
        if not Path(p).is_file():
            raise ConfigError(f"{key} does not exist: {p}")
    for key in ("gold_path", "embeddings_path"):
        p = getattr(config, key)
        if p is not None and not Path(p).is_file():
            raise ConfigError(f"{key} does not exist: {p}")
    if config.clustering_method not in CLUSTER_METHODS:
        raise ConfigError(f"clustering_method must be one of {CLUSTER_METHODS}")
    if config.labeling_method not in LABEL_METHODS:
        raise ConfigError(f"labeling_method must be one of {LABEL_METHODS}")
    if not 0.0 < config.ratio <= 1.0:
        raise ConfigError("ratio must be in (0, 1]")
    if not 0.0 < config.alignment_threshold <= 1.0:
        raise ConfigError("alignment_threshold must be in (0, 1]")
    if not 0.0 < config.variance_target <= 1.0:
        raise ConfigError("variance_target must be in (0, 1]")
    if not 1 <= config.k_min <= config.k_max:
        raise ConfigError("need 1 <= k_min <= k_max")
    if config.jobs < 1:
        raise ConfigError("jobs must be >= 1")


@dataclass
class PipelineInputs:
    corpus: list[DebateTopic]
    gazetteer: Gazetteer
    synonyms: SynonymTable
    lexicons: Lexicons
    gold: list | None = None


def load_inputs(config: PipelineConfig) -> PipelineInputs:
    corpus = load_corpus(config.corpus_path)
    gazetteer = load_gazetteer(config.gazetteer_path)
    synonyms = load_synonyms(config.synonyms_path)
    embeddings = load_embeddings(config.embeddings_path) if config.embeddings_path else None
    lexicons = Lexicons(
        conjunctive_adverbs=load_lexicon_terms(
            Path(__file__).parent / "data" / "conjunctive_adverbs.txt"
        ),
        climate_terms=load_lexicon_terms(config.gazetteer_path),
        embeddings=embeddings,
    )
    gold = load_gold(config.gold_path, corpus) if config.gold_path else None
    return PipelineInputs(
        corpus=corpus, gazetteer=gazetteer, synonyms=synonyms, lexicons=lexicons, gold=gold
    )


# ---------------------------------------------------------------------------
# stage computations (JSON-able in, JSON-able out)
# ---------------------------------------------------------------------------


def compute_annotations(
    corpus: list[DebateTopic],
    gazetteer: Gazetteer,
    synonyms: SynonymTable,
    seed: int = 0,
) -> dict:
    topics = []
    for topic in corpus:
        sentences = []
        for comment in topic.comments:
            for sentence in comment.sentences:
                annotations = annotate_sentence(sentence, gazetteer)
                sentences.append(
                    {
                        "sentence_id": sentence.id,
                        "annotations": [
                            {
                                "term": term_text(a.term),
                                "canonical": term_text(canonical_label(a.term, synonyms)),
                                "start": a.start,
                                "end": a.end,
                            }
                            for a in annotations
                        ],
                    }
                )
        topics.append({"topic_id": topic.id, "sentences": sentences})
    return {"seed": seed, "topics": topics}


def topic_signatures_for(
    corpus: list[DebateTopic],
    topic: DebateTopic,
    threshold: float,
) -> list:
    """Leave-one-out topic signatures: this topic's tokens vs all other topics'.

    A single-topic corpus has no background, which disables the feature
    (empty signature list, COS_TPS scores 0).
    """
    foreground = [t for c in topic.comments for s in c.sentences for t in s.tokens]
    background = [
        t
        for other in corpus
        if other.id != topic.id
        for c in other.comments
        for s in c.sentences
        for t in s.tokens
    ]
    if not foreground or not background:
        return []
    return extract_topic_signatures(
        foreground, background, threshold=threshold, stopwords=default_stopwords()
    )


def compute_salient(
    corpus: list[DebateTopic],
    lexicons: Lexicons,
    feature: Feature = Feature.SP,
    ratio: float = 0.2,
    signature_threshold: float = LLR_THRESHOLD_P001,
    seed: int = 0,
) -> dict:
    topics = []
    for topic in corpus:
        signatures = topic_signatures_for(corpus, topic, signature_threshold)
        comments = []
        for comment in topic.comments:
            scores = score_comment(comment, topic, lexicons, signatures)
            selected = select_salient(comment, scores, feature=feature, ratio=ratio)
            comments.append(
                {"comment_id": comment.id, "side": comment.side.value, "sentence_ids": selected}
            )
        topics.append({"topic_id": topic.id, "comments": comments})
    return {"feature": feature.value, "ratio": ratio, "seed": seed, "topics": topics}


def _canonical_terms_by_sentence(annotations_doc: dict) -> dict[str, list[tuple[str, ...]]]:
    """sentence id -> canonical term occurrences (with repeats), corpus-wide."""
    out: dict[str, list[tuple[str, ...]]] = {}
    for topic in annotations_doc["topics"]:
        for sentence in topic["sentences"]:
            out[sentence["sentence_id"]] = [
                tuple(a["canonical"].split()) for a in sentence["annotations"]
            ]
    return out


def _salient_by_topic_side(salient_doc: dict) -> dict[str, dict[str, list[str]]]:
    out: dict[str, dict[str, list[str]]] = {}
    for topic in salient_doc["topics"]:
        sides: dict[str, list[str]] = {s.value: [] for s in Side}
        for comment in topic["comments"]:
            sides[comment["side"]].extend(comment["sentence_ids"])
        out[topic["topic_id"]] = sides
    return out


def _cluster_side_term(
    topic_id: str,
    side: Side,
    sentence_ids: list[str],
    terms: dict[str, list[tuple[str, ...]]],
    synonyms: SynonymTable,
) -> dict:
    terms_by_sentence = {sid: terms.get(sid, []) for sid in sentence_ids}
    clusters, unclustered = cluster_by_shared_term(terms_by_sentence, side)
    merged = merge_synonymous_clusters(clusters, synonyms)
    return {
        "clusters": [
            {
                "cluster_id": f"{topic_id}/{c.cluster_id}",
                "label": term_text(c.label),
                "members": list(c.members),
            }
            for c in merged
        ],
        "unclustered": unclustered,
        "k": len(merged),
        "bic": None,
        "points": None,
    }


def _cluster_side_xmeans(
    topic_id: str,
    side: Side,
    sentence_ids: list[str],
    terms: dict[str, list[tuple[str, ...]]],
    vocabulary: list[tuple[str, ...]],
    config: PipelineConfig,
) -> dict:
    terms_by_sentence = {sid: terms.get(sid, []) for sid in sentence_ids}
    vectors, excluded = build_term_vectors(terms_by_sentence, vocabulary)
    prefix = f"{topic_id}/{side.value}:x"
    if len(vectors) == 0:
        return {"clusters": [], "unclustered": excluded, "k": 0, "bic": None, "points": None}
    if len(vectors) == 1:
        return {
            "clusters": [
                {"cluster_id": prefix + "0", "label": None, "members": [vectors[0].sentence_id]}
            ],
            "unclustered": excluded,
            "k": 1,
            "bic": None,
            "points": {vectors[0].sentence_id: [0.0, 0.0]},
        }
    matrix = build_similarity_matrix(vectors)
    _, reduced = pca_fit_transform(matrix.values, variance_target=config.variance_target)
    if reduced.shape[1] == 0:  # all similarity profiles identical: a single cluster
        return {
            "clusters": [
                {
                    "cluster_id": prefix + "0",
                    "label": None,
                    "members": [v.sentence_id for v in vectors],
                }
            ],
            "unclustered": excluded,
            "k": 1,
            "bic": None,
            "points": {v.sentence_id: [0.0, 0.0] for v in vectors},
        }
    n = reduced.shape[0]
    result = xmeans(
        reduced,
        k_min=min(config.k_min, n),
        k_max=min(config.k_max, n),
        seed=config.seed,
    )
    clusters = []
    for j in range(result.k):
        members = [matrix.labels[i] for i in range(n) if result.assignments[i] == j]
        clusters.append({"cluster_id": f"{prefix}{j}", "label": None, "members": members})
    bic = result.bic
    return {
        "clusters": clusters,
        "unclustered": excluded,
        "k": result.k,
        "bic": None if bic != bic else bic,  # NaN is not valid JSON
        "points": {
            matrix.labels[i]: [float(x) for x in reduced[i]] for i in range(n)
        },
    }


def compute_clusters(
    corpus: list[DebateTopic],
    annotations_doc: dict,
    salient_doc: dict,
    synonyms: SynonymTable,
    gazetteer: Gazetteer,
    config: PipelineConfig,
) -> dict:
    terms = _canonical_terms_by_sentence(annotations_doc)
    salient = _salient_by_topic_side(salient_doc)
    vocabulary = sorted(
        {canonical_label(t, synonyms) for t in gazetteer.terms}, key=term_text
    )

    def one_topic(topic: DebateTopic) -> dict:
        sides = {}
        for side in Side:
            ids = salient.get(topic.id, {}).get(side.value, [])
            if config.clustering_method == "term":
                sides[side.value] = _cluster_side_term(topic.id, side, ids, terms, synonyms)
            else:
                sides[side.value] = _cluster_side_xmeans(
                    topic.id, side, ids, terms, vocabulary, config
                )
        counts = {side.value: len(sides[side.value]["clusters"]) for side in Side}
        counts["pooled"] = sum(counts.values())
        return {"topic_id": topic.id, "sides": sides, "cluster_counts": counts}

    if config.jobs > 1 and len(corpus) > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            topics = list(pool.map(one_topic, corpus))
    else:
        topics = [one_topic(t) for t in corpus]
    return {
        "method": config.clustering_method,
        "seed": config.seed,
        "k_min": config.k_min,
        "k_max": config.k_max,
        "variance_target": config.variance_target,
        "topics": topics,
    }


def dump_debug_matrices(
    corpus: list[DebateTopic],
    annotations_doc: dict,
    salient_doc: dict,
    synonyms: SynonymTable,
    gazetteer: Gazetteer,
    config: PipelineConfig,
    out_dir: str | Path,
) -> list[Path]:
    """Write the cosine-similarity matrix and reduced points per (topic, side).

    Debugging aid for the xmeans branch; files follow the
    {"n", "labels", "values"} dump schema.
    """
    from .vector_clustering import points_to_jsonable, similarity_to_jsonable

    terms = _canonical_terms_by_sentence(annotations_doc)
    salient = _salient_by_topic_side(salient_doc)
    vocabulary = sorted({canonical_label(t, synonyms) for t in gazetteer.terms}, key=term_text)
    out = Path(out_dir)
    written: list[Path] = []
    for topic in corpus:
        for side in Side:
            ids = salient.get(topic.id, {}).get(side.value, [])
            vectors, _ = build_term_vectors(
                {sid: terms.get(sid, []) for sid in ids}, vocabulary
            )
            if len(vectors) < 2:
                continue
            matrix = build_similarity_matrix(vectors)
            _, reduced = pca_fit_transform(matrix.values, variance_target=config.variance_target)
            slug = f"{slugify(topic.id)}_{side.value}"
            matrix_path = out / f"similarity_{slug}.json"
            write_json(matrix_path, similarity_to_jsonable(matrix))
            points_path = out / f"reduced_{slug}.json"
            write_json(points_path, points_to_jsonable(matrix.labels, reduced))
            written.extend((matrix_path, points_path))
    return written


def compute_labels(clusters_doc: dict, annotations_doc: dict, method: str, seed: int = 0) -> dict:
    if method not in LABEL_METHODS:
        raise ConfigError(f"labeling_method must be one of {LABEL_METHODS}")
    terms = _canonical_terms_by_sentence(annotations_doc)
    entries = []
    for topic in clusters_doc["topics"]:
        for side in Side:
            side_doc = topic["sides"][side.value]
            clusters = side_doc["clusters"]
            if not clusters:
                continue
            if method == "shared":
                for c in clusters:
                    if c["label"] is None:
                        raise ComputationError(
                            f"cluster {c['cluster_id']} has no shared term; "
                            "use tfidf or mi labeling for xmeans clusters"
                        )
                    term_cluster = TermCluster(
                        label=tuple(c["label"].split()), side=side, members=tuple(c["members"])
                    )
                    candidate = shared_term_label(term_cluster)
                    entries.append(_label_entry(c["cluster_id"], candidate))
            elif method == "tfidf":
                counts = [
                    Counter(tuple(t) for sid in c["members"] for t in terms.get(sid, []))
                    for c in clusters
                ]
                for c, candidate in zip(clusters, tfidf_labels(counts)):
                    entries.append(_label_entry(c["cluster_id"], candidate))
            else:
                member_sets = [c["members"] for c in clusters]
                for c in clusters:
                    candidate = mi_label(c["members"], member_sets, terms)
                    entries.append(_label_entry(c["cluster_id"], candidate))
    entries.sort(key=lambda e: e["cluster_id"])
    return {"seed": seed, "clusters": entries}


def _label_entry(cluster_id: str, candidate) -> dict:
    runner = candidate.runner_up
    return {
        "cluster_id": cluster_id,
        "method": candidate.method.value,
        "label": term_text(candidate.term),
        "score": candidate.score,
        "runner_up": None if runner is None else [term_text(runner[0]), runner[1]],
    }


def _labeled_clusters(
    clusters_doc: dict, labels_doc: dict
) -> dict[str, tuple[list[LabeledCluster], list[LabeledCluster]]]:
    """topic id -> (alignable clusters, sentinel-labeled clusters).

    Clusters that ended up with the "(unlabeled)" sentinel cannot be aligned
    (there is no label content to compare); they are returned separately so
    the alignment stage can report them as dropped.
    """
    label_by_id = {e["cluster_id"]: e["label"] for e in labels_doc["clusters"]}
    sentinel = term_text(UNLABELED)
    out: dict[str, tuple[list[LabeledCluster], list[LabeledCluster]]] = {}
    for topic in clusters_doc["topics"]:
        rows: list[LabeledCluster] = []
        unlabeled: list[LabeledCluster] = []
        for side in Side:
            for c in topic["sides"][side.value]["clusters"]:
                label = c["label"] if c["label"] is not None else label_by_id.get(c["cluster_id"])
                if label is None:
                    raise ComputationError(f"cluster {c['cluster_id']} has no label")
                cluster = LabeledCluster(
                    cluster_id=c["cluster_id"],
                    side=side,
                    label=tuple(label.split()),
                    members=tuple(c["members"]),
                )
                (unlabeled if label == sentinel else rows).append(cluster)
        out[topic["topic_id"]] = (rows, unlabeled)
    return out


def compute_alignment(
    clusters_doc: dict,
    labels_doc: dict,
    synonyms: SynonymTable,
    threshold: float = 0.6,
    seed: int = 0,
) -> dict:
    labeled = _labeled_clusters(clusters_doc, labels_doc)
    topics = []
    for topic in clusters_doc["topics"]:
        rows, unlabeled = labeled[topic["topic_id"]]
        agree = [c for c in rows if c.side is Side.AGREE]
        disagree = [c for c in rows if c.side is Side.DISAGREE]
        pairs, dropped = align_clusters(agree, disagree, synonyms, threshold=threshold)
        dropped = dropped + unlabeled
        topics.append(
            {
                "topic_id": topic["topic_id"],
                "pairs": [
                    {
                        "label": p.label,
                        "agree_cluster_id": p.agree_cluster_id,
                        "disagree_cluster_id": p.disagree_cluster_id,
                        "similarity": p.similarity,
                    }
                    for p in pairs
                ],
                "dropped": [
                    {
                        "cluster_id": c.cluster_id,
                        "side": c.side.value,
                        "label": term_text(c.label),
                    }
                    for c in dropped
                ],
            }
        )
    return {"threshold": threshold, "seed": seed, "topics": topics}


def compute_charts(clusters_doc: dict, alignment_doc: dict, labels_doc: dict) -> dict[str, ChartSummary]:
    labeled = _labeled_clusters(clusters_doc, labels_doc)
    charts: dict[str, ChartSummary] = {}
    for topic in alignment_doc["topics"]:
        topic_id = topic["topic_id"]
        pairs = [
            AlignedPair(
                label=p["label"],
                agree_cluster_id=p["agree_cluster_id"],
                disagree_cluster_id=p["disagree_cluster_id"],
                similarity=float(p["similarity"]),
            )
            for p in topic["pairs"]
        ]
        rows, _ = labeled.get(topic_id, ([], []))
        clusters = {c.cluster_id: c for c in rows}
        charts[topic_id] = build_chart(topic_id, pairs, clusters)
    return charts


def compute_rouge_table(
    corpus: list[DebateTopic],
    gold,
    lexicons: Lexicons,
    ratio: float = 0.2,
    signature_threshold: float = LLR_THRESHOLD_P001,
    aggregate: str = "mean",
) -> dict:
    """Per-feature ROUGE-1/2/SU4 against the gold selections (Table-1 shape)."""
    gold_by_comment: dict[str, list[frozenset[str]]] = {}
    for annotation in gold:
        gold_by_comment.setdefault(annotation.comment_id, []).append(
            annotation.selected_sentence_ids
        )

    table: dict[str, dict] = {}
    per_feature_scores: dict[Feature, dict[RougeVariant, list]] = {
        f: {v: [] for v in RougeVariant} for f in Feature
    }
    for topic in corpus:
        signatures = topic_signatures_for(corpus, topic, signature_threshold)
        for comment in topic.comments:
            refs_ids = gold_by_comment.get(comment.id)
            if not refs_ids:
                continue
            references = [
                [t for s in comment.sentences if s.id in ids for t in s.tokens]
                for ids in refs_ids
            ]
            scores = score_comment(comment, topic, lexicons, signatures)
            for feature in Feature:
                selected = set(select_salient(comment, scores, feature=feature, ratio=ratio))
                system = [t for s in comment.sentences if s.id in selected for t in s.tokens]
                for variant in RougeVariant:
                    per_feature_scores[feature][variant].append(
                        rouge(system, references, variant, aggregate=aggregate)
                    )
    for feature in Feature:
        table[feature.value] = {}
        for variant in RougeVariant:
            scores = per_feature_scores[feature][variant]
            if not scores:
                table[feature.value][variant.value] = None
                continue
            k = len(scores)
            table[feature.value][variant.value] = {
                "recall": sum(s.recall for s in scores) / k,
                "precision": sum(s.precision for s in scores) / k,
                "f1": sum(s.f1 for s in scores) / k,
            }
    return table


def compute_silhouette_report(
    clusters_doc: dict,
    annotations_doc: dict,
    gazetteer: Gazetteer,
    synonyms: SynonymTable,
) -> dict:
    """Mean silhouette per (topic, side) clustering, plus the overall mean.

    Term clusters are soft: each membership becomes one instance of the
    sentence's term-count vector, scored with cosine distance. X-means
    clusters are scored on their reduced points with Euclidean distance.
    """
    terms = _canonical_terms_by_sentence(annotations_doc)
    vocabulary = sorted({canonical_label(t, synonyms) for t in gazetteer.terms}, key=term_text)
    index = {t: i for i, t in enumerate(vocabulary)}
    method = clusters_doc["method"]
    entries = []
    for topic in clusters_doc["topics"]:
        for side in Side:
            side_doc = topic["sides"][side.value]
            clusters = side_doc["clusters"]
            if len(clusters) < 2:
                continue
            if method == "term":
                points = []
                assignments = []
                for j, c in enumerate(clusters):
                    for sid in c["members"]:
                        row = np.zeros(len(vocabulary))
                        for t in terms.get(sid, []):
                            i = index.get(tuple(t))
                            if i is not None:
                                row[i] += 1.0
                        points.append(row)
                        assignments.append(j)
                report = silhouette(np.stack(points), assignments, metric="cosine_distance")
            else:
                point_map = side_doc["points"]
                points = []
                assignments = []
                for j, c in enumerate(clusters):
                    for sid in c["members"]:
                        points.append(point_map[sid])
                        assignments.append(j)
                report = silhouette(np.array(points, dtype=float), assignments, metric="euclidean")
            entries.append(
                {
                    "topic_id": topic["topic_id"],
                    "side": side.value,
                    "clusters": len(clusters),
                    "mean_silhouette": report.mean,
                }
            )
    overall = (
        sum(e["mean_silhouette"] for e in entries) / len(entries) if entries else None
    )
    return {"method": method, "per_clustering": entries, "mean": overall}


def compute_evaluation(
    inputs: PipelineInputs,
    clusters_doc: dict,
    annotations_doc: dict,
    config: PipelineConfig,
) -> dict:
    rouge_table = None
    if inputs.gold:
        rouge_table = compute_rouge_table(
            inputs.corpus,
            inputs.gold,
            inputs.lexicons,
            ratio=config.ratio,
            signature_threshold=config.signature_threshold,
        )
    silhouette_report = compute_silhouette_report(
        clusters_doc, annotations_doc, inputs.gazetteer, inputs.synonyms
    )
    return {"seed": config.seed, "rouge": rouge_table, "silhouette": silhouette_report}


# ---------------------------------------------------------------------------
# artifact I/O
# ---------------------------------------------------------------------------


def to_json_bytes(doc: dict) -> bytes:
    return (json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def write_json(path: str | Path, doc: dict) -> None:
    Path(path).write_bytes(to_json_bytes(doc))


def read_json(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def slugify(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_-]+", "_", name)


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except DebatesumError as exc:
        raise type(exc)(f"[stage {name}] {exc}") from exc


def run_pipeline(config: PipelineConfig) -> dict:
    """Run every stage and write all artifacts plus the manifest.

    Returns the manifest document. On any stage failure the partially
    written artifacts are removed and the error propagates.
    """
    inputs = _stage("load", load_inputs, config)
    annotations = _stage(
        "annotate", compute_annotations, inputs.corpus, inputs.gazetteer, inputs.synonyms,
        config.seed,
    )
    salient = _stage(
        "select", compute_salient, inputs.corpus, inputs.lexicons,
        config.feature, config.ratio, config.signature_threshold, config.seed,
    )
    clusters = _stage(
        "cluster", compute_clusters, inputs.corpus, annotations, salient,
        inputs.synonyms, inputs.gazetteer, config,
    )
    labeling_method = config.labeling_method
    labels = _stage("label", compute_labels, clusters, annotations, labeling_method, config.seed)
    aligned = _stage(
        "align", compute_alignment, clusters, labels, inputs.synonyms,
        config.alignment_threshold, config.seed,
    )
    charts = _stage("chart", compute_charts, clusters, aligned, labels)
    evaluation = _stage("eval", compute_evaluation, inputs, clusters, annotations, config)

    artifacts: dict[str, bytes] = {
        "annotations.json": to_json_bytes(annotations),
        "salient.json": to_json_bytes(salient),
        "clusters.json": to_json_bytes(clusters),
        "labels.json": to_json_bytes(labels),
        "alignment.json": to_json_bytes(aligned),
        "evaluation.json": to_json_bytes(evaluation),
    }
    for topic_id, chart in charts.items():
        slug = slugify(topic_id)
        artifacts[f"chart_{slug}.json"] = render_chart(chart, "json")
        artifacts[f"chart_{slug}.html"] = render_chart(chart, "html")

    manifest = {
        "config": config.echo(),
        "artifacts": {
            name: "sha256:" + hashlib.sha256(data).hexdigest()
            for name, data in sorted(artifacts.items())
        },
    }

    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    try:
        for name, data in artifacts.items():
            target = out / name
            target.write_bytes(data)
            written.append(target)
        write_json(out / "manifest.json", manifest)
    except Exception:
        for path in written:
            path.unlink(missing_ok=True)
        (out / "manifest.json").unlink(missing_ok=True)
        raise
    return manifest
