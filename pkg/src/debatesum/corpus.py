"""Two-sided debate corpus: loading, validation, tokenization, gold annotations.

The corpus file is a single JSON document::

    {"topics": [{"id", "title", "comments": [
        {"id", "side": "agree"|"disagree",
         "sentences": [{"id", "position", "text"}]}]}]}

Gold annotations (one selection per annotator per comment)::

    {"annotations": [{"annotator_id", "comment_id", "selected": [sentence ids]}]}

Loaded structures are immutable values; everything downstream treats them as
read-only and may share them across workers.
"""

from __future__ import annotations

import json
import math
import re
import warnings
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import ParseError, ValidationError

# Lowercase alphanumeric runs, keeping hyphens that sit between alphanumerics
# ("sea-level" stays one token, underscores split).
_TOKEN_RE = re.compile(r"[^\W_]+(?:-[^\W_]+)*", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Deterministic lowercase tokenization; idempotent on its own output."""
    return _TOKEN_RE.findall(text.lower())


def token_spans(text: str) -> list[tuple[str, int, int]]:
    """Tokens with their character offsets in the original (un-lowercased) text.

    Offsets refer to ``text`` as given; the returned token strings are
    lowercased. Used to map character-offset annotations onto token indices.
    """
    return [(m.group(0).lower(), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


def salient_count(n_sentences: int, ratio: float = 0.2) -> int:
    """Number of sentences a 20%-style selection keeps: ceil(ratio*n), min 1."""
    return max(1, math.ceil(ratio * n_sentences))


class Side(str, Enum):
    AGREE = "agree"
    DISAGREE = "disagree"


@dataclass(frozen=True)
class Sentence:
    id: str
    position: int  # 1-based index within its comment
    text: str
    tokens: tuple[str, ...] = field(default=())

    @staticmethod
    def make(id: str, position: int, text: str) -> "Sentence":
        return Sentence(id=id, position=position, text=text, tokens=tuple(tokenize(text)))


@dataclass(frozen=True)
class Comment:
    id: str
    side: Side
    sentences: tuple[Sentence, ...]


@dataclass(frozen=True)
class DebateTopic:
    id: str
    title: str
    comments: tuple[Comment, ...]

    @property
    def title_tokens(self) -> tuple[str, ...]:
        return tuple(tokenize(self.title))


@dataclass(frozen=True)
class GoldAnnotation:
    annotator_id: str
    comment_id: str
    selected_sentence_ids: frozenset[str]


class GoldCountWarning(UserWarning):
    """An annotator selected a count other than ceil(0.2 * n); real data may."""


def _require(obj: dict, key: str, kind: type, record: str) -> object:
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"missing required key {key!r} in record {record}")
    value = obj[key]
    if kind is str and not isinstance(value, str):
        raise ParseError(f"key {key!r} must be a string in record {record}")
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise ParseError(f"key {key!r} must be an integer in record {record}")
    if kind is list and not isinstance(value, list):
        raise ParseError(f"key {key!r} must be a list in record {record}")
    return value


def load_corpus(path: str | Path) -> list[DebateTopic]:
    """Load and validate a corpus file, tokenizing every sentence.

    Raises ParseError for malformed JSON/schema and ValidationError for
    violated invariants (duplicate ids, unknown side, gaps in sentence
    positions, empty comment lists).
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", source=str(path)) from exc

    topics_raw = _require(raw, "topics", list, "<root>")
    topics: list[DebateTopic] = []
    topic_ids: set[str] = set()
    comment_ids: set[str] = set()
    sentence_ids: set[str] = set()

    for t in topics_raw:
        tid = str(_require(t, "id", str, "<topic>"))
        if not tid:
            raise ValidationError("topic id must be nonempty", record="<topic>")
        if tid in topic_ids:
            raise ValidationError("duplicate topic id", record=tid)
        topic_ids.add(tid)
        title = str(_require(t, "title", str, tid))
        comments_raw = _require(t, "comments", list, tid)
        if not comments_raw:
            raise ValidationError("topic has an empty comment list", record=tid)

        comments: list[Comment] = []
        for c in comments_raw:
            cid = str(_require(c, "id", str, f"{tid}/<comment>"))
            if not cid:
                raise ValidationError("comment id must be nonempty", record=tid)
            if cid in comment_ids:
                raise ValidationError("duplicate comment id", record=cid)
            comment_ids.add(cid)
            side_raw = str(_require(c, "side", str, cid))
            try:
                side = Side(side_raw)
            except ValueError:
                raise ValidationError(
                    f"unknown side {side_raw!r} (expected 'agree' or 'disagree')", record=cid
                ) from None
            sentences_raw = _require(c, "sentences", list, cid)
            if not sentences_raw:
                raise ValidationError("comment has no sentences", record=cid)

            sentences: list[Sentence] = []
            for i, s in enumerate(sentences_raw):
                sid = str(_require(s, "id", str, f"{cid}/<sentence>"))
                if not sid:
                    raise ValidationError("sentence id must be nonempty", record=cid)
                if sid in sentence_ids:
                    raise ValidationError("duplicate sentence id", record=sid)
                sentence_ids.add(sid)
                position = int(_require(s, "position", int, sid))
                if position != i + 1:
                    raise ValidationError(
                        f"sentence positions must be contiguous from 1 (got {position} at index {i})",
                        record=sid,
                    )
                text = str(_require(s, "text", str, sid))
                sentences.append(Sentence.make(sid, position, text))
            comments.append(Comment(id=cid, side=side, sentences=tuple(sentences)))
        topics.append(DebateTopic(id=tid, title=title, comments=tuple(comments)))
    return topics


def corpus_to_jsonable(topics: list[DebateTopic]) -> dict:
    return {
        "topics": [
            {
                "id": t.id,
                "title": t.title,
                "comments": [
                    {
                        "id": c.id,
                        "side": c.side.value,
                        "sentences": [
                            {"id": s.id, "position": s.position, "text": s.text}
                            for s in c.sentences
                        ],
                    }
                    for c in t.comments
                ],
            }
            for t in topics
        ]
    }


def dump_corpus(topics: list[DebateTopic], path: str | Path) -> None:
    """Serialize with canonical (sorted) key order; round-trips byte-identically."""
    Path(path).write_text(
        json.dumps(corpus_to_jsonable(topics), sort_keys=True, ensure_ascii=False, indent=2)
        + "\n",
        encoding="utf-8",
    )


def load_gold(path: str | Path, corpus: list[DebateTopic]) -> list[GoldAnnotation]:
    """Load gold salient-sentence selections and cross-validate against the corpus.

    A selection count different from ceil(0.2 * n) raises a GoldCountWarning
    (recorded, not fatal); dangling comment or sentence ids are errors.
    Output is ordered by corpus comment order, then annotator id.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", source=str(path)) from exc

    comments: dict[str, Comment] = {}
    order: dict[str, int] = {}
    for t in corpus:
        for c in t.comments:
            comments[c.id] = c
            order[c.id] = len(order)

    annotations: list[GoldAnnotation] = []
    for a in _require(raw, "annotations", list, "<root>"):
        annotator = str(_require(a, "annotator_id", str, "<annotation>"))
        comment_id = str(_require(a, "comment_id", str, annotator))
        selected = _require(a, "selected", list, f"{annotator}/{comment_id}")
        if comment_id not in comments:
            raise ValidationError("annotation references unknown comment", record=comment_id)
        comment = comments[comment_id]
        known = {s.id for s in comment.sentences}
        for sid in selected:
            if sid not in known:
                raise ValidationError(
                    f"annotation references unknown sentence {sid!r}", record=comment_id
                )
        expected = salient_count(len(comment.sentences))
        if len(set(selected)) != expected:
            warnings.warn(
                f"annotator {annotator!r} selected {len(set(selected))} sentences from "
                f"comment {comment_id!r} of {len(comment.sentences)} (expected {expected})",
                GoldCountWarning,
                stacklevel=2,
            )
        annotations.append(
            GoldAnnotation(
                annotator_id=annotator,
                comment_id=comment_id,
                selected_sentence_ids=frozenset(str(s) for s in selected),
            )
        )
    annotations.sort(key=lambda g: (order[g.comment_id], g.annotator_id))
    return annotations
