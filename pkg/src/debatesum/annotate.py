"""Ontology-term annotation over sentences.

A flat gazetteer of climate-change terms stands in for the live annotation
service: matching is greedy left-to-right longest-match over token sequences,
case-insensitive and non-overlapping, which is how a GATE-style gazetteer
behaves by default. A remote HTTP annotator can be plugged in through
RemoteAnnotator; it falls back to the local gazetteer on any failure.

Synonym handling: terms connected through the synonym table form an
equivalence class whose lexicographically smallest member is the canonical
label. canonical_label is idempotent and order-independent.
"""

from __future__ import annotations

import json
import urllib.error
import urllib.request
from dataclasses import dataclass
from pathlib import Path

from .corpus import Sentence, token_spans, tokenize
from .errors import ParseError, ValidationError

Term = tuple[str, ...]


def _normalize_term(text: str) -> Term:
    return tuple(tokenize(text))


def term_text(term: Term) -> str:
    return " ".join(term)


@dataclass(frozen=True)
class TermAnnotation:
    sentence_id: str
    term: Term
    start: int  # token index, inclusive
    end: int    # token index, exclusive


class Gazetteer:
    """Set of lowercase multiword terms (1..5 tokens each)."""

    MAX_TERM_TOKENS = 5

    def __init__(self, terms: set[Term]):
        for t in terms:
            if not t:
                raise ValidationError("gazetteer terms must be nonempty")
            if len(t) > self.MAX_TERM_TOKENS:
                raise ValidationError(f"gazetteer term too long ({len(t)} tokens)", record=term_text(t))
        self.terms = frozenset(terms)
        self._max_len = max((len(t) for t in terms), default=0)

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: Term) -> bool:
        return tuple(term) in self.terms

    def match_at(self, tokens: tuple[str, ...] | list[str], start: int) -> Term | None:
        """Longest gazetteer term starting at token index ``start``, if any."""
        limit = min(self._max_len, len(tokens) - start)
        for length in range(limit, 0, -1):
            candidate = tuple(tokens[start : start + length])
            if candidate in self.terms:
                return candidate
        return None


def load_gazetteer(path: str | Path) -> Gazetteer:
    """Read a one-term-per-line lexicon file; '#' lines are comments.

    Terms are tokenized and lowercased, duplicates collapse. An empty
    gazetteer is an error: it would make every downstream stage vacuous.
    """
    terms: set[Term] = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        term = _normalize_term(line)
        if term:
            terms.add(term)
    if not terms:
        raise ValidationError(f"gazetteer file {path} contains no terms")
    return Gazetteer(terms)


def annotate_sentence(sentence: Sentence, gazetteer: Gazetteer) -> list[TermAnnotation]:
    """Greedy left-to-right longest-match annotation; spans never overlap."""
    annotations: list[TermAnnotation] = []
    tokens = sentence.tokens
    i = 0
    while i < len(tokens):
        term = gazetteer.match_at(tokens, i)
        if term is None:
            i += 1
            continue
        annotations.append(TermAnnotation(sentence.id, term, i, i + len(term)))
        i += len(term)
    return annotations


class SynonymTable:
    """Symmetric synonym relation over terms, with connected-component labels."""

    def __init__(self, pairs: list[tuple[Term, Term]] | None = None):
        self._adjacent: dict[Term, set[Term]] = {}
        for a, b in pairs or []:
            self.add(a, b)

    def add(self, a: Term, b: Term) -> None:
        if a == b:
            return
        self._adjacent.setdefault(a, set()).add(b)
        self._adjacent.setdefault(b, set()).add(a)

    def synonyms(self, term: Term) -> frozenset[Term]:
        return frozenset(self._adjacent.get(tuple(term), set()))

    def equivalence_class(self, term: Term) -> frozenset[Term]:
        """Connected component of ``term`` under the synonym relation."""
        term = tuple(term)
        seen = {term}
        frontier = [term]
        while frontier:
            current = frontier.pop()
            for nxt in self._adjacent.get(current, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return frozenset(seen)

    def __len__(self) -> int:
        return len(self._adjacent)


def load_synonyms(path: str | Path) -> SynonymTable:
    """Read a TSV of synonym rows (first column the term, rest its synonyms).

    All terms on one row become pairwise synonyms; the table ends up
    symmetric by construction.
    """
    table = SynonymTable()
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cells = [c.strip() for c in line.split("\t")]
        terms = [_normalize_term(c) for c in cells if c.strip()]
        terms = [t for t in terms if t]
        if len(terms) < 2:
            raise ParseError("synonym row needs at least two terms", source=str(path), line=lineno)
        for i in range(len(terms)):
            for j in range(i + 1, len(terms)):
                table.add(terms[i], terms[j])
    return table


def canonical_label(term: Term, table: SynonymTable) -> Term:
    """Lexicographically smallest member of the term's synonym class."""
    cls = table.equivalence_class(tuple(term))
    return min(cls, key=term_text)


class RemoteAnnotator:
    """Client for an HTTP annotation service, with local gazetteer fallback.

    Contract: POST ``{"text": ...}`` as JSON; the service answers
    ``{"annotations": [{"term", "start_char", "end_char"}]}`` with character
    offsets into the posted text. Offsets are mapped onto token spans; any
    transport error, timeout, non-200 status, or malformed payload falls back
    to the local gazetteer.
    """

    def __init__(self, url: str, fallback: Gazetteer, timeout: float = 5.0):
        self.url = url
        self.fallback = fallback
        self.timeout = timeout

    def annotate(self, sentence: Sentence) -> list[TermAnnotation]:
        try:
            payload = json.dumps({"text": sentence.text}).encode("utf-8")
            request = urllib.request.Request(
                self.url, data=payload, headers={"Content-Type": "application/json"}
            )
            with urllib.request.urlopen(request, timeout=self.timeout) as response:
                if response.status != 200:
                    raise OSError(f"status {response.status}")
                body = json.loads(response.read().decode("utf-8"))
            return self._map_spans(sentence, body["annotations"])
        except (OSError, ValueError, KeyError, TypeError):
            return annotate_sentence(sentence, self.fallback)

    def _map_spans(self, sentence: Sentence, raw: list[dict]) -> list[TermAnnotation]:
        spans = token_spans(sentence.text)
        annotations: list[TermAnnotation] = []
        occupied_until = 0
        for item in sorted(raw, key=lambda r: (int(r["start_char"]), -int(r["end_char"]))):
            start_char = int(item["start_char"])
            end_char = int(item["end_char"])
            covered = [
                i for i, (_, s, e) in enumerate(spans) if s >= start_char and e <= end_char
            ]
            if not covered:
                continue
            start, end = covered[0], covered[-1] + 1
            if start < occupied_until:  # keep annotations non-overlapping
                continue
            term = tuple(sentence.tokens[start:end])
            annotations.append(TermAnnotation(sentence.id, term, start, end))
            occupied_until = end
        return annotations
