from __future__ import annotations

import json
from pathlib import Path

import pytest

from debatesum.corpus import Comment, DebateTopic, Sentence, Side

REPO_ROOT = Path(__file__).resolve().parents[1]
SAMPLE_DIR = REPO_ROOT / "data" / "sample"


@pytest.fixture(scope="session")
def sample_dir() -> Path:
    return SAMPLE_DIR


@pytest.fixture(scope="session")
def sample_corpus_path() -> Path:
    return SAMPLE_DIR / "corpus.json"


@pytest.fixture(scope="session")
def sample_config_path() -> Path:
    return SAMPLE_DIR / "config.json"


def make_comment(cid: str, side: Side, texts: list[str]) -> Comment:
    sentences = tuple(
        Sentence.make(f"{cid}-s{i + 1}", i + 1, text) for i, text in enumerate(texts)
    )
    return Comment(id=cid, side=side, sentences=sentences)


def make_topic(tid: str, title: str, comments: list[Comment]) -> DebateTopic:
    return DebateTopic(id=tid, title=title, comments=tuple(comments))


def write_corpus_json(path: Path, topics: list[dict]) -> Path:
    path.write_text(json.dumps({"topics": topics}, indent=2) + "\n", encoding="utf-8")
    return path


def simple_topic_dict(
    tid: str = "t1",
    n_comments: int = 2,
    n_sentences: int = 3,
    side: str = "agree",
) -> dict:
    comments = []
    for c in range(n_comments):
        cid = f"{tid}-c{c + 1}"
        comments.append(
            {
                "id": cid,
                "side": side,
                "sentences": [
                    {"id": f"{cid}-s{s + 1}", "position": s + 1, "text": f"Sentence {s + 1}."}
                    for s in range(n_sentences)
                ],
            }
        )
    return {"id": tid, "title": f"Title of {tid}", "comments": comments}
