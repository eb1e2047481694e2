"""Access to the data files shipped with the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def asset_path(name: str) -> Path:
    """Filesystem path of a packaged data asset (stopwords, lexicons)."""
    return Path(str(resources.files("debatesum").joinpath("data", name)))


def load_wordlist(path: str | Path) -> frozenset[str]:
    """One entry per line, lowercased, '#' comments and blanks ignored."""
    entries = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            entries.add(line)
    return frozenset(entries)


def default_stopwords() -> frozenset[str]:
    return load_wordlist(asset_path("stopwords.txt"))


def default_conjunctive_adverbs_path() -> Path:
    return asset_path("conjunctive_adverbs.txt")


def default_gazetteer_path() -> Path:
    return asset_path("climate_terms.txt")


def default_synonyms_path() -> Path:
    return asset_path("synonyms.tsv")
