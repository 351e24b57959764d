"""Small TF-IDF vectorizer with a fully pinned-down formula.

Tokenizer: lowercase, split on non-alphanumeric runs, drop empties. No
stemming, no stop words. IDF is smoothed: ``ln((1 + N) / (1 + df)) + 1``.
Document vectors are raw term counts times IDF, L2-normalized over the
document's nonzero entries. Every constant is fixed here so an independent
hand computation reproduces the output exactly.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Union

_TOKEN_SPLIT = re.compile(r"[^0-9a-z]+")


def tokenize(text: str) -> list[str]:
    return [token for token in _TOKEN_SPLIT.split(text.lower()) if token]


@dataclass
class TfIdfModel:
    """Fitted vocabulary with document frequencies and IDF weights."""

    vocabulary: list[str]
    document_frequency: list[int]
    corpus_size: int
    idf: list[float] = field(default_factory=list)

    def __post_init__(self) -> None:
        if len(self.vocabulary) != len(self.document_frequency):
            raise ValueError("vocabulary and document_frequency lengths differ")
        if self.corpus_size < 1:
            raise ValueError("corpus_size must be at least 1")
        if any(df < 1 for df in self.document_frequency):
            raise ValueError("document frequencies must be at least 1")
        if not self.idf:
            self.idf = [
                math.log((1 + self.corpus_size) / (1 + df)) + 1.0
                for df in self.document_frequency
            ]
        if len(self.idf) != len(self.vocabulary):
            raise ValueError("idf and vocabulary lengths differ")
        self._index = {term: i for i, term in enumerate(self.vocabulary)}

    def term_index(self, term: str) -> int:
        return self._index.get(term, -1)

    def top_terms_by_idf(self, k: int) -> list[str]:
        """The k rarest terms; ties break alphabetically for stability."""
        ranked = sorted(zip(self.vocabulary, self.idf), key=lambda ti: (-ti[1], ti[0]))
        return [term for term, _ in ranked[:k]]

    def to_json(self) -> str:
        return json.dumps(
            {
                "vocabulary": self.vocabulary,
                "document_frequency": self.document_frequency,
                "corpus_size": self.corpus_size,
                "idf": self.idf,
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "TfIdfModel":
        payload = json.loads(text)
        return cls(
            vocabulary=payload["vocabulary"],
            document_frequency=payload["document_frequency"],
            corpus_size=payload["corpus_size"],
            idf=payload.get("idf", []),
        )

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "TfIdfModel":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def fit_tfidf(corpus: Iterable[str]) -> TfIdfModel:
    """Fit vocabulary, document frequencies, and IDF over a corpus.

    The vocabulary is the sorted set of distinct tokens. A corpus whose
    documents all tokenize to nothing cannot be fitted and raises.
    """
    documents = list(corpus)
    if not documents:
        raise ValueError("corpus must be non-empty")
    df: dict[str, int] = {}
    for document in documents:
        for term in set(tokenize(document)):
            df[term] = df.get(term, 0) + 1
    if not df:
        raise ValueError("every document tokenized to nothing; no vocabulary to fit")
    vocabulary = sorted(df)
    return TfIdfModel(
        vocabulary=vocabulary,
        document_frequency=[df[t] for t in vocabulary],
        corpus_size=len(documents),
    )


def transform_tfidf(document: str, model: TfIdfModel) -> dict[str, float]:
    """Sparse TF-IDF weights for one document.

    Out-of-vocabulary tokens are ignored; an empty or fully-OOV document
    yields the empty (zero) vector. Nonzero outputs are L2-normalized.
    """
    counts: dict[str, int] = {}
    for token in tokenize(document):
        if model.term_index(token) >= 0:
            counts[token] = counts.get(token, 0) + 1
    if not counts:
        return {}
    weights = {term: count * model.idf[model.term_index(term)] for term, count in counts.items()}
    norm = math.sqrt(sum(w * w for w in weights.values()))
    return {term: w / norm for term, w in weights.items()}
