"""Corpus ingestion: tokenization, vocabularies, ordered-sentence streaming.

Corpus files are UTF-8 plain text, one sentence per line; a blank line marks
a document boundary.  Vocabulary ids are dense and ordered by descending
corpus frequency (ties broken lexicographically), so the n most frequent
tokens are exactly ids 0..n-1.  Tokens absent from the vocabulary are
silently dropped at lookup time (no UNK row): a Sentence may carry an empty
id list even though its raw text was not empty, and models treat that as a
flagged degenerate case rather than an error.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import DataError

_TOKEN_RE = re.compile(r"\w+|[^\w\s]")


def tokenize(text: str) -> list[str]:
    """Lowercase, split punctuation into standalone tokens, whitespace-split."""
    return _TOKEN_RE.findall(text.lower())


@dataclass
class Sentence:
    tokens: list[int]  # vocabulary ids, OOV dropped
    raw: str


@dataclass
class SentenceTriple:
    prev: Sentence
    mid: Sentence
    next: Sentence


class Vocabulary:
    """Immutable token<->id map with corpus frequencies."""

    def __init__(self, tokens: Iterable[str], counts: Iterable[int]):
        self.tokens = list(tokens)
        self.counts = list(counts)
        if len(self.tokens) != len(self.counts):
            raise ValueError("tokens and counts must have equal length")
        self.id_of = {tok: i for i, tok in enumerate(self.tokens)}
        self.total_count = sum(self.counts)

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.id_of

    def token_of(self, idx: int) -> str:
        return self.tokens[idx]

    def count_of(self, idx: int) -> int:
        return self.counts[idx]

    def lookup(self, tokens: Iterable[str]) -> list[int]:
        """Map tokens to ids, dropping out-of-vocabulary tokens."""
        ids = self.id_of
        return [ids[t] for t in tokens if t in ids]

    def sentence(self, raw: str) -> Sentence:
        return Sentence(self.lookup(tokenize(raw)), raw)

    def save(self, path: str) -> None:
        """Write `token<TAB>count` lines in id (descending-count) order."""
        with open(path, "w", encoding="utf-8") as fh:
            for tok, cnt in zip(self.tokens, self.counts):
                fh.write(f"{tok}\t{cnt}\n")

    @classmethod
    def load(cls, path: str) -> "Vocabulary":
        tokens, counts = [], []
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                try:
                    tok, cnt = line.split("\t")
                    counts.append(int(cnt))
                except ValueError as exc:
                    raise DataError(f"{path}:{lineno}: bad vocabulary line") from exc
                tokens.append(tok)
        if not tokens:
            raise DataError("empty vocabulary file")
        return cls(tokens, counts)


def build_vocab(
    token_lines: Iterable[list[str]],
    min_count: int = 1,
    max_size: int | None = None,
) -> Vocabulary:
    """Count tokens over a stream of tokenized sentences and keep the
    `max_size` most frequent with count >= `min_count`."""
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    if max_size is not None and max_size < 1:
        raise ValueError("max_size must be >= 1")
    counts: Counter[str] = Counter()
    n_sentences = 0
    for toks in token_lines:
        counts.update(toks)
        n_sentences += 1
    if n_sentences == 0 or not counts:
        raise DataError("empty corpus")
    items = [(t, c) for t, c in counts.items() if c >= min_count]
    if not items:
        raise DataError("no tokens reach min_count")
    items.sort(key=lambda tc: (-tc[1], tc[0]))
    if max_size is not None:
        items = items[:max_size]
    return Vocabulary([t for t, _ in items], [c for _, c in items])


def build_vocab_from_file(
    path: str, min_count: int = 1, max_size: int | None = None
) -> Vocabulary:
    return build_vocab(iter_token_lines(path), min_count, max_size)


def iter_raw_documents(path: str) -> Iterator[list[str]]:
    """Yield documents as lists of raw sentence lines (blank line = boundary)."""
    doc: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                if doc:
                    yield doc
                    doc = []
            else:
                doc.append(line)
    if doc:
        yield doc


def iter_token_lines(path: str) -> Iterator[list[str]]:
    """Tokenized sentences with document structure flattened away.

    Lines that tokenize to nothing are dropped here (ingestion filtering).
    """
    for doc in iter_raw_documents(path):
        for raw in doc:
            toks = tokenize(raw)
            if toks:
                yield toks


def iter_documents(path: str, vocab: Vocabulary) -> Iterator[list[Sentence]]:
    for doc in iter_raw_documents(path):
        sents = []
        for raw in doc:
            toks = tokenize(raw)
            if toks:
                sents.append(Sentence(vocab.lookup(toks), raw))
        if sents:
            yield sents


def iter_sentences(path: str, vocab: Vocabulary) -> Iterator[Sentence]:
    for doc in iter_documents(path, vocab):
        yield from doc


def iter_triples(path: str, vocab: Vocabulary) -> Iterator[SentenceTriple]:
    """One (prev, mid, next) window per interior sentence of each document.

    Documents never overlap: a document of n >= 3 sentences yields exactly
    n - 2 triples, shorter documents yield none.
    """
    for doc in iter_documents(path, vocab):
        for i in range(1, len(doc) - 1):
            yield SentenceTriple(doc[i - 1], doc[i], doc[i + 1])


def count_sentences(path: str) -> int:
    return sum(1 for _ in iter_token_lines(path))


def count_triples(path: str) -> int:
    total = 0
    for doc in iter_raw_documents(path):
        n = sum(1 for raw in doc if tokenize(raw))
        if n >= 3:
            total += n - 2
    return total


def subsample_ids(
    ids: list[int],
    vocab: Vocabulary,
    threshold: float,
    rng: np.random.Generator,
) -> list[int]:
    """Randomly drop frequent tokens: keep token w with probability
    min(1, sqrt(threshold / f(w))) where f(w) is its corpus frequency
    fraction.  Off by default (threshold == 0 keeps everything)."""
    if threshold <= 0.0 or not ids:
        return ids
    total = vocab.total_count
    out = []
    for i in ids:
        f = vocab.counts[i] / total
        keep = min(1.0, math.sqrt(threshold / f)) if f > 0 else 1.0
        if rng.random() < keep:
            out.append(i)
    return out
