"""TF-IDF encoding of questions and answer pairs/triples.

Vocabulary fitting is deterministic (tokens sorted lexicographically), idf
uses the smoothed form ln((1+N)/(1+df)) + 1, and encoded vectors are
L2-normalized. Question/answer segments are joined with literal "[CLS]" and
"[SEP]" marker tokens, which live in the vocabulary like any other token.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .errors import EmptyCorpus
from .textnorm import PEDANTS_POLICY, NormPolicy, normalize

CLS_TOKEN = "[CLS]"
SEP_TOKEN = "[SEP]"

FORMAT_VERSION = 1


@dataclass(frozen=True)
class TfidfConfig:
    smooth_idf: bool = True
    l2_normalize: bool = True
    min_df: int = 1


@dataclass(frozen=True)
class SparseVector:
    """Sorted (index, weight) pairs in a fixed-dimension space."""

    dimension: int
    indices: tuple[int, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.indices) != len(self.values):
            raise ValueError("indices and values must align")
        prev = -1
        for i in self.indices:
            if i <= prev or i >= self.dimension:
                raise ValueError(f"index {i} out of order or out of range")
            prev = i
        for v in self.values:
            if not math.isfinite(v):
                raise ValueError("weights must be finite")

    def norm(self) -> float:
        return math.sqrt(sum(v * v for v in self.values))

    @property
    def nnz(self) -> int:
        return len(self.indices)


@dataclass
class TfidfModel:
    """Fitted vocabulary and idf weights; immutable once fitted."""

    vocabulary: dict[str, int]
    idf: list[float]
    doc_count: int
    config: TfidfConfig = field(default_factory=TfidfConfig)

    @property
    def dimension(self) -> int:
        return len(self.vocabulary)

    def to_dict(self) -> dict:
        # vocab list is ordered by column index, so the mapping round-trips
        vocab = [None] * len(self.vocabulary)
        for tok, col in self.vocabulary.items():
            vocab[col] = tok
        return {
            "version": FORMAT_VERSION,
            "config": {
                "smooth_idf": self.config.smooth_idf,
                "l2_normalize": self.config.l2_normalize,
                "min_df": self.config.min_df,
            },
            "vocab": vocab,
            "idf": list(self.idf),
            "doc_count": self.doc_count,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TfidfModel":
        if data.get("version") != FORMAT_VERSION:
            raise ValueError(f"unsupported vectorizer format: {data.get('version')!r}")
        cfg = data["config"]
        return cls(
            vocabulary={tok: i for i, tok in enumerate(data["vocab"])},
            idf=[float(x) for x in data["idf"]],
            doc_count=int(data["doc_count"]),
            config=TfidfConfig(
                smooth_idf=bool(cfg["smooth_idf"]),
                l2_normalize=bool(cfg["l2_normalize"]),
                min_df=int(cfg["min_df"]),
            ),
        )


def fit(corpus: list[str], config: TfidfConfig = TfidfConfig()) -> TfidfModel:
    """Fit vocabulary and idf weights on whitespace-tokenized documents.

    Documents are expected to be normalized already (see the encode helpers);
    fitting itself only splits on whitespace.
    """
    if not corpus:
        raise EmptyCorpus("cannot fit a tf-idf model on an empty corpus")
    df: Counter[str] = Counter()
    for doc in corpus:
        df.update(set(doc.split()))
    n_docs = len(corpus)
    tokens = sorted(tok for tok, count in df.items() if count >= config.min_df)
    vocabulary = {tok: i for i, tok in enumerate(tokens)}
    if config.smooth_idf:
        idf = [math.log((1 + n_docs) / (1 + df[tok])) + 1.0 for tok in tokens]
    else:
        idf = [math.log(n_docs / df[tok]) + 1.0 for tok in tokens]
    return TfidfModel(vocabulary=vocabulary, idf=idf, doc_count=n_docs, config=config)


def transform(text: str, model: TfidfModel) -> SparseVector:
    """Encode one whitespace-tokenized document as tf x idf, L2-normalized.

    Out-of-vocabulary tokens are dropped; a document with no in-vocabulary
    tokens encodes to the zero vector, which is left unnormalized.
    """
    counts: Counter[int] = Counter()
    vocab = model.vocabulary
    for tok in text.split():
        col = vocab.get(tok)
        if col is not None:
            counts[col] += 1
    if not counts:
        return SparseVector(model.dimension, (), ())
    indices = tuple(sorted(counts))
    values = [counts[i] * model.idf[i] for i in indices]
    if model.config.l2_normalize:
        norm = math.sqrt(sum(v * v for v in values))
        values = [v / norm for v in values]
    return SparseVector(model.dimension, indices, tuple(values))


def build_pair_text(question: str, answer: str, policy: NormPolicy = PEDANTS_POLICY) -> str:
    """Normalized "[CLS] q [SEP] a" string for question-type features."""
    return f"{CLS_TOKEN} {normalize(question, policy)} {SEP_TOKEN} {normalize(answer, policy)}"

def build_triple_text(
    question: str, answer: str, candidate: str, policy: NormPolicy = PEDANTS_POLICY
) -> str:
    """Normalized "[CLS] q [SEP] a [SEP] candidate" string."""
    return (
        f"{CLS_TOKEN} {normalize(question, policy)} "
        f"{SEP_TOKEN} {normalize(answer, policy)} "
        f"{SEP_TOKEN} {normalize(candidate, policy)}"
    )


def encode_pair(
    question: str, answer: str, model: TfidfModel, policy: NormPolicy = PEDANTS_POLICY
) -> SparseVector:
    return transform(build_pair_text(question, answer, policy), model)


def encode_triple(
    question: str,
    answer: str,
    candidate: str,
    model: TfidfModel,
    policy: NormPolicy = PEDANTS_POLICY,
) -> SparseVector:
    return transform(build_triple_text(question, answer, candidate, policy), model)
