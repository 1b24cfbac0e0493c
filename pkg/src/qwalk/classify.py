"""Edge-XOR graph distance and nearest-neighbor classification.

Classification uses a cheap structural distance: binarize both weight
matrices, zero-pad the smaller one so positions align, and count the
differing entries of the strict upper triangle. The count normalized by
the number of possible edges lands in [0, 1]; the raw count is an exact
Hamming distance and satisfies the triangle inequality.
"""

from __future__ import annotations

import csv
import warnings
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import DomainError, FormatError, ParameterError
from .graph import Graph, load_graph


def _edge_bits(g: Graph, n_max: int) -> np.ndarray:
    """Strict upper triangle of the binarized weight matrix, padded to n_max."""
    bits = np.zeros((n_max, n_max), dtype=bool)
    bits[:g.n, :g.n] = g.weights > 0
    iu, ju = np.triu_indices(n_max, 1)
    return bits[iu, ju]


def edge_hamming(g1: Graph, g2: Graph) -> int:
    """Number of node pairs whose edge presence differs (after padding)."""
    n_max = max(g1.n, g2.n)
    if n_max <= 1:
        return 0
    return int(np.count_nonzero(_edge_bits(g1, n_max) != _edge_bits(g2, n_max)))


def xor_distance(g1: Graph, g2: Graph, weighted: bool = False) -> float:
    """Normalized edge disagreement between two graphs, in [0, 1].

    Pads both weight matrices to the larger node count before comparing,
    so positions stay aligned; the denominator is the number of possible
    edges n_max(n_max - 1)/2. Two graphs on at most one node are at
    distance 0 by convention. ``weighted=True`` replaces the binary
    disagreement with the absolute weight difference per pair (the result
    is then only bounded by the weight scale).
    """
    n_max = max(g1.n, g2.n)
    if n_max <= 1:
        return 0.0
    possible = n_max * (n_max - 1) // 2
    if weighted:
        iu, ju = np.triu_indices(n_max, 1)
        w1 = np.zeros((n_max, n_max))
        w1[:g1.n, :g1.n] = g1.weights
        w2 = np.zeros((n_max, n_max))
        w2[:g2.n, :g2.n] = g2.weights
        return float(np.abs(w1[iu, ju] - w2[iu, ju]).sum() / possible)
    return edge_hamming(g1, g2) / possible


@dataclass(frozen=True)
class Dataset:
    """Labeled graph collection."""

    items: tuple[tuple[Graph, str], ...]
    name: str = ""

    def __post_init__(self):
        if not self.items:
            raise DomainError("dataset must contain at least one graph")
        for idx, (_, label) in enumerate(self.items):
            if not label:
                raise DomainError(f"dataset item {idx} has no label")

    def __len__(self) -> int:
        return len(self.items)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(sorted({label for _, label in self.items}))


@dataclass(frozen=True, eq=False)
class EvaluationReport:
    """Accuracy and confusion counts of one train/test evaluation."""

    accuracy: float
    labels: tuple[str, ...]
    confusion: np.ndarray          # confusion[i, j] = count(true=i, predicted=j)
    k: int
    seed: int
    split_fraction: float

    def __post_init__(self):
        c = np.array(self.confusion, dtype=int)
        c.setflags(write=False)
        object.__setattr__(self, "confusion", c)
        total = int(c.sum())
        if total == 0 or abs(self.accuracy - np.trace(c) / total) > 1e-12:
            raise DomainError("accuracy inconsistent with confusion counts")

    def to_dict(self) -> dict:
        return {
            "accuracy": float(self.accuracy),
            "k": int(self.k),
            "seed": int(self.seed),
            "split_fraction": float(self.split_fraction),
            "labels": list(self.labels),
            "confusion": self.confusion.tolist(),
        }


Metric = Callable[[Graph, Graph], float]


def knn_classify(train: Dataset, query: Graph, k: int,
                 metric: Metric = xor_distance) -> str:
    """Label of the query by majority vote among its k nearest neighbors.

    Neighbor ties at equal distance resolve toward the smaller label, and
    a vote tie goes to the label with the smaller mean distance among its
    voting members, then to the lexicographically smallest label. Both
    rules make the outcome independent of training order.
    """
    if not 1 <= k <= len(train):
        raise ParameterError(f"k must lie in [1, {len(train)}], got {k}")
    scored = sorted(
        ((metric(query, g), label) for g, label in train.items),
        key=lambda pair: (pair[0], pair[1]),
    )
    top = scored[:k]
    votes = Counter(label for _, label in top)
    best = max(votes.values())
    tied = [label for label, count in votes.items() if count == best]
    if len(tied) == 1:
        return tied[0]
    means = {
        label: float(np.mean([d for d, lab in top if lab == label]))
        for label in tied
    }
    return min(tied, key=lambda label: (means[label], label))


def _stratified_split(labels: list[str], fraction: float,
                      rng: np.random.Generator) -> tuple[list[int], list[int]]:
    by_label: dict[str, list[int]] = {}
    for idx, label in enumerate(labels):
        by_label.setdefault(label, []).append(idx)
    train_idx: list[int] = []
    test_idx: list[int] = []
    for label in sorted(by_label):
        members = np.array(by_label[label])
        order = rng.permutation(members.shape[0])
        n_train = int(round(fraction * members.shape[0]))
        n_train = min(max(n_train, 1), members.shape[0] - 1)
        shuffled = members[order]
        train_idx.extend(int(i) for i in shuffled[:n_train])
        test_idx.extend(int(i) for i in shuffled[n_train:])
    return train_idx, test_idx


def evaluate(data: Dataset, split_fraction: float, k: int, seed: int,
             metric: Metric = xor_distance) -> EvaluationReport:
    """Shuffle, split, classify every held-out graph, and tally the results.

    The split is stratified per label so each class appears on both
    sides; classes with fewer than two members force a plain shuffled
    split (with a warning). Deterministic for a fixed seed.
    """
    if not 0.0 < split_fraction < 1.0:
        raise ParameterError(f"split fraction must lie in (0, 1), got {split_fraction}")
    if len(data) < 2:
        raise ParameterError("need at least two graphs to split")
    labels = [label for _, label in data.items]
    rng = np.random.default_rng(seed)
    class_sizes = Counter(labels)
    if min(class_sizes.values()) < 2:
        warnings.warn("some class has fewer than 2 items; falling back to an "
                      "unstratified split", stacklevel=2)
        order = rng.permutation(len(data))
        n_train = min(max(int(round(split_fraction * len(data))), 1), len(data) - 1)
        train_idx = [int(i) for i in order[:n_train]]
        test_idx = [int(i) for i in order[n_train:]]
    else:
        train_idx, test_idx = _stratified_split(labels, split_fraction, rng)

    train = Dataset(tuple(data.items[i] for i in train_idx), name=data.name)
    label_index = {label: i for i, label in enumerate(data.labels)}
    confusion = np.zeros((len(label_index), len(label_index)), dtype=int)
    for i in test_idx:
        graph, truth = data.items[i]
        predicted = knn_classify(train, graph, k, metric=metric)
        confusion[label_index[truth], label_index[predicted]] += 1
    accuracy = float(np.trace(confusion) / confusion.sum())
    return EvaluationReport(accuracy=accuracy, labels=data.labels,
                            confusion=confusion, k=k, seed=seed,
                            split_fraction=split_fraction)


def load_dataset(manifest_path, name: str | None = None) -> Dataset:
    """Load graphs listed in a manifest CSV with header "path,label".

    Relative paths resolve against the manifest's directory. Rows
    pointing at missing or unparseable files raise FormatError naming
    the row.
    """
    manifest_path = Path(manifest_path)
    base = manifest_path.parent
    with open(manifest_path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    if not rows or [cell.strip() for cell in rows[0]] != ["path", "label"]:
        raise FormatError("manifest must start with header 'path,label'",
                          source=str(manifest_path), line=1)
    items = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 2:
            raise FormatError(f"expected 'path,label', got {row!r}",
                              source=str(manifest_path), line=lineno)
        rel, label = row[0].strip(), row[1].strip()
        path = Path(rel)
        if not path.is_absolute():
            path = base / path
        suffix = path.suffix.lower()
        fmt = "matrix" if suffix in (".mat", ".matrix", ".csv") else "edgelist"
        try:
            graph = load_graph(path, fmt)
        except FileNotFoundError:
            raise FormatError(f"graph file not found: {rel}",
                              source=str(manifest_path), line=lineno) from None
        items.append((graph, label))
    if name is None:
        name = manifest_path.stem
    return Dataset(tuple(items), name=name)
