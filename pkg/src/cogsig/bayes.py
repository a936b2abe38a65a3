"""Information-theoretic Bayesian network learning and classification.

Structure is learned from pairwise information measures on the coded
table: an attribute links to the class node when its mutual information
with the class exceeds the connection threshold ``t``, and each attribute
may additionally take its single strongest earlier attribute as a parent
when their conditional mutual information given the class exceeds ``t``.
The result is a tree-augmented naive structure, acyclic by construction.

Probabilities come from smoothed counting; classification is the
normalized product of prior and per-node likelihoods, accumulated in log
space.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .discretize import DiscreteTable, Encoder, discretize_table, encode_table
from .features import CaseTable


def _contingency(table: DiscreteTable, columns: tuple[str, ...]) -> np.ndarray:
    if table.n_rows == 0:
        raise ValueError("empty table")
    cols = [table.column(c) for c in columns]
    cards = [table.cardinality(c) for c in columns]
    flat = np.ravel_multi_index(cols, cards)
    return np.bincount(flat, minlength=int(np.prod(cards))).reshape(cards)


def _to_base(value_nats: float, base: float) -> float:
    return value_nats / math.log(base)


def mutual_information(table: DiscreteTable, a_i: str, class_col: str,
                       base: float = math.e) -> float:
    """Plug-in mutual information between an attribute and the class.

    Empty cells contribute nothing (0*log(.) = 0); tiny negative rounding
    residue clamps to zero.
    """
    n = _contingency(table, (a_i, class_col)).astype(float)
    total = n.sum()
    n_a = n.sum(axis=1, keepdims=True)
    n_c = n.sum(axis=0, keepdims=True)
    nz = n > 0
    ratio = (n[nz] * total) / (n_a * n_c)[nz]
    value = float(np.sum(n[nz] / total * np.log(ratio)))
    return max(0.0, _to_base(value, base))


def conditional_mutual_information(table: DiscreteTable, a_i: str, a_j: str,
                                   class_col: str, base: float = math.e) -> float:
    """Plug-in conditional mutual information of two attributes given the class.

    Symmetric in the attribute pair (bit-exactly: the pair is canonicalized
    by column position before summing).
    """
    if table.column_index(a_i) > table.column_index(a_j):
        a_i, a_j = a_j, a_i
    n = _contingency(table, (a_i, a_j, class_col)).astype(float)
    total = n.sum()
    n_c = n.sum(axis=(0, 1))
    n_ac = n.sum(axis=1)
    n_bc = n.sum(axis=0)
    nz = n > 0
    ratio = (n * n_c[None, None, :])[nz] / (n_ac[:, None, :] * n_bc[None, :, :])[nz]
    value = float(np.sum(n[nz] / total * np.log(ratio)))
    return max(0.0, _to_base(value, base))


@dataclass(frozen=True)
class NetworkStructure:
    """Class node, attribute nodes and the threshold-selected arcs."""

    class_node: str
    attribute_nodes: tuple[str, ...]
    class_edges: frozenset[str]                 # class -> attribute arcs
    augment_edges: frozenset[tuple[str, str]]   # (parent, child) attribute arcs
    threshold_t: float

    def parents_of(self, node: str) -> tuple[str, ...]:
        parents = []
        if node in self.class_edges:
            parents.append(self.class_node)
        for parent, child in self.augment_edges:
            if child == node:
                parents.append(parent)
        return tuple(parents)


def learn_structure(table: DiscreteTable, class_col: str | None = None,
                    t: float = 0.1, base: float = math.e) -> NetworkStructure:
    """Select arcs by thresholded (conditional) mutual information.

    A class arc reaches every attribute whose MI with the class exceeds
    ``t``.  Each attribute considers earlier columns as augmenting parents
    and takes the one with the highest CMI above ``t`` (ties resolve to the
    earliest column), which keeps the graph acyclic with at most one
    attribute parent per node.
    """
    class_col = class_col or table.class_column
    if t < 0:
        raise ValueError(f"threshold must be nonnegative, got {t}")
    if table.n_rows == 0:
        raise ValueError("empty table")
    if len(np.unique(table.column(class_col))) < 2:
        raise ValueError("degenerate class: need at least 2 class values")
    attrs = tuple(c for c in table.columns if c != class_col)

    class_edges = frozenset(a for a in attrs
                            if mutual_information(table, a, class_col, base) > t)
    augment_edges = set()
    for i, child in enumerate(attrs):
        best_parent = None
        best_value = t
        for j in range(i):
            value = conditional_mutual_information(table, child, attrs[j],
                                                   class_col, base)
            if value > best_value:
                best_parent, best_value = attrs[j], value
        if best_parent is not None:
            augment_edges.add((best_parent, child))
    return NetworkStructure(class_node=class_col, attribute_nodes=attrs,
                            class_edges=class_edges,
                            augment_edges=frozenset(augment_edges),
                            threshold_t=t)


@dataclass(frozen=True, eq=False)
class Cpt:
    """Conditional probability table of one node given its parents.

    ``table`` has one axis per parent (class first when present) plus a
    trailing axis over the node's own values; every row sums to 1.
    """

    node: str
    parents: tuple[str, ...]
    table: np.ndarray

    @property
    def cardinality(self) -> int:
        return self.table.shape[-1]


@dataclass(frozen=True, eq=False)
class BayesNet:
    """A trained classifier: structure, CPTs, priors and the encoders."""

    structure: NetworkStructure
    cpts: dict[str, Cpt]
    priors: np.ndarray
    class_labels: tuple[str, ...]
    smoothing_alpha: float
    log_base: float = math.e
    encoders: dict[str, Encoder] | None = None

    def cardinality(self, node: str) -> int:
        return self.cpts[node].cardinality


def estimate_cpts(structure: NetworkStructure, table: DiscreteTable,
                  smoothing_alpha: float = 1.0,
                  log_base: float = math.e) -> BayesNet:
    """Estimate priors and per-node CPTs by smoothed counting.

    Entries are (count + alpha) / (row_total + alpha * cardinality); with
    alpha = 0 unseen parent configurations fall back to uniform rows.
    """
    alpha = float(smoothing_alpha)
    class_col = structure.class_node
    kc = table.cardinality(class_col)
    y = table.column(class_col)
    class_counts = np.bincount(y, minlength=kc).astype(float)
    priors = (class_counts + alpha) / (table.n_rows + alpha * kc)
    if alpha == 0.0:
        priors = class_counts / max(table.n_rows, 1)

    cpts: dict[str, Cpt] = {}
    for node in structure.attribute_nodes:
        parents = structure.parents_of(node)
        kx = table.cardinality(node)
        parent_cards = tuple(table.cardinality(p) for p in parents)
        counts = np.zeros(parent_cards + (kx,), dtype=float)
        index = tuple(table.column(p) for p in parents) + (table.column(node),)
        np.add.at(counts, index, 1.0)
        totals = counts.sum(axis=-1, keepdims=True)
        if alpha > 0:
            probs = (counts + alpha) / (totals + alpha * kx)
        else:
            probs = np.divide(counts, totals, out=np.full_like(counts, 1.0 / kx),
                              where=totals > 0)
        cpts[node] = Cpt(node=node, parents=parents, table=probs)
    return BayesNet(structure=structure, cpts=cpts, priors=priors,
                    class_labels=table.class_labels(),
                    smoothing_alpha=alpha, log_base=log_base,
                    encoders=table.encoders)


def _case_codes(net: BayesNet, case) -> dict[str, int]:
    """Normalize a case (mapping or sequence) to clamped per-node codes."""
    nodes = net.structure.attribute_nodes
    if isinstance(case, dict):
        values = {node: int(case[node]) for node in nodes}
    else:
        if len(case) != len(nodes):
            raise ValueError(f"expected {len(nodes)} attribute codes, got {len(case)}")
        values = {node: int(v) for node, v in zip(nodes, case)}
    # Codes beyond the trained cardinality land in the last bin, which is
    # the reserved missing bin for discretized columns.
    return {node: min(max(code, 0), net.cardinality(node) - 1)
            for node, code in values.items()}


def log_scores(net: BayesNet, case) -> np.ndarray:
    """Unnormalized per-class log scores: log prior + sum of log likelihoods."""
    codes = _case_codes(net, case)
    scores = np.log(net.priors).copy()
    for node in net.structure.attribute_nodes:
        cpt = net.cpts[node]
        idx: list = []
        class_first = cpt.parents and cpt.parents[0] == net.structure.class_node
        for p in cpt.parents[1 if class_first else 0:]:
            idx.append(codes[p])
        entry = cpt.table[(slice(None),) * (1 if class_first else 0)
                          + tuple(idx) + (codes[node],)]
        scores += np.log(entry) if class_first else math.log(float(entry))
    return scores


def posterior(net: BayesNet, case) -> np.ndarray:
    """Normalized class distribution for one case, aligned with class_labels."""
    scores = log_scores(net, case)
    p = np.exp(scores - scores.max())
    return p / p.sum()


def classify(net: BayesNet, case) -> str:
    """Most probable class label; exact ties go to the lexicographically smaller."""
    p = posterior(net, case)
    return net.class_labels[int(np.argmax(p))]


def log_scores_batch(net: BayesNet, codes: np.ndarray) -> np.ndarray:
    """Log scores for a whole matrix of cases; shape (n_classes, n_rows)."""
    n = codes.shape[0]
    nodes = net.structure.attribute_nodes
    if codes.shape[1] != len(nodes):
        raise ValueError(f"expected {len(nodes)} attribute columns, got {codes.shape[1]}")
    col = {node: np.clip(codes[:, j], 0, net.cardinality(node) - 1)
           for j, node in enumerate(nodes)}
    scores = np.repeat(np.log(net.priors)[:, None], n, axis=1)
    for node in nodes:
        cpt = net.cpts[node]
        logt = np.log(cpt.table)
        class_first = cpt.parents and cpt.parents[0] == net.structure.class_node
        idx = tuple(col[p] for p in cpt.parents[1 if class_first else 0:])
        if class_first:
            scores += logt[(slice(None),) + idx + (col[node],)]
        else:
            scores += logt[idx + (col[node],)][None, :]
    return scores


def classify_batch(net: BayesNet, codes: np.ndarray) -> list[str]:
    scores = log_scores_batch(net, codes)
    return [net.class_labels[i] for i in np.argmax(scores, axis=0)]


def aggregate_posterior(net: BayesNet, codes: np.ndarray) -> np.ndarray:
    """Session-level class distribution from many cases of one session.

    Combines the per-case likelihoods under an independence assumption:
    one prior term plus the summed per-row log likelihoods.
    """
    scores = log_scores_batch(net, codes)
    log_prior = np.log(net.priors)
    total = log_prior + (scores - log_prior[:, None]).sum(axis=1)
    p = np.exp(total - total.max())
    return p / p.sum()


SPLIT_INTERLEAVED = "interleaved"

# Positions (mod 5) of each class's rows routed to the training part.
_TRAIN_POSITIONS = (0, 1, 2)


def _parse_split_mode(mode: str) -> tuple[str, int | None]:
    if mode == SPLIT_INTERLEAVED:
        return mode, None
    if mode.startswith("seeded:"):
        return "seeded", int(mode.split(":", 1)[1])
    raise ValueError(f"unknown split mode {mode!r}")


def split_train_test(table: CaseTable, mode: str = SPLIT_INTERLEAVED) -> tuple[CaseTable, CaseTable]:
    """Deterministic 3:2 split, stratified per class.

    Within each class's row order, positions 0,1,2 of every run of five go
    to training and positions 3,4 to test.  Mode "seeded:<n>" shuffles each
    class's rows reproducibly first.
    """
    kind, seed = _parse_split_mode(mode)
    labels = table.class_labels()
    by_class: dict[str, list[int]] = {label: [] for label in labels}
    for i, row in enumerate(table.rows):
        by_class[row.user_id].append(i)
    train_idx: list[int] = []
    test_idx: list[int] = []
    for rank, label in enumerate(labels):
        indices = by_class[label]
        if len(indices) < 5:
            raise ValueError(f"too few rows for class {label!r}: "
                             f"need at least 5, got {len(indices)}")
        if kind == "seeded":
            rng = random.Random(seed * 1000003 + rank)
            indices = list(indices)
            rng.shuffle(indices)
        for pos, row_index in enumerate(indices):
            (train_idx if pos % 5 in _TRAIN_POSITIONS else test_idx).append(row_index)
    train_idx.sort()
    test_idx.sort()
    make = lambda idx: CaseTable(table.columns,
                                 tuple(table.rows[i] for i in idx),
                                 table.class_column)
    return make(train_idx), make(test_idx)


@dataclass(frozen=True, eq=False)
class EvaluationReport:
    """Held-out classification outcome with the configuration that produced it."""

    accuracy: float
    labels: tuple[str, ...]
    confusion: np.ndarray            # rows = true class, columns = predicted
    train_rows: int
    test_rows: int
    config: dict

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "labels": list(self.labels),
            "confusion": self.confusion.tolist(),
            "train_rows": self.train_rows,
            "test_rows": self.test_rows,
            "config": dict(self.config),
        }


def train_classifier(train: CaseTable, method: str, k: int, t: float,
                     smoothing_alpha: float, log_base: float = math.e) -> BayesNet:
    """Fit encoders, structure and CPTs on a training case table."""
    labels = train.class_labels()
    if len(labels) < 2:
        raise ValueError("degenerate class: need at least 2 class values")
    coded = discretize_table(train, method, k)
    structure = learn_structure(coded, t=t, base=log_base)
    return estimate_cpts(structure, coded, smoothing_alpha, log_base=log_base)


def encode_cases(net: BayesNet, table: CaseTable) -> np.ndarray:
    """Code a case table's attribute columns with the net's trained encoders."""
    if net.encoders is None:
        raise ValueError("net carries no encoders; encode cases manually")
    nodes = net.structure.attribute_nodes
    coded = encode_table(table, list(nodes), net.encoders)
    return coded.codes


def evaluate(train: CaseTable, test: CaseTable, config) -> EvaluationReport:
    """Full protocol: fit on train only, classify test, tabulate the outcome.

    ``config`` supplies method, k, threshold_t, smoothing_alpha and
    log_base (see PipelineConfig); it is echoed into the report.
    """
    if set(train.columns) != set(test.columns):
        raise ValueError("train and test tables must share columns")
    net = train_classifier(train, config.method, config.k, config.threshold_t,
                           config.smoothing_alpha, config.log_base)
    labels = net.class_labels
    unseen = set(test.class_labels()) - set(labels)
    if unseen:
        raise ValueError(f"test classes missing from training data: {sorted(unseen)}")
    codes = encode_cases(net, test)
    predictions = classify_batch(net, codes)
    index = {label: i for i, label in enumerate(labels)}
    confusion = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for row, pred in zip(test.rows, predictions):
        confusion[index[row.user_id], index[pred]] += 1
    accuracy = float(np.trace(confusion) / max(len(test.rows), 1))
    return EvaluationReport(accuracy=accuracy, labels=labels, confusion=confusion,
                            train_rows=len(train.rows), test_rows=len(test.rows),
                            config=config.to_dict() if hasattr(config, "to_dict") else dict(config))


def run_evaluation(table: CaseTable, config) -> EvaluationReport:
    """Split one case table per the config and run the evaluation protocol."""
    if getattr(config, "drop_empty_cases", False):
        table = table.without_empty_rows()
    train, test = split_train_test(table, config.split)
    return evaluate(train, test, config)
