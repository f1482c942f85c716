"""Retrieval evaluation: stratified split, majority vote, per-K metrics.

Each test image is fingerprinted, its top-K neighbors are looked up in a
train-only index, and the majority label of the neighbors becomes the
prediction. Accuracy, recall, precision, and F1 are reported with malignant
as the positive class, alongside mean precision@K (the average fraction of
same-label neighbors).
"""

import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .betti import BettiCurveSpec, descriptor
from .errors import EmptyNeighborListError, InsufficientDataError
from .index import Index
from .ingest import DatasetRecord, LABEL_MALIGNANT, load_image, resize
from .retrieval import top_k

__all__ = [
    "SplitSpec",
    "EvalRow",
    "EvalReport",
    "split_records",
    "majority_vote",
    "evaluate",
    "render_report",
]

_COLUMNS = (
    "magnification",
    "K",
    "accuracy",
    "recall",
    "precision",
    "f1",
    "mean_precision_at_k",
    "queries",
)


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    seed: int = 42
    stratify_by_label: bool = True


@dataclass(frozen=True)
class EvalRow:
    magnification: int
    k: int
    accuracy: float
    recall: float
    precision: float
    f1: float
    mean_precision_at_k: float
    queries: int
    tp: int
    fp: int
    tn: int
    fn: int


@dataclass
class EvalReport:
    rows: list[EvalRow]
    metadata: dict = field(default_factory=dict)


def split_records(
    records: list[DatasetRecord], spec: SplitSpec
) -> tuple[list[DatasetRecord], list[DatasetRecord]]:
    """Deterministic train/test split, stratified by label by default.

    Per label group, round(train_fraction * n) records go to train (clamped
    so both sides stay non-empty), chosen by a seeded shuffle. Output lists
    preserve the input record order.
    """
    if not 0.0 < spec.train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {spec.train_fraction}")
    if spec.stratify_by_label:
        groups: dict[int, list[int]] = {}
        for i, rec in enumerate(records):
            groups.setdefault(rec.label, []).append(i)
        for label, idxs in groups.items():
            if len(idxs) < 2:
                raise InsufficientDataError(
                    f"label {label} has only {len(idxs)} record(s); need at least 2"
                )
    else:
        if len(records) < 2:
            raise InsufficientDataError("need at least 2 records to split")
        groups = {0: list(range(len(records)))}

    rng = np.random.default_rng(spec.seed)
    train_idx: list[int] = []
    test_idx: list[int] = []
    for label in sorted(groups):
        idxs = groups[label]
        n = len(idxs)
        n_train = int(round(spec.train_fraction * n))
        n_train = min(max(n_train, 1), n - 1)
        perm = rng.permutation(n)
        chosen = {idxs[j] for j in perm[:n_train]}
        train_idx.extend(i for i in idxs if i in chosen)
        test_idx.extend(i for i in idxs if i not in chosen)

    train_idx.sort()
    test_idx.sort()
    return [records[i] for i in train_idx], [records[i] for i in test_idx]


def majority_vote(neighbors: list[tuple[int, float]]) -> int:
    """Most frequent label in a ranked (label, distance) list.

    A count tie goes to the tied label ranked nearest.
    """
    if not neighbors:
        raise EmptyNeighborListError("cannot vote over zero neighbors")
    counts = Counter(label for label, _ in neighbors)
    best = max(counts.values())
    tied = {label for label, c in counts.items() if c == best}
    for label, _ in neighbors:
        if label in tied:
            return label
    raise AssertionError("unreachable")


def _metrics(tp: int, fp: int, tn: int, fn: int) -> tuple[float, float, float]:
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def evaluate(
    index: Index,
    test_records: list[DatasetRecord],
    ks: list[int],
    magnification: int | None = None,
    jobs: int = 1,
) -> list[EvalRow]:
    """Score top-K retrieval of ``test_records`` against a train index.

    Query descriptors use the index's own spec and resize dims. One ranked
    scan per query serves every K in ``ks`` (prefixes of the same ranking).
    """
    if not test_records:
        raise InsufficientDataError("no test records to evaluate")
    ks = sorted(set(int(k) for k in ks))
    if ks[0] < 1:
        raise ValueError(f"all K values must be >= 1, got {ks}")
    kmax = ks[-1]
    spec: BettiCurveSpec = index.spec
    w, h = index.resize_dims

    def query_vec(rec: DatasetRecord) -> np.ndarray:
        return descriptor(resize(load_image(rec.path), w, h), spec)

    jobs = max(1, int(jobs))
    if jobs == 1:
        vectors = [query_vec(rec) for rec in test_records]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            vectors = list(pool.map(query_vec, test_records))

    per_query: list[tuple[int, list[int]]] = []  # (truth, neighbor labels at kmax)
    per_query_dists: list[list[float]] = []
    for rec, vec in zip(test_records, vectors):
        ranked = top_k(index, vec, kmax)
        per_query.append((rec.label, [r.label for r in ranked]))
        per_query_dists.append([r.distance for r in ranked])

    mag = magnification if magnification is not None else _common_magnification(test_records)
    rows = []
    for k in ks:
        tp = fp = tn = fn = 0
        correct = 0
        precision_at_k_sum = 0.0
        for (truth, labels), dists in zip(per_query, per_query_dists):
            head = list(zip(labels[:k], dists[:k]))
            pred = majority_vote(head)
            if pred == truth:
                correct += 1
            if truth == LABEL_MALIGNANT:
                if pred == LABEL_MALIGNANT:
                    tp += 1
                else:
                    fn += 1
            else:
                if pred == LABEL_MALIGNANT:
                    fp += 1
                else:
                    tn += 1
            same = sum(1 for lab, _ in head if lab == truth)
            precision_at_k_sum += same / len(head)
        n = len(per_query)
        precision, recall, f1 = _metrics(tp, fp, tn, fn)
        rows.append(
            EvalRow(
                magnification=mag,
                k=k,
                accuracy=correct / n,
                recall=recall,
                precision=precision,
                f1=f1,
                mean_precision_at_k=precision_at_k_sum / n,
                queries=n,
                tp=tp,
                fp=fp,
                tn=tn,
                fn=fn,
            )
        )
    return rows


def _common_magnification(records: list[DatasetRecord]) -> int:
    mags = {rec.magnification for rec in records}
    return mags.pop() if len(mags) == 1 else 0


def render_report(report: EvalReport, fmt: str = "csv") -> str:
    """Render an EvalReport as csv, markdown, or json text.

    csv and markdown format metrics to four decimal places (round half to
    even); json keeps full-precision values and parses back exactly.
    """
    if fmt == "json":
        return json.dumps(
            {"metadata": report.metadata, "rows": [asdict(r) for r in report.rows]},
            indent=2,
        )

    def cells(row: EvalRow) -> list[str]:
        return [
            str(row.magnification),
            str(row.k),
            f"{row.accuracy:.4f}",
            f"{row.recall:.4f}",
            f"{row.precision:.4f}",
            f"{row.f1:.4f}",
            f"{row.mean_precision_at_k:.4f}",
            str(row.queries),
        ]

    if fmt == "csv":
        lines = [",".join(_COLUMNS)]
        lines.extend(",".join(cells(r)) for r in report.rows)
        return "\n".join(lines) + "\n"
    if fmt == "markdown":
        lines = [
            "| " + " | ".join(_COLUMNS) + " |",
            "|" + "|".join("---" for _ in _COLUMNS) + "|",
        ]
        lines.extend("| " + " | ".join(cells(r)) + " |" for r in report.rows)
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")
