"""Training-free topological image retrieval.

Images are fingerprinted by per-channel cubical persistence: each RGB channel
is filtered by intensity sublevel sets, the lifespans of loops are collected
into a Betti curve sampled at R points, and the three channel curves are
concatenated into a 3R-length descriptor. Retrieval is an exact Euclidean
top-K scan over those descriptors.
"""

from .betti import (
    RANGE_FULL,
    RANGE_PER_IMAGE,
    BettiCurve,
    BettiCurveSpec,
    betti_curve,
    channel_curves,
    descriptor,
)
from .cubical import (
    CubicalFiltration,
    PersistenceDiagram,
    build_filtration,
    compute_persistence,
    oracle_persistence,
)
from .errors import (
    DecodeError,
    DimensionMismatchError,
    EmptyDatasetError,
    EmptyIndexError,
    EmptyNeighborListError,
    IndexBuildError,
    IndexFormatError,
    InsufficientDataError,
    ManifestError,
    ThirError,
)
from .evaluation import (
    EvalReport,
    EvalRow,
    SplitSpec,
    evaluate,
    majority_vote,
    render_report,
    split_records,
)
from .index import Index, IndexStats, build_index, load_index, save_index, stats
from .ingest import (
    LABEL_BENIGN,
    LABEL_MALIGNANT,
    LABEL_UNKNOWN,
    MAG_UNSPECIFIED,
    DatasetRecord,
    label_name,
    load_image,
    resize,
    scan_dataset,
    split_channels,
)
from .retrieval import RankedResult, euclidean, top_k

__version__ = "0.1.0"
