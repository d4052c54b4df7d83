"""Infographic virality pipeline: visual/verbal bags of words, LDA topic
clusters, pairwise virality tests, and design scoring."""

from .analytics import (
    ClusterStat,
    PairwiseTestResult,
    cluster_assign,
    cluster_stats,
    pairwise_matrix,
    pooled_t_test,
    t_quantile,
    word_cloud_terms,
)
from .archive import ModelArchive, load_archive, save_archive
from .corpus import (
    CorpusBundle,
    DocTermMatrix,
    ManifestRecord,
    VocabularyRegistry,
    assemble_doc_term,
    load_corpus,
    load_manifest,
    save_corpus,
)
from .dss import (
    CompareReport,
    ScoreReport,
    ViralSet,
    compare,
    derive_viral_set,
    expected_activity,
    score,
    viral_probability,
)
from .errors import (
    ArchiveFormatError,
    AssemblyError,
    DecodeError,
    SchemaError,
    ScoringError,
    ValidationError,
    ViralensError,
)
from .lda import (
    LdaHyperparams,
    LdaModel,
    TopicAssignmentState,
    fold_in,
    gibbs_train,
    log_likelihood,
    select_k,
)
from .linalg import SvdResult, reduce_energy, svd
from .vision import (
    KMeansResult,
    PixelGrid,
    QuantizationConfig,
    VisualDescriptor,
    decode_image,
    extract_visual_descriptor,
    hsv_to_rgb,
    kmeans,
    quantize_to_visual_words,
    rgb_to_hsv,
    visual_vocabulary,
)

__version__ = "0.1.0"

__all__ = [
    "ArchiveFormatError",
    "AssemblyError",
    "ClusterStat",
    "CompareReport",
    "CorpusBundle",
    "DecodeError",
    "DocTermMatrix",
    "KMeansResult",
    "LdaHyperparams",
    "LdaModel",
    "ManifestRecord",
    "ModelArchive",
    "PairwiseTestResult",
    "PixelGrid",
    "QuantizationConfig",
    "SchemaError",
    "ScoreReport",
    "ScoringError",
    "SvdResult",
    "TopicAssignmentState",
    "ValidationError",
    "ViralSet",
    "ViralensError",
    "VisualDescriptor",
    "VocabularyRegistry",
    "assemble_doc_term",
    "cluster_assign",
    "cluster_stats",
    "compare",
    "decode_image",
    "derive_viral_set",
    "expected_activity",
    "extract_visual_descriptor",
    "fold_in",
    "gibbs_train",
    "hsv_to_rgb",
    "kmeans",
    "load_archive",
    "load_corpus",
    "load_manifest",
    "log_likelihood",
    "pairwise_matrix",
    "pooled_t_test",
    "quantize_to_visual_words",
    "reduce_energy",
    "rgb_to_hsv",
    "save_archive",
    "save_corpus",
    "score",
    "select_k",
    "svd",
    "t_quantile",
    "viral_probability",
    "visual_vocabulary",
    "word_cloud_terms",
]
