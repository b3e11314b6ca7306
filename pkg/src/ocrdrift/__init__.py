"""Measure how OCR noise shifts distributional word embeddings.

The pipeline: load an aligned OCR/ground-truth corpus, quantify its noise
(character and word error rates), train identically-configured embedding
models on each version, and compare the two learned spaces by how much
their cosine nearest-neighbor sets overlap across neighborhood sizes.
"""

from .cooccur import CooccurrenceMatrix, Weighting, count_cooccurrences, load_matrix, save_matrix
from .corpus import (
    DUTCH,
    ENGLISH,
    FRENCH,
    GERMAN,
    PAD,
    AlignedDocument,
    Corpus,
    CorpusError,
    CorpusFormat,
    CorpusStats,
    IngestionReport,
    Language,
    Version,
    compute_stats,
    load_corpus,
    save_paired_files,
    split_documents,
)
from .embeddings import (
    EmbeddingMatrix,
    EmbeddingMetadata,
    Model,
    RateProfile,
    TrainConfig,
    export_embeddings,
    import_embeddings,
    load_sparse_embeddings,
    save_sparse_embeddings,
)
from .glove import glove_objective, train_glove
from .noise import (
    ErrorRateReport,
    NoiseSpec,
    character_error_rate,
    corpus_error_rates,
    inject_noise,
    word_error_rate,
)
from .overlap import (
    NeighborSet,
    OverlapCurve,
    average_runs,
    bootstrap_ci,
    default_n_grid,
    evaluate_pair,
    k_for_fraction,
    neighbor_sets,
    overlap_at_k,
    write_curve_csv,
    write_curve_json,
)
from .ppmi import train_ppmi
from .preprocess import (
    TokenizedCorpus,
    VocabIntersection,
    Vocabulary,
    build_vocabulary,
    encode_documents,
    intersect_vocabularies,
    intersect_words,
    normalize,
    preprocess_corpus,
    read_vocabulary,
    tokenize,
    write_vocabulary,
)
from .synthetic import noisy_corpus, synthetic_documents, synthetic_text
from .word2vec import train_cbow, train_sgns

__version__ = "0.1.0"
