import numpy as np
import pytest
import scipy.sparse as sp

from ocrdrift.embeddings import (
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


def dense_embedding(words, vectors, model=Model.SGNS):
    return EmbeddingMatrix(
        words=tuple(words),
        vectors=np.asarray(vectors, dtype=np.float64),
        metadata=EmbeddingMetadata(model=model),
    )


class TestTrainConfig:
    def test_fast_and_slow_presets(self):
        fast = TrainConfig(model=Model.SGNS, rate_profile=RateProfile.FAST)
        slow = TrainConfig(model=Model.CBOW, rate_profile=RateProfile.SLOW)
        assert fast.resolved_rate() == 1e-3
        assert slow.resolved_rate() == 1e-4

    def test_explicit_rate_wins(self):
        config = TrainConfig(model=Model.SGNS, learning_rate=0.5, rate_profile=RateProfile.SLOW)
        assert config.resolved_rate() == 0.5

    def test_missing_rate_is_error(self):
        with pytest.raises(ValueError, match="rate"):
            TrainConfig(model=Model.SGNS).resolved_rate()


class TestTextFormat:
    def test_round_trip_within_tolerance(self, tmp_path):
        rng = np.random.default_rng(0)
        emb = dense_embedding(["alpha", "beta", "gamma"], rng.normal(size=(3, 5)))
        path = tmp_path / "vectors.txt"
        export_embeddings(emb, path)
        back = import_embeddings(path)
        assert back.words == emb.words
        assert np.abs(back.vectors - emb.vectors).max() < 1e-6
        assert back.metadata.model is Model.EXTERNAL

    def test_header_line(self, tmp_path):
        emb = dense_embedding(["a", "b"], [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
        path = tmp_path / "v.txt"
        export_embeddings(emb, path)
        assert path.read_text(encoding="utf-8").splitlines()[0] == "2 3"

    def test_row_length_mismatch_names_line(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("2 3\na 1 2 3 4\nb 1 2 3\n", encoding="utf-8")
        with pytest.raises(ValueError, match="line 2"):
            import_embeddings(path)

    def test_duplicate_word_rejected(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("2 2\nsame 1 2\nsame 3 4\n", encoding="utf-8")
        with pytest.raises(ValueError, match="duplicate word"):
            import_embeddings(path)

    def test_malformed_header(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("not a header\n", encoding="utf-8")
        with pytest.raises(ValueError, match="line 1"):
            import_embeddings(path)

    def test_non_numeric_value_names_line(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("1 2\nword 1 oops\n", encoding="utf-8")
        with pytest.raises(ValueError, match="line 2"):
            import_embeddings(path)

    def test_row_count_mismatch(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("3 2\na 1 2\nb 3 4\n", encoding="utf-8")
        with pytest.raises(ValueError, match="3 rows"):
            import_embeddings(path)

    def test_sparse_export_rejected(self, tmp_path):
        emb = EmbeddingMatrix(
            words=("a", "b"),
            vectors=sp.csr_matrix(np.eye(2)),
            metadata=EmbeddingMetadata(model=Model.PPMI),
        )
        with pytest.raises(TypeError):
            export_embeddings(emb, tmp_path / "v.txt")

    def test_word_with_space_rejected(self, tmp_path):
        emb = dense_embedding(["ok", "not ok"], np.eye(2))
        with pytest.raises(ValueError, match="not ok"):
            export_embeddings(emb, tmp_path / "v.txt")


class TestSparseFormat:
    def test_npz_round_trip(self, tmp_path):
        rows = sp.csr_matrix(np.array([[0.0, 1.5, 0.0], [2.5, 0.0, 0.0], [0.0, 0.0, 0.25]]))
        emb = EmbeddingMatrix(
            words=("x", "y", "z"), vectors=rows,
            metadata=EmbeddingMetadata(model=Model.PPMI),
        )
        path = tmp_path / "rows.npz"
        save_sparse_embeddings(emb, path)
        back = load_sparse_embeddings(path)
        assert back.words == emb.words
        assert back.metadata.model is Model.PPMI
        np.testing.assert_allclose(back.vectors.toarray(), rows.toarray())


class TestEmbeddingMatrix:
    def test_duplicate_words_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            dense_embedding(["a", "a"], np.eye(2))

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            dense_embedding(["a", "b", "c"], np.eye(2))

    def test_dim_none_for_sparse(self):
        emb = EmbeddingMatrix(
            words=("a", "b"), vectors=sp.csr_matrix(np.eye(2)),
            metadata=EmbeddingMetadata(model=Model.PPMI),
        )
        assert emb.dim is None
        assert not emb.is_dense
