import csv
import json

import pytest

from ocrdrift.cli import main
from ocrdrift.corpus import save_paired_files
from ocrdrift.noise import NoiseSpec
from ocrdrift.synthetic import noisy_corpus, synthetic_documents


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpora")
    docs = synthetic_documents(40_000, seed=21, n_types=120, n_topics=6,
                               doc_chars=700, min_len=2, max_len=5)
    corpus = noisy_corpus(docs, NoiseSpec(target_cer=0.08, seed=5))
    save_paired_files(corpus, root / "demo")
    return root / "demo"


def write_config(path, corpus_dir, out_dir, **extra):
    payload = {
        "out_dir": str(out_dir),
        "seed": 13,
        "runs": 2,
        "n_grid": [0.05, 0.2, 1.0],
        "bootstrap_resamples": 100,
        "languages": [
            {"language": "other", "path": str(corpus_dir), "format": "paired"}
        ],
        "models": [
            {"model": "ppmi", "window": 3, "min_count": 3},
            {"model": "sgns", "rate_profile": "fast", "dim": 16, "window": 3,
             "epochs": 2, "min_count": 3, "batch_size": 512},
        ],
    }
    payload.update(extra)
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


class TestConfigAndExitCodes:
    def test_missing_config_file(self, capsys):
        assert main(["stats", "--config", "/nonexistent/config.json"]) == 2
        assert "config" in capsys.readouterr().err

    def test_missing_corpus_path_named(self, tmp_path, capsys):
        config = tmp_path / "c.json"
        config.write_text(json.dumps({
            "out_dir": str(tmp_path / "out"),
            "languages": [{"language": "dutch", "path": str(tmp_path / "missing"), "format": "icdar"}],
        }), encoding="utf-8")
        assert main(["stats", "--config", str(config)]) == 2
        assert "missing" in capsys.readouterr().err

    def test_no_partial_outputs_on_config_error(self, tmp_path):
        config = tmp_path / "c.json"
        config.write_text(json.dumps({
            "out_dir": str(tmp_path / "out"),
            "runs": 0,
            "languages": [],
        }), encoding="utf-8")
        assert main(["stats", "--config", str(config)]) == 2
        assert not (tmp_path / "out").exists()

    def test_unknown_model_rejected(self, tmp_path, corpus_dir):
        config = tmp_path / "c.json"
        config.write_text(json.dumps({
            "out_dir": str(tmp_path / "out"),
            "languages": [{"language": "other", "path": str(corpus_dir), "format": "paired"}],
            "models": [{"model": "bert"}],
        }), encoding="utf-8")
        assert main(["train", "--config", str(config)]) == 2

    def test_evaluate_without_manifest_is_exit_3(self, tmp_path, corpus_dir, capsys):
        config = write_config(tmp_path / "c.json", corpus_dir, tmp_path / "out")
        assert main(["evaluate", "--config", str(config)]) == 3
        assert "manifest" in capsys.readouterr().err


class TestStatsCommand:
    def test_writes_tables(self, tmp_path, corpus_dir):
        out = tmp_path / "out"
        config = write_config(tmp_path / "c.json", corpus_dir, out)
        assert main(["stats", "--config", str(config)]) == 0
        with open(out / "stats.csv", newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 1
        assert int(rows[0]["total_docs"]) == int(rows[0]["aligned_docs"])
        payload = json.loads((out / "stats.json").read_text(encoding="utf-8"))
        assert payload[0]["total_chars"] > 0
        ingestion = json.loads((out / "ingestion_other.json").read_text(encoding="utf-8"))
        assert ingestion["loaded"] == int(rows[0]["total_docs"])

    def test_lang_filter_rejects_unknown(self, tmp_path, corpus_dir, capsys):
        config = write_config(tmp_path / "c.json", corpus_dir, tmp_path / "out")
        assert main(["stats", "--config", str(config), "--lang", "french"]) == 2
        assert "french" in capsys.readouterr().err

    def test_out_override(self, tmp_path, corpus_dir):
        config = write_config(tmp_path / "c.json", corpus_dir, tmp_path / "ignored")
        other = tmp_path / "elsewhere"
        assert main(["stats", "--config", str(config), "--out", str(other)]) == 0
        assert (other / "stats.csv").exists()
        assert not (tmp_path / "ignored").exists()


class TestErrorRatesCommand:
    def test_reports_injected_rate(self, tmp_path, corpus_dir):
        out = tmp_path / "out"
        config = write_config(tmp_path / "c.json", corpus_dir, out)
        assert main(["error-rates", "--config", str(config)]) == 0
        summary = json.loads((out / "other" / "error_rates.json").read_text(encoding="utf-8"))
        assert abs(summary["mean_cer"] - 0.08) < 0.01
        assert (out / "other" / "cer_hist.csv").exists()
        assert (out / "other" / "wer_hist.csv").exists()

    def test_zero_noise_pair_all_zero(self, tmp_path):
        docs = synthetic_documents(5_000, seed=2, n_types=40, doc_chars=500)
        corpus = noisy_corpus(docs, NoiseSpec(target_cer=0.0, seed=1))
        save_paired_files(corpus, tmp_path / "clean")
        out = tmp_path / "out"
        config = write_config(tmp_path / "c.json", tmp_path / "clean", out)
        assert main(["error-rates", "--config", str(config)]) == 0
        summary = json.loads((out / "other" / "error_rates.json").read_text(encoding="utf-8"))
        assert summary["mean_cer"] == 0.0
        assert summary["mean_wer"] == 0.0


class TestNoiseCommand:
    def test_writes_levels_and_manifest(self, tmp_path):
        out = tmp_path / "out"
        config = tmp_path / "c.json"
        config.write_text(json.dumps({
            "out_dir": str(out),
            "seed": 3,
            "noise": {
                "levels": [0.0, 0.1],
                "synthetic_chars": 30_000,
                "doc_chars": 1500,
                "out_name": "toy",
            },
        }), encoding="utf-8")
        assert main(["noise", "--config", str(config)]) == 0
        manifest = json.loads((out / "noise" / "toy" / "manifest.json").read_text(encoding="utf-8"))
        assert [m["target_cer"] for m in manifest] == [0.0, 0.1]
        assert abs(manifest[1]["measured_cer"] - 0.1) < 0.01
        level_dir = out / "noise" / "toy" / "cer010"
        assert any(level_dir.glob("*.ocr.txt"))
        assert any(level_dir.glob("*.gt.txt"))

    def test_source_text_file(self, tmp_path):
        source = tmp_path / "book.txt"
        source.write_text("plain running text for corruption " * 400, encoding="utf-8")
        out = tmp_path / "out"
        config = tmp_path / "c.json"
        config.write_text(json.dumps({
            "out_dir": str(out),
            "seed": 1,
            "noise": {
                "levels": [0.2],
                "source_text": str(source),
                "doc_chars": 2000,
                "out_name": "book",
            },
        }), encoding="utf-8")
        assert main(["noise", "--config", str(config)]) == 0
        manifest = json.loads((out / "noise" / "book" / "manifest.json").read_text(encoding="utf-8"))
        assert abs(manifest[0]["measured_cer"] - 0.2) < 0.01
        # ground-truth side reassembles to the source text
        level_dir = out / "noise" / "book" / "cer020"
        gt = "".join(
            p.read_text(encoding="utf-8").replace("@", "")
            for p in sorted(level_dir.glob("*.gt.txt"))
        )
        assert gt == source.read_text(encoding="utf-8")


@pytest.fixture(scope="module")
def trained(tmp_path_factory, corpus_dir):
    base = tmp_path_factory.mktemp("run")
    out = base / "out"
    config = write_config(base / "c.json", corpus_dir, out)
    assert main(["train", "--config", str(config)]) == 0
    return config, out


class TestTrainEvaluateReport:
    def test_manifest_schema(self, trained):
        _, out = trained
        manifest = json.loads((out / "other" / "manifest.json").read_text(encoding="utf-8"))
        entries = manifest["entries"]
        # ppmi collapses to one run; sgns trains per run and version
        assert sum(e["model"] == "ppmi" for e in entries) == 2
        assert sum(e["model"] == "sgns-fast" for e in entries) == 4
        for entry in entries:
            assert set(entry) == {
                "model", "version", "run", "seed", "embedding_path", "train_wall_seconds"
            }
            assert (out / "other" / entry["embedding_path"]).exists()

    def test_evaluate_writes_curves_and_svg(self, trained):
        config, out = trained
        assert main(["evaluate", "--config", str(config)]) == 0
        curve_csv = out / "other" / "curves" / "sgns-fast.csv"
        header = curve_csv.read_text(encoding="utf-8").splitlines()[0]
        assert header == "N,k,mean,ci_low,ci_high"
        payload = json.loads((out / "other" / "curves" / "sgns-fast.json").read_text(encoding="utf-8"))
        assert payload["runs_averaged"] == 2
        svg = (out / "other" / "overlap.svg").read_text(encoding="utf-8")
        assert "<svg" in svg
        assert 'id="inset"' in svg
        assert "ci-band" in svg

    def test_report_regenerates_svg_from_csvs(self, trained):
        config, out = trained
        assert main(["evaluate", "--config", str(config)]) == 0
        svg_path = out / "other" / "overlap.svg"
        svg_path.unlink()
        assert main(["report", "--config", str(config)]) == 0
        assert svg_path.exists()

    def test_identical_versions_pin_curves_at_one(self, tmp_path, corpus_dir):
        docs = synthetic_documents(20_000, seed=4, n_types=80, doc_chars=600)
        corpus = noisy_corpus(docs, NoiseSpec(target_cer=0.0, seed=1))
        save_paired_files(corpus, tmp_path / "clean")
        out = tmp_path / "out"
        config = write_config(tmp_path / "c.json", tmp_path / "clean", out, runs=1)
        assert main(["train", "--config", str(config)]) == 0
        assert main(["evaluate", "--config", str(config)]) == 0
        with open(out / "other" / "curves" / "sgns-fast.csv", newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                assert float(row["mean"]) == 1.0
                assert float(row["ci_low"]) == 1.0
                assert float(row["ci_high"]) == 1.0


class TestExternalEmbeddings:
    def test_external_only_evaluation(self, tmp_path, corpus_dir):
        import numpy as np

        from ocrdrift.embeddings import EmbeddingMatrix, EmbeddingMetadata, Model, export_embeddings

        rng = np.random.default_rng(0)
        words = tuple(f"w{i}" for i in range(40))
        for name, seed in (("ext_ocr.txt", 1), ("ext_gt.txt", 2)):
            vectors = np.random.default_rng(seed).normal(size=(40, 8))
            emb = EmbeddingMatrix(words=words, vectors=vectors,
                                  metadata=EmbeddingMetadata(model=Model.EXTERNAL))
            export_embeddings(emb, tmp_path / name)

        out = tmp_path / "out"
        config = write_config(
            tmp_path / "c.json", corpus_dir, out,
            models=[{"model": "external", "name": "bert",
                     "ocr_path": str(tmp_path / "ext_ocr.txt"),
                     "gt_path": str(tmp_path / "ext_gt.txt")}],
        )
        # no manifest needed: nothing is trained locally
        assert main(["evaluate", "--config", str(config)]) == 0
        header = (out / "other" / "curves" / "bert.csv").read_text(encoding="utf-8").splitlines()[0]
        assert header == "N,k,mean,ci_low,ci_high"


class TestSeedOverride:
    def test_seed_flag_offsets_run_seeds(self, tmp_path, corpus_dir):
        out = tmp_path / "out"
        config = write_config(tmp_path / "c.json", corpus_dir, out, runs=2,
                              models=[{"model": "sgns", "rate_profile": "fast", "dim": 8,
                                       "window": 2, "epochs": 1, "min_count": 3,
                                       "batch_size": 256}])
        assert main(["train", "--config", str(config), "--seed", "100"]) == 0
        manifest = json.loads((out / "other" / "manifest.json").read_text(encoding="utf-8"))
        assert sorted({e["seed"] for e in manifest["entries"]}) == [100, 101]


class TestDeterminism:
    def test_end_to_end_byte_identical(self, tmp_path, corpus_dir):
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            config = write_config(tmp_path / f"{name}.json", corpus_dir, out)
            assert main(["train", "--config", str(config), "--deterministic"]) == 0
            assert main(["evaluate", "--config", str(config), "--deterministic"]) == 0
            outs.append(out)
        for rel in ("other/curves/sgns-fast.csv", "other/curves/ppmi.csv"):
            a = (outs[0] / rel).read_bytes()
            b = (outs[1] / rel).read_bytes()
            assert a == b
