"""Command-line entry point: config-driven experiment orchestration.

Subcommands:
    stats        corpus statistics tables (CSV/JSON)
    error-rates  per-document CER/WER, summaries, and histogram CSVs
    noise        write synthetic aligned corpora at requested error rates
    train        train every configured model on both corpus versions
    evaluate     overlap curves per model, run-averaged, with SVG plots
    report       regenerate SVG plots from existing curve CSVs

Exit codes: 0 success, 1 internal error, 2 input/config error, 3 missing
dependency artifact.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
import traceback
from pathlib import Path

import numpy as np

from .config import (
    ConfigError,
    ExperimentConfig,
    MissingArtifactError,
    ModelSpec,
    apply_overrides,
    load_config,
)
from .cooccur import Weighting, count_cooccurrences
from .corpus import CorpusError, Version, compute_stats, load_corpus, save_paired_files
from .embeddings import (
    EmbeddingMatrix,
    Model,
    TrainConfig,
    export_embeddings,
    import_embeddings,
    load_sparse_embeddings,
    save_sparse_embeddings,
)
from .glove import train_glove
from .noise import (
    NoiseSpec,
    corpus_error_rates,
    write_error_report_csv,
    write_error_report_json,
    write_histogram_csv,
)
from .overlap import (
    average_runs,
    default_n_grid,
    evaluate_pair,
    read_curve_csv,
    write_curve_csv,
    write_curve_json,
)
from .ppmi import train_ppmi
from .preprocess import TokenizedCorpus, intersect_words, preprocess_corpus
from .svg import CurveSeries, render_overlap_svg
from .synthetic import noisy_corpus, synthetic_documents
from .word2vec import train_cbow, train_sgns

log = logging.getLogger(__name__)

_VERSIONS = (Version.OCR, Version.GROUND_TRUTH)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ocrdrift",
        description="Measure how OCR noise shifts word embedding spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("stats", "corpus statistics tables"),
        ("error-rates", "character/word error rates and histograms"),
        ("noise", "write synthetic aligned corpora at configured error rates"),
        ("train", "train configured models on both corpus versions"),
        ("evaluate", "compute overlap curves and render plots"),
        ("report", "regenerate plots from existing curve CSVs"),
    ]:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="experiment config JSON")
        cmd.add_argument("--lang", default=None, help="restrict to one configured language")
        cmd.add_argument("--out", default=None, help="override the configured output directory")
        cmd.add_argument("--seed", type=int, default=None, help="override the base seed")
        cmd.add_argument(
            "--deterministic",
            action="store_true",
            help="pin the sequential bit-reproducible training path (the default mode)",
        )
    return parser


# ----------------------------------------------------------------------
# stats
# ----------------------------------------------------------------------

def cmd_stats(config: ExperimentConfig, lang: str | None) -> int:
    sources = config.for_language(lang)
    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for src in sources:
        corpus = load_corpus(src.path, src.format, src.language)
        stats = compute_stats(corpus, Version.GROUND_TRUTH)
        rows.append((src.language.name, stats))
        if corpus.report is not None:
            corpus.report.to_json(out / f"ingestion_{src.language.name}.json")
    with open(out / "stats.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["language", "total_docs", "aligned_docs", "aligned_pct",
             "split_docs", "avg_chars", "min_chars", "max_chars", "total_chars"]
        )
        for name, s in rows:
            writer.writerow(
                [name, s.total_docs, s.aligned_docs,
                 f"{100.0 * s.aligned_docs / s.total_docs:.1f}",
                 s.split_docs, f"{s.avg_chars:.2f}", s.min_chars, s.max_chars, s.total_chars]
            )
    payload = [
        {
            "language": name,
            "total_docs": s.total_docs,
            "aligned_docs": s.aligned_docs,
            "split_docs": s.split_docs,
            "avg_chars": s.avg_chars,
            "min_chars": s.min_chars,
            "max_chars": s.max_chars,
            "total_chars": s.total_chars,
        }
        for name, s in rows
    ]
    (out / "stats.json").write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    for name, s in rows:
        print(
            f"{name}: {s.total_docs} docs, {s.aligned_docs} aligned, "
            f"{s.split_docs} split, avg {s.avg_chars:.0f} chars, total {s.total_chars}"
        )
    return 0


# ----------------------------------------------------------------------
# error-rates
# ----------------------------------------------------------------------

def cmd_error_rates(config: ExperimentConfig, lang: str | None) -> int:
    sources = config.for_language(lang)
    for src in sources:
        corpus = load_corpus(src.path, src.format, src.language)
        report = corpus_error_rates(corpus)
        out = config.out_dir / src.language.name
        out.mkdir(parents=True, exist_ok=True)
        write_error_report_csv(report, out / "error_rates.csv")
        write_error_report_json(report, out / "error_rates.json")
        write_histogram_csv(report.cer_histogram, out / "cer_hist.csv")
        write_histogram_csv(report.wer_histogram, out / "wer_hist.csv")
        print(
            f"{src.language.name}: mean CER {report.language_mean_cer:.3f}, "
            f"mean WER {report.language_mean_wer:.3f} "
            f"({len(report.per_document)} docs, {report.excluded_docs} excluded)"
        )
    return 0


# ----------------------------------------------------------------------
# noise
# ----------------------------------------------------------------------

def _clean_documents(config: ExperimentConfig) -> list[str]:
    noise = config.noise
    if noise.source_text is not None:
        text = noise.source_text.read_text(encoding="utf-8")
        return [
            text[i:i + noise.doc_chars]
            for i in range(0, len(text), noise.doc_chars)
        ]
    return synthetic_documents(noise.synthetic_chars, seed=config.seed, doc_chars=noise.doc_chars)


def cmd_noise(config: ExperimentConfig, lang: str | None) -> int:
    if config.noise is None:
        raise ConfigError("the noise command needs a 'noise' section in the config")
    documents = _clean_documents(config)
    base = config.out_dir / "noise" / config.noise.out_name
    base.mkdir(parents=True, exist_ok=True)
    manifest = []
    for index, level in enumerate(config.noise.levels):
        spec = NoiseSpec(
            target_cer=level,
            substitution_weight=config.noise.substitution_weight,
            deletion_weight=config.noise.deletion_weight,
            insertion_weight=config.noise.insertion_weight,
            seed=config.seed + index,
            alphabet=config.noise.alphabet,
        )
        corpus = noisy_corpus(documents, spec)
        level_dir = base / f"cer{int(round(level * 100)):03d}"
        save_paired_files(corpus, level_dir)
        report = corpus_error_rates(corpus)
        manifest.append(
            {
                "target_cer": level,
                "seed": spec.seed,
                "directory": str(level_dir),
                "documents": len(corpus),
                "measured_cer": report.language_mean_cer,
                "measured_wer": report.language_mean_wer,
            }
        )
        print(f"cer {level:.2f}: wrote {len(corpus)} docs, measured {report.language_mean_cer:.4f}")
    (base / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return 0


# ----------------------------------------------------------------------
# train
# ----------------------------------------------------------------------

def _train_one(
    spec: ModelSpec,
    tokenized: TokenizedCorpus,
    seed: int,
    run: int,
) -> EmbeddingMatrix:
    train_config = TrainConfig(
        model=spec.model,
        dim=spec.dim,
        window=spec.window,
        epochs=spec.epochs,
        negative_samples=spec.negative_samples,
        min_count=spec.min_count,
        seed=seed,
        rate_profile=spec.rate_profile,
        learning_rate=spec.learning_rate,
        batch_size=spec.batch_size,
    )
    if spec.model is Model.SGNS:
        return train_sgns(tokenized, train_config, run_index=run)
    if spec.model is Model.CBOW:
        return train_cbow(tokenized, train_config, run_index=run)
    if spec.model is Model.GLOVE:
        matrix = count_cooccurrences(tokenized, spec.window, Weighting.HARMONIC)
        return train_glove(matrix, train_config, run_index=run)
    if spec.model is Model.PPMI:
        matrix = count_cooccurrences(tokenized, spec.window, Weighting.FLAT)
        return train_ppmi(matrix).with_metadata(run_index=run)
    raise ConfigError(f"model {spec.label!r} cannot be trained locally")


def cmd_train(config: ExperimentConfig, lang: str | None) -> int:
    sources = config.for_language(lang)
    trainable = [m for m in config.models if m.model is not Model.EXTERNAL]
    if not trainable:
        raise ConfigError("no trainable models configured")
    for src in sources:
        corpus = load_corpus(src.path, src.format, src.language)
        out = config.out_dir / src.language.name
        emb_dir = out / "embeddings"
        emb_dir.mkdir(parents=True, exist_ok=True)

        tokenized_cache: dict[tuple[Version, int], TokenizedCorpus] = {}
        entries = []
        for spec in trainable:
            # PPMI has no stochastic state: one run covers it
            runs = 1 if spec.model is Model.PPMI else config.runs
            for version in _VERSIONS:
                key = (version, spec.min_count)
                if key not in tokenized_cache:
                    tokenized_cache[key] = preprocess_corpus(corpus, version, spec.min_count)
                tokenized = tokenized_cache[key]
                for run in range(runs):
                    seed = config.seed + run
                    started = time.perf_counter()
                    emb = _train_one(spec, tokenized, seed, run)
                    wall = time.perf_counter() - started
                    stem = f"{spec.label}_{version.value}_run{run}"
                    if emb.is_dense:
                        emb_path = emb_dir / f"{stem}.txt"
                        export_embeddings(emb, emb_path)
                    else:
                        emb_path = emb_dir / f"{stem}.npz"
                        save_sparse_embeddings(emb, emb_path)
                    entries.append(
                        {
                            "model": spec.label,
                            "version": version.value,
                            "run": run,
                            "seed": seed,
                            "embedding_path": str(emb_path.relative_to(out)),
                            "train_wall_seconds": round(wall, 3),
                        }
                    )
                    print(f"{src.language.name}/{stem}: trained in {wall:.1f}s")
        manifest = {
            "language": src.language.name,
            "deterministic": config.deterministic,
            "entries": entries,
        }
        (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return 0


# ----------------------------------------------------------------------
# evaluate / report
# ----------------------------------------------------------------------

def _load_embedding(path: Path) -> EmbeddingMatrix:
    if path.suffix == ".npz":
        return load_sparse_embeddings(path)
    return import_embeddings(path)


def cmd_evaluate(config: ExperimentConfig, lang: str | None) -> int:
    sources = config.for_language(lang)
    n_grid = config.n_grid or default_n_grid()
    trainable = [m for m in config.models if m.model is not Model.EXTERNAL]
    for src in sources:
        out = config.out_dir / src.language.name
        loaded: dict[tuple[str, str, int], EmbeddingMatrix] = {}
        # a manifest is only required when this config trains models;
        # purely external comparisons evaluate imported vectors directly
        manifest_path = out / "manifest.json"
        if trainable:
            if not manifest_path.is_file():
                raise MissingArtifactError(
                    f"no embedding manifest at {manifest_path}; run the train command first"
                )
            manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
            for entry in manifest["entries"]:
                emb_path = out / entry["embedding_path"]
                if not emb_path.is_file():
                    raise MissingArtifactError(f"embedding file missing: {emb_path}")
                loaded[(entry["model"], entry["version"], entry["run"])] = _load_embedding(emb_path)
        for spec in config.models:
            if spec.model is Model.EXTERNAL:
                loaded[(spec.label, Version.OCR.value, 0)] = import_embeddings(spec.ocr_path)
                loaded[(spec.label, Version.GROUND_TRUTH.value, 0)] = import_embeddings(spec.gt_path)

        if not loaded:
            raise MissingArtifactError("manifest lists no embeddings")
        intersection = intersect_words([emb.words for emb in loaded.values()])

        curves_dir = out / "curves"
        curves_dir.mkdir(parents=True, exist_ok=True)
        series = []
        labels = sorted({label for label, _, _ in loaded})
        for label in labels:
            runs = sorted(
                run for lbl, version, run in loaded
                if lbl == label and version == Version.OCR.value
            )
            per_run = []
            for run in runs:
                key_ocr = (label, Version.OCR.value, run)
                key_gt = (label, Version.GROUND_TRUTH.value, run)
                if key_gt not in loaded:
                    raise MissingArtifactError(f"missing ground-truth embedding for {label} run {run}")
                per_run.append(
                    evaluate_pair(
                        loaded[key_ocr],
                        loaded[key_gt],
                        intersection,
                        n_grid,
                        confidence=config.confidence,
                        resamples=config.bootstrap_resamples,
                        seed=config.seed,
                    )
                )
            curve = average_runs(per_run)
            write_curve_csv(curve, curves_dir / f"{label}.csv")
            write_curve_json(
                curve,
                curves_dir / f"{label}.json",
                metadata={
                    "language": src.language.name,
                    "model": label,
                    "runs": len(per_run),
                    "seed": config.seed,
                    "intersection_size": curve.intersection_size,
                },
            )
            series.append(
                CurveSeries(
                    label=label,
                    n=np.array(curve.n_values),
                    mean=curve.means,
                    ci_low=curve.ci_low,
                    ci_high=curve.ci_high,
                )
            )
            print(
                f"{src.language.name}/{label}: overlap {curve.means[0]:.3f} at N={curve.n_values[0]:g} "
                f"({curve.runs_averaged} runs, |V|={curve.intersection_size})"
            )
        render_overlap_svg(series, out / "overlap.svg", title=f"Neighbor overlap ({src.language.name})")
    return 0


def cmd_report(config: ExperimentConfig, lang: str | None) -> int:
    sources = config.for_language(lang)
    for src in sources:
        out = config.out_dir / src.language.name
        curves_dir = out / "curves"
        csv_paths = sorted(curves_dir.glob("*.csv")) if curves_dir.is_dir() else []
        if not csv_paths:
            raise MissingArtifactError(
                f"no curve CSVs under {curves_dir}; run the evaluate command first"
            )
        series = []
        for path in csv_paths:
            n, _, mean, lo, hi = read_curve_csv(path)
            series.append(CurveSeries(label=path.stem, n=n, mean=mean, ci_low=lo, ci_high=hi))
        render_overlap_svg(series, out / "overlap.svg", title=f"Neighbor overlap ({src.language.name})")
        print(f"{src.language.name}: rendered {out / 'overlap.svg'}")
    return 0


# ----------------------------------------------------------------------

_COMMANDS = {
    "stats": cmd_stats,
    "error-rates": cmd_error_rates,
    "noise": cmd_noise,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        config = apply_overrides(config, args.out, args.seed, args.deterministic)
        return _COMMANDS[args.command](config, args.lang)
    except (ConfigError, CorpusError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MissingArtifactError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except Exception:
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
