"""Command-line surface: stats, link, evaluate, simcheck, export-matrix."""

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import data as dataset
from .embed import FileVectorStore, RemoteEmbeddingClient, format_similarity_report, similarity_matrix_report
from .errors import SpiderlinkError, TransportError, ValidationError
from .linking import LinkingConfig, export_matrices, link_corpus
from .linking.export import load_dependency_edges
from .sql import evaluate as run_evaluate
from .sql import format_report, load_predictions, report_to_dict

EXIT_OK = 0
EXIT_DATA = 1
EXIT_TRANSPORT = 2

DEFAULT_TAU = 0.78


@dataclass
class RunConfig:
    tables: Path | None = None
    examples: Path | None = None
    train: Path | None = None
    test: Path | None = None
    predictions: Path | None = None
    vectors: list[Path] | None = None
    deps: Path | None = None
    pairs: Path | None = None
    out: Path | None = None
    tau: float = DEFAULT_TAU
    csr: bool = True
    span_k: int = 1
    provider: str | None = None  # 'file' | 'remote'
    endpoint: str | None = None
    jobs: int = 1
    language: str | None = None
    index: int | None = None

    def validate(self) -> None:
        if not 0.0 < self.tau <= 1.0:
            raise ValidationError(f"--tau must be in (0, 1], got {self.tau}")
        if self.jobs < 1:
            raise ValidationError(f"--jobs must be >= 1, got {self.jobs}")
        for name in ("tables", "examples", "train", "test", "predictions", "deps", "pairs"):
            path = getattr(self, name)
            if path is not None and not Path(path).exists():
                raise ValidationError(f"--{name.replace('_', '-')}: no such file: {path}")
        for path in self.vectors or []:
            if not Path(path).exists():
                raise ValidationError(f"--vectors: no such file: {path}")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None, help="JSON config file; flags win")
    parser.add_argument("--out", type=Path, default=None, help="output directory")
    parser.add_argument("--jobs", type=int, default=None, help="worker bound for fan-out")


def _add_provider_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--provider", choices=("file", "remote"), default=None)
    parser.add_argument("--vectors", type=Path, action="append", default=None, help="vector file (file provider)")
    parser.add_argument("--endpoint", default=None, help="remote endpoint; env EMBED_ENDPOINT also honored")
    parser.add_argument("--tau", type=float, default=None, help=f"cosine threshold (default {DEFAULT_TAU})")
    parser.add_argument("--no-csr", action="store_const", const=True, default=None, dest="no_csr")
    parser.add_argument("--span-k", type=int, default=None, dest="span_k", help="embed spans up to k tokens (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spiderlink")
    sub = parser.add_subparsers(dest="command", required=True)

    # "required" flags stay optional at parse time so a --config file can
    # supply them; each command checks for what it needs after the merge.
    p = sub.add_parser("stats", help="corpus statistics and split disjointness")
    p.add_argument("--tables", type=Path, default=None)
    p.add_argument("--examples", type=Path, default=None)
    p.add_argument("--train", type=Path, default=None)
    p.add_argument("--test", type=Path, default=None)
    p.add_argument("--language", choices=("arabic", "english"), default=None)
    _add_common(p)

    p = sub.add_parser("link", help="build and export relation matrices with statistics")
    p.add_argument("--tables", type=Path, default=None)
    p.add_argument("--examples", type=Path, default=None)
    p.add_argument("--deps", type=Path, default=None, help="optional dependency-edge file")
    p.add_argument("--language", choices=("arabic", "english"), default=None)
    _add_provider_flags(p)
    _add_common(p)

    p = sub.add_parser("evaluate", help="exact-match accuracy of predictions against gold")
    p.add_argument("--tables", type=Path, default=None)
    p.add_argument("--examples", type=Path, default=None)
    p.add_argument("--predictions", type=Path, default=None)
    p.add_argument("--language", choices=("arabic", "english"), default=None)
    _add_common(p)

    p = sub.add_parser("simcheck", help="cosine-similarity table for word pairs across providers")
    p.add_argument("--pairs", type=Path, default=None, help="TSV file: text_a<TAB>text_b per line")
    _add_provider_flags(p)
    _add_common(p)

    p = sub.add_parser("export-matrix", help="export relation matrices only")
    p.add_argument("--tables", type=Path, default=None)
    p.add_argument("--examples", type=Path, default=None)
    p.add_argument("--deps", type=Path, default=None)
    p.add_argument("--index", type=int, default=None, help="export a single example")
    p.add_argument("--language", choices=("arabic", "english"), default=None)
    _add_provider_flags(p)
    _add_common(p)

    return parser


def _merge_config(args: argparse.Namespace) -> RunConfig:
    file_values = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as f:
            file_values = json.load(f)
        if not isinstance(file_values, dict):
            raise ValidationError(f"{args.config}: config must be a JSON object")

    def pick(name, default=None):
        flag = getattr(args, name, None)
        if flag is not None:
            return flag
        if name in file_values:
            return file_values[name]
        return default

    vectors = pick("vectors")
    if vectors is not None and not isinstance(vectors, list):
        vectors = [vectors]
    no_csr = pick("no_csr", False)
    config = RunConfig(
        tables=pick("tables"),
        examples=pick("examples"),
        train=pick("train"),
        test=pick("test"),
        predictions=pick("predictions"),
        vectors=[Path(v) for v in vectors] if vectors else None,
        deps=pick("deps"),
        pairs=pick("pairs"),
        out=Path(p) if (p := pick("out")) else None,
        tau=float(pick("tau", DEFAULT_TAU)),
        csr=not no_csr,
        span_k=int(pick("span_k", 1)),
        provider=pick("provider"),
        endpoint=pick("endpoint", os.environ.get("EMBED_ENDPOINT")),
        jobs=int(pick("jobs", 1)),
        language=pick("language"),
        index=pick("index"),
    )
    config.validate()
    return config


def _make_provider(config: RunConfig):
    kind = config.provider
    if kind is None:
        if config.vectors:
            kind = "file"
        elif config.endpoint:
            kind = "remote"
    if kind == "file":
        if not config.vectors:
            raise ValidationError("file provider requires --vectors")
        store = FileVectorStore.load(config.vectors[0])
        return store
    if kind == "remote":
        if not config.endpoint:
            raise ValidationError("remote provider requires --endpoint or EMBED_ENDPOINT")
        return RemoteEmbeddingClient(config.endpoint)
    return None


def _require(config: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(config, n) is None]
    if missing:
        flags = ", ".join(f"--{n.replace('_', '-')}" for n in missing)
        raise ValidationError(f"missing required input: {flags}")


def _write_json(path: Path, doc) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, ensure_ascii=False, sort_keys=True, indent=2)
        f.write("\n")


def _stats_row(label: str, examples, schemas) -> tuple[str, dict]:
    if examples:
        stats = dataset.corpus_stats(examples, schemas)
        row = {
            "split": label,
            "n_questions": stats.n_questions,
            "n_distinct_sql": stats.n_distinct_sql,
            "n_databases": stats.n_databases,
            "avg_tables_per_db": round(stats.avg_tables_per_db, 2),
        }
    else:
        row = {
            "split": label,
            "n_questions": 0,
            "n_distinct_sql": 0,
            "n_databases": 0,
            "avg_tables_per_db": 0.0,
        }
    line = (
        f"{row['split']:<7} {row['n_questions']:>6} {row['n_distinct_sql']:>6}"
        f" {row['n_databases']:>5} {row['avg_tables_per_db']:>10.2f}"
    )
    return line, row


def cmd_stats(config: RunConfig) -> int:
    _require(config, "tables")
    schemas = dataset.load_schemas(config.tables)
    print(f"{'split':<7} {'#Q':>6} {'#SQL':>6} {'#DB':>5} {'tables/db':>10}")
    rows = []
    report = None
    if config.train or config.test:
        if not (config.train and config.test):
            raise ValidationError("stats needs both --train and --test, or --examples")
        train = dataset.load_examples(config.train, schemas, config.language)
        test = dataset.load_examples(config.test, schemas, config.language)
        for label, examples in (("all", train + test), ("train", train), ("test", test)):
            line, row = _stats_row(label, examples, schemas)
            print(line)
            rows.append(row)
        report = dataset.check_split_disjoint(train, test)
        print(f"split disjoint: {str(report.disjoint).lower()}")
        if not report.disjoint:
            print(f"overlap: {', '.join(sorted(report.overlap))}")
    else:
        if config.examples is None:
            raise ValidationError("stats needs --examples or --train/--test")
        examples = dataset.load_examples(config.examples, schemas, config.language)
        line, row = _stats_row("all", examples, schemas)
        print(line)
        rows.append(row)

    if config.out:
        doc = {"rows": rows}
        if report is not None:
            doc["disjoint"] = report.disjoint
            doc["overlap"] = sorted(report.overlap)
        _write_json(config.out / "stats.json", doc)
    if report is not None and not report.disjoint:
        return EXIT_DATA
    return EXIT_OK


def _link_config(config: RunConfig) -> LinkingConfig:
    return LinkingConfig(tau=config.tau, csr_enabled=config.csr, span_k=config.span_k)


def _stats_doc(stats) -> dict:
    return {
        "n_examples": stats.n_examples,
        "n_table_cosine": stats.n_table_cosine,
        "n_column_cosine": stats.n_column_cosine,
        "total_relations": stats.total_relations,
        "per_example_avg_table": round(stats.per_example_avg_table, 4),
        "per_example_avg_column": round(stats.per_example_avg_column, 4),
        "n_provider_misses": stats.n_provider_misses,
        "failures": [{"index": i, "reason": r} for i, r in stats.failures],
    }


def cmd_link(config: RunConfig) -> int:
    _require(config, "tables", "examples")
    if config.out is None:
        raise ValidationError("link requires --out")
    schemas = dataset.load_schemas(config.tables)
    examples = dataset.load_examples(config.examples, schemas, config.language)
    deps = load_dependency_edges(config.deps) if config.deps else None
    provider = _make_provider(config)
    if config.csr and provider is None:
        raise ValidationError("link with CSR needs a provider (--vectors or --endpoint); use --no-csr otherwise")
    matrices, stats = link_corpus(
        examples, schemas, provider, _link_config(config), jobs=config.jobs, deps=deps
    )
    export_matrices(matrices, examples, config.out)
    _write_json(config.out / "linkstats.json", _stats_doc(stats))
    print(f"examples: {stats.n_examples}")
    print(
        f"table cosine relations: {stats.n_table_cosine}"
        f" (avg {stats.per_example_avg_table:.2f} per example)"
    )
    print(
        f"column cosine relations: {stats.n_column_cosine}"
        f" (avg {stats.per_example_avg_column:.2f} per example)"
    )
    print(f"total cosine relations: {stats.total_relations}")
    if stats.n_provider_misses:
        print(f"warning: provider had no vector for {stats.n_provider_misses} texts")
    if stats.failures:
        print(f"warning: {len(stats.failures)} examples failed")
        for i, reason in stats.failures:
            print(f"  example {i}: {reason}")
    return EXIT_OK


def cmd_evaluate(config: RunConfig) -> int:
    _require(config, "tables", "examples", "predictions")
    schemas = dataset.load_schemas(config.tables)
    examples = dataset.load_examples(config.examples, schemas, config.language)
    predictions = load_predictions(config.predictions)
    if len(predictions) != len(examples):
        raise ValidationError(
            f"{len(predictions)} predictions for {len(examples)} gold examples"
        )
    report = run_evaluate(list(zip(predictions, examples)), schemas)
    print(format_report(report))
    if config.out:
        _write_json(config.out / "report.json", report_to_dict(report))
    return EXIT_OK


def _load_pairs(path: Path) -> list[tuple[str, str]]:
    pairs = []
    with open(path, encoding="utf-8") as f:
        for i, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            a, sep, b = line.partition("\t")
            if not sep:
                raise ValidationError(f"{path}:{i}: expected 'text_a<TAB>text_b'")
            pairs.append((a.strip(), b.strip()))
    return pairs


def cmd_simcheck(config: RunConfig) -> int:
    _require(config, "pairs")
    providers = []
    for path in config.vectors or []:
        providers.append(FileVectorStore.load(path))
    if config.endpoint:
        providers.append(RemoteEmbeddingClient(config.endpoint))
    if not providers:
        raise ValidationError("simcheck needs at least one provider (--vectors or --endpoint)")
    pairs = _load_pairs(config.pairs)
    report = similarity_matrix_report(providers, pairs)
    print(format_similarity_report(report))
    if config.out:
        doc = [
            {"provider": r.provider, "pair": r.label, "similarity": r.similarity, "error": r.error}
            for r in report.rows
        ]
        _write_json(config.out / "simcheck.json", {"rows": doc})
    return EXIT_OK


def cmd_export_matrix(config: RunConfig) -> int:
    _require(config, "tables", "examples")
    if config.out is None:
        raise ValidationError("export-matrix requires --out")
    schemas = dataset.load_schemas(config.tables)
    examples = dataset.load_examples(config.examples, schemas, config.language)
    deps = load_dependency_edges(config.deps) if config.deps else None
    if config.index is not None:
        if not 0 <= config.index < len(examples):
            raise ValidationError(f"--index {config.index} out of range for {len(examples)} examples")
        keep = config.index
        examples = [examples[keep]]
        deps = [deps[keep]] if deps is not None else None
    provider = _make_provider(config)
    link_config = _link_config(config)
    if provider is None:
        link_config = LinkingConfig(
            tau=link_config.tau, csr_enabled=False, span_k=link_config.span_k
        )
    matrices, _ = link_corpus(examples, schemas, provider, link_config, jobs=config.jobs, deps=deps)
    written = export_matrices(matrices, examples, config.out)
    print(f"wrote {len(written)} files to {config.out}")
    return EXIT_OK


_COMMANDS = {
    "stats": cmd_stats,
    "link": cmd_link,
    "evaluate": cmd_evaluate,
    "simcheck": cmd_simcheck,
    "export-matrix": cmd_export_matrix,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _merge_config(args)
        return _COMMANDS[args.command](config)
    except TransportError as e:
        print(f"transport error: {e}", file=sys.stderr)
        return EXIT_TRANSPORT
    except SpiderlinkError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
