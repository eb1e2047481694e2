"""Command-line entry points, one subcommand per pipeline stage.

Every subcommand takes ``--config`` plus optional overrides (``--seed``,
``--jobs``, ``--out``); flags win over config values. Stage subcommands read
the previous stage's artifact from the output directory (overridable) and
write their own, so the pipeline can be driven step by step or in one go
with ``pipeline``.

Exit codes: 0 success, 2 config error, 3 data validation error,
4 computation error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ComputationError, ConfigError, DebatesumError, ParseError, ValidationError
from .evalkit import krippendorff_alpha, mann_whitney_u
from .pipeline import (
    PipelineConfig,
    compute_alignment,
    compute_annotations,
    compute_charts,
    compute_clusters,
    compute_labels,
    compute_rouge_table,
    compute_salient,
    compute_silhouette_report,
    dump_debug_matrices,
    load_config,
    load_inputs,
    read_json,
    render_chart,
    run_pipeline,
    slugify,
    to_json_bytes,
    write_json,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VALIDATION = 3
EXIT_COMPUTATION = 4


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="pipeline config JSON")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--jobs", type=int, default=None, help="parallel topics limit")
    parser.add_argument("--out", default=None, help="override the output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="debatesum",
        description="Summarize two-sided debates into Chart Summaries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    _add_common(sub.add_parser("annotate", help="annotate sentences with ontology terms"))
    _add_common(sub.add_parser("select", help="select salient sentences per comment"))

    p = sub.add_parser("cluster", help="cluster the salient sentences of each side")
    _add_common(p)
    p.add_argument("--method", choices=("term", "xmeans"), default=None)
    p.add_argument("--annotations", default=None, help="annotations.json path")
    p.add_argument("--salient", default=None, help="salient.json path")
    p.add_argument(
        "--dump-matrix", action="store_true",
        help="also write similarity matrices and reduced points per topic and side",
    )

    p = sub.add_parser("label", help="label every cluster")
    _add_common(p)
    p.add_argument("--method", choices=("shared", "tfidf", "mi"), default=None)
    p.add_argument("--clusters", default=None, help="clusters.json path")
    p.add_argument("--annotations", default=None, help="annotations.json path")

    p = sub.add_parser("align", help="align agree and disagree clusters by label")
    _add_common(p)
    p.add_argument("--clusters", default=None)
    p.add_argument("--labels", default=None)

    p = sub.add_parser("chart", help="render the Chart Summary per topic")
    _add_common(p)
    p.add_argument("--clusters", default=None)
    p.add_argument("--labels", default=None)
    p.add_argument("--alignment", default=None)

    p = sub.add_parser("eval", help="evaluation metrics")
    eval_sub = p.add_subparsers(dest="metric", required=True)
    _add_common(eval_sub.add_parser("rouge", help="per-feature ROUGE table against gold"))
    pe = eval_sub.add_parser("silhouette", help="silhouette of a clustering artifact")
    _add_common(pe)
    pe.add_argument("--clusters", default=None)
    pe.add_argument("--annotations", default=None)
    ps = eval_sub.add_parser("stats", help="Mann-Whitney U and Krippendorff's alpha")
    ps.add_argument("--ratings", required=True, help="ratings JSON file")
    ps.add_argument("--out", default=None, help="write the report here instead of stdout")

    _add_common(sub.add_parser("pipeline", help="run every stage and write a manifest"))
    return parser


def _config_from_args(args: argparse.Namespace) -> PipelineConfig:
    overrides: dict[str, object] = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.jobs is not None:
        overrides["jobs"] = args.jobs
    if args.out is not None:
        overrides["output_dir"] = args.out
    if getattr(args, "method", None) is not None:
        if args.command == "cluster":
            overrides["clustering_method"] = args.method
        elif args.command == "label":
            overrides["labeling_method"] = args.method
    return load_config(args.config, overrides)


def _artifact(args: argparse.Namespace, attr: str, config: PipelineConfig, default: str) -> Path:
    value = getattr(args, attr, None)
    return Path(value) if value else Path(config.output_dir) / default


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "eval" and args.metric == "stats":
        return _cmd_eval_stats(args)

    config = _config_from_args(args)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    if args.command == "pipeline":
        manifest = run_pipeline(config)
        print(f"wrote {len(manifest['artifacts']) + 1} artifacts to {out}")
        return EXIT_OK

    if args.command == "annotate":
        inputs = load_inputs(config)
        doc = compute_annotations(inputs.corpus, inputs.gazetteer, inputs.synonyms, config.seed)
        write_json(out / "annotations.json", doc)
        print(f"wrote {out / 'annotations.json'}")
        return EXIT_OK

    if args.command == "select":
        inputs = load_inputs(config)
        doc = compute_salient(
            inputs.corpus, inputs.lexicons, config.feature, config.ratio,
            config.signature_threshold, config.seed,
        )
        write_json(out / "salient.json", doc)
        print(f"wrote {out / 'salient.json'}")
        return EXIT_OK

    if args.command == "cluster":
        inputs = load_inputs(config)
        annotations = read_json(_artifact(args, "annotations", config, "annotations.json"))
        salient = read_json(_artifact(args, "salient", config, "salient.json"))
        doc = compute_clusters(
            inputs.corpus, annotations, salient, inputs.synonyms, inputs.gazetteer, config
        )
        write_json(out / "clusters.json", doc)
        print(f"wrote {out / 'clusters.json'}")
        if args.dump_matrix:
            written = dump_debug_matrices(
                inputs.corpus, annotations, salient, inputs.synonyms, inputs.gazetteer,
                config, out,
            )
            print(f"wrote {len(written)} matrix dumps to {out}")
        return EXIT_OK

    if args.command == "label":
        annotations = read_json(_artifact(args, "annotations", config, "annotations.json"))
        clusters = read_json(_artifact(args, "clusters", config, "clusters.json"))
        doc = compute_labels(clusters, annotations, config.labeling_method, config.seed)
        write_json(out / "labels.json", doc)
        print(f"wrote {out / 'labels.json'}")
        return EXIT_OK

    if args.command == "align":
        inputs = load_inputs(config)
        clusters = read_json(_artifact(args, "clusters", config, "clusters.json"))
        labels = read_json(_artifact(args, "labels", config, "labels.json"))
        doc = compute_alignment(
            clusters, labels, inputs.synonyms, config.alignment_threshold, config.seed
        )
        write_json(out / "alignment.json", doc)
        print(f"wrote {out / 'alignment.json'}")
        return EXIT_OK

    if args.command == "chart":
        clusters = read_json(_artifact(args, "clusters", config, "clusters.json"))
        labels = read_json(_artifact(args, "labels", config, "labels.json"))
        alignment = read_json(_artifact(args, "alignment", config, "alignment.json"))
        charts = compute_charts(clusters, alignment, labels)
        for topic_id, chart in charts.items():
            slug = slugify(topic_id)
            (out / f"chart_{slug}.json").write_bytes(render_chart(chart, "json"))
            (out / f"chart_{slug}.html").write_bytes(render_chart(chart, "html"))
            print(f"wrote chart_{slug}.json and chart_{slug}.html in {out}")
        return EXIT_OK

    if args.command == "eval":
        if args.metric == "rouge":
            inputs = load_inputs(config)
            if not inputs.gold:
                raise ConfigError("eval rouge needs gold_path in the config")
            table = compute_rouge_table(
                inputs.corpus, inputs.gold, inputs.lexicons,
                ratio=config.ratio, signature_threshold=config.signature_threshold,
            )
            write_json(out / "evaluation_rouge.json", {"rouge": table, "seed": config.seed})
            print(f"wrote {out / 'evaluation_rouge.json'}")
            return EXIT_OK
        if args.metric == "silhouette":
            inputs = load_inputs(config)
            annotations = read_json(_artifact(args, "annotations", config, "annotations.json"))
            clusters = read_json(_artifact(args, "clusters", config, "clusters.json"))
            report = compute_silhouette_report(
                clusters, annotations, inputs.gazetteer, inputs.synonyms
            )
            write_json(out / "evaluation_silhouette.json", {"silhouette": report, "seed": config.seed})
            print(f"wrote {out / 'evaluation_silhouette.json'}")
            return EXIT_OK

    raise ConfigError(f"unknown command {args.command!r}")


def _cmd_eval_stats(args: argparse.Namespace) -> int:
    """Statistics over a ratings file.

    Input JSON may carry ``samples: {"a": [...], "b": [...]}`` for the
    Mann-Whitney U test and/or ``ratings`` (coder-by-item matrix, null for
    missing) with an optional ``metric`` for Krippendorff's alpha.
    """
    path = Path(args.ratings)
    if not path.is_file():
        raise ConfigError(f"ratings file not found: {path}")
    doc = read_json(path)
    report: dict = {"mann_whitney": None, "krippendorff_alpha": None}
    if "samples" in doc:
        samples = doc["samples"]
        if not isinstance(samples, dict) or set(samples) != {"a", "b"}:
            raise ValidationError('ratings "samples" must have exactly keys "a" and "b"')
        result = mann_whitney_u(samples["a"], samples["b"])
        report["mann_whitney"] = {
            "u_a": result.u_a,
            "u_b": result.u_b,
            "z": result.z,
            "p_two_sided": result.p_two_sided,
            "effect_r": result.effect_r,
        }
    if "ratings" in doc:
        metric = doc.get("metric", "nominal")
        report["krippendorff_alpha"] = {
            "metric": metric,
            "alpha": krippendorff_alpha(doc["ratings"], metric=metric),
        }
    if report["mann_whitney"] is None and report["krippendorff_alpha"] is None:
        raise ValidationError('ratings file needs "samples" and/or "ratings"')
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_bytes(to_json_bytes(report))
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(to_json_bytes(report).decode("utf-8"))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ParseError, ValidationError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ComputationError, DebatesumError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION


if __name__ == "__main__":
    sys.exit(main())
