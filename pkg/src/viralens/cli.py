"""Command-line interface: one subcommand per pipeline stage.

Exit codes: 0 success, 1 validation/usage error, 2 I/O or file-format error.
All randomness flows from --seed (default 42) through the splittable
generator, so identical invocations produce identical output files.
"""

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from pathlib import Path

from . import analytics, dss, lda, linalg, pipeline
from .archive import load_archive, save_archive
from .corpus import load_corpus, load_manifest, save_corpus
from .errors import ArchiveFormatError, ViralensError
from .vision import QuantizationConfig

_EXIT_OK = 0
_EXIT_VALIDATION = 1
_EXIT_IO = 2


class _UsageError(Exception):
    def __init__(self, parser: argparse.ArgumentParser, message: str):
        super().__init__(message)
        self.parser = parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(self, message)


def _write_out(content: str, out: str | None):
    if out:
        Path(out).write_text(content, encoding="utf-8")
    else:
        sys.stdout.write(content)
        if not content.endswith("\n"):
            sys.stdout.write("\n")


def _csv_text(rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def _quant_config(args) -> QuantizationConfig:
    return QuantizationConfig(
        bins_per_channel=args.bins, tokens_per_channel=args.tokens
    )


def _hyperparams(args, k: int) -> lda.LdaHyperparams:
    return lda.LdaHyperparams(
        k=k,
        alpha=args.alpha,
        eta=args.eta,
        sweeps=args.sweeps,
        burn_in=args.burn_in,
        seed=args.seed,
    )


def _parse_cluster_list(raw: str) -> list[int]:
    try:
        return [int(part) for part in raw.split(",") if part.strip() != ""]
    except ValueError:
        raise ValueError(f"expected comma-separated integers, got {raw!r}") from None


def cmd_ingest(args) -> int:
    bundle, warn = pipeline.ingest_corpus(
        args.manifest,
        cfg=_quant_config(args),
        seed=args.seed,
        dictionary_path=args.dictionary,
    )
    save_corpus(bundle, args.out)
    m, v = bundle.matrix.counts.shape
    print(f"ingested {m} documents, vocabulary {v} -> {args.out}")
    for message in warn:
        print(f"warning: {message}", file=sys.stderr)
    return _EXIT_OK


def cmd_features(args) -> int:
    records = load_manifest(args.manifest)
    cfg = _quant_config(args)
    base = Path(args.manifest).parent
    descriptors, bags = pipeline.extract_features(records, base, cfg, args.seed)
    if args.format == "json":
        payload = {
            doc_id: {
                "descriptor": [
                    {
                        "density": c.density,
                        "mean_rgb": list(c.mean_rgb),
                        "mean_hsv": list(c.mean_hsv),
                    }
                    for c in desc.clusters
                ],
                "bag": bags[doc_id],
            }
            for doc_id, desc in descriptors.items()
        }
        _write_out(json.dumps(payload, indent=1), args.out)
    else:
        lines = []
        for doc_id, desc in descriptors.items():
            lines.append(f"doc {doc_id}")
            for i, c in enumerate(desc.clusters):
                rgb = " ".join(f"{x:.4f}" for x in c.mean_rgb)
                hsv = " ".join(f"{x:.4f}" for x in c.mean_hsv)
                lines.append(
                    f"  cluster {i}: density {c.density:.4f} rgb {rgb} hsv {hsv}"
                )
            bag = " ".join(f"{w}:{n}" for w, n in sorted(bags[doc_id].items()))
            lines.append(f"  bag {bag}")
        _write_out("\n".join(lines) + "\n", args.out)
    return _EXIT_OK


def cmd_train(args) -> int:
    bundle = load_corpus(args.corpus)
    hp = _hyperparams(args, args.k)
    override = _parse_cluster_list(args.viral_override) if args.viral_override else None
    archive, _ = pipeline.train_archive(
        bundle, hp, viral_override=override, confidence=args.confidence
    )
    save_archive(archive, args.out)
    viral = sorted(archive.viral.clusters)
    print(f"trained k={hp.k} on {len(bundle.matrix.doc_ids)} documents -> {args.out}")
    print(f"viral clusters: {viral if viral else 'none'} (rule: {archive.viral.rule})")
    return _EXIT_OK


def cmd_select_k(args) -> int:
    bundle = load_corpus(args.corpus)
    candidates = _parse_cluster_list(args.k_candidates)
    template = _hyperparams(args, max(candidates))
    best_k, table = lda.select_k(bundle.matrix, candidates, args.restarts, template)
    if args.format == "json":
        _write_out(
            json.dumps(
                {"best_k": best_k, "log_likelihood": {str(k): table[k] for k in sorted(table)}},
                indent=1,
            ),
            args.out,
        )
    elif args.format == "csv":
        rows = [["k", "best_log_likelihood"]]
        rows += [[k, repr(table[k])] for k in sorted(table)]
        _write_out(_csv_text(rows), args.out)
    else:
        lines = [f"{'k':>4}  best log likelihood"]
        for k in sorted(table):
            marker = " <- selected" if k == best_k else ""
            lines.append(f"{k:>4}  {table[k]:.4f}{marker}")
        _write_out("\n".join(lines) + "\n", args.out)
    return _EXIT_OK


def cmd_reduce(args) -> int:
    bundle = load_corpus(args.corpus)
    dense = bundle.matrix.counts.toarray().astype(float)
    reduced, r, energy = linalg.reduce_energy(dense, threshold=args.threshold)
    rows = [["doc_id"] + [f"f{i + 1}" for i in range(r)]]
    for d, doc_id in enumerate(bundle.matrix.doc_ids):
        rows.append([doc_id] + [repr(float(x)) for x in reduced[d]])
    _write_out(_csv_text(rows), args.out)
    print(f"rank {r} retains {energy:.4f} of energy", file=sys.stderr)
    return _EXIT_OK


def _stats_rows(archive) -> list[list]:
    rows = [["cluster", "frequency", "mean", "variance", "label", "viral"]]
    for s in archive.cluster_stats:
        rows.append(
            [
                s.cluster,
                s.frequency,
                "" if s.mean is None else repr(s.mean),
                "" if s.variance is None else repr(s.variance),
                s.label,
                "yes" if s.cluster in archive.viral else "no",
            ]
        )
    return rows


def _test_rows(tests) -> list[list]:
    rows = [["cluster_a", "cluster_b", "t_stat", "df", "t_crit", "significant"]]
    for (i, j) in sorted(tests):
        result = tests[(i, j)]
        if result is None:
            rows.append([i, j, "", "", "", ""])
        else:
            rows.append(
                [i, j, repr(result.t_stat), result.df, repr(result.t_crit),
                 "yes" if result.significant else "no"]
            )
    return rows


def _stats_text(archive, tests) -> str:
    lines = ["cluster  freq        mean       variance  viral  label"]
    for s in archive.cluster_stats:
        mean = "-" if s.mean is None else f"{s.mean:.3f}"
        var = "-" if s.variance is None else f"{s.variance:.1f}"
        viral = "*" if s.cluster in archive.viral else " "
        lines.append(
            f"{s.cluster:>7}  {s.frequency:>4}  {mean:>10}  {var:>13}    {viral}    {s.label}"
        )
    lines.append("")
    lines.append("pairwise t-tests (t, critical value), * = significant at 95%")
    for (i, j) in sorted(tests):
        result = tests[(i, j)]
        if result is None:
            lines.append(f"  {i} vs {j}: undefined")
        else:
            star = "*" if result.significant else ""
            lines.append(
                f"  {i} vs {j}: ({result.t_stat:.2f}, {result.t_crit:.2f}){star}"
            )
    lines.append("")
    lines.append("note: no multiple-comparison correction is applied")
    return "\n".join(lines) + "\n"


def _archive_tests(archive, confidence: float):
    return analytics.pairwise_matrix(list(archive.cluster_stats), confidence)


def cmd_stats(args) -> int:
    archive = load_archive(args.archive)
    tests = _archive_tests(archive, args.confidence)
    if args.format == "json":
        payload = {
            "clusters": [
                {
                    "cluster": s.cluster,
                    "frequency": s.frequency,
                    "mean": s.mean,
                    "variance": s.variance,
                    "label": s.label,
                    "viral": s.cluster in archive.viral,
                }
                for s in archive.cluster_stats
            ],
            "pairwise_tests": [
                {
                    "cluster_a": i,
                    "cluster_b": j,
                    "t_stat": None if r is None else r.t_stat,
                    "df": None if r is None else r.df,
                    "t_crit": None if r is None else r.t_crit,
                    "significant": None if r is None else r.significant,
                }
                for (i, j), r in sorted(tests.items())
            ],
            "note": "no multiple-comparison correction is applied",
        }
        _write_out(json.dumps(payload, indent=1), args.out)
    elif args.format == "csv":
        content = _csv_text(_stats_rows(archive)) + "\n" + _csv_text(_test_rows(tests))
        _write_out(content, args.out)
    else:
        _write_out(_stats_text(archive, tests), args.out)
    return _EXIT_OK


def _score_payload(report: dss.ScoreReport) -> dict:
    return {
        "theta": [
            {"cluster": k, "label": report.labels[k], "probability": p}
            for k, p in enumerate(report.theta)
        ],
        "expected_activity": report.expected_activity,
        "viral_probability": report.viral_probability,
        "contributions": list(report.contributions),
    }


def _score_text(report: dss.ScoreReport) -> str:
    lines = ["cluster  probability  contribution  label"]
    for k, p in enumerate(report.theta):
        lines.append(
            f"{k:>7}  {p:>11.4f}  {report.contributions[k]:>12.3f}  {report.labels[k]}"
        )
    lines.append(f"expected activity: {report.expected_activity:.3f}")
    lines.append(f"viral probability: {report.viral_probability:.4f}")
    return "\n".join(lines) + "\n"


def cmd_score(args) -> int:
    archive = load_archive(args.archive)
    data = Path(args.image).read_bytes()
    report = dss.score(archive, data)
    if args.format == "json":
        _write_out(json.dumps(_score_payload(report), indent=1), args.out)
    elif args.format == "csv":
        rows = [["cluster", "probability", "contribution", "label"]]
        for k, p in enumerate(report.theta):
            rows.append([k, repr(p), repr(report.contributions[k]), report.labels[k]])
        rows.append(["expected_activity", repr(report.expected_activity), "", ""])
        rows.append(["viral_probability", repr(report.viral_probability), "", ""])
        _write_out(_csv_text(rows), args.out)
    else:
        _write_out(_score_text(report), args.out)
    return _EXIT_OK


def cmd_compare(args) -> int:
    archive = load_archive(args.archive)
    data_a = Path(args.image_a).read_bytes()
    data_b = Path(args.image_b).read_bytes()
    delta = dss.compare(archive, data_a, data_b)
    if args.format == "json":
        payload = {
            "a": _score_payload(delta.report_a),
            "b": _score_payload(delta.report_b),
            "delta_theta": list(delta.delta_theta),
            "delta_expected_activity": delta.delta_expected_activity,
            "delta_viral_probability": delta.delta_viral_probability,
        }
        _write_out(json.dumps(payload, indent=1), args.out)
    elif args.format == "csv":
        rows = [["cluster", "theta_a", "theta_b", "delta"]]
        for k in range(len(delta.delta_theta)):
            rows.append(
                [k, repr(delta.report_a.theta[k]), repr(delta.report_b.theta[k]),
                 repr(delta.delta_theta[k])]
            )
        rows.append(["delta_expected_activity", repr(delta.delta_expected_activity), "", ""])
        rows.append(["delta_viral_probability", repr(delta.delta_viral_probability), "", ""])
        _write_out(_csv_text(rows), args.out)
    else:
        lines = ["cluster     theta A     theta B       delta"]
        for k in range(len(delta.delta_theta)):
            lines.append(
                f"{k:>7}  {delta.report_a.theta[k]:>10.4f}  "
                f"{delta.report_b.theta[k]:>10.4f}  {delta.delta_theta[k]:>+10.4f}"
            )
        lines.append(f"delta expected activity: {delta.delta_expected_activity:+.3f}")
        lines.append(f"delta viral probability: {delta.delta_viral_probability:+.4f}")
        _write_out("\n".join(lines) + "\n", args.out)
    return _EXIT_OK


def cmd_report(args) -> int:
    archive = load_archive(args.archive)
    hp = archive.lda_model.hyperparams
    tests = _archive_tests(archive, args.confidence)
    if args.format == "json":
        payload = {
            "model": {
                "k": hp.k,
                "alpha": [float(a) for a in hp.alpha_vector()],
                "eta": hp.eta,
                "sweeps": hp.sweeps,
                "burn_in": hp.burn_in,
                "seed": hp.seed,
                "vocabulary_size": len(archive.vocabulary),
                "final_log_likelihood": archive.lda_model.ll_trace[-1]
                if archive.lda_model.ll_trace
                else None,
            },
            "viral_clusters": sorted(archive.viral.clusters),
            "viral_rule": archive.viral.rule,
            "labels": list(archive.labels),
        }
        _write_out(json.dumps(payload, indent=1), args.out)
    else:
        lines = [
            f"topics: {hp.k}   vocabulary: {len(archive.vocabulary)} words",
            f"alpha: {hp.alpha_vector()[0]:.4f} (symmetric)   eta: {hp.eta}",
            f"sweeps: {hp.sweeps} (burn-in {hp.burn_in})   seed: {hp.seed}",
        ]
        if archive.lda_model.ll_trace:
            lines.append(f"final log likelihood: {archive.lda_model.ll_trace[-1]:.4f}")
        lines.append(
            f"viral clusters: {sorted(archive.viral.clusters)} (rule: {archive.viral.rule})"
        )
        lines.append("")
        lines.append(_stats_text(archive, tests))
        _write_out("\n".join(lines), args.out)
    return _EXIT_OK


def cmd_trace(args) -> int:
    archive = load_archive(args.archive)
    rows = [["sweep", "log_likelihood"]]
    rows += [[i, repr(v)] for i, v in enumerate(archive.lda_model.ll_trace)]
    _write_out(_csv_text(rows), args.out)
    return _EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    archive_path = args.archive or os.environ.get("VIRALENS_ARCHIVE")
    if not archive_path:
        raise ViralensError("no archive given: pass --archive or set VIRALENS_ARCHIVE")
    port = args.port if args.port is not None else int(os.environ.get("VIRALENS_PORT", "8000"))
    archive = load_archive(archive_path)
    digest = hashlib.sha256(Path(archive_path).read_bytes()).hexdigest()[:12]
    app = create_app(archive, model_version=digest)
    uvicorn.run(app, host=args.host, port=port)
    return _EXIT_OK


def _add_quant_flags(p: argparse.ArgumentParser):
    p.add_argument("--bins", type=int, default=8, help="bins per color channel")
    p.add_argument("--tokens", type=int, default=100, help="pseudo-tokens per channel")


def _add_train_flags(p: argparse.ArgumentParser):
    p.add_argument("--alpha", type=float, default=None,
                   help="document-topic concentration (default 50/k)")
    p.add_argument("--eta", type=float, default=lda.DEFAULT_ETA)
    p.add_argument("--sweeps", type=int, default=500)
    p.add_argument("--burn-in", type=int, default=100, dest="burn_in")


def _add_format_flag(p: argparse.ArgumentParser, choices=("json", "csv", "text"),
                     default="text"):
    p.add_argument("--format", choices=choices, default=default)
    p.add_argument("--out", default=None, help="write output to a file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="viralens", description="Infographic virality pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="manifest -> corpus bundle")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dictionary", default=None, help="word-per-line filter for sidecars")
    p.add_argument("--seed", type=int, default=42)
    _add_quant_flags(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("features", help="per-document descriptors and bags")
    p.add_argument("--manifest", required=True)
    p.add_argument("--seed", type=int, default=42)
    _add_quant_flags(p)
    _add_format_flag(p, choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("train", help="corpus bundle -> model archive")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--confidence", type=float, default=0.95)
    p.add_argument("--viral-override", default=None, dest="viral_override",
                   help="comma-separated cluster ids to force as the viral set")
    _add_train_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("select-k", help="compare candidate topic counts")
    p.add_argument("--corpus", required=True)
    p.add_argument("--k-candidates", required=True, dest="k_candidates",
                   help="comma-separated, e.g. 2,3,4")
    p.add_argument("--restarts", type=int, default=3)
    p.add_argument("--seed", type=int, default=42)
    _add_train_flags(p)
    _add_format_flag(p)
    p.set_defaults(func=cmd_select_k)

    p = sub.add_parser("reduce", help="SVD projection of the doc-term matrix")
    p.add_argument("--corpus", required=True)
    p.add_argument("--threshold", type=float, default=0.95)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("stats", help="cluster statistics and pairwise tests")
    p.add_argument("--archive", required=True)
    p.add_argument("--confidence", type=float, default=0.95)
    _add_format_flag(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("score", help="score one image against an archive")
    p.add_argument("--archive", required=True)
    p.add_argument("--image", required=True)
    _add_format_flag(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("compare", help="what-if delta between two variants")
    p.add_argument("--archive", required=True)
    p.add_argument("--image-a", required=True, dest="image_a")
    p.add_argument("--image-b", required=True, dest="image_b")
    _add_format_flag(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("report", help="full model report")
    p.add_argument("--archive", required=True)
    p.add_argument("--confidence", type=float, default=0.95)
    _add_format_flag(p, choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("trace", help="training log-likelihood trace as CSV")
    p.add_argument("--archive", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("serve", help="HTTP scoring service")
    p.add_argument("--archive", default=None)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(func=cmd_serve)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc.parser.format_usage(), file=sys.stderr, end="")
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_VALIDATION
    try:
        return args.func(args)
    except ArchiveFormatError as exc:
        print(f"error [{args.command}]: {exc}", file=sys.stderr)
        return _EXIT_IO
    except OSError as exc:
        print(f"error [{args.command}]: {exc}", file=sys.stderr)
        return _EXIT_IO
    except (ViralensError, ValueError) as exc:
        print(f"error [{args.command}]: {exc}", file=sys.stderr)
        return _EXIT_VALIDATION


def entry():
    sys.exit(run(sys.argv[1:]))
