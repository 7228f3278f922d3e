"""Command-line front end for the invclust pipeline.

Every subcommand is a thin wrapper over a library operation; with --json the
output is exactly the library result serialized as JSON. Exit codes: 0 on
success, 1 on usage errors, 2 on corpus/runtime errors.
"""

import argparse
import json
import os
import re
import sys

from .anonymizer import anonymize, serialize_aast
from .clusterer import ClusterModel, closest_program, purity
from .corpus import (generate_synthetic_corpus, ingest, project_2d,
                     run_pipeline, write_corpus)
from .errors import (CSyntaxError, EmptyCandidates, EmptyCorpus,
                     MissingTests, TraceRuntimeError, UnresolvedIdentifier,
                     UnsupportedFeature)
from .invariants import detect, flatten
from .parser import parse
from .renamer import rename
from .tracer import Limits, TestCase, run_suite
from .unparse import unparse
from .vectorizer import FeatureVector, Vocabulary, represent, ProgramDocs

_MODE_ALIASES = {"syntax": "syntax", "aast": "aast", "inv": "inv",
                 "aast+inv": "aast_inv", "aast_inv": "aast_inv"}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _emit(args, payload, human):
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def _read_source(path):
    with open(path) as f:
        return f.read()


def _read_test_dir(path):
    """A flat directory of t<i>.in / t<i>.out pairs."""
    pattern = re.compile(r"t(\d+)\.in$")
    cases = []
    for fname in sorted(os.listdir(path)):
        m = pattern.match(fname)
        if not m:
            continue
        out_path = os.path.join(path, f"t{m.group(1)}.out")
        if not os.path.exists(out_path):
            raise MissingTests(path)
        with open(os.path.join(path, fname)) as f:
            stdin_text = f.read()
        with open(out_path) as f:
            expected = f.read()
        cases.append((int(m.group(1)), TestCase(stdin_text, expected)))
    if not cases:
        raise MissingTests(path)
    return [tc for _, tc in sorted(cases, key=lambda p: p[0])]


def _renamed_tree(path):
    tree = parse(_read_source(path))
    renamed, rmap = rename(tree)
    return renamed, rmap


def _limits(args):
    lim = Limits()
    if getattr(args, "max_steps", None):
        lim.max_steps = args.max_steps
    return lim


def cmd_rename(args):
    renamed, rmap = _renamed_tree(args.program)
    text = unparse(renamed)
    _emit(args, {"renamed": text, "mapping": rmap.as_dict()}, text.rstrip("\n"))
    return 0


def cmd_aast(args):
    renamed, _ = _renamed_tree(args.program)
    aast = serialize_aast(anonymize(renamed))
    _emit(args, {"aast": aast.text, "node_count": aast.node_count}, aast.text)
    return 0


def cmd_trace(args):
    renamed, _ = _renamed_tree(args.program)
    tests = _read_test_dir(args.tests)
    log, verdicts = run_suite(renamed, tests, _limits(args))
    payload = {"verdicts": verdicts, "trace": log.to_json()}
    lines = [f"t{i}: {v}" for i, v in enumerate(verdicts)]
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_invariants(args):
    renamed, _ = _renamed_tree(args.program)
    tests = _read_test_dir(args.tests)
    log, verdicts = run_suite(renamed, tests, _limits(args))
    if "error" in verdicts:
        sys.stderr.write("error: program failed during tracing\n")
        return 2
    inv = detect(log, args.min_samples)
    _emit(args, {"invariants": inv.as_dict(), "verdicts": verdicts},
          flatten(inv).rstrip("\n"))
    return 0


def cmd_cluster(args):
    mode = _MODE_ALIASES[args.mode]
    corpus = ingest(args.corpus, args.tests)
    arts = run_pipeline(
        corpus, mode=mode, k=args.k, k_frac=args.k_frac, seed=args.seed,
        subset=args.subset, n=args.n, idf=args.idf,
        min_samples=args.min_samples, out_dir=args.out,
        restarts=args.restarts)
    payload = {
        "purity": arts.purity,
        "k": arts.model.k,
        "clustered": arts.clustered_ids,
        "assignment": arts.model.assignment,
        "representatives": {str(c): pid
                            for c, pid in arts.model.representatives.items()},
        "exclusions": arts.exclusions,
    }
    human = (f"clustered {len(arts.clustered_ids)} programs into "
             f"{arts.model.k} clusters (purity {arts.purity:.4f})")
    if args.out:
        human += f"; artifacts in {args.out}"
    _emit(args, payload, human)
    return 0


def _load_model(path):
    with open(path) as f:
        d = json.load(f)
    model = ClusterModel(
        k=d["k"], seed=d["seed"], mode=d["mode"], centroids=d["centroids"],
        assignment=d["assignment"],
        representatives={int(c): pid
                         for c, pid in d["representatives"].items()},
        sse=d.get("sse", 0.0))
    model.vocab = Vocabulary.from_dict(d["vocab"])
    return model


def _load_vectors(model_path, ids):
    base = os.path.dirname(os.path.abspath(model_path))
    vectors = []
    for pid in ids:
        label, stem = pid.split("/", 1)
        vpath = os.path.join(base, label, f"{stem}.vector.json")
        with open(vpath) as f:
            d = json.load(f)
        vectors.append(FeatureVector(program_id=d["id"], values=d["values"]))
    return vectors


def cmd_representatives(args):
    model = _load_model(args.model)
    reps = {str(c): pid for c, pid in sorted(model.representatives.items())}
    human = "\n".join(f"{c}: {pid}" for c, pid in reps.items())
    _emit(args, {"representatives": reps}, human)
    return 0


def cmd_closest(args):
    model = _load_model(args.model)
    tree = parse(_read_source(args.program))
    renamed, _ = rename(tree)
    tests = _read_test_dir(args.tests)
    log, verdicts = run_suite(renamed, tests, _limits(args))
    if "error" in verdicts:
        sys.stderr.write("error: program failed during tracing\n")
        return 2
    inv = detect(log, args.min_samples)
    docs = ProgramDocs(
        renamed_source=unparse(renamed),
        aast_text=serialize_aast(anonymize(renamed)).text,
        inv_text=flatten(inv))
    query = represent(docs, model.vocab, "query")
    if args.all_candidates:
        ids = sorted(model.assignment)
    else:
        ids = sorted(model.representatives.values())
    candidates = _load_vectors(args.model, ids)
    pid, dist = closest_program(query, candidates)
    _emit(args, {"closest": pid, "distance": dist},
          json.dumps({"closest": pid, "distance": dist}))
    return 0


def cmd_purity(args):
    model = _load_model(args.model)
    labels = {pid: pid.split("/", 1)[0] for pid in model.assignment}
    p = purity(model.assignment, labels)
    _emit(args, {"purity": p}, f"purity {p:.4f}")
    return 0


def cmd_synth(args):
    corpus = generate_synthetic_corpus(args.seed, args.assignments,
                                       args.variants_per)
    write_corpus(corpus, args.out)
    count = sum(len(a.programs) for a in corpus.assignments.values())
    _emit(args, {"out": args.out, "assignments": sorted(corpus.assignments),
                 "programs": count},
          f"wrote {count} programs across {len(corpus.assignments)} "
          f"assignments to {args.out}")
    return 0


def cmd_project(args):
    with open(os.path.join(args.artifacts, "report.json")) as f:
        report = json.load(f)
    vectors = _load_vectors(os.path.join(args.artifacts, "model.json"),
                            report["clustered"])
    rows = project_2d(vectors)
    out_path = os.path.join(args.artifacts, "projection.csv")
    with open(out_path, "w") as f:
        f.write("id,x,y\n")
        for pid, x, y in rows:
            f.write(f"{pid},{x!r},{y!r}\n")
    _emit(args, {"csv": out_path, "points": len(rows)},
          f"wrote {len(rows)} points to {out_path}")
    return 0


def build_parser():
    parser = _Parser(prog="invclust",
                     description="Cluster C submissions by invariants and "
                                 "anonymized ASTs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true",
                       help="print machine-readable JSON")

    def tracing(p):
        p.add_argument("--tests", required=True,
                       help="directory of t<i>.in / t<i>.out files")
        p.add_argument("--max-steps", type=int, default=None)
        p.add_argument("--min-samples", type=int, default=2)

    p = sub.add_parser("rename", help="canonically rename variables")
    p.add_argument("program")
    common(p)
    p.set_defaults(func=cmd_rename)

    p = sub.add_parser("aast", help="print the anonymized AST string")
    p.add_argument("program")
    common(p)
    p.set_defaults(func=cmd_aast)

    p = sub.add_parser("trace", help="run a program on a test suite")
    p.add_argument("program")
    tracing(p)
    common(p)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("invariants", help="detect likely invariants")
    p.add_argument("program")
    tracing(p)
    common(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("cluster", help="run the full pipeline")
    p.add_argument("--corpus", required=True)
    p.add_argument("--tests", default=None,
                   help="tests root (default: <corpus>/tests)")
    p.add_argument("--mode", choices=sorted(_MODE_ALIASES),
                   default="aast+inv")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--k", type=int, default=None)
    group.add_argument("--k-frac", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=3, help="gram size")
    p.add_argument("--idf", action="store_true")
    p.add_argument("--min-samples", type=int, default=2)
    p.add_argument("--subset", choices=("correct-only", "all"),
                   default="correct-only")
    p.add_argument("--restarts", type=int, default=8,
                   help="best-of-R k-means restarts by SSE")
    p.add_argument("--threads", type=int,
                   default=int(os.environ.get("INVCLUST_THREADS", "0") or 0),
                   help="cap worker threads (0 = sequential)")
    p.add_argument("--out", default=None, help="artifact output directory")
    common(p)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("representatives",
                       help="list per-cluster representatives")
    p.add_argument("--model", required=True)
    common(p)
    p.set_defaults(func=cmd_representatives)

    p = sub.add_parser("closest",
                       help="closest correct program to a submission")
    p.add_argument("--model", required=True)
    p.add_argument("--program", required=True)
    tracing(p)
    p.add_argument("--all-candidates", action="store_true",
                   help="search all clustered programs, not representatives")
    common(p)
    p.set_defaults(func=cmd_closest)

    p = sub.add_parser("purity", help="purity of a persisted model")
    p.add_argument("--model", required=True)
    common(p)
    p.set_defaults(func=cmd_purity)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--assignments", type=int, default=3)
    p.add_argument("--variants-per", type=int, default=10)
    common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("project", help="2-D PCA projection of vectors")
    p.add_argument("--artifacts", required=True,
                   help="pipeline output directory (contains model.json)")
    common(p)
    p.set_defaults(func=cmd_project)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if e.code is not None else 1
    try:
        return args.func(args)
    except (CSyntaxError, UnsupportedFeature, UnresolvedIdentifier,
            TraceRuntimeError, EmptyCorpus, EmptyCandidates, MissingTests,
            FileNotFoundError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
