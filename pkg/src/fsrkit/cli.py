"""Command-line entry point: ``fsrkit <subcommand> [flags]``.

Reports go to stdout as text or CSV; ``--csv`` also writes the CSV to a file
and ``--figure``/``--plot-dir`` render PNG figures next to it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from . import machine as mc
from . import syntax as sx
from .pole import TEST_POLES, check_closure, member, parse_pole
from .verdict import Verdict

MCGEE_BOUND = 8

SUBCOMMANDS = ("parse", "encode", "eval", "pole", "sem", "revise", "transform",
               "proof", "mcgee", "suite")


# ---------------------------------------------------------------- config


@dataclass(frozen=True)
class Config:
    bound: int = 64
    fuel: int = 10_000
    depth: int = 32
    stages: int = 4
    corpus: tuple[str, ...] = ()
    strict_unknown: bool = False  # Unknowns in `suite` count as failures

    def __post_init__(self):
        for name in ("bound", "fuel", "depth", "stages"):
            if getattr(self, name) <= 0:
                raise ValueError(f"config {name} must be positive")

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ",".join(v)
            elif isinstance(v, bool):
                v = "true" if v else "false"
            lines.append(f"{f.name}={v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Config":
        known = {f.name for f in fields(cls)}
        values: dict = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if not sep or key not in known:
                raise ValueError(f"config line {lineno}: expected key=value with key in {sorted(known)}")
            if key == "corpus":
                values[key] = tuple(p.strip() for p in val.split(",") if p.strip())
            elif key == "strict_unknown":
                values[key] = val.lower() in ("1", "true", "yes")
            else:
                values[key] = int(val.replace("_", ""))
        return cls(**values)

    @classmethod
    def load(cls, source: str | None) -> "Config":
        if source in (None, "default"):
            return cls()
        return cls.from_text(Path(source).read_text())

    def with_overrides(self, **kw) -> "Config":
        data = asdict(self)
        data.update({k: v for k, v in kw.items() if v is not None})
        data["corpus"] = tuple(data["corpus"])
        return Config(**data)


# ---------------------------------------------------------------- helpers


def _corpus_sentences(cfg: Config) -> list[sx.Formula]:
    """Sentences from the config's corpus files (one per line, # comments)."""
    out = []
    for path in cfg.corpus:
        for line in Path(path).read_text().splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                out.append(sx.parse_any(line))
    return out


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit_csv(args, header, rows):
    text = _csv_text(header, rows)
    sys.stdout.write(text)
    if getattr(args, "csv", None):
        Path(args.csv).parent.mkdir(parents=True, exist_ok=True)
        Path(args.csv).write_text(text)


def _pole(args, cfg: Config):
    return parse_pole(_pole_spec(args) or "empty", fuel=cfg.fuel, depth=cfg.depth)


def _pole_spec(args) -> str | None:
    seed = getattr(args, "seed", None)
    return f"seed:{seed}" if seed else args.pole


def _membership(poles, upto: int, cfg: Config) -> dict[str, list[Verdict]]:
    return {p.name: [member(p, n, cfg.fuel, cfg.depth) for n in range(upto + 1)] for p in poles}


# ---------------------------------------------------------------- subcommands


def cmd_parse(args, cfg):
    f = sx.parse_formula(args.formula, args.language)
    langs = [name for name in ("L", "LT", "LR") if sx.in_language(f, name)]
    print(sx.print_formula(f))
    print(f"languages: {', '.join(langs) or 'none'}")
    print(f"free variables: {', '.join(sorted(sx.free_vars(f))) or 'none'}")
    print(f"code: {sx.encode(f)}")
    return 0


def cmd_encode(args, cfg):
    if args.decode is not None:
        x = sx.decode(args.decode)
        if x is None:
            print("not a code")
            return 1
        print(sx.show(x))
        return 0
    x = sx.parse_term(args.term) if args.term else sx.parse_any(args.formula)
    print(sx.encode(x))
    return 0


def cmd_eval(args, cfg):
    code = mc.compile_lambda(args.lam) if args.lam else args.code
    res = mc.eval_code(code, args.arg, cfg.fuel)
    if isinstance(res, mc.Value):
        print(f"Value({res.n})")
    else:
        print(f"OutOfFuel({cfg.fuel})")
    return 0


def cmd_pole(args, cfg):
    poles = [_pole(args, cfg)] if _pole_spec(args) else [parse_pole(s, fuel=cfg.fuel, depth=cfg.depth)
                                                          for s in TEST_POLES]
    action = "check" if args.closure else args.action
    if action == "member" and args.n is None:
        raise ValueError("pole member needs --n")
    if action == "check":
        for p in poles:
            rep = check_closure(p, args.code_bound, args.arg_bound, cfg.fuel)
            print(f"{p.name}: checked {rep.checked}, halting {rep.halting}, "
                  f"violations {len(rep.violations)}")
        return 0
    if action == "member" or (action is None and args.n is not None):
        for p in poles:
            print(f"{p.name}: {member(p, args.n, cfg.fuel, cfg.depth)}")
        return 0
    table = _membership(poles, args.upto, cfg)
    _emit_csv(args, ["pole", "n", "verdict"],
              [(name, n, str(v)) for name, vs in table.items() for n, v in enumerate(vs)])
    _figures(args, pole_table=(list(range(args.upto + 1)), table))
    return 0


def cmd_sem(args, cfg):
    from .semantics import ct_truth, eval_LR, realises_L, refutes_L, stage_models
    p = _pole(args, cfg)
    if args.action == "truth":
        v = ct_truth(sx.parse_formula(args.formula, "LT"), cfg.bound, cfg.fuel)
    elif args.action in ("refute", "realise"):
        A = sx.parse_formula(args.formula, "L")
        fn = refutes_L if args.action == "refute" else realises_L
        v = fn(p, args.n, A, cfg.bound, cfg.fuel)
    else:
        m = stage_models(p, cfg.stages, cfg.bound, cfg.fuel)[cfg.stages]
        v = eval_LR(m, sx.parse_formula(args.formula, "LR"))
    print(v)
    return 0


def cmd_revise(args, cfg):
    from .semantics import eval_LR, stage_models
    p = _pole(args, cfg)
    watched = [sx.parse_formula(w, "LR") for w in (args.watch or [])] + _corpus_sentences(cfg)
    if not watched:
        raise ValueError("revise needs at least one --watch sentence or a corpus file")
    models = stage_models(p, cfg.stages, cfg.bound, cfg.fuel)
    rows = []
    for k, m in enumerate(models):
        for A in watched:
            rows.append((k, sx.print_formula(A), eval_LR(m, A)))
    _emit_csv(args, ["stage", "sentence", "verdict"], [(k, s, str(v)) for k, s, v in rows])
    upto = min(cfg.bound, 24)
    _figures(args, heatmap=rows,
             pole_table=(list(range(upto + 1)), _membership([p], upto, cfg)))
    return 0


def cmd_transform(args, cfg):
    from .transforms import (explicit_realiser, explicit_refuter, translate_empty,
                             translate_FS, translate_N)
    from .transforms import explicit_form
    A = sx.parse_any(args.formula)
    trace: list[str] = []
    if args.kind in ("refuter", "realiser", "explicit"):
        s = sx.parse_term(args.term or "a")
        form = explicit_form(s, A, "refuter" if args.kind == "refuter" else "realiser")
        out, trace = form.result, form.trace
    else:
        kind = "N" if args.kind == "nat" else args.kind
        out = {"fs": translate_FS, "empty": translate_empty, "N": translate_N}[kind](A)
    print(sx.print_formula(out))
    if args.trace:
        for step in trace:
            print(f"# {step}")
    return 0


def cmd_proof(args, cfg):
    from .proofs import check, extract, load_derivation
    if args.action == "export":
        from .corpus import fsr_corpus, pa_corpus
        out = Path(args.dir)
        out.mkdir(parents=True, exist_ok=True)
        items = [(d, "PA") for d in pa_corpus()] + list(fsr_corpus())
        for d, theory in items:
            (out / f"{d.name}.json").write_text(json.dumps(d.to_json(theory), indent=1, ensure_ascii=False))
        print(f"wrote {len(items)} derivations to {out}")
        return 0
    if not args.file:
        raise ValueError("proof check/extract needs --file")
    d, file_theory = load_derivation(args.file)
    theory = args.theory or file_theory or "PA"
    result = check(d, theory)
    if args.action == "check":
        print(result)
        return 0 if result else 1
    if not result:
        print(result)
        return 1
    cert = extract(d, theory)
    text = json.dumps(cert.to_json(), indent=1, ensure_ascii=False)
    if args.output:
        Path(args.output).write_text(text)
    print(text)
    return 0


def cmd_mcgee(args, cfg):
    from .selfref import (build_gamma, chain_stage, gamma_iff_empty_check,
                          verify_chain)
    from .semantics import stage_models
    stages = min(cfg.stages, args.max_stage)
    # γ's T nesting outgrows the general default bound; 8 unless given
    bound = getattr(args, "bound", None) or MCGEE_BOUND
    if args.action == "gamma":
        cert = build_gamma()
        print(f"γ: {sx.print_formula(cert.sentence)[:200]}")
        print(f"code bits: {cert.sentence_code.bit_length()}; identity holds: {cert.identity_holds()}")
        return 0
    if args.action == "chain":
        m = stage_models(_pole(args, cfg), stages, bound, cfg.fuel)[stages]
        rep = verify_chain(m, args.levels)
        rows = [(stages, lv.level, chain_stage(lv.level) <= stages, str(lv.verdict)) for lv in rep.levels]
        _emit_csv(args, ["stage", "level", "settled", "verdict"], rows)
        return 0
    poles = [p.strip() for p in args.poles.split(",")] if args.poles else list(TEST_POLES[:3])
    rows = gamma_iff_empty_check(poles, stages=stages, bound=bound, fuel=cfg.fuel)
    _emit_csv(args, ["pole", "pole_empty", "gamma", "matches"],
              [(r.pole, r.pole_empty, str(r.gamma), r.matches) for r in rows])
    return 0 if all(r.matches for r in rows) else 1


def cmd_suite(args, cfg):
    from .acceptance import run_criteria
    select = {int(x) for x in args.only.split(",")} if args.only else None
    results = run_criteria(select, on_result=lambda r: print(r.line(), flush=True))
    hard = [r for r in results if not r.passed]
    soft = [r for r in results if r.passed and r.unknowns]
    print()
    print(_csv_text(["criterion", "title", "result", "unknowns", "seconds"],
                    [(r.number, r.title, "pass" if r.passed else "fail", r.unknowns,
                      f"{r.seconds:.2f}") for r in results]), end="")
    failures = len(hard) + (len(soft) if cfg.strict_unknown else 0)
    print(f"hard failures: {len(hard)}; criteria with Unknown verdicts: {len(soft)}"
          + (" (strict)" if cfg.strict_unknown else ""))
    if args.csv:
        Path(args.csv).write_text(_csv_text(
            ["criterion", "title", "result", "unknowns", "seconds", "detail"],
            [(r.number, r.title, "pass" if r.passed else "fail", r.unknowns,
              f"{r.seconds:.2f}", r.detail) for r in results]))
    return 1 if failures else 0


def _figures(args, heatmap=None, pole_table=None):
    figure, plot_dir = getattr(args, "figure", None), getattr(args, "plot_dir", None)
    if not (figure or plot_dir):
        return
    from . import plotting
    written = []
    if figure:
        if heatmap is not None:
            written.append(plotting.verdict_heatmap(heatmap, figure))
        elif pole_table is not None:
            written.append(plotting.pole_table(*pole_table, figure))
    if plot_dir:
        if heatmap is not None:
            written.append(plotting.verdict_heatmap(heatmap, Path(plot_dir) / "revision_heatmap.png"))
        if pole_table is not None:
            written.append(plotting.pole_table(*pole_table, Path(plot_dir) / "pole_table.png"))
    for path in written:
        print(f"# figure: {path}", file=sys.stderr)


# ---------------------------------------------------------------- parser


def _common() -> argparse.ArgumentParser:
    # SUPPRESS keeps a flag given before the subcommand from being reset after it
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, default=argparse.SUPPRESS)
    common.add_argument("--fuel", type=int, default=argparse.SUPPRESS)
    common.add_argument("--depth", type=int, default=argparse.SUPPRESS)
    common.add_argument("--stages", type=int, default=argparse.SUPPRESS)
    common.add_argument("--pole", default=argparse.SUPPRESS, help="empty | full | seed:<n,...>")
    common.add_argument("--config", default=argparse.SUPPRESS,
                        help="key=value file, or 'default'")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="fsrkit", parents=[common],
                                     description="Realisability semantics and revision experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    def reports(p):
        p.add_argument("--csv", help="also write the CSV report here")
        p.add_argument("--figure", help="write the main figure (PNG) here")
        p.add_argument("--plot-dir", help="write all figures (PNG) into this directory")

    p = add("parse", "parse and print a formula")
    p.add_argument("--formula", required=True)
    p.add_argument("--language", choices=("L", "LT", "LR"))

    p = add("encode", "Gödel code of a formula or term, or decode a code")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--formula")
    g.add_argument("--term")
    g.add_argument("--decode", type=int)

    p = add("eval", "run a program code on an argument")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--code", type=int)
    g.add_argument("--lambda", dest="lam", help="λ-source, compiled first")
    p.add_argument("--arg", type=int, default=0)

    p = add("pole", "pole membership table or closure sweep")
    p.add_argument("action", nargs="?", choices=("member", "check", "table"),
                   help="default: one number with --n, else the table")
    p.add_argument("--seed", help="seed elements, e.g. 3,8 (same as --pole seed:3,8)")
    p.add_argument("--n", type=int)
    p.add_argument("--upto", type=int, default=24)
    p.add_argument("--closure", action="store_true", help="same as the check action")
    p.add_argument("--code-bound", type=int, default=200)
    p.add_argument("--arg-bound", type=int, default=50)
    reports(p)

    p = add("sem", "bounded semantics: refute | realise | truth | eval")
    p.add_argument("action", choices=("refute", "realise", "truth", "eval"))
    p.add_argument("--formula", required=True)
    p.add_argument("--n", type=int, default=0)

    p = add("revise", "verdicts of watched sentences across revision stages")
    p.add_argument("--watch", action="append", help="L_R sentence; repeatable")
    reports(p)

    p = add("transform", "translations and explicit forms")
    p.add_argument("kind", choices=("fs", "empty", "N", "nat", "explicit", "refuter", "realiser"),
                   help="explicit is the realiser form; nat is N")
    p.add_argument("--formula", required=True)
    p.add_argument("--term", help="realiser/refuter term for explicit forms")
    p.add_argument("--trace", action="store_true", help="print the expansion steps")

    p = add("proof", "check or extract from a derivation file, or export the corpus")
    p.add_argument("action", choices=("check", "extract", "export"))
    p.add_argument("--file")
    p.add_argument("--theory")
    p.add_argument("--output", help="write the realiser certificate JSON here")
    p.add_argument("--dir", default="proofs")

    p = add("mcgee", "γ certificate, realiser chain, γ/emptiness table")
    p.add_argument("action", choices=("gamma", "chain", "table"))
    p.add_argument("--levels", "--k", dest="levels", type=int, default=2)
    p.add_argument("--poles", help="comma-separated poles for the table")
    p.add_argument("--max-stage", type=int, default=3,
                   help="cap on revision stages (nesting grows threefold per stage)")
    reports(p)

    p = add("suite", "run the acceptance criteria and print a pass/fail matrix")
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.add_argument("--csv")
    return parser


_HANDLERS = {
    "parse": cmd_parse, "encode": cmd_encode, "eval": cmd_eval, "pole": cmd_pole,
    "sem": cmd_sem, "revise": cmd_revise, "transform": cmd_transform,
    "proof": cmd_proof, "mcgee": cmd_mcgee, "suite": cmd_suite,
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = Config.load(getattr(args, "config", None)).with_overrides(
            bound=getattr(args, "bound", None) if args.command != "mcgee" else None,
            fuel=getattr(args, "fuel", None), depth=getattr(args, "depth", None),
            stages=getattr(args, "stages", None))
        if not hasattr(args, "pole"):
            args.pole = None
        return _HANDLERS[args.command](args, cfg)
    except (ValueError, OSError, sx.ParseError) as e:
        print(f"fsrkit {args.command}: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
