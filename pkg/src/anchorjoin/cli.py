"""Command-line front end: ``anchorjoin {join,eval,gen,stats}``."""

from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .dataset import StringRecord, alphabet, load_dataset, write_dataset
from .evalbench import (
    SyntheticSpec,
    anchor_statistics,
    brute_force_join,
    generate_synthetic,
    measure_recall,
    write_anchor_csv,
    write_metric_csv,
    write_stage_csv,
)
from .gramhash import GramHasher, derive_seed
from .joincore import JoinResult, min_join
from .minhash import MinHashParams, minhash_join
from .partition import PartitionParams, default_gram_length

log = logging.getLogger("anchorjoin")

ENGINES = ("minjoin", "minhash", "brute")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    output: str | None = None
    K: int | None = None
    T: int | None = None
    q: int | None = None
    repetitions: int = 1
    engine: str = "minjoin"
    seed: int = 0
    threads: int = 1
    fixture_hash: str | None = None
    ell: int = 4
    timings: str | None = None
    sweep_T: bool = False
    # gen / stats
    truth: str | None = None
    n: int = 1000
    length: int = 1000
    alphabet_size: int = 4
    clusters: int = 0
    cluster_size: int = 2
    k_plant: int = 0
    runs: int = 200

    def validate(self) -> None:
        if self.command not in ("join", "eval", "gen", "stats"):
            raise ConfigError(f"unknown command {self.command!r}")
        if self.engine not in ENGINES:
            raise ConfigError(f"unknown engine {self.engine!r}")
        if self.command in ("join", "eval"):
            if self.K is None or self.K < 0:
                raise ConfigError("K must be given and >= 0")
            if not self.input:
                raise ConfigError("--input is required")
        if self.command == "gen" and not self.output:
            raise ConfigError("--output is required")
        if self.command == "stats" and self.T is None:
            raise ConfigError("T must be given for stats")
        for name in ("T", "q"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.repetitions < 1 or self.threads < 1 or self.ell < 1 or self.runs < 1:
            raise ConfigError("repetitions, threads, ell and runs must be >= 1")
        if self.fixture_hash and self.engine == "brute":
            raise ConfigError("--fixture-hash has no effect with the brute engine")
        if self.fixture_hash and self.repetitions > 1:
            raise ConfigError("--fixture-hash is a single fixed hasher; repetitions need seeds")
        if self.sweep_T and self.command != "eval":
            raise ConfigError("--sweep-T only applies to eval")


def default_T(K: int) -> int:
    return max(1, math.ceil(K / 5))


def effective_params(cfg: RunConfig, records: list[StringRecord]) -> dict:
    """Fill T and q defaults from the data."""
    K = cfg.K or 0
    T = cfg.T if cfg.T is not None else default_T(K)
    lengths = [len(r.data) for r in records]
    q = cfg.q
    if q is None:
        sigma = max(2, len(alphabet(records)))
        q = default_gram_length(max(lengths), T, sigma, min(lengths))
    return {"T": T, "q": q}


def _hasher(cfg: RunConfig) -> GramHasher | None:
    return GramHasher.load_fixture(cfg.fixture_hash) if cfg.fixture_hash else None


def run_engine(cfg: RunConfig, records: list[StringRecord], T: int, q: int) -> JoinResult:
    if cfg.engine == "minjoin":
        params = PartitionParams(T=T, q=q, repetitions=cfg.repetitions, seed=cfg.seed)
        return min_join(records, cfg.K, params, _hasher(cfg), threads=cfg.threads)
    if cfg.engine == "minhash":
        return minhash_join(records, cfg.K, MinHashParams(q=q, ell=cfg.ell, seed=cfg.seed),
                            _hasher(cfg), threads=cfg.threads)
    from .joincore import JoinStats

    start = time.perf_counter()
    pairs = sorted(brute_force_join(records, cfg.K))
    stats = JoinStats(verifications=len(records) * (len(records) - 1) // 2)
    stats.timings["verify"] = time.perf_counter() - start
    return JoinResult(pairs, stats)


def metadata(cfg: RunConfig, **params) -> list[str]:
    meta = {"version": __version__, "command": cfg.command, "engine": cfg.engine,
            "K": cfg.K, "seed": cfg.seed}
    if cfg.engine != "brute":
        meta.update(params)
        if cfg.engine == "minjoin":
            meta["repetitions"] = cfg.repetitions
        else:
            meta["ell"] = cfg.ell
            meta.pop("T", None)
        meta["hasher"] = f"fixture:{Path(cfg.fixture_hash).name}" if cfg.fixture_hash else "rolling-random"
    return [f"# {k}={v}" for k, v in meta.items()]


def write_pairs(path: str | None, header: list[str], pairs) -> None:
    lines = header + [f"{a}\t{b}\t{d}" for a, b, d in sorted(set(pairs))]
    text = "\n".join(lines) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from exc


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from exc


def cmd_join(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    records = load_dataset(cfg.input)
    read = time.perf_counter() - t0
    params = effective_params(cfg, records)
    result = run_engine(cfg, records, **params)
    write_pairs(cfg.output, metadata(cfg, **params), result.pairs)
    if cfg.timings:
        write_stage_csv(cfg.timings, {"read": read, **result.stats.timings})
    log.info("%d pairs, %s", len(result.pairs), result.stats.counts())
    return 0


def cmd_eval(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    records = load_dataset(cfg.input)
    read = time.perf_counter() - t0
    truth = brute_force_join(records, cfg.K)
    t1 = time.perf_counter()
    params = effective_params(cfg, records)
    sweep = [params["T"]]
    if cfg.sweep_T:
        lo, hi = default_T(cfg.K), max(1, cfg.K)
        sweep = sorted(set(np.linspace(lo, hi, num=5).round().astype(int).tolist()))
    metrics: dict[str, float | int] = {}
    timings = {"read": read, "oracle": t1 - t0 - read}
    for T in sweep:
        result = run_engine(cfg, records, T, params["q"])
        report = measure_recall(result.pairs, truth)
        suffix = f"@T={T}" if cfg.sweep_T else ""
        for key, value in report.metrics().items():
            metrics[key + suffix] = value
        metrics["candidates" + suffix] = result.stats.candidates_after_dedup
        metrics["verifications" + suffix] = result.stats.verifications
        for stage, secs in result.stats.timings.items():
            timings[stage + suffix] = secs
    header = metadata(cfg, **params)
    out = ["metric,value"] + [f"{k},{v:.6f}" if isinstance(v, float) else f"{k},{v}" for k, v in metrics.items()]
    text = "\n".join(header + out) + "\n"
    if cfg.output:
        _write_text(cfg.output, text)
    else:
        sys.stdout.write(text)
    if cfg.timings:
        write_stage_csv(cfg.timings, timings)
    return 0


def cmd_gen(cfg: RunConfig) -> int:
    spec = SyntheticSpec(n=cfg.n, length=cfg.length, alphabet_size=cfg.alphabet_size,
                         clusters=cfg.clusters, cluster_size=cfg.cluster_size,
                         k_plant=cfg.k_plant, seed=cfg.seed)
    strings, planted = generate_synthetic(spec)
    write_dataset(cfg.output, strings)
    if cfg.truth:
        header = [f"# {k}={v}" for k, v in {"version": __version__, "command": "gen", **asdict(spec)}.items()]
        _write_text(cfg.truth, "\n".join(header + [f"{a}\t{b}" for a, b in planted]) + "\n")
    return 0


def cmd_stats(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    if cfg.input:
        records = load_dataset(cfg.input)
        strings = [r.data for r in records]
        sigma = max(2, len(alphabet(records)))
    else:
        spec = SyntheticSpec(n=1, length=cfg.length, alphabet_size=cfg.alphabet_size, seed=cfg.seed)
        strings, _ = generate_synthetic(spec)
        sigma = cfg.alphabet_size
    read = time.perf_counter() - t0
    q = cfg.q or default_gram_length(max(map(len, strings)), cfg.T, sigma, min(map(len, strings)))
    seeds = [derive_seed(cfg.seed, i) for i in range(cfg.runs)]
    stats = anchor_statistics(strings, cfg.T, q, seeds)
    partition = time.perf_counter() - t0 - read
    if cfg.output:
        write_anchor_csv(cfg.output, stats)
    else:
        sys.stdout.write("anchors,count,frequency\n")
        for a, c, f in stats.cdf():
            sys.stdout.write(f"{a},{c},{f:.6f}\n")
    if cfg.timings:
        write_stage_csv(cfg.timings, {"read": read, "partition": partition})
    log.info("q=%d mean=%.2f variance=%.2f", q, stats.mean, stats.variance)
    return 0


COMMANDS = {"join": cmd_join, "eval": cmd_eval, "gen": cmd_gen, "stats": cmd_stats}


def run(cfg: RunConfig) -> int:
    cfg.validate()
    return COMMANDS[cfg.command](cfg)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="anchorjoin", description="Edit-distance similarity joins.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, engine=True):
        p.add_argument("-i", "--input")
        p.add_argument("-o", "--output")
        p.add_argument("-K", type=int)
        p.add_argument("-T", type=int, help="targeted partitions (default ceil(K/5))")
        p.add_argument("-q", type=int, help="gram length (default from data)")
        p.add_argument("-R", "--repetitions", type=int, default=1)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--timings", help="write stage,millis CSV here")
        if engine:
            p.add_argument("--engine", choices=ENGINES, default="minjoin")
            p.add_argument("--ell", type=int, default=4, help="signatures per string (minhash)")
            p.add_argument("--fixture-hash", help="GRAM<TAB>value lookup table")

    common(sub.add_parser("join", help="find all pairs within distance K"))
    ev = sub.add_parser("eval", help="compare an engine against brute force")
    common(ev)
    ev.add_argument("--sweep-T", action="store_true", help="evaluate T across [K/5, K]")

    gen = sub.add_parser("gen", help="write a synthetic dataset with planted pairs")
    gen.add_argument("-o", "--output", required=True)
    gen.add_argument("--truth", help="planted pair TSV")
    gen.add_argument("-n", type=int, default=1000)
    gen.add_argument("--length", type=int, default=1000)
    gen.add_argument("--alphabet-size", type=int, default=4)
    gen.add_argument("--clusters", type=int, default=100)
    gen.add_argument("--cluster-size", type=int, default=3)
    gen.add_argument("--k-plant", type=int, default=50)
    gen.add_argument("--seed", type=int, default=0)

    st = sub.add_parser("stats", help="anchor-count distribution over seeded runs")
    common(st, engine=False)
    st.add_argument("--runs", type=int, default=200)
    st.add_argument("--length", type=int, default=5000)
    st.add_argument("--alphabet-size", type=int, default=4)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = vars(build_parser().parse_args(argv))
    logging.basicConfig(level=logging.INFO if args.pop("verbose") else logging.WARNING,
                        format="%(levelname)s %(message)s")
    cfg = RunConfig(**{k: v for k, v in args.items() if v is not None})
    try:
        return run(cfg)
    except (ConfigError, ValueError, FileNotFoundError) as exc:
        print(f"anchorjoin: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
