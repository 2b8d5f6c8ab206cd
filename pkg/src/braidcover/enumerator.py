"""Exhaustive enumeration of generic monodromy representations.

A representation is a 5-tuple of permutations (a1, a2, b1, b2, sigma) of
degree n satisfying every relation of the presentation, with sigma a
transposition and the five images generating a transitive subgroup.

The search forest is split into partitions, one per root pair (a1, b1) for each
transposition sigma searched.  Partitions are independent, which gives
exactly-once emission across workers and across checkpoint/resume boundaries.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import logging
import multiprocessing
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator, Sequence

from . import search
from .perm import (
    COMPOSITION_CONVENTION,
    Permutation,
    format_perm,
    is_transitive,
    is_transposition,
    symmetric_group,
)
from .presentation import (
    COMMUTATOR_CONVENTION,
    GeneratorAssignment,
    bellingeri_relations,
    relation_holds,
)

log = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "braidcover-checkpoint"
CHECKPOINT_VERSION = 1


class CheckpointError(RuntimeError):
    """Checkpoint could not be written, or an existing one cannot be resumed."""

    def __init__(self, message: str, partition: int | None = None):
        super().__init__(message)
        self.partition = partition


@dataclass(frozen=True, order=True)
class MonodromyRep:
    degree: int
    sigma: Permutation
    a1: Permutation
    a2: Permutation
    b1: Permutation
    b2: Permutation

    def assignment(self) -> GeneratorAssignment:
        return GeneratorAssignment.of(self.a1, self.a2, self.b1, self.b2, self.sigma)

    def generators(self) -> tuple[Permutation, ...]:
        return (self.sigma, self.a1, self.a2, self.b1, self.b2)

    def key(self) -> tuple:
        """Sort key: degree, then images of sigma, a1, a2, b1, b2."""
        return (self.degree,) + tuple(p.images for p in self.generators())

    def serialized(self) -> str:
        return " ".join([str(self.degree)] + [format_perm(p) for p in self.generators()])

    def conjugated(self, g: Permutation) -> "MonodromyRep":
        from .perm import conjugate

        return MonodromyRep(self.degree, *(conjugate(p, g) for p in self.generators()))

    @classmethod
    def from_zero_based(cls, sigma, a1, a2, b1, b2) -> "MonodromyRep":
        perms = [Permutation.from_zero_based(p) for p in (sigma, a1, a2, b1, b2)]
        return cls(len(sigma), *perms)


@dataclass
class SearchConfig:
    degree: int
    fix_sigma: bool = True
    worker_count: int = 1
    checkpoint_interval: int = 256
    limit: int | None = None
    # stop (incomplete) after this many newly processed partitions
    stop_after_partitions: int | None = None
    collect: bool = True

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be at least 1")
        if self.worker_count < 1:
            raise ValueError("worker_count must be at least 1")
        if self.checkpoint_interval < 1:
            raise ValueError("checkpoint_interval must be at least 1")
        if self.limit is not None and self.limit < 0:
            raise ValueError("limit must be non-negative")


@dataclass
class EnumerationResult:
    degree: int
    total_count: int
    fixed_sigma_count: int
    solutions: list[MonodromyRep]
    elapsed: float
    complete: bool
    fix_sigma: bool = True
    partitions_total: int = 0
    partitions_done: int = 0
    # solutions counted in this result that were emitted by an earlier, checkpointed run
    resumed_count: int = 0

    @property
    def transposition_count(self) -> int:
        return self.degree * (self.degree - 1) // 2


def transposition_count(n: int) -> int:
    return n * (n - 1) // 2


def r2_candidates(sigma: Permutation, n: int) -> set[Permutation]:
    """All x in S_n with sigma^-1 x sigma^-1 x == x sigma^-1 x sigma^-1."""
    if not is_transposition(sigma):
        raise ValueError(f"{sigma.cycle_string()} is not a transposition")
    if sigma.degree != n:
        raise ValueError(f"sigma has degree {sigma.degree}, expected {n}")
    tab = search.tables_for(sigma.zero_based())
    return {Permutation.from_zero_based(row) for row in tab.tuples}


def _sigmas(n: int, fix_sigma: bool) -> list[tuple[int, ...]]:
    if n < 2:
        return []
    if fix_sigma:
        return [search.sigma_tuple(n, 0, 1)]
    return [search.sigma_tuple(n, i, j) for i, j in itertools.combinations(range(n), 2)]


def partition_plan(n: int, fix_sigma: bool) -> list[tuple[int, int, int]]:
    """Ordered list of (sigma index, a1, b1) partition keys; indices refer to candidate tables."""
    plan = []
    for si, sigma in enumerate(_sigmas(n, fix_sigma)):
        tab = search.tables_for(sigma)
        for a1 in range(tab.size):
            plan.extend((si, a1, int(b1)) for b1 in tab.b1_choices(a1))
    return plan


def _digest(sols: Sequence[tuple]) -> str:
    h = hashlib.sha256()
    for s in sorted(sols):
        h.update(repr(s).encode())
    return h.hexdigest()[:16]


# -- checkpoint file ----------------------------------------------------------
#
# JSON lines.  Line 1 is the header; every further line records one batch of
# fully processed partitions:
#   {"done": [p, ...], "counts": [c, ...], "digests": {"p": hex}, "sink": offset|null}
# where p is the position of the partition in partition_plan().


def _header(config: SearchConfig, partitions_total: int) -> dict:
    return {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "degree": config.degree,
        "fix_sigma": config.fix_sigma,
        "composition": COMPOSITION_CONVENTION,
        "commutator": COMMUTATOR_CONVENTION,
        "partitions_total": partitions_total,
    }


@dataclass
class CheckpointState:
    header: dict
    done: dict[int, int] = field(default_factory=dict)
    digests: dict[int, str] = field(default_factory=dict)
    sink_offset: int | None = None

    @property
    def degree(self) -> int:
        return self.header["degree"]

    @property
    def fix_sigma(self) -> bool:
        return self.header["fix_sigma"]

    @property
    def complete(self) -> bool:
        return len(self.done) == self.header["partitions_total"]

    @property
    def count(self) -> int:
        return sum(self.done.values())


def read_checkpoint(path: str | os.PathLike) -> CheckpointState:
    """Parse and validate a checkpoint file.

    A final line without a terminating newline is a torn write and is ignored;
    its partitions were never acknowledged and will be redone.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    lines = text.split("\n")
    if lines and lines[-1] != "":
        log.warning("ignoring torn final line in checkpoint %s", path)
    lines = lines[:-1]
    if not lines:
        raise CheckpointError(f"checkpoint {path} is empty")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise CheckpointError(f"checkpoint {path}: corrupt header") from exc
    if not isinstance(header, dict) or header.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointError(f"checkpoint {path}: not a {CHECKPOINT_FORMAT} file")
    if header.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError(f"checkpoint {path}: unsupported version {header.get('version')!r}")
    if header.get("composition") != COMPOSITION_CONVENTION:
        raise CheckpointError(
            f"checkpoint {path}: composition convention {header.get('composition')!r}"
            f" differs from {COMPOSITION_CONVENTION!r}"
        )
    if header.get("commutator") != COMMUTATOR_CONVENTION:
        raise CheckpointError(
            f"checkpoint {path}: commutator convention {header.get('commutator')!r}"
            f" differs from {COMMUTATOR_CONVENTION!r}"
        )
    for key, typ in (("degree", int), ("fix_sigma", bool), ("partitions_total", int)):
        if not isinstance(header.get(key), typ):
            raise CheckpointError(f"checkpoint {path}: header field {key!r} missing or invalid")
    state = CheckpointState(header)
    total = header["partitions_total"]
    for lineno, line in enumerate(lines[1:], start=2):
        try:
            rec = json.loads(line)
            done, counts = rec["done"], rec["counts"]
            if len(done) != len(counts):
                raise ValueError("done/counts length mismatch")
            for p, c in zip(done, counts):
                if not (isinstance(p, int) and 0 <= p < total) or p in state.done:
                    raise ValueError(f"bad partition index {p!r}")
                state.done[p] = int(c)
            for p, d in rec.get("digests", {}).items():
                state.digests[int(p)] = d
            if rec.get("sink") is not None:
                state.sink_offset = int(rec["sink"])
        except (ValueError, KeyError, TypeError) as exc:
            raise CheckpointError(f"checkpoint {path}: corrupt record on line {lineno}: {exc}") from exc
    return state


class _CheckpointWriter:
    def __init__(self, path: Path, header: dict, fresh: bool):
        self.path = path
        try:
            if fresh:
                with open(path, "w") as fh:
                    fh.write(json.dumps(header) + "\n")
                    fh.flush()
                    os.fsync(fh.fileno())
            self._fh = open(path, "a")
        except OSError as exc:
            raise CheckpointError(f"cannot write checkpoint {path}: {exc}", partition=0) from exc

    def write(self, done: list[int], counts: list[int], digests: dict[int, str], sink_offset):
        rec = {"done": done, "counts": counts, "digests": {str(k): v for k, v in digests.items()}}
        rec["sink"] = sink_offset
        try:
            self._fh.write(json.dumps(rec, separators=(",", ":")) + "\n")
            self._fh.flush()
            os.fsync(self._fh.fileno())
        except OSError as exc:
            raise CheckpointError(
                f"checkpoint write to {self.path} failed at partition {done[0] if done else None}: {exc}",
                partition=done[0] if done else None,
            ) from exc

    def close(self):
        self._fh.close()


# -- driver -------------------------------------------------------------------

Sink = Callable[[list[MonodromyRep]], "int | None"]


def _worker_batch(args):
    sigma, idx, pairs = args
    return idx, search.run_batch(sigma, pairs)


def _batches(plan, pending: list[int], sigmas, size: int) -> Iterator[tuple]:
    for start in range(0, len(pending), size):
        chunk = pending[start:start + size]
        # batches never straddle two sigmas
        by_sigma: dict[int, list[int]] = {}
        for p in chunk:
            by_sigma.setdefault(plan[p][0], []).append(p)
        for si, idx in by_sigma.items():
            yield sigmas[si], idx, [(plan[p][1], plan[p][2]) for p in idx]


def enumerate_reps(
    config: SearchConfig,
    checkpoint: str | os.PathLike | None = None,
    sink: Sink | None = None,
    progress: Callable[[int, int], None] | None = None,
    _state: CheckpointState | None = None,
) -> EnumerationResult:
    """Run (or, when ``_state`` is given, continue) an enumeration.

    ``sink`` receives the solutions of each completed batch before the batch is
    acknowledged in the checkpoint; whatever it returns (typically the output
    file offset) is stored alongside the acknowledgement.
    """
    t0 = time.perf_counter()
    n = config.degree
    sigmas = _sigmas(n, config.fix_sigma)
    plan = partition_plan(n, config.fix_sigma)
    header = _header(config, len(plan))
    done: dict[int, int] = {}
    if _state is not None:
        if _state.header["partitions_total"] != len(plan):
            raise CheckpointError("checkpoint partition count does not match this build's search plan")
        done = dict(_state.done)
    resumed = sum(done.values())
    writer = None
    if checkpoint is not None:
        writer = _CheckpointWriter(Path(checkpoint), header, fresh=_state is None)

    pending = [p for p in range(len(plan)) if p not in done]
    if config.stop_after_partitions is not None:
        pending = pending[: config.stop_after_partitions]
    batch_size = config.checkpoint_interval
    if config.worker_count > 1:
        batch_size = min(batch_size, 64)
    work = _batches(plan, pending, sigmas, batch_size)

    solutions: list[MonodromyRep] = []
    emitted = 0
    new_count = 0
    limit_hit = False
    buf_done: list[int] = []
    buf_counts: list[int] = []
    buf_digests: dict[int, str] = {}
    last_sink = None

    def flush():
        nonlocal buf_done, buf_counts, buf_digests
        if writer is not None and buf_done:
            writer.write(buf_done, buf_counts, buf_digests, last_sink)
        buf_done, buf_counts, buf_digests = [], [], {}

    pool = None
    try:
        if config.worker_count > 1 and pending:
            ctx = multiprocessing.get_context("fork")
            pool = ctx.Pool(config.worker_count)
            results = pool.imap_unordered(_worker_batch, work)
        else:
            results = map(_worker_batch, work)
        for idx, per_partition in results:
            batch_reps: list[MonodromyRep] = []
            accepted: list[tuple[int, list]] = []
            for p, sols in zip(idx, per_partition):
                if config.limit is not None and emitted + len(sols) > config.limit:
                    sols = sols[: config.limit - emitted]
                    limit_hit = True
                reps = [MonodromyRep.from_zero_based(*s) for s in sols]
                batch_reps.extend(reps)
                emitted += len(reps)
                if limit_hit:
                    break
                accepted.append((p, sols))
            if sink is not None and batch_reps:
                last_sink = sink(batch_reps)
            if config.collect:
                solutions.extend(batch_reps)
            for p, sols in accepted:
                done[p] = len(sols)
                new_count += len(sols)
                buf_done.append(p)
                buf_counts.append(len(sols))
                if sols:
                    buf_digests[p] = _digest(sols)
            if len(buf_done) >= config.checkpoint_interval:
                flush()
            if progress is not None:
                progress(len(done), len(plan))
            if limit_hit:
                break
        flush()
    finally:
        if pool is not None:
            pool.terminate()
            pool.join()
        if writer is not None:
            writer.close()

    complete = (not limit_hit) and len(done) == len(plan)
    count = sum(done.values())
    if limit_hit:
        count = resumed + emitted
    if config.fix_sigma:
        fixed = count
        total = count * transposition_count(n)
    else:
        total = count
        # sigma index 0 is (1 2)
        fixed = sum(c for p, c in done.items() if plan[p][0] == 0)
    return EnumerationResult(
        degree=n,
        total_count=total,
        fixed_sigma_count=fixed,
        solutions=solutions,
        elapsed=time.perf_counter() - t0,
        complete=complete,
        fix_sigma=config.fix_sigma,
        partitions_total=len(plan),
        partitions_done=len(done),
        resumed_count=resumed,
    )


def resume(
    checkpoint: str | os.PathLike,
    worker_count: int = 1,
    sink: Sink | None = None,
    expect_degree: int | None = None,
    progress: Callable[[int, int], None] | None = None,
    **overrides,
) -> EnumerationResult:
    """Continue an interrupted enumeration recorded in ``checkpoint``.

    Only partitions not yet acknowledged are searched, so ``solutions`` of the
    result holds just the newly found representations, while the counts cover
    the whole run.
    """
    state = read_checkpoint(checkpoint)
    if expect_degree is not None and state.degree != expect_degree:
        raise CheckpointError(f"checkpoint is for degree {state.degree}, not {expect_degree}")
    config = SearchConfig(
        degree=state.degree, fix_sigma=state.fix_sigma, worker_count=worker_count, **overrides
    )
    return enumerate_reps(config, checkpoint=checkpoint, sink=sink, progress=progress, _state=state)


# -- independent checks ----------------------------------------------------------

@dataclass
class VerificationReport:
    relations: dict[str, bool]
    sigma_is_transposition: bool
    transitive: bool

    @property
    def passed(self) -> bool:
        return all(self.relations.values()) and self.sigma_is_transposition and self.transitive

    @property
    def failures(self) -> list[str]:
        out = [tag for tag, ok in self.relations.items() if not ok]
        if not self.sigma_is_transposition:
            out.append("generic")
        if not self.transitive:
            out.append("transitive")
        return out


def verify(rep: MonodromyRep) -> VerificationReport:
    """Re-check a representation with the generic word evaluator."""
    asg = rep.assignment()
    return VerificationReport(
        relations={r.tag: relation_holds(r, asg) for r in bellingeri_relations()},
        sigma_is_transposition=is_transposition(rep.sigma),
        transitive=is_transitive(list(rep.generators())),
    )


def brute_force_oracle(n: int) -> EnumerationResult:
    """Test every 5-tuple of S_n against all relations; no pruning at all."""
    if n > 3:
        raise ValueError("brute-force oracle is limited to n <= 3")
    if n < 1:
        raise ValueError("degree must be at least 1")
    t0 = time.perf_counter()
    group = symmetric_group(n)
    sols = []
    for sigma, a1, a2, b1, b2 in itertools.product(group, repeat=5):
        rep = MonodromyRep(n, sigma, a1, a2, b1, b2)
        if verify(rep).passed:
            sols.append(rep)
    s0 = Permutation.from_zero_based(search.sigma_tuple(n, 0, 1)) if n >= 2 else None
    return EnumerationResult(
        degree=n,
        total_count=len(sols),
        fixed_sigma_count=sum(1 for r in sols if r.sigma == s0),
        solutions=sols,
        elapsed=time.perf_counter() - t0,
        complete=True,
        fix_sigma=False,
    )
