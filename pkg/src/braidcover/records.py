"""Line-oriented record formats shared by every CLI command.

``jsonl``: one JSON object per line; summaries are objects with ``"summary": true``.
``csv``: a header row, then one row per record; summaries are ``#``-prefixed
comment lines.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, TextIO

from .enumerator import MonodromyRep
from .perm import PermutationError, format_perm, parse_perm

SCHEMA_VERSION = "1"
PERM_FIELDS = ("sigma", "a1", "a2", "b1", "b2")
# optional decorations, in output order, with their parsers
FLAG_FIELDS = {
    "transitive": bool,
    "galois": bool,
    "image_order": int,
    "orbit_size": int,
    "stabilizer_order": int,
    "chi": int,
    "k_squared": int,
}
CSV_COLUMNS = ("schema_version", "degree") + PERM_FIELDS + tuple(FLAG_FIELDS)


class RecordError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        super().__init__(f"line {lineno}: {message}" if lineno is not None else message)
        self.lineno = lineno


@dataclass(frozen=True)
class OutputRecord:
    degree: int
    sigma: str
    a1: str
    a2: str
    b1: str
    b2: str
    flags: dict = field(default_factory=dict, compare=True, hash=False)
    schema_version: str = SCHEMA_VERSION

    @classmethod
    def from_rep(cls, rep: MonodromyRep, **flags) -> "OutputRecord":
        perms = {name: format_perm(p) for name, p in zip(PERM_FIELDS, rep.generators())}
        return cls(degree=rep.degree, flags=dict(flags), **perms)

    def to_rep(self) -> MonodromyRep:
        perms = [parse_perm(getattr(self, name), self.degree) for name in PERM_FIELDS]
        return MonodromyRep(self.degree, *perms)

    def to_dict(self) -> dict:
        d = {"schema_version": self.schema_version, "degree": self.degree}
        d.update({name: getattr(self, name) for name in PERM_FIELDS})
        d.update({k: self.flags[k] for k in FLAG_FIELDS if k in self.flags})
        return d


def _from_mapping(d: dict, lineno: int | None) -> OutputRecord:
    try:
        version = str(d["schema_version"])
        if version != SCHEMA_VERSION:
            raise RecordError(f"unsupported schema_version {version!r}", lineno)
        degree = int(d["degree"])
        perms = {}
        for name in PERM_FIELDS:
            text = d[name]
            parse_perm(text, degree)  # reject non-bijections early
            perms[name] = text.replace(" ", "")
        flags = {}
        for k, conv in FLAG_FIELDS.items():
            v = d.get(k)
            if v is None or v == "":
                continue
            if conv is bool:
                if isinstance(v, str):
                    if v not in ("true", "false"):
                        raise RecordError(f"bad boolean {v!r} for {k}", lineno)
                    v = v == "true"
                flags[k] = bool(v)
            else:
                flags[k] = int(v)
        return OutputRecord(degree=degree, flags=flags, schema_version=version, **perms)
    except KeyError as exc:
        raise RecordError(f"missing field {exc.args[0]!r}", lineno) from exc
    except (PermutationError, TypeError) as exc:
        raise RecordError(str(exc), lineno) from exc
    except ValueError as exc:
        if isinstance(exc, RecordError):
            raise
        raise RecordError(str(exc), lineno) from exc


def _csv_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


class RecordWriter:
    def __init__(self, stream: TextIO, fmt: str = "jsonl", header: bool = True):
        if fmt not in ("jsonl", "csv"):
            raise ValueError(f"unknown format {fmt!r}")
        self.stream = stream
        self.fmt = fmt
        self._csv = csv.writer(stream, lineterminator="\n") if fmt == "csv" else None
        if self._csv is not None and header:
            self._csv.writerow(CSV_COLUMNS)

    def write(self, rec: OutputRecord) -> None:
        d = rec.to_dict()
        if self.fmt == "jsonl":
            self.stream.write(json.dumps(d, separators=(",", ":")) + "\n")
        else:
            self._csv.writerow([_csv_cell(d.get(c, "")) for c in CSV_COLUMNS])

    def summary(self, **fields) -> None:
        if self.fmt == "jsonl":
            self.stream.write(json.dumps({"summary": True, **fields}, separators=(",", ":")) + "\n")
        else:
            self.stream.write("# " + " ".join(f"{k}={_csv_cell(v)}" for k, v in fields.items()) + "\n")


def serialize(rec: OutputRecord, fmt: str = "jsonl") -> str:
    buf = io.StringIO()
    RecordWriter(buf, fmt, header=True).write(rec)
    return buf.getvalue()


def iter_records(stream: Iterable[str], fmt: str | None = None) -> Iterator[tuple[int, OutputRecord]]:
    """Yield ``(line number, record)``; summary and blank lines are skipped.

    The format is sniffed from the first non-blank line when not given.
    """
    lines = iter(stream)
    buffered: list[tuple[int, str]] = []
    for lineno, line in enumerate(lines, start=1):
        if line.strip():
            buffered.append((lineno, line))
            break
    if not buffered:
        return
    first = buffered[0][1].lstrip()
    if fmt is None:
        fmt = "jsonl" if first.startswith("{") else "csv"
    start = buffered[0][0]

    def rest():
        yield from buffered
        yield from enumerate(lines, start=start + 1)

    if fmt == "jsonl":
        for lineno, line in rest():
            if not line.strip():
                continue
            try:
                d = json.loads(line)
            except json.JSONDecodeError as exc:
                raise RecordError(f"invalid JSON: {exc.msg}", lineno) from exc
            if not isinstance(d, dict):
                raise RecordError("record is not an object", lineno)
            if d.get("summary"):
                continue
            yield lineno, _from_mapping(d, lineno)
    elif fmt == "csv":
        header = None
        for lineno, line in rest():
            if not line.strip() or line.startswith("#"):
                continue
            row = next(csv.reader([line]))
            if header is None:
                header = row
                if "sigma" not in header:
                    raise RecordError("missing CSV header", lineno)
                continue
            if len(row) != len(header):
                raise RecordError(f"expected {len(header)} columns, got {len(row)}", lineno)
            yield lineno, _from_mapping(dict(zip(header, row)), lineno)
    else:
        raise ValueError(f"unknown format {fmt!r}")


def parse(text: str, fmt: str | None = None) -> list[OutputRecord]:
    return [rec for _, rec in iter_records(text.splitlines(keepends=True), fmt)]
