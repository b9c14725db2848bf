"""Resumable, parallel scans of ``gamma(k, q)`` over ranges of ``k`` and ``q``.

Rows are computed by stateless workers and written by a single writer in
ascending ``(k, q)`` order, so the output bytes do not depend on the number
of workers.  After every chunk the writer flushes the output and atomically
replaces a small JSON checkpoint recording the last row written, the byte
offset reached and a SHA-256 of those bytes.  Resuming verifies the hash,
truncates any partial tail and carries on from the next row.
"""

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from ._ntheory import prime_powers_upto
from .errors import CapExceeded, WaringError
from .field import size_cap
from .gamma import csv_row, default_bound, gamma

CHUNK = 256


@dataclass(frozen=True)
class ScanJob:
    k_min: int
    k_max: int
    bound: object = "auto"  # "auto" means 8 k^4 for each k, else an int
    gamma_filter: tuple = None  # (lo, hi), or ("uncoverable",)
    out: str = None
    fmt: str = "csv"  # "csv" or "jsonl"
    jobs: int = 1
    resume: str = None

    def q_bound(self, k):
        return default_bound(k) if self.bound == "auto" else int(self.bound)

    def fingerprint(self):
        d = asdict(self)
        for key in ("out", "jobs", "resume"):
            d.pop(key)
        d["gamma_filter"] = list(self.gamma_filter) if self.gamma_filter else None
        return d


def parse_filter(text):
    """``gamma=A..B``, ``gamma=A`` or ``uncoverable``."""
    if text is None:
        return None
    if text == "uncoverable":
        return ("uncoverable",)
    key, _, rng = text.partition("=")
    if key != "gamma" or not rng:
        raise ValueError(f"bad filter {text!r}; expected gamma=A..B or uncoverable")
    lo, _, hi = rng.partition("..")
    return (int(lo), int(hi or lo))


def keep(res, gamma_filter):
    if gamma_filter is None:
        return True
    if gamma_filter == ("uncoverable",):
        return not res.coverable
    lo, hi = gamma_filter
    return res.coverable and lo <= res.gamma <= hi


def tasks(job):
    for k in range(job.k_min, job.k_max + 1):
        for q in prime_powers_upto(job.q_bound(k)):
            yield k, q


def _work(chunk):
    return [gamma(k, q) for k, q in chunk]


def format_row(res, fmt):
    if fmt == "csv":
        return ",".join(map(str, csv_row(res))) + "\n"
    return json.dumps(res.to_dict(closure=False), separators=(",", ":")) + "\n"


def header(fmt):
    return "k,q,coverable,gamma\n" if fmt == "csv" else ""


def _chunks(it, size):
    buf = []
    for t in it:
        buf.append(t)
        if len(buf) == size:
            yield buf
            buf = []
    if buf:
        yield buf


def _write_checkpoint(path, state):
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump(state, fh, sort_keys=True)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def _load_checkpoint(job):
    """``(last (k, q), offset, digest)`` from a valid checkpoint, else a fresh start."""
    if not job.resume or not os.path.exists(job.resume):
        return None, 0, hashlib.sha256()
    with open(job.resume) as fh:
        state = json.load(fh)
    if state.get("job") != job.fingerprint():
        raise WaringError(f"checkpoint {job.resume} belongs to a different scan")
    offset = state["offset"]
    digest = hashlib.sha256()
    with open(job.out, "rb") as fh:
        data = fh.read(offset)
    digest.update(data)
    if len(data) != offset or digest.hexdigest() != state["rows_hash"]:
        raise WaringError(f"output {job.out} does not match checkpoint {job.resume}")
    last = (state["k"], state["last_q"]) if state.get("k") is not None else None
    return last, offset, digest


def run_scan(job):
    """Write the scan to ``job.out`` and return the number of rows written in this run."""
    if job.out is None:
        raise ValueError("run_scan needs an output path")
    if job.resume and os.path.abspath(job.resume) == os.path.abspath(job.out):
        raise ValueError("checkpoint and output must be different files")
    top = max(job.q_bound(k) for k in range(job.k_min, job.k_max + 1))
    if top > size_cap():
        raise CapExceeded(f"q bound {top} exceeds the size cap {size_cap()}")
    last, offset, digest = _load_checkpoint(job)
    mode = "r+b" if offset else "wb"
    written = 0
    with open(job.out, mode) as out:
        out.seek(offset)
        out.truncate()
        if not offset:
            head = header(job.fmt).encode()
            out.write(head)
            digest.update(head)
            offset = len(head)
        pending = (t for t in tasks(job) if last is None or t > last)
        chunks = _chunks(pending, CHUNK)
        pool = ProcessPoolExecutor(job.jobs) if job.jobs > 1 else None
        try:
            results = pool.map(_work, chunks) if pool else map(_work, chunks)
            for rows in results:
                data = b"".join(format_row(r, job.fmt).encode() for r in rows if keep(r, job.gamma_filter))
                out.write(data)
                out.flush()
                os.fsync(out.fileno())
                digest.update(data)
                offset += len(data)
                written += sum(1 for r in rows if keep(r, job.gamma_filter))
                if job.resume:
                    _write_checkpoint(
                        job.resume,
                        {
                            "job": job.fingerprint(),
                            "k": rows[-1].k,
                            "last_q": rows[-1].q,
                            "offset": offset,
                            "rows_hash": digest.hexdigest(),
                        },
                    )
        finally:
            if pool:
                pool.shutdown()
    return written
