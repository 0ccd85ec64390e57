"""On-disk cache of ``zeta(2s + k)`` values.

The file is JSON lines.  The first line is a header::

    {"format": "heckezeta-zeta-cache", "version": 1}

and every further line is one entry::

    {"v": 1, "bits": 231, "s_re": "0x...p-230", "s_im": "0x0p0", "k": 4,
     "re": "0x...p-229", "im": "0x0p0"}

Numbers are encoded losslessly as ``<hex mantissa>p<binary exponent>``.
Entries written by another format version are ignored (never migrated).
On load every entry is re-checked against a cheap low-precision
recomputation and dropped if it disagrees.  Writes append under an
exclusive ``flock``.
"""

from __future__ import annotations

import fcntl
import json
import logging
import os
from pathlib import Path

import gmpy2
from gmpy2 import mpc, mpfr

from .precision import PrecisionContext, hex_to_mpfr, mpfr_to_hex, to_complex
from .special import _zeta_raw

log = logging.getLogger(__name__)

FORMAT = "heckezeta-zeta-cache"
VERSION = 1
VALIDATION_BITS = 96
VALIDATION_REL = gmpy2.mpfr(2) ** -40


class ZetaCache:
    def __init__(self, path, validate: bool = True):
        self.path = Path(path)
        self.validate = validate
        self._data: dict[tuple, tuple[str, str]] = {}
        self.rejected = 0
        self.stale = 0
        self.hits = 0
        self.misses = 0
        if self.path.exists():
            self._load()

    def __len__(self) -> int:
        return len(self._data)

    @staticmethod
    def _key(s: mpc, k: int, bits: int) -> tuple:
        return (bits, mpfr_to_hex(s.real), mpfr_to_hex(s.imag), k)

    def _load(self) -> None:
        with open(self.path, "r", encoding="ascii") as fh:
            fcntl.flock(fh, fcntl.LOCK_SH)
            try:
                lines = fh.read().splitlines()
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)
        if not lines:
            return
        header = json.loads(lines[0])
        if header.get("format") != FORMAT:
            raise ValueError(f"{self.path} is not a zeta cache file")
        for line in lines[1:]:
            if not line.strip():
                continue
            rec = json.loads(line)
            if rec.get("v") != VERSION:
                self.stale += 1
                continue
            key = (rec["bits"], rec["s_re"], rec["s_im"], rec["k"])
            if self.validate and not self._valid(rec):
                self.rejected += 1
                continue
            self._data[key] = (rec["re"], rec["im"])
        if self.rejected:
            log.warning("dropped %d cache entries that failed validation", self.rejected)

    @staticmethod
    def _valid(rec: dict) -> bool:
        bits = rec["bits"]
        s_re = hex_to_mpfr(rec["s_re"], bits)
        s_im = hex_to_mpfr(rec["s_im"], bits)
        with gmpy2.context(precision=VALIDATION_BITS):
            arg = 2 * mpc(s_re, s_im) + rec["k"]
            arg = arg.real if arg.imag == 0 else arg
        try:
            ref = _zeta_raw(arg, VALIDATION_BITS, -VALIDATION_BITS + 16)
        except Exception:
            return False
        with gmpy2.context(precision=VALIDATION_BITS):
            got = mpc(hex_to_mpfr(rec["re"], bits), hex_to_mpfr(rec["im"], bits))
            return abs(got - ref) <= VALIDATION_REL * max(1, abs(ref))

    def get(self, s, k: int, ctx: PrecisionContext):
        """Cached ``zeta(2s + k)`` (mpfr for real ``s``, else mpc) or None."""
        sc = to_complex(s, 0, ctx)
        hit = self._data.get(self._key(sc, k, ctx.working_bits))
        if hit is None:
            self.misses += 1
            return None
        self.hits += 1
        re = hex_to_mpfr(hit[0], ctx.working_bits)
        if sc.imag == 0:
            return re
        im = hex_to_mpfr(hit[1], ctx.working_bits)
        with gmpy2.context(precision=max(re.precision, im.precision)):
            return mpc(re, im)

    def put(self, s, k: int, ctx: PrecisionContext, value) -> None:
        sc = to_complex(s, 0, ctx)
        key = self._key(sc, k, ctx.working_bits)
        if key in self._data:
            return
        if isinstance(value, mpc):
            enc = (mpfr_to_hex(value.real), mpfr_to_hex(value.imag))
        else:
            enc = (mpfr_to_hex(mpfr(value)), "0x0p0")
        self._data[key] = enc
        rec = {"v": VERSION, "bits": key[0], "s_re": key[1], "s_im": key[2], "k": k,
               "re": enc[0], "im": enc[1]}
        self._append(json.dumps(rec, sort_keys=True))

    def _append(self, line: str) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a+", encoding="ascii") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                fh.seek(0, os.SEEK_END)
                if fh.tell() == 0:
                    fh.write(json.dumps({"format": FORMAT, "version": VERSION}, sort_keys=True) + "\n")
                fh.write(line + "\n")
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)
