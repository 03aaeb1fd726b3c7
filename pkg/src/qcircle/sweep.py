"""Checkpointed nonnegativity sweep over g(0..N) with a hash-chained ledger."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .series import g_array

WINDOW = 10_000
LEDGER_KIND = "qcircle-nonneg-ledger"
SCHEMA = 1
GENESIS = "0" * 64


class CorruptCheckpoint(ValueError):
    pass


def _digest(prev: str, upto: int, minimum: int, argmin: int) -> str:
    payload = json.dumps([prev, upto, str(minimum), argmin], separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


@dataclass
class VerificationLedger:
    window: int = WINDOW
    entries: list = field(default_factory=list)  # dicts: upto, min, argmin, digest
    counterexample: int | None = None

    @property
    def verified_up_to(self) -> int:
        """Largest n such that g(0..n) has been scanned (-1 before any scan)."""
        return self.entries[-1]["upto"] if self.entries else -1

    @property
    def min_coefficient_seen(self) -> int | None:
        return self.entries[-1]["min"] if self.entries else None

    @property
    def argmin(self) -> int | None:
        return self.entries[-1]["argmin"] if self.entries else None

    @property
    def head(self) -> str:
        return self.entries[-1]["digest"] if self.entries else GENESIS

    def append(self, upto: int, minimum: int, argmin: int) -> None:
        if upto < self.verified_up_to:
            raise ValueError("verified_up_to must not decrease")
        self.entries.append(
            {"upto": upto, "min": minimum, "argmin": argmin, "digest": _digest(self.head, upto, minimum, argmin)}
        )

    def aligned(self) -> "VerificationLedger":
        """Copy keeping only entries that end on a window boundary."""
        keep = [e for e in self.entries if (e["upto"] + 1) % self.window == 0]
        return VerificationLedger(self.window, [dict(e) for e in keep])

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "kind": LEDGER_KIND,
            "window": self.window,
            "verified_up_to": self.verified_up_to,
            "min_coefficient_seen": None if self.min_coefficient_seen is None else str(self.min_coefficient_seen),
            "argmin": self.argmin,
            "counterexample": self.counterexample,
            "head": self.head,
            "entries": [dict(e, min=str(e["min"])) for e in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict) -> "VerificationLedger":
        try:
            if data.get("schema") != SCHEMA or data.get("kind") != LEDGER_KIND:
                raise CorruptCheckpoint("not a version-1 nonnegativity ledger")
            ledger = cls(window=int(data["window"]))
            for e in data["entries"]:
                upto, minimum, argmin = int(e["upto"]), int(e["min"]), int(e["argmin"])
                if upto < ledger.verified_up_to:
                    raise CorruptCheckpoint(f"verified_up_to decreases at entry {upto}")
                expected = _digest(ledger.head, upto, minimum, argmin)
                if e["digest"] != expected:
                    raise CorruptCheckpoint(f"hash chain broken at entry upto={upto}")
                ledger.entries.append({"upto": upto, "min": minimum, "argmin": argmin, "digest": expected})
            if data["head"] != ledger.head or int(data["verified_up_to"]) != ledger.verified_up_to:
                raise CorruptCheckpoint("ledger summary does not match its entries")
            ledger.counterexample = data.get("counterexample")
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, CorruptCheckpoint):
                raise
            raise CorruptCheckpoint(f"malformed ledger: {exc}") from exc
        return ledger


def save_ledger(ledger: VerificationLedger, path) -> None:
    """Atomic write: temp file in the same directory, then rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(ledger.to_json(), fh, indent=1, sort_keys=True)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_ledger(path) -> VerificationLedger:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CorruptCheckpoint(f"checkpoint is not valid JSON: {exc}") from exc
    return VerificationLedger.from_json(data)


def verify_nonneg(
    N: int,
    coeffs: Sequence[int] | Iterable[int] | None = None,
    checkpoint=None,
    resume: bool = False,
    window: int = WINDOW,
) -> VerificationLedger:
    """Scan g(0..N) for a negative coefficient, checkpointing every ``window`` terms.

    ``coeffs`` replaces the built-in series (used to exercise the counterexample
    path). On resume the aligned part of the stored ledger is kept and scanning
    restarts after it; the series itself is rebuilt since the product recurrence
    cannot start midway.
    """
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    ledger = VerificationLedger(window)
    if resume and checkpoint is not None and os.path.exists(checkpoint):
        ledger = load_ledger(checkpoint)
        if ledger.window != window:
            raise CorruptCheckpoint(f"checkpoint window {ledger.window} != {window}")
        ledger = ledger.aligned()
        while ledger.entries and ledger.verified_up_to > N:
            ledger.entries.pop()
    if coeffs is None:
        values = g_array(N)
    else:
        values = coeffs if hasattr(coeffs, "__getitem__") else list(coeffs)
    if len(values) < N + 1:
        raise ValueError(f"need {N + 1} coefficients, got {len(values)}")

    start = ledger.verified_up_to + 1
    minimum = ledger.min_coefficient_seen
    argmin = ledger.argmin
    for lo in range(start, N + 1, window):
        hi = min(N, lo + window - 1)
        for n in range(lo, hi + 1):
            c = int(values[n])
            if minimum is None or c < minimum:
                minimum, argmin = c, n
            if c < 0:
                ledger.append(n, minimum, argmin)
                ledger.counterexample = n
                if checkpoint is not None:
                    save_ledger(ledger, checkpoint)
                return ledger
        ledger.append(hi, minimum, argmin)
        if checkpoint is not None:
            save_ledger(ledger, checkpoint)
    return ledger
