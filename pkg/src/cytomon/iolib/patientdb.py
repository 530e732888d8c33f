"""Patient database ingestion: delimited text, one row per observation.

Columns: patient_id, cycle_index, dose_std, t0, w0, t_offset, wbc.
WBC values (w0 and wbc) are raw counts; the natural log is taken at
ingestion. Every excluded or repaired row is reported with its line
number; nothing is dropped silently.
"""

from __future__ import annotations

import csv
import hashlib
import logging
import math
from pathlib import Path

from ..errors import DataError
from ..therapy import CycleObservation, PatientRecord

log = logging.getLogger(__name__)

COLUMNS = ("patient_id", "cycle_index", "dose_std", "t0", "w0", "t_offset", "wbc")


def db_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()[:16]


def load_patient_db(path: str | Path) -> list[PatientRecord]:
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            log.warning("%s: empty file, no records loaded", path)
            return []
        missing = [c for c in COLUMNS if c not in reader.fieldnames]
        if missing:
            raise DataError(f"{path}: missing columns {missing}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            try:
                rows.append(
                    (
                        row["patient_id"],
                        int(row["cycle_index"]),
                        float(row["dose_std"]),
                        float(row["t0"]),
                        float(row["w0"]),
                        float(row["t_offset"]),
                        float(row["wbc"]),
                        lineno,
                    )
                )
            except (TypeError, ValueError) as e:
                raise DataError(f"{path}:{lineno}: unparseable row: {e}")
    if not rows:
        log.warning("%s: header only, no records loaded", path)
        return []

    for pid, cyc, dose, t0, w0, t, wbc, lineno in rows:
        if wbc <= 0:
            raise DataError(f"{path}:{lineno}: wbc must be > 0, got {wbc}")
        if w0 <= 0:
            raise DataError(f"{path}:{lineno}: w0 must be > 0, got {w0}")

    # group by (patient, cycle), preserving first-seen patient order
    groups: dict[str, dict[int, list]] = {}
    for pid, cyc, dose, t0, w0, t, wbc, lineno in rows:
        cell = groups.setdefault(pid, {}).setdefault(cyc, [])
        for prev in cell:
            if prev[3] == t:
                raise DataError(
                    f"{path}:{lineno}: duplicate observation for patient {pid} "
                    f"cycle {cyc} at t={t}"
                )
            if (prev[0], prev[1], prev[2]) != (dose, t0, w0):
                raise DataError(
                    f"{path}:{lineno}: inconsistent cycle context for patient {pid} "
                    f"cycle {cyc}"
                )
        cell.append((dose, t0, w0, t, wbc, lineno))

    records = []
    for pid, cycles in groups.items():
        cycle_objs = []
        for cyc in sorted(cycles):
            cell = cycles[cyc]
            times = [e[3] for e in cell]
            if times != sorted(times):
                log.warning(
                    "%s: patient %s cycle %d has unsorted times, repaired by sorting",
                    path,
                    pid,
                    cyc,
                )
                cell = sorted(cell, key=lambda e: e[3])
            dose, t0, w0 = cell[0][0], cell[0][1], cell[0][2]
            try:
                cycle_objs.append(
                    CycleObservation(
                        cycle_index=cyc,
                        dose_std=dose,
                        t0=t0,
                        w0=math.log(w0),
                        times=tuple(e[3] for e in cell),
                        wbc_log=tuple(math.log(e[4]) for e in cell),
                    )
                )
            except DataError as e:
                raise DataError(f"{path}: patient {pid}: {e}")
        try:
            records.append(PatientRecord(pid, tuple(cycle_objs)))
        except DataError as e:
            raise DataError(f"{path}: {e}")
    return records


def save_patient_db(records: list[PatientRecord], path: str | Path) -> None:
    """Inverse of load_patient_db (wbc written as raw counts)."""
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with tmp.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(COLUMNS)
        for rec in records:
            for cyc in rec.cycles:
                for t, w in zip(cyc.times, cyc.wbc_log):
                    writer.writerow(
                        [
                            rec.patient_id,
                            cyc.cycle_index,
                            repr(cyc.dose_std),
                            repr(cyc.t0),
                            repr(math.exp(cyc.w0)),
                            repr(t),
                            repr(math.exp(w)),
                        ]
                    )
    tmp.replace(path)
