"""CSV and JSON emitters/parsers for census, cover and dist results."""

from __future__ import annotations

import csv
import io
import json
from typing import Callable, Iterable

from .census import LeafHistogram
from .cover import CoverReport, log2_ceiling, max_guaranteed_n, theorem_leaves, theorem_leaves2
from .dist import DeltaHistogram, sup_cdf_deviation

__all__ = [
    "SchemaError",
    "SCHEMAS",
    "fmt_real",
    "census_records",
    "histograms_from_records",
    "cover_records",
    "dist_records",
    "emit_csv",
    "parse_csv",
    "emit_json",
    "detect_schema",
]


class SchemaError(ValueError):
    pass


def fmt_real(x: float) -> str:
    return format(float(x), ".12g")


def _opt_int(s: str):
    return int(s) if s != "" else None


def _k(s: str):
    return s if s.startswith(">=") else int(s)


def _bool(s: str) -> bool:
    if s not in ("true", "false"):
        raise SchemaError(f"expected true/false, got {s!r}")
    return s == "true"


def _shifts(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in s.split(";")) if s else ()


def _str(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return fmt_real(x)
    if isinstance(x, tuple):
        return ";".join(str(v) for v in x)
    return str(x)


# column name -> parser
SCHEMAS: dict[str, dict[str, Callable[[str], object]]] = {
    "census": {
        "p": int, "n": int, "k": _k, "count": int, "total": int,
        "method": str, "bucket": _opt_int,
    },
    "cover": {
        "p": int, "n": int, "shifts": _shifts, "leafless": _bool, "log2_ceiling": int,
    },
    "cover-thresholds": {
        "p": int, "n": int, "shifts": _shifts, "leafless": _bool, "log2_ceiling": int,
        "thm_leaves": _bool, "thm_leaves2": _bool, "max_guaranteed_n": int,
    },
    "dist": {
        "p": int, "bin_lo": float, "bin_hi": float, "empirical": float,
        "theoretical": float, "mode": str, "seed": _opt_int, "samples": int,
    },
}


def census_records(H: LeafHistogram) -> list[dict]:
    return [
        {
            "p": H.p, "n": H.n, "k": H.label(k) if H.is_bucket(k) else k,
            "count": v, "total": H.total, "method": H.method,
            "bucket": H.bucket_threshold,
        }
        for k, v in H.counts.items()
    ]


def histograms_from_records(records: Iterable[dict]) -> list[LeafHistogram]:
    """Regroup census rows into one histogram per (p, n, method)."""
    groups: dict[tuple, dict] = {}
    for r in records:
        key = (r["p"], r["n"], r["method"])
        g = groups.setdefault(key, {"counts": {}, "total": r["total"], "bucket": r["bucket"]})
        k = r["k"]
        g["counts"][int(k[2:]) if isinstance(k, str) else k] = r["count"]
    return [
        LeafHistogram(p, n, g["counts"], g["total"], method, g["bucket"])
        for (p, n, method), g in groups.items()
    ]


def cover_records(reports: Iterable[CoverReport], thresholds: bool = False) -> list[dict]:
    out = []
    for r in reports:
        rec = {
            "p": r.p, "n": r.n, "shifts": r.shifts, "leafless": r.leafless,
            "log2_ceiling": log2_ceiling(r.p),
        }
        if thresholds:
            rec["thm_leaves"] = theorem_leaves(r.n, r.p)
            rec["thm_leaves2"] = theorem_leaves2(r.n, r.p)
            rec["max_guaranteed_n"] = max_guaranteed_n(r.p)
        out.append(rec)
    return out


def dist_records(H: DeltaHistogram) -> list[dict]:
    return [
        {
            "p": H.p, "bin_lo": float(H.edges[i]), "bin_hi": float(H.edges[i + 1]),
            "empirical": float(H.empirical[i]), "theoretical": float(H.theoretical[i]),
            "mode": H.mode, "seed": H.seed, "samples": H.samples,
        }
        for i in range(len(H.empirical))
    ]


def dist_summary(H: DeltaHistogram) -> dict:
    return {
        "p": H.p,
        "mode": H.mode,
        "sup_cdf_deviation": sup_cdf_deviation(H),
        "theory": "conjectural" if H.conjectural else "proved",
    }


def emit_csv(schema: str, records: Iterable[dict]) -> str:
    cols = list(SCHEMAS[schema])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in records:
        w.writerow([_str(r[c]) for c in cols])
    return buf.getvalue()


def detect_schema(header: list[str]) -> str:
    for name, cols in SCHEMAS.items():
        if header == list(cols):
            return name
    raise SchemaError(f"unrecognised CSV header: {','.join(header)}")


def parse_csv(text: str, schema: str | None = None) -> tuple[str, list[dict]]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise SchemaError("empty CSV")
    found = detect_schema(rows[0])
    if schema is not None and found != schema:
        raise SchemaError(f"expected {schema} CSV, got {found}")
    parsers = SCHEMAS[found]
    out = []
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != len(parsers):
            raise SchemaError(f"line {line}: expected {len(parsers)} fields, got {len(row)}")
        try:
            out.append({c: f(v) for (c, f), v in zip(parsers.items(), row)})
        except ValueError as exc:
            raise SchemaError(f"line {line}: {exc}") from None
    return found, out


def emit_json(records: Iterable[dict]) -> str:
    return json.dumps(list(records), indent=1, default=list) + "\n"
