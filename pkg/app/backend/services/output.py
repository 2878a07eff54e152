from __future__ import annotations

import csv
import io
from typing import Any, Dict, Iterable, List, Optional

import orjson

from models.coefficients import CoefficientTable
from models.common import format_complex
from models.expansion import ExpansionResult, SplitResult
from models.validation import (
    CheckOutcome,
    ReportMetadata,
    SweepDataset,
    SweepRow,
    ValidationReport,
    ValidationRow,
)

HUMAN_DIGITS = 10

REPORT_COLUMNS = [
    "z_re", "z_im", "s_re", "s_im", "a_re", "a_im", "order",
    "reference_re", "reference_im", "approximation_re", "approximation_im",
    "rel_error", "published", "passed",
]


def dumps(payload: Any) -> bytes:
    return orjson.dumps(payload, option=orjson.OPT_NON_STR_KEYS)


def _num(x: Optional[float]) -> str:
    return "" if x is None else format(float(x), ".17g")


def _opt(text: str) -> Optional[float]:
    return float(text) if text != "" else None


def _writer(buf: io.StringIO) -> Any:
    return csv.writer(buf, lineterminator="\n")


def _meta_lines(buf: io.StringIO, items: Dict[str, Any]) -> None:
    for key, value in items.items():
        if value is not None:
            buf.write(f"# {key}={value}\n")


def _split_meta(text: str) -> tuple[Dict[str, str], List[str]]:
    meta: Dict[str, str] = {}
    body: List[str] = []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            meta[key] = value
        elif line:
            body.append(line)
    return meta, body


# --- validation report -------------------------------------------------------


def report_to_json(report: ValidationReport) -> bytes:
    return dumps(report.model_dump(mode="json"))


def report_from_json(data: bytes | str) -> ValidationReport:
    return ValidationReport.model_validate(orjson.loads(data))


def report_to_csv(report: ValidationReport) -> str:
    buf = io.StringIO()
    _meta_lines(
        buf,
        {
            "reference_method": report.metadata.reference_method.value,
            "tolerance_policy": report.metadata.tolerance_policy,
            "timestamp": report.metadata.timestamp,
        },
    )
    w = _writer(buf)
    w.writerow(REPORT_COLUMNS)
    for r in report.rows:
        w.writerow(
            [
                _num(r.z.real), _num(r.z.imag), _num(r.s.real), _num(r.s.imag), _num(r.a.real), _num(r.a.imag),
                r.order,
                _num(r.reference.real), _num(r.reference.imag),
                _num(r.approximation.real), _num(r.approximation.imag),
                _num(r.rel_error), _num(r.published), "true" if r.passed else "false",
            ]
        )
    return buf.getvalue()


def report_from_csv(text: str) -> ValidationReport:
    meta, body = _split_meta(text)
    reader = csv.DictReader(body)
    rows = []
    for rec in reader:
        rows.append(
            ValidationRow(
                z=complex(float(rec["z_re"]), float(rec["z_im"])),
                s=complex(float(rec["s_re"]), float(rec["s_im"])),
                a=complex(float(rec["a_re"]), float(rec["a_im"])),
                order=int(rec["order"]),
                reference=complex(float(rec["reference_re"]), float(rec["reference_im"])),
                approximation=complex(float(rec["approximation_re"]), float(rec["approximation_im"])),
                rel_error=float(rec["rel_error"]),
                published=_opt(rec["published"]),
                passed=rec["passed"] == "true",
            )
        )
    return ValidationReport(
        rows=rows,
        metadata=ReportMetadata(
            reference_method=meta["reference_method"],
            tolerance_policy=meta["tolerance_policy"],
            timestamp=meta.get("timestamp"),
        ),
    )


def report_to_human(report: ValidationReport) -> str:
    lines = [f"{'z':>6} {'s':>4} {'a':>8} {'n':>3} {'rel_error':>12} {'published':>10}  status"]
    for r in report.rows:
        published = f"{r.published:.3g}" if r.published is not None else "-"
        lines.append(
            f"{format_complex(r.z, 4):>6} {format_complex(r.s, 4):>4} {format_complex(r.a, 4):>8} {r.order:>3} "
            f"{r.rel_error:>12.3e} {published:>10}  {'ok' if r.passed else 'FAIL'}"
        )
    passed = sum(1 for r in report.rows if r.passed)
    lines.append(f"{passed}/{len(report.rows)} cells within tolerance ({report.metadata.tolerance_policy})")
    return "\n".join(lines) + "\n"


# --- sweep dataset -----------------------------------------------------------


def sweep_to_json(dataset: SweepDataset) -> bytes:
    return dumps(dataset.model_dump(mode="json"))


def sweep_from_json(data: bytes | str) -> SweepDataset:
    return SweepDataset.model_validate(orjson.loads(data))


def _complex_meta(value: Optional[complex]) -> Optional[str]:
    return None if value is None else f"{_num(value.real)},{_num(value.imag)}"


def _parse_complex_meta(text: Optional[str]) -> Optional[complex]:
    if text is None:
        return None
    re_txt, im_txt = text.split(",")
    return complex(float(re_txt), float(im_txt))


def sweep_to_csv(dataset: SweepDataset) -> str:
    buf = io.StringIO()
    _meta_lines(
        buf,
        {
            "axis": dataset.axis,
            "z": _complex_meta(dataset.z),
            "s": _complex_meta(dataset.s),
            "a": _complex_meta(dataset.a),
            "orders": ",".join(str(n) for n in dataset.orders),
        },
    )
    for note in dataset.diagnostics:
        buf.write(f"# diagnostic={note}\n")
    w = _writer(buf)
    header = ["abscissa", "reference_re", "reference_im"]
    for n in dataset.orders:
        header += [f"approx_re_{n}", f"approx_im_{n}", f"rel_error_{n}"]
    header.append("note")
    w.writerow(header)
    for row in dataset.rows:
        ref = row.reference
        cells = [_num(row.abscissa), _num(ref.real if ref is not None else None), _num(ref.imag if ref is not None else None)]
        for approx, err in zip(row.approximations, row.rel_errors):
            cells += [
                _num(approx.real if approx is not None else None),
                _num(approx.imag if approx is not None else None),
                _num(err),
            ]
        cells.append(row.note or "")
        w.writerow(cells)
    return buf.getvalue()


def sweep_from_csv(text: str) -> SweepDataset:
    diagnostics = [line[len("# diagnostic="):] for line in text.splitlines() if line.startswith("# diagnostic=")]
    meta, body = _split_meta(text)
    orders = [int(n) for n in meta["orders"].split(",")]
    rows = []
    for rec in csv.DictReader(body):
        ref_re, ref_im = _opt(rec["reference_re"]), _opt(rec["reference_im"])
        approximations: List[Optional[complex]] = []
        errors: List[Optional[float]] = []
        for n in orders:
            re_part, im_part = _opt(rec[f"approx_re_{n}"]), _opt(rec[f"approx_im_{n}"])
            approximations.append(None if re_part is None else complex(re_part, im_part if im_part is not None else 0.0))
            errors.append(_opt(rec[f"rel_error_{n}"]))
        rows.append(
            SweepRow(
                abscissa=float(rec["abscissa"]),
                reference=None if ref_re is None else complex(ref_re, ref_im if ref_im is not None else 0.0),
                approximations=approximations,
                rel_errors=errors,
                note=rec["note"] or None,
            )
        )
    return SweepDataset(
        axis=meta["axis"],
        z=_parse_complex_meta(meta.get("z")),
        s=_parse_complex_meta(meta["s"]),
        a=_parse_complex_meta(meta.get("a")),
        orders=orders,
        rows=rows,
        diagnostics=diagnostics,
    )


def sweep_to_human(dataset: SweepDataset) -> str:
    header = f"{dataset.axis:>10} " + " ".join(f"{'err n=' + str(n):>14}" for n in dataset.orders)
    lines = [header]
    for row in dataset.rows:
        errs = " ".join(f"{e:>14.{HUMAN_DIGITS}g}" if e is not None else f"{'-':>14}" for e in row.rel_errors)
        lines.append(f"{row.abscissa:>10.4g} {errs}" + (f"  # {row.note}" if row.note else ""))
    maxima = " ".join(f"{m:>14.{HUMAN_DIGITS}g}" if m is not None else f"{'-':>14}" for m in dataset.max_rel_error)
    lines.append(f"{'max':>10} {maxima}")
    lines.extend(f"# {d}" for d in dataset.diagnostics)
    return "\n".join(lines) + "\n"


# --- scalar results ----------------------------------------------------------


def expansion_to_human(result: ExpansionResult, verbose: bool = False) -> str:
    out = format_complex(result.value) + "\n"
    if verbose:
        out += f"order={result.order_used} remainder_estimate={result.remainder_estimate:.{HUMAN_DIGITS}g}\n"
        out += "".join(f"# {d}\n" for d in result.diagnostics)
    return out


def expansion_to_json(result: ExpansionResult) -> bytes:
    return dumps(result.model_dump(mode="json", by_alias=True))


def expansion_to_csv(result: ExpansionResult) -> str:
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(["n", "term_re", "term_im"])
    for n, t in enumerate(result.terms):
        w.writerow([n, _num(t.real), _num(t.imag)])
    w.writerow(["value", _num(result.value.real), _num(result.value.imag)])
    return buf.getvalue()


def split_to_human(result: SplitResult) -> str:
    return (
        f"leading={format_complex(result.leading)}\n"
        f"exponential={format_complex(result.exponential)}\n"
        f"total={format_complex(result.total)}\n"
    )


def table_to_human(table: CoefficientTable) -> str:
    lines = [f"# z={format_complex(table.z)} a={format_complex(table.a)} path={table.path.value}"]
    lines.extend(f"# {note}" for note in table.notes)
    for n, c in enumerate(table.big_c):
        lines.append(f"C_{n} = {format_complex(c, HUMAN_DIGITS)}")
    return "\n".join(lines) + "\n"


def table_to_csv(table: CoefficientTable) -> str:
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(["n", "C_re", "C_im"])
    for n, c in enumerate(table.big_c):
        w.writerow([n, _num(c.real), _num(c.imag)])
    return buf.getvalue()


def checks_to_human(outcomes: Iterable[CheckOutcome]) -> str:
    lines = []
    for o in outcomes:
        worst = f"{o.worst:.3g}" if o.worst is not None else "-"
        lines.append(f"{'PASS' if o.passed else 'FAIL'} {o.name} ({o.cases} cases, worst {worst})")
        if o.detail:
            lines.append(f"    {o.detail}")
    return "\n".join(lines) + "\n"


def checks_to_json(outcomes: Iterable[CheckOutcome]) -> bytes:
    return dumps([o.model_dump(mode="json") for o in outcomes])
