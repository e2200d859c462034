import json

import numpy as np
import pandas as pd

from encrypted_cloning.utilities import format_coefficient, to_builtin

FORMATS = ("text", "json", "csv")
CSV_FLOAT_FORMAT = "%.17g"
DENSE_DISPLAY_QUBITS = 3


def _check_format(fmt):
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {', '.join(FORMATS)}, got '{fmt}'")


def dumps_json(payload):
    # float repr is the shortest text that round-trips the double exactly
    return json.dumps(to_builtin(payload), indent=2, allow_nan=False) + "\n"


def _csv(frame):
    return frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def classification_frame(records):
    return pd.DataFrame(
        [
            {
                "subset": record.subset.to_text(),
                "family": record.family,
                "predicted": record.predicted.value,
                "rule_path": " > ".join(record.rule_path),
            }
            for record in records
        ],
        columns=["subset", "family", "predicted", "rule_path"],
    )


def render_classification(records, fmt="text"):
    """Lists every subset with its predicted class and the branch that fired."""
    _check_format(fmt)
    if fmt == "json":
        return dumps_json([record.to_dict() for record in records])
    frame = classification_frame(records)
    if fmt == "csv":
        return _csv(frame)
    return frame.to_string(index=False) + "\n"


def reduction_payload(n, subset, b, path, state, decomposition, observed, tol):
    payload = {
        "n": n,
        "subset": subset.to_text(),
        "labels": list(subset.labels),
        "input": list(b.as_tuple()),
        "path": path,
        "terms": state.to_records(),
        "observed": observed.value,
        "channels": "".join(decomposition.active_channels(tol)),
        "norms": dict(zip(("x", "y", "z"), decomposition.norms)),
        "dense": None,
    }
    if subset.size <= DENSE_DISPLAY_QUBITS:
        payload["dense"] = state.to_dense(dense_limit=DENSE_DISPLAY_QUBITS).entries
    return payload


def render_reduction(payload, fmt="text"):
    """Reduced state as Pauli terms, with the dense matrix for small subsets."""
    _check_format(fmt)
    if fmt == "json":
        return dumps_json(payload)
    if fmt == "csv":
        frame = pd.DataFrame(payload["terms"], columns=["string", "re", "im"])
        return _csv(frame)
    x, y, z = payload["input"]
    lines = [
        f"n={payload['n']} keep={payload['subset']} input=({x:g}, {y:g}, {z:g}) path={payload['path']}",
        f"labels: {' '.join(payload['labels']) or '-'}",
        f"observed: {payload['observed']} (active channels: {payload['channels'] or 'none'})",
        "norms: " + " ".join(f"{name}={value:.6g}" for name, value in payload["norms"].items()),
        "terms:",
    ]
    for record in payload["terms"]:
        lines.append(f"  {record['string'] or '1':<{max(len(payload['labels']), 1)}}  "
                     f"{format_coefficient(complex(record['re'], record['im']))}")
    if payload["dense"] is not None:
        lines.append("dense:")
        matrix = np.array2string(
            np.asarray(payload["dense"]),
            precision=6,
            suppress_small=True,
            max_line_width=160,
        )
        lines.extend("  " + line for line in matrix.splitlines())
    return "\n".join(lines) + "\n"


def render_gamma(table, fmt="text"):
    _check_format(fmt)
    if fmt == "json":
        return dumps_json(table.to_dict())
    if fmt == "csv":
        frame = pd.DataFrame([entry.to_dict() for entry in table.entries], columns=["j", "r", "letter", "re", "im"])
        return _csv(frame)
    return table.to_text() + "\n"


def render_verification(report, fmt="text"):
    """Serializes a VerificationReport; rows stay in sweep order so output is byte-stable."""
    _check_format(fmt)
    if fmt == "json":
        return dumps_json(
            {
                "meta": report.meta,
                "results": list(report.rows),
                "mismatches": list(report.mismatches),
            },
        )
    frame = report.to_frame()
    if fmt == "csv":
        return _csv(frame)
    meta = report.meta
    lines = [
        f"n_max={meta['n_max']} tol={meta['tol']:g} seed={meta['seed']} samples={meta['samples']} path={meta['path']}",
        f"assumption: {meta['assumption']}",
    ]
    for info in meta["per_n"]:
        extra = ""
        if info["unitarity"] is not None:
            extra = f" unitarity={info['unitarity']:.3g} path_agreement={info['path_agreement']:.3g}"
        lines.append(f"n={info['n']} path={info['path']} subsets={info['subsets']}{extra}")
    lines.append(frame.to_string(index=False, na_rep="-"))
    max_err = meta["max_err"]
    lines.append(
        f"subsets={meta['subsets']} mismatches={meta['mismatches']} "
        f"max_err={'-' if max_err is None else format(max_err, '.3g')}",
    )
    if meta["duration_ms"] is not None:
        lines.append(f"duration_ms={meta['duration_ms']:.0f}")
    for mismatch in report.mismatches:
        lines.append(f"MISMATCH n={mismatch['n']} {mismatch['subset']}: {mismatch['reason']}")
    return "\n".join(lines) + "\n"


def mismatch_summary(report):
    return f"{len(report.mismatches)} mismatch(es) in {report.subset_count} subsets"
