"""File formats: coefficient/representation/fitted-model JSON, data and path
CSVs, and the run manifest embedded in every CLI artifact.

Model coefficient files may carry `a_sign`:

    "drift"  (default)  A_blocks are the drift-recursion blocks A_j of
                        dX_p = [-A_p ... -A_1] X dt + ...
    "table"             the file tabulates the negated drift blocks, i.e. the
                        companion's bottom block row, as some published
                        coefficient tables do.  The loader negates them.

Machine files serialize floats at full precision (shortest round-trip
representation, up to 17 significant digits); human-readable tables use 4.
"""

from __future__ import annotations

import calendar
import csv
import datetime as _dt
import hashlib
import json
import os
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .errors import ValidationError
from .estimate import (
    FittedMcarModel,
    SeasonalityCoefficients,
    VolatilitySegment,
    VolatilitySpec,
)
from .model import McarmaCoefficients, ModelOrders, VarmaRepresentation
from .nig import NigParams

__all__ = [
    "RunManifest",
    "write_model_json",
    "read_model_json",
    "write_representation_json",
    "read_representation_json",
    "write_fitted_model_json",
    "read_fitted_model_json",
    "load_data_csv",
    "write_paths_csv",
    "write_error_table_csv",
    "sha256_file",
    "dumps_canonical",
    "fmt4",
]


def fmt4(x: float) -> str:
    """Human-table float formatting: 4 significant digits."""
    return f"{float(x):.4g}"


def _jsonify(obj):
    if isinstance(obj, np.ndarray):
        return _jsonify(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    return obj


def dumps_canonical(obj) -> str:
    """Deterministic JSON text: sorted keys, full float precision."""
    return json.dumps(_jsonify(obj), sort_keys=True, indent=2)


def sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass(frozen=True)
class RunManifest:
    """Provenance block embedded in every CLI output artifact.

    The timestamp is null unless SOURCE_DATE_EPOCH is set or stamping is
    requested explicitly, so identical inputs and seed reproduce identical
    output bytes.
    """

    command: str
    config_digest: str
    input_digests: dict
    seed: object
    tool_version: str = __version__
    timestamp: str | None = None

    @classmethod
    def create(cls, command: str, config: dict, input_paths: dict, seed, stamp: bool = False):
        cfg_digest = hashlib.sha256(dumps_canonical(config or {}).encode()).hexdigest()
        digests = {name: sha256_file(p) for name, p in (input_paths or {}).items()}
        ts = None
        epoch = os.environ.get("SOURCE_DATE_EPOCH")
        if epoch is not None:
            ts = _dt.datetime.fromtimestamp(int(epoch), _dt.timezone.utc).isoformat()
        elif stamp:
            ts = _dt.datetime.now(_dt.timezone.utc).isoformat()
        return cls(command=command, config_digest=cfg_digest, input_digests=digests,
                   seed=seed, timestamp=ts)

    def to_dict(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------------------
# coefficient model files


def model_to_dict(coeffs: McarmaCoefficients, a_sign: str = "drift") -> dict:
    o = coeffs.orders
    if a_sign not in ("drift", "table"):
        raise ValidationError(f"a_sign must be 'drift' or 'table', got {a_sign!r}")
    A = [np.asarray(a, dtype=float) for a in coeffs.A_blocks]
    if a_sign == "table":
        A = [-a for a in A]
    return {
        "orders": {"p": o.p, "q": o.q, "d": o.d, "m": o.m},
        "A_blocks": [a.tolist() for a in A],
        "B_blocks": [np.asarray(b, dtype=float).tolist() for b in coeffs.B_blocks],
        "a_sign": a_sign,
    }


def write_model_json(path: str, coeffs: McarmaCoefficients, a_sign: str = "drift",
                     manifest: RunManifest | None = None, extra: dict | None = None):
    doc = model_to_dict(coeffs, a_sign=a_sign)
    if manifest is not None:
        doc["manifest"] = manifest.to_dict()
    if extra:
        doc.update(extra)
    with open(path, "w") as fh:
        fh.write(dumps_canonical(doc))
        fh.write("\n")


def model_from_dict(doc: dict) -> tuple[McarmaCoefficients, dict]:
    try:
        od = doc["orders"]
        orders = ModelOrders(p=int(od["p"]), q=int(od["q"]), d=int(od["d"]), m=int(od["m"]))
        a_sign = doc.get("a_sign", "drift")
        A = [np.asarray(a, dtype=float) for a in doc["A_blocks"]]
        if a_sign == "table":
            A = [-a for a in A]
        elif a_sign != "drift":
            raise ValidationError(f"unknown a_sign {a_sign!r}")
        B = [np.asarray(b, dtype=float) for b in doc["B_blocks"]]
    except KeyError as exc:
        raise ValidationError(f"model file missing field {exc}") from exc
    coeffs = McarmaCoefficients(orders=orders, A_blocks=tuple(A), B_blocks=tuple(B))
    meta = {"a_sign": a_sign, "manifest": doc.get("manifest")}
    return coeffs, meta


def read_model_json(path: str) -> tuple[McarmaCoefficients, dict]:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON: {exc}") from exc
    return model_from_dict(doc)


# ---------------------------------------------------------------------------
# representation files


def representation_to_dict(rep: VarmaRepresentation) -> dict:
    o = rep.orders
    return {
        "orders": {"p": o.p, "q": o.q, "d": o.d, "m": o.m},
        "step": float(rep.step),
        "phi_blocks": [np.asarray(b, dtype=float).tolist() for b in rep.phi_blocks],
        "noise_loadings": {str(k): np.asarray(v, dtype=float).tolist()
                           for k, v in sorted(rep.noise_loadings.items())},
    }


def write_representation_json(path: str, rep: VarmaRepresentation,
                              manifest: RunManifest | None = None):
    doc = representation_to_dict(rep)
    if manifest is not None:
        doc["manifest"] = manifest.to_dict()
    with open(path, "w") as fh:
        fh.write(dumps_canonical(doc))
        fh.write("\n")


def representation_from_dict(doc: dict) -> VarmaRepresentation:
    try:
        od = doc["orders"]
        orders = ModelOrders(p=int(od["p"]), q=int(od["q"]), d=int(od["d"]), m=int(od["m"]))
        phi = tuple(np.asarray(b, dtype=float) for b in doc["phi_blocks"])
        nl = {int(k): np.asarray(v, dtype=float) for k, v in doc["noise_loadings"].items()}
        return VarmaRepresentation(orders=orders, step=float(doc["step"]),
                                   phi_blocks=phi, noise_loadings=nl)
    except KeyError as exc:
        raise ValidationError(f"representation file missing field {exc}") from exc


def read_representation_json(path: str) -> VarmaRepresentation:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON: {exc}") from exc
    return representation_from_dict(doc)


# ---------------------------------------------------------------------------
# fitted extended-model files


def fitted_model_to_dict(model: FittedMcarModel) -> dict:
    vol = model.volatility
    return {
        "orders": {"p": model.orders.p, "q": model.orders.q,
                   "d": model.orders.d, "m": model.orders.m},
        "seasonality": model.seasonality.coeffs.tolist(),
        "volatility": {
            "glue": [list(g) for g in vol.glue],
            "segments": [
                [
                    {
                        "frequency": s.frequency,
                        "n_harmonics": s.n_harmonics,
                        "interval": list(s.interval),
                        "coeffs": np.asarray(s.coeffs, dtype=float).tolist(),
                    }
                    for s in segs
                ]
                for segs in vol.segments
            ],
        },
        "mcar": model_to_dict(model.mcar_coefficients, a_sign="drift"),
        "residual_laws": [
            {"a": q.a, "b": q.b, "delta": q.delta, "mu": q.mu} for q in model.residual_laws
        ],
        "beta": np.asarray(model.beta, dtype=float).tolist(),
        "c_delta": float(model.c_delta),
        "sigma_hat": np.asarray(model.sigma_hat, dtype=float).tolist(),
        "diagnostics": _jsonify(model.diagnostics),
    }


def write_fitted_model_json(path: str, model: FittedMcarModel,
                            manifest: RunManifest | None = None):
    doc = fitted_model_to_dict(model)
    if manifest is not None:
        doc["manifest"] = manifest.to_dict()
    with open(path, "w") as fh:
        fh.write(dumps_canonical(doc))
        fh.write("\n")


def fitted_model_from_dict(doc: dict) -> FittedMcarModel:
    try:
        od = doc["orders"]
        orders = ModelOrders(p=int(od["p"]), q=int(od["q"]), d=int(od["d"]), m=int(od["m"]))
        seasonality = SeasonalityCoefficients(np.asarray(doc["seasonality"], dtype=float))
        vol_doc = doc["volatility"]
        segments = tuple(
            tuple(
                VolatilitySegment(
                    frequency=float(s["frequency"]),
                    n_harmonics=int(s["n_harmonics"]),
                    interval=tuple(s["interval"]),
                    coeffs=np.asarray(s["coeffs"], dtype=float),
                )
                for s in segs
            )
            for segs in vol_doc["segments"]
        )
        volatility = VolatilitySpec(segments=segments,
                                    glue=tuple(tuple(g) for g in vol_doc["glue"]))
        coeffs, _ = model_from_dict(doc["mcar"])
        laws = tuple(NigParams(a=q["a"], b=q["b"], delta=q["delta"], mu=q["mu"])
                     for q in doc["residual_laws"])
        return FittedMcarModel(
            orders=orders,
            seasonality=seasonality,
            volatility=volatility,
            mcar_coefficients=coeffs,
            residual_laws=laws,
            beta=np.asarray(doc["beta"], dtype=float),
            c_delta=float(doc["c_delta"]),
            sigma_hat=np.asarray(doc["sigma_hat"], dtype=float),
            diagnostics=doc.get("diagnostics", {}),
        )
    except KeyError as exc:
        raise ValidationError(f"fitted-model file missing field {exc}") from exc


def read_fitted_model_json(path: str) -> FittedMcarModel:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON: {exc}") from exc
    return fitted_model_from_dict(doc)


# ---------------------------------------------------------------------------
# data CSV


def day_of_year_365(date: _dt.date) -> int:
    """Day of year on the 365-day calendar (Feb 29 removed)."""
    doy = date.timetuple().tm_yday
    if calendar.isleap(date.year) and doy >= 61:
        doy -= 1
    return doy


def load_data_csv(path: str):
    """Load a daily two-(or more-)dimensional series.

    Expected header: date,dim1,dim2,...; ISO dates, one row per day.
    Feb-29 rows are dropped.  Returns (values (n, d), day_of_year (n,),
    dates list).  Malformed rows raise ValidationError with the line number.
    """
    values = []
    doys = []
    dates = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{path}: empty file") from None
        if not header or header[0].strip().lower() != "date":
            raise ValidationError(f"{path}:1: header must start with 'date', got {header!r}")
        width = len(header)
        if width < 2:
            raise ValidationError(f"{path}:1: need at least one value column")
        prev = None
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != width:
                raise ValidationError(f"{path}:{lineno}: expected {width} fields, got {len(row)}")
            try:
                date = _dt.date.fromisoformat(row[0].strip())
            except ValueError as exc:
                raise ValidationError(f"{path}:{lineno}: bad date {row[0]!r}: {exc}") from exc
            if date.month == 2 and date.day == 29:
                continue
            try:
                vals = [float(x) for x in row[1:]]
            except ValueError as exc:
                raise ValidationError(f"{path}:{lineno}: bad value: {exc}") from exc
            if prev is not None and date <= prev:
                raise ValidationError(f"{path}:{lineno}: dates must be strictly increasing")
            prev = date
            dates.append(date)
            doys.append(day_of_year_365(date))
            values.append(vals)
    if not values:
        raise ValidationError(f"{path}: no data rows")
    return np.asarray(values, dtype=float), np.asarray(doys, dtype=int), dates


# ---------------------------------------------------------------------------
# CSV outputs


def _write_manifest_comment(fh, manifest: RunManifest | None):
    if manifest is not None:
        fh.write("# manifest: " + json.dumps(_jsonify(manifest.to_dict()), sort_keys=True) + "\n")


def write_paths_csv(path: str, pathset, manifest: RunManifest | None = None):
    """Paths as rows t, path_id, dim, value."""
    values = pathset.values
    n_paths, n_times, dim = values.shape
    with open(path, "w", newline="") as fh:
        _write_manifest_comment(fh, manifest)
        fh.write("t,path_id,dim,value\n")
        for i in range(n_paths):
            for j in range(n_times):
                t = float(pathset.times[j])
                for k in range(dim):
                    fh.write(f"{t!r},{i},{k + 1},{float(values[i, j, k])!r}\n")


def write_error_table_csv(path: str, table, manifest: RunManifest | None = None):
    """Strong-error table: h, epsilon, error_L2_sup, n_paths, seed."""
    with open(path, "w", newline="") as fh:
        _write_manifest_comment(fh, manifest)
        fh.write("h,epsilon,error_L2_sup,n_paths,seed\n")
        for row in table.rows:
            eps = "" if row["epsilon"] is None else repr(float(row["epsilon"]))
            fh.write(f"{float(row['h'])!r},{eps},{float(row['error_L2_sup'])!r},"
                     f"{row['n_paths']},{row['seed']}\n")
