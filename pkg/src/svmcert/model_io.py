"""Model (JSON) and dataset (CSV) file formats."""

from __future__ import annotations

import csv
import hashlib
import json
import math
from pathlib import Path

import numpy as np

from .errors import InputError
from .intervals import IntervalValue
from .model import (
    Feature,
    FeatureSchema,
    KernelSpec,
    LabeledDataset,
    NumericFeature,
    SvmModel,
    TierFeature,
)


def _feature_to_json(f: Feature) -> dict:
    if isinstance(f, NumericFeature):
        return {"name": f.name, "kind": "numeric", "range": [f.range.lo, f.range.hi]}
    return {
        "name": f.name,
        "kind": "tier",
        "category": f.category,
        "position": f.position,
        "width": f.width,
    }


def _feature_from_json(obj: dict, where: str) -> Feature:
    try:
        kind = obj["kind"]
        name = obj["name"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"{where}: feature entry missing {exc}") from exc
    if kind == "numeric":
        lo, hi = obj.get("range", [0.0, 1.0])
        return NumericFeature(name=name, range=IntervalValue(float(lo), float(hi)))
    if kind == "tier":
        try:
            return TierFeature(
                name=name,
                category=obj["category"],
                position=int(obj["position"]),
                width=int(obj["width"]),
            )
        except KeyError as exc:
            raise InputError(f"{where}: tier feature {name!r} missing {exc}") from exc
    raise InputError(f"{where}: unknown feature kind {kind!r}")


def schema_to_json(schema: FeatureSchema) -> dict:
    return {"features": [_feature_to_json(f) for f in schema.features]}


def schema_from_json(obj: dict, where: str = "schema") -> FeatureSchema:
    feats = obj.get("features")
    if not isinstance(feats, list) or not feats:
        raise InputError(f"{where}: 'features' must be a nonempty list")
    return FeatureSchema(tuple(_feature_from_json(f, where) for f in feats))


def model_to_json(m: SvmModel) -> dict:
    kernel: dict = {"kind": m.kernel.kind}
    if m.kernel.kind == "polynomial":
        kernel["c"] = m.kernel.coeff
        kernel["degree"] = m.kernel.degree
    elif m.kernel.kind == "rbf":
        kernel["gamma"] = m.kernel.gamma
    return {
        "kernel": kernel,
        "bias": m.bias,
        "alphas": [float(a) for a in m.alphas],
        "support_vectors": [[float(v) for v in sv] for sv in m.support_vectors],
        "schema": schema_to_json(m.schema),
    }


def model_from_json(obj: dict) -> SvmModel:
    classes = obj.get("classes")
    if classes is not None and sorted(float(c) for c in classes) != [-1.0, 1.0]:
        raise InputError(
            f"only binary models with classes [-1, 1] are supported, got {classes}"
        )
    try:
        kobj = obj["kernel"]
        kind = kobj["kind"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"model file missing kernel field: {exc}") from exc
    if kind == "linear":
        kernel = KernelSpec.linear()
    elif kind == "polynomial":
        kernel = KernelSpec.polynomial(float(kobj.get("c", 0.0)), int(kobj["degree"]))
    elif kind == "rbf":
        kernel = KernelSpec.rbf(float(kobj["gamma"]))
    else:
        raise InputError(f"unknown kernel kind {kind!r}")
    for fieldname in ("bias", "alphas", "support_vectors", "schema"):
        if fieldname not in obj:
            raise InputError(f"model file missing field {fieldname!r}")
    schema = schema_from_json(obj["schema"])
    try:
        bias = float(obj["bias"])
        alphas = np.asarray(obj["alphas"], dtype=float)
        svs = np.asarray(obj["support_vectors"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"model file has malformed numeric fields: {exc}") from exc
    if not math.isfinite(bias) or not np.all(np.isfinite(alphas)) or not np.all(np.isfinite(svs)):
        raise InputError("model file contains non-finite numbers")
    return SvmModel(
        kernel=kernel, support_vectors=svs, alphas=alphas, bias=bias, schema=schema
    )


def save_model(m: SvmModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_json(m), indent=2) + "\n")


def load_model(path: str | Path) -> SvmModel:
    try:
        obj = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise InputError(f"model file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"model file {path} is not valid JSON: {exc}") from exc
    return model_from_json(obj)


def model_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def save_dataset(data: LabeledDataset, schema: FeatureSchema, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f.name for f in schema.features] + ["label"])
        for row, label in zip(data.X, data.y):
            writer.writerow([repr(float(v)) for v in row] + [int(label)])


def load_dataset(path: str | Path, schema: FeatureSchema) -> LabeledDataset:
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise InputError(f"dataset file {path} is empty") from None
            rows = list(reader)
    except FileNotFoundError as exc:
        raise InputError(f"dataset file not found: {path}") from exc
    expected = [f.name for f in schema.features] + ["label"]
    if header != expected:
        raise InputError(
            f"dataset header {header} does not match schema columns {expected}"
        )
    if not rows:
        raise InputError(f"dataset file {path} has no data rows")
    X = np.empty((len(rows), schema.width), dtype=float)
    y = np.empty(len(rows), dtype=int)
    for r, row in enumerate(rows):
        if len(row) != len(expected):
            raise InputError(f"dataset row {r + 1} has {len(row)} fields, expected {len(expected)}")
        try:
            X[r] = [float(v) for v in row[:-1]]
            lab = float(row[-1])
        except ValueError as exc:
            raise InputError(f"dataset row {r + 1}: {exc}") from exc
        if lab not in (-1.0, 1.0):
            raise InputError(f"dataset row {r + 1}: label must be -1 or +1, got {row[-1]}")
        y[r] = int(lab)
        try:
            schema.validate_point(X[r])
        except InputError as exc:
            raise InputError(f"dataset row {r + 1}: {exc}") from exc
    return LabeledDataset(X=X, y=y)
