"""Loading and validation of bundle files.

A bundle carries one group action: the split hull data and the acting
group's generators, relators, and labels. Validation reports the JSON path
of the offending entry, then domain constructors re-check the mathematics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .actions import GammaActionData
from .hull import SplitHullData
from .lie import NilpotentLieAlgebra, UnipotentGroupData
from .linalg import RationalMatrix


class SchemaError(ValueError):
    """A malformed bundle; the message carries the JSON path."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass
class Bundle:
    name: str
    description: str
    hull: SplitHullData
    gamma: GammaActionData
    expect: dict = field(default_factory=dict)


def _want(obj, key, kind, path, optional=False, default=None):
    if key not in obj:
        if optional:
            return default
        raise SchemaError(path, f"missing key '{key}'")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise SchemaError(f"{path}.{key}",
                          f"expected {kind.__name__}, got {type(val).__name__}")
    return val


def _matrix(obj, path) -> RationalMatrix:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise SchemaError(path, "expected a nonempty array of rows")
    width = len(obj[0])
    for i, row in enumerate(obj):
        if len(row) != width:
            raise SchemaError(f"{path}[{i}]", "ragged rows")
        for j, entry in enumerate(row):
            if not isinstance(entry, (str, int)):
                raise SchemaError(f"{path}[{i}][{j}]",
                                  "entries must be integers or fraction strings")
            if isinstance(entry, str):
                try:
                    Fraction(entry)
                except (ValueError, ZeroDivisionError):
                    raise SchemaError(f"{path}[{i}][{j}]",
                                      f"not a fraction: {entry!r}") from None
    try:
        return RationalMatrix.from_json(obj)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(path, str(exc)) from None


def _matrix_list(obj, path):
    if not isinstance(obj, list):
        raise SchemaError(path, "expected an array of matrices")
    return tuple(_matrix(m, f"{path}[{i}]") for i, m in enumerate(obj))


def _algebra(obj, path) -> NilpotentLieAlgebra:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    _want(obj, "dim", int, path)
    if "ambient" not in obj:
        raise SchemaError(path, "missing key 'ambient'")
    _matrix_list(obj["ambient"], f"{path}.ambient")
    try:
        return NilpotentLieAlgebra.from_json(obj)
    except (ValueError, KeyError, TypeError) as exc:
        raise SchemaError(path, f"algebra rejected: {exc}") from None


def _hull(obj, path) -> SplitHullData:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    algebra = _algebra(_want(obj, "lie_algebra", dict, path), f"{path}.lie_algebra")
    d = algebra.ambient[0].rows if algebra.ambient else 0
    u_gens = _matrix_list(_want(obj, "u_generators", list, path),
                          f"{path}.u_generators")
    t_gens = _matrix_list(_want(obj, "t_generators", list, path, optional=True,
                                default=[]), f"{path}.t_generators")
    hols = _want(obj, "hol_matrices", list, path, optional=True)
    hol_mats = None if hols is None else _matrix_list(hols, f"{path}.hol_matrices")
    try:
        return SplitHullData(algebra,
                             UnipotentGroupData(generators=u_gens, dim_ambient=d),
                             t_generators=t_gens, hol_matrices=hol_mats)
    except ValueError as exc:
        raise SchemaError(path, f"hull rejected: {exc}") from None


def _gamma(obj, path, algebra) -> GammaActionData:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    gens = _want(obj, "generators", list, path)
    for i, g in enumerate(gens):
        gp = f"{path}.generators[{i}]"
        if not isinstance(g, dict):
            raise SchemaError(gp, "expected an object")
        _want(g, "name", str, gp)
        _matrix(_want(g, "translation_matrix", list, gp),
                f"{gp}.translation_matrix")
        _matrix(_want(g, "hol_matrix", list, gp), f"{gp}.hol_matrix")
    relators = _want(obj, "relators", list, path, optional=True, default=[])
    for i, r in enumerate(relators):
        if not isinstance(r, str):
            raise SchemaError(f"{path}.relators[{i}]", "expected a word string")
    _want(obj, "hirsch_rank", int, path, optional=True)
    labels = _want(obj, "fitting_labels", list, path, optional=True, default=[])
    for i, lab in enumerate(labels):
        if not isinstance(lab, str):
            raise SchemaError(f"{path}.fitting_labels[{i}]", "expected a string")
    names = [g["name"] for g in gens]
    if len(set(names)) != len(names):
        raise SchemaError(f"{path}.generators", "duplicate generator names")
    unknown = [lab for lab in labels if lab not in names]
    if unknown:
        raise SchemaError(f"{path}.fitting_labels",
                          f"labels {unknown} name no generator")
    try:
        return GammaActionData.from_json(algebra, obj)
    except ValueError as exc:
        raise SchemaError(path, f"group data rejected: {exc}") from None


def load_bundle(obj) -> Bundle:
    """Parse and fully validate one bundle object."""
    if not isinstance(obj, dict):
        raise SchemaError("$", "bundle must be a JSON object")
    name = _want(obj, "name", str, "$")
    description = _want(obj, "description", str, "$", optional=True, default="")
    hull = _hull(_want(obj, "hull", dict, "$"), "$.hull")
    gamma = _gamma(_want(obj, "gamma", dict, "$"), "$.gamma", hull.algebra)
    expect = _want(obj, "expect", dict, "$", optional=True, default={})
    return Bundle(name=name, description=description, hull=hull,
                  gamma=gamma, expect=dict(expect))
