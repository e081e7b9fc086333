"""Problem files: parsing, schema validation and canonical serialisation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from .dynamics import PolynomialGroup, PolynomialMap, bch_group_from_algebra, lie_algebra_of
from .errors import SpecError
from .exact import Matrix, parse_rational, rational_str
from .lefschetz import FoliationChoice, FoliationKind
from .lie import NilpotentLieAlgebra


@lru_cache(maxsize=1)
def schema() -> dict:
    return json.loads(resources.files("nillefschetz").joinpath("data/spec-schema.json").read_text())


def fixture_names() -> list[str]:
    root = resources.files("nillefschetz").joinpath("fixtures")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def fixture_path(name: str):
    return resources.files("nillefschetz").joinpath("fixtures", f"{name}.json")


@dataclass
class ProblemSpec:
    name: str
    description: str | None = None
    lie_algebra: NilpotentLieAlgebra | None = None
    group: PolynomialGroup | None = None
    endomorphism_map: PolynomialMap | None = None
    endomorphism_matrix: Matrix | None = None
    foliation: FoliationChoice | None = None
    precision: Fraction | None = None
    expected_betti: list[int] | None = None
    warnings: list[str] = field(default_factory=list)
    _bch: PolynomialGroup | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.lie_algebra.dim if self.lie_algebra is not None else self.group.dim

    @property
    def group_is_explicit(self) -> bool:
        return self.group is not None

    def algebra(self) -> NilpotentLieAlgebra:
        return self.lie_algebra if self.lie_algebra is not None else lie_algebra_of(self.group)

    def resolved_group(self) -> PolynomialGroup:
        if self.group is not None:
            return self.group
        if self._bch is None:
            import warnings as _w

            with _w.catch_warnings():
                _w.simplefilter("ignore")
                self._bch = bch_group_from_algebra(self.lie_algebra)
        return self._bch

    def endomorphism(self) -> PolynomialMap | None:
        if self.endomorphism_map is not None:
            return self.endomorphism_map
        if self.endomorphism_matrix is not None:
            return PolynomialMap.linear(self.endomorphism_matrix)
        return None

    def to_json(self) -> dict:
        out: dict = {"name": self.name}
        if self.description is not None:
            out["description"] = self.description
        if self.lie_algebra is not None:
            out["lie_algebra"] = self.lie_algebra.to_json()
        if self.group is not None:
            out["group"] = self.group.to_json()
        if self.endomorphism_map is not None:
            out["endomorphism"] = {"map": self.endomorphism_map.to_json()}
        elif self.endomorphism_matrix is not None:
            out["endomorphism"] = {"matrix": self.endomorphism_matrix.to_json()}
        if self.foliation is not None:
            if self.foliation.kind is FoliationKind.CUSTOM:
                out["foliation"] = {"custom": [[rational_str(Fraction(v)) for v in b]
                                               for b in self.foliation.custom_basis]}
            else:
                out["foliation"] = self.foliation.kind.value.lower()
        if self.precision is not None:
            out["precision"] = rational_str(self.precision)
        if self.expected_betti is not None:
            out["expected_betti"] = list(self.expected_betti)
        return out


def _schema_error(err: jsonschema.ValidationError, source: str) -> SpecError:
    path = "/".join(str(p) for p in err.absolute_path) or "(root)"
    exc = SpecError(f"{source}: schema violation at {path}: {err.message}")
    exc.details = {"kind": "schema", "path": list(err.absolute_path), "message": err.message}
    return exc


def parse_problem(text: str, source: str = "<string>") -> ProblemSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        exc = SpecError(f"{source}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}")
        exc.details = {"kind": "parse", "line": e.lineno, "column": e.colno, "position": e.pos,
                       "message": e.msg}
        raise exc from None
    return problem_from_json(data, source)


def problem_from_json(data, source: str = "<data>") -> ProblemSpec:
    validator = jsonschema.Draft202012Validator(schema())
    err = jsonschema.exceptions.best_match(validator.iter_errors(data))
    if err is not None:
        raise _schema_error(err, source)
    try:
        spec = ProblemSpec(name=data["name"], description=data.get("description"))
        if "lie_algebra" in data:
            spec.lie_algebra = NilpotentLieAlgebra.from_json(data["lie_algebra"])
        if "group" in data:
            spec.group = PolynomialGroup.from_json(data["group"])
        n = spec.dim
        if spec.lie_algebra is not None and spec.group is not None and spec.group.dim != n:
            raise SpecError(f"{source}: group dimension {spec.group.dim} != algebra dimension {n}")
        endo = data.get("endomorphism")
        if endo is not None:
            if "map" in endo:
                if len(endo["map"]) != n:
                    raise SpecError(f"{source}: endomorphism has {len(endo['map'])} outputs, expected {n}")
                spec.endomorphism_map = PolynomialMap.from_json(n, endo["map"])
            else:
                M = Matrix.rational(endo["matrix"])
                if M.shape != (n, n):
                    raise SpecError(f"{source}: endomorphism matrix has shape {M.shape}, expected {(n, n)}")
                spec.endomorphism_matrix = M
        fol = data.get("foliation")
        if isinstance(fol, str):
            spec.foliation = FoliationChoice.parse(fol)
        elif isinstance(fol, dict):
            basis = [[parse_rational(v) for v in row] for row in fol["custom"]]
            if any(len(b) != n for b in basis):
                raise SpecError(f"{source}: custom foliation vectors must have length {n}")
            spec.foliation = FoliationChoice(FoliationKind.CUSTOM, basis)
        if "precision" in data:
            spec.precision = parse_rational(data["precision"])
            if spec.precision <= 0:
                raise SpecError(f"{source}: precision must be positive")
        if "expected_betti" in data:
            spec.expected_betti = list(data["expected_betti"])
    except SpecError:
        raise
    except (ValueError, KeyError, IndexError) as e:
        raise SpecError(f"{source}: {e}") from None
    return spec


def load_problem(path) -> ProblemSpec:
    """Read a problem file; a bare fixture name or ``fixtures/<name>.json`` falls back to the bundled corpus."""
    p = Path(path)
    if not p.exists():
        stem = p.name[:-5] if p.name.endswith(".json") else p.name
        if stem in fixture_names() and (len(p.parts) == 1 or p.parent.name == "fixtures"):
            return parse_problem(fixture_path(stem).read_text(), str(path))
        exc = SpecError(f"{path}: no such file")
        exc.details = {"kind": "io", "message": "no such file"}
        raise exc
    try:
        text = p.read_text()
    except OSError as e:
        exc = SpecError(f"{path}: {e.strerror}")
        exc.details = {"kind": "io", "message": e.strerror}
        raise exc from None
    return parse_problem(text, str(path))


def dump_problem(spec: ProblemSpec) -> str:
    return json.dumps(spec.to_json(), indent=2) + "\n"
