"""
Reflectwist Schemas
===================
Pydantic models for every JSON file the CLI reads, and the envelope of every
report it writes. All carriers are 0..n-1; tables are row-major.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Type, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from braided_group import BraidedGroup, FiniteGroup, SkewBrace, validate_group, validate_skew_brace
from errors import SchemaError, SizeMismatch
from twist_core import TwistDatum
from yb_core import BraidedSet, FiniteMap, Shelf, SquareMap, as_vector, check_range, cube_map, validate_braided_set, validate_shelf

FORMAT_VERSION = 1

ModelT = TypeVar("ModelT", bound=BaseModel)


class InputFile(BaseModel):
    model_config = ConfigDict(extra="forbid")


def _require_order(declared: int, actual: int, what: str) -> None:
    if declared != actual:
        raise SizeMismatch(f"{what}: declared n = {declared}, table has {actual} rows", {"n": declared, "rows": actual})


class SolutionFile(InputFile):
    """{"n", "sigma", "rho"} with sigma[a][b] = a⇀b and rho[b][a] = a↼b"""
    n: int = Field(ge=1)
    sigma: List[List[int]]
    rho: List[List[int]]

    def to_braided_set(self) -> BraidedSet:
        bs = validate_braided_set(self.sigma, self.rho)
        _require_order(self.n, bs.n, "solution")
        return bs


class MapFile(InputFile):
    k: List[int]

    def to_map(self, n: Optional[int] = None) -> FiniteMap:
        return FiniteMap.from_list(self.k, n)


class ShelfFile(InputFile):
    n: int = Field(ge=1)
    tri: List[List[int]]

    def to_shelf(self) -> Shelf:
        s = validate_shelf(self.tri)
        _require_order(self.n, s.n, "shelf")
        return s


class TwistFile(InputFile):
    """F as image pairs indexed by a·n+b; Phi and Psi as codes indexed by a·n²+b·n+c"""
    n: int = Field(ge=1)
    F: List[List[int]]
    Phi: List[int]
    Psi: List[int]

    def to_datum(self) -> TwistDatum:
        F = SquareMap.from_tuples(self.F, self.n)
        cubes = []
        for name in ("Phi", "Psi"):
            table = as_vector(getattr(self, name), name)
            check_range(table, self.n ** 3, name)
            cubes.append(cube_map(self.n, table))
        return TwistDatum(F, *cubes)

    @classmethod
    def from_datum(cls, t: TwistDatum) -> "TwistFile":
        return cls(**t.to_dict())


class GroupFile(InputFile):
    n: int = Field(ge=1)
    mul: List[List[int]]
    identity: int = 0

    def to_group(self) -> FiniteGroup:
        grp = validate_group(self.mul)
        _require_order(self.n, grp.n, "group")
        if grp.e != self.identity:
            raise SchemaError(f"declared identity {self.identity}, table identity {grp.e}", {"identity": grp.e})
        return grp


class SkewBraceFile(InputFile):
    n: int = Field(ge=1)
    add: List[List[int]]
    mul: List[List[int]]

    def to_skew_brace(self) -> SkewBrace:
        sb = validate_skew_brace(self.add, self.mul)
        _require_order(self.n, sb.n, "skew brace")
        return sb


class BraidedGroupFile(InputFile):
    """A group with a braiding on it, as written by BraidedGroup.to_dict"""
    n: int = Field(ge=1)
    mul: List[List[int]]
    identity: int = 0
    sigma: List[List[int]]
    rho: List[List[int]]

    def to_braided_group(self) -> BraidedGroup:
        grp = GroupFile(n=self.n, mul=self.mul, identity=self.identity).to_group()
        bs = SolutionFile(n=self.n, sigma=self.sigma, rho=self.rho).to_braided_set()
        return BraidedGroup(grp, bs)


class FamilyFile(InputFile):
    """Fixing family {f_x}: maps[x] is the table of f_x"""
    maps: List[List[int]]


class OneLeggedFile(InputFile):
    """varrho[b][a] = ϱ_b(a)"""
    varrho: List[List[int]]


class CommandReport(BaseModel):
    format_version: int = FORMAT_VERSION
    command: str
    ok: bool
    result: Any = None
    error: Optional[Dict[str, Any]] = None

    def dumps(self) -> str:
        return dumps(self.model_dump())


def dumps(payload: Any) -> str:
    """Canonical JSON: sorted keys, compact separators"""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def load_file(path: str, model: Type[ModelT]) -> ModelT:
    """Read a JSON file into model; any read or validation failure is a SchemaError"""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise SchemaError(f"{path}: {e}", {"path": str(path)})
    try:
        return model.model_validate(raw)
    except ValidationError as e:
        problems = [{"loc": [str(part) for part in err["loc"]], "msg": err["msg"]} for err in e.errors()]
        raise SchemaError(f"{path}: not a {model.__name__}", {"path": str(path), "problems": problems})
