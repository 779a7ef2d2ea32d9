"""Problem configuration files (TOML).

See ``docs/config.md`` for the schema. Numeric fields such as ``period``
or a condition ``location`` accept either a TOML number or a constant
expression string (``"2*pi"``, ``"pi/2"``).
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path

import tomli_w

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import expr as ex
from .bvp import BoundaryCondition, BVProblem, PostMap
from .eig import EigProblem, load_bounds
from .errors import ConfigError, ExprDomainError, ExprSyntaxError, GridError
from .grid import make_grid, make_interval_grid, make_uniform_grid
from .operators import PLAIN, VARIANTS

MODES = ("bvp", "eig")
PLACEMENTS = ("uniform", "endpoints", "interior", "midpoint", "explicit")


def constant(value, where: str) -> float:
    """A TOML number, or a string holding an x-free expression."""
    if isinstance(value, bool):
        raise ConfigError("expected a number or constant expression", where)
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"expected a number or constant expression, got {type(value).__name__}", where)
    try:
        node = ex.parse_scalar(value, var="")
        return ex.eval_scalar(node, 0.0)
    except (ExprSyntaxError, ExprDomainError) as exc:
        raise ConfigError(str(exc), where) from None


def _scalar(text, where, var="x"):
    if not isinstance(text, (str, int, float)) or isinstance(text, bool):
        raise ConfigError("expected an expression string", where)
    try:
        return ex.parse_scalar(str(text), var=var)
    except ExprSyntaxError as exc:
        raise ConfigError(str(exc), where) from None


def _operator(text, where):
    if not isinstance(text, str):
        raise ConfigError("expected an operator expression string", where)
    try:
        return ex.parse_operator(text)
    except ExprSyntaxError as exc:
        raise ConfigError(str(exc), where) from None


def _take(d: dict, allowed, where):
    unknown = set(d) - set(allowed)
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError("unknown key", f"{where}.{key}" if where else key)


def _require(d, key, where):
    if key not in d:
        raise ConfigError("missing required field", f"{where}.{key}" if where else key)
    return d[key]


def _drop_none(d):
    return {k: v for k, v in d.items() if v is not None}


@dataclass
class GridConfig:
    N: int
    period: float | str
    placement: str = "uniform"
    anchor: float | str | None = None
    interval: list | None = None
    nodes: list | None = None
    origin: float | str | None = None

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise ConfigError("expected a table", "grid")
        _take(d, [f.name for f in fields(cls)], "grid")
        N = _require(d, "N", "grid")
        if not isinstance(N, int) or isinstance(N, bool):
            raise ConfigError("must be an integer", "grid.N")
        cfg = cls(N=N, period=_require(d, "period", "grid"), **{k: d[k] for k in d if k not in ("N", "period")})
        if cfg.placement not in PLACEMENTS:
            raise ConfigError(f"must be one of {PLACEMENTS}", "grid.placement")
        if cfg.placement in ("endpoints", "interior", "midpoint") and cfg.interval is None:
            raise ConfigError(f"placement {cfg.placement!r} needs an interval", "grid.interval")
        if cfg.placement == "explicit" and cfg.nodes is None:
            raise ConfigError("explicit placement needs a node list", "grid.nodes")
        if cfg.interval is not None and (not isinstance(cfg.interval, list) or len(cfg.interval) != 2):
            raise ConfigError("must be a two-element list [a, b]", "grid.interval")
        return cfg

    def to_dict(self):
        return _drop_none(
            {
                "N": self.N,
                "period": self.period,
                "placement": self.placement,
                "anchor": self.anchor,
                "interval": self.interval,
                "nodes": self.nodes,
                "origin": self.origin,
            }
        )

    def interval_values(self):
        if self.interval is None:
            return None
        return tuple(constant(v, f"grid.interval[{i}]") for i, v in enumerate(self.interval))

    def build(self, N=None):
        N = self.N if N is None else N
        L = constant(self.period, "grid.period")
        try:
            if self.placement == "uniform":
                anchor = None if self.anchor is None else constant(self.anchor, "grid.anchor")
                origin = 0.0 if self.origin is None else constant(self.origin, "grid.origin")
                return make_uniform_grid(N, L, anchor=anchor, origin=origin)
            if self.placement == "explicit":
                nodes = [constant(v, f"grid.nodes[{i}]") for i, v in enumerate(self.nodes)]
                origin = 0.0 if self.origin is None else constant(self.origin, "grid.origin")
                return make_grid(nodes, L, origin)
            a, b = self.interval_values()
            return make_interval_grid(N, a, b, L, self.placement)
        except GridError as exc:
            raise ConfigError(str(exc), "grid") from None


@dataclass
class ConditionConfig:
    kind: str
    location: float | str
    rhs: float | str

    @classmethod
    def from_dict(cls, d, i):
        where = f"conditions[{i}]"
        if not isinstance(d, dict):
            raise ConfigError("expected a table", where)
        _take(d, ["kind", "location", "rhs"], where)
        cfg = cls(_require(d, "kind", where), _require(d, "location", where), _require(d, "rhs", where))
        if cfg.kind not in ("value", "derivative"):
            raise ConfigError("must be 'value' or 'derivative'", f"{where}.kind")
        return cfg

    def to_dict(self):
        return {"kind": self.kind, "location": self.location, "rhs": self.rhs}


@dataclass
class PostMapConfig:
    g: str
    h: str = "0"
    psi_weighted: bool = False

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise ConfigError("expected a table", "post_map")
        _take(d, ["g", "h", "psi_weighted"], "post_map")
        cfg = cls(_require(d, "g", "post_map"), d.get("h", "0"), d.get("psi_weighted", False))
        if not isinstance(cfg.psi_weighted, bool):
            raise ConfigError("must be true or false", "post_map.psi_weighted")
        return cfg

    def to_dict(self):
        return {"g": self.g, "h": self.h, "psi_weighted": self.psi_weighted}


@dataclass
class ReferenceConfig:
    exact: str | None = None
    bounds: str | None = None
    indices: list | None = None

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise ConfigError("expected a table", "reference")
        _take(d, ["exact", "bounds", "indices"], "reference")
        return cls(d.get("exact"), d.get("bounds"), d.get("indices"))

    def to_dict(self):
        return _drop_none({"exact": self.exact, "bounds": self.bounds, "indices": self.indices})


@dataclass
class ProblemConfig:
    mode: str
    grid: GridConfig
    operator: str
    variant: str = PLAIN
    name: str | None = None
    description: str | None = None
    rhs: str | None = None
    conditions: list = field(default_factory=list)
    post_map: PostMapConfig | None = None
    exact: str | None = None
    B: str | None = None
    imag_tol: float | None = None
    reference: ReferenceConfig | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "ProblemConfig":
        _take(
            d,
            ["mode", "name", "description", "grid", "operator", "rhs", "conditions",
             "post_map", "exact", "B", "imag_tol", "reference"],
            "",
        )
        mode = _require(d, "mode", "")
        if mode not in MODES:
            raise ConfigError(f"must be one of {MODES}", "mode")
        grid = GridConfig.from_dict(_require(d, "grid", ""))
        op = _require(d, "operator", "")
        if not isinstance(op, dict):
            raise ConfigError("expected a table with 'expr' and 'variant'", "operator")
        _take(op, ["expr", "variant"], "operator")
        variant = op.get("variant", PLAIN)
        if variant not in VARIANTS:
            raise ConfigError(f"must be one of {VARIANTS}", "operator.variant")
        cfg = cls(
            mode=mode,
            grid=grid,
            operator=_require(op, "expr", "operator"),
            variant=variant,
            name=d.get("name"),
            description=d.get("description"),
            rhs=d.get("rhs"),
            conditions=[ConditionConfig.from_dict(c, i) for i, c in enumerate(d.get("conditions", []))],
            post_map=PostMapConfig.from_dict(d["post_map"]) if "post_map" in d else None,
            exact=d.get("exact"),
            B=d.get("B"),
            imag_tol=d.get("imag_tol"),
            reference=ReferenceConfig.from_dict(d["reference"]) if "reference" in d else None,
        )
        cfg.validate()
        return cfg

    def validate(self):
        _operator(self.operator, "operator.expr")
        if self.mode == "bvp":
            if self.rhs is None:
                raise ConfigError("missing required field", "rhs")
            _scalar(self.rhs, "rhs")
            if self.B is not None or self.reference is not None:
                raise ConfigError("only valid in eig mode", "B" if self.B is not None else "reference")
            if self.post_map is not None:
                _scalar(self.post_map.g, "post_map.g")
                _scalar(self.post_map.h, "post_map.h")
                if self.post_map.psi_weighted != (self.variant == "preconditioned"):
                    raise ConfigError(
                        "must be true exactly when operator.variant is 'preconditioned'",
                        "post_map.psi_weighted",
                    )
            for i, c in enumerate(self.conditions):
                constant(c.location, f"conditions[{i}].location")
                constant(c.rhs, f"conditions[{i}].rhs")
            if self.exact is not None:
                _scalar(self.exact, "exact")
        else:
            for key in ("rhs", "post_map", "exact"):
                if getattr(self, key) not in (None, []):
                    raise ConfigError("only valid in bvp mode", key)
            if self.conditions:
                raise ConfigError("only valid in bvp mode", "conditions")
            if self.B is not None:
                _operator(self.B, "B")
            if self.reference is not None:
                if self.reference.exact is not None:
                    _scalar(self.reference.exact, "reference.exact", var="j")
                if self.reference.bounds is not None:
                    try:
                        load_bounds(self.reference.bounds)
                    except KeyError:
                        raise ConfigError("unknown bounds table", "reference.bounds") from None

    def to_dict(self) -> dict:
        d = {"mode": self.mode}
        if self.name is not None:
            d["name"] = self.name
        if self.description is not None:
            d["description"] = self.description
        for key in ("rhs", "exact", "B", "imag_tol"):
            if getattr(self, key) is not None:
                d[key] = getattr(self, key)
        d["grid"] = self.grid.to_dict()
        d["operator"] = {"expr": self.operator, "variant": self.variant}
        if self.conditions:
            d["conditions"] = [c.to_dict() for c in self.conditions]
        if self.post_map is not None:
            d["post_map"] = self.post_map.to_dict()
        if self.reference is not None:
            d["reference"] = self.reference.to_dict()
        return d

    def dumps(self) -> str:
        return tomli_w.dumps(self.to_dict())

    def build(self, N: int | None = None):
        """Construct the BVProblem or EigProblem, optionally overriding the node count."""
        grid = self.grid.build(N)
        op = _operator(self.operator, "operator.expr")
        if self.mode == "bvp":
            conds = [
                BoundaryCondition(c.kind, constant(c.location, f"conditions[{i}].location"),
                                  constant(c.rhs, f"conditions[{i}].rhs"))
                for i, c in enumerate(self.conditions)
            ]
            post = None
            if self.post_map is not None:
                post = PostMap(_scalar(self.post_map.g, "post_map.g"), _scalar(self.post_map.h, "post_map.h"),
                               self.post_map.psi_weighted)
            return BVProblem(
                grid=grid,
                operator=op,
                rhs=_scalar(self.rhs, "rhs"),
                variant=self.variant,
                conditions=conds,
                post_map=post,
                exact_solution=None if self.exact is None else _scalar(self.exact, "exact"),
                interval=self.grid.interval_values(),
            )
        ref = self.reference or ReferenceConfig()
        return EigProblem(
            grid=grid,
            A_expr=op,
            B_expr=None if self.B is None else _operator(self.B, "B"),
            variant=self.variant,
            imag_tol=1e-6 if self.imag_tol is None else float(self.imag_tol),
            exact=None if ref.exact is None else _scalar(ref.exact, "reference.exact", var="j"),
            bounds=None if ref.bounds is None else load_bounds(ref.bounds),
        )


def loads(text: str, source: str = "<string>") -> ProblemConfig:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{source}: {exc}") from None
    return ProblemConfig.from_dict(data)


def load(path) -> ProblemConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text, str(path))


EXAMPLES = ("example1", "example2", "example3", "example4", "example5a", "example5b", "example6")


def example_path(name: str):
    """Path of a bundled example config (``example1`` ... ``example6``)."""
    if name not in EXAMPLES:
        raise KeyError(f"unknown example {name!r}; choose from {EXAMPLES}")
    return resources.files("trigspec").joinpath(f"data/examples/{name}.toml")


def load_example(name: str) -> ProblemConfig:
    return loads(example_path(name).read_text(), name)
