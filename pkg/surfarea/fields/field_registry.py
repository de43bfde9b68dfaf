"""Registry of the built-in fields, addressed by "name:k1=v1,k2=v2" specs."""
from collections import namedtuple, OrderedDict
from typing import Callable, Dict, List, Union

from surfarea.errors import InvalidParameter, UnknownField
from surfarea.fields.analytic import (
    AffineField,
    AffineMap,
    CylinderParam,
    CylinderSlice,
    GaussBump,
    QuadraticField,
    ScalarField,
    VectorField3,
)
from surfarea.utils import parse_key_values, split_spec


FieldInfo = namedtuple("FieldInfo", ["name", "factory", "params", "description"])


field_info = OrderedDict()


def register_field(
    names: List[str], factory: Callable, params: Dict[str, float], description: str
):
    for name in names:
        field_info[name] = FieldInfo(names[0], factory, dict(params), description)


def list_fields() -> List[FieldInfo]:
    seen = []
    for info in field_info.values():
        if info not in seen:
            seen.append(info)
    return seen


def builtin(name: str, params: Dict[str, float] = None) -> Union[ScalarField, VectorField3]:
    if name not in field_info:
        raise UnknownField(
            f"unknown field {name!r}; available: {', '.join(i.name for i in list_fields())}"
        )
    info = field_info[name]
    params = dict(params or {})
    unknown = sorted(set(params) - set(info.params))
    if unknown:
        raise InvalidParameter(
            f"field {info.name!r} has no parameter(s) {', '.join(unknown)}; "
            f"expected {', '.join(info.params) or 'none'}"
        )
    return info.factory(**{**info.params, **params})


def parse_field_spec(spec: str) -> Union[ScalarField, VectorField3]:
    """Build a field from a spec string such as "cylinder-slice:a=1.1"."""
    name, rest = split_spec(spec)
    return builtin(name, parse_key_values(rest))


register_field(
    ["cylinder-slice"],
    CylinderSlice,
    {"a": 1.1},
    "sqrt(a^2 - x^2) on (-1,1)^2; needs a > 1",
)

register_field(
    ["affine"],
    AffineField,
    {"P": 0.0, "Q": 0.0, "R": 0.0},
    "P*x + Q*y + R",
)

register_field(
    ["quadratic"],
    QuadraticField,
    {"xx": 0.0, "xy": 0.0, "yy": 0.0, "x": 0.0, "y": 0.0, "c": 0.0},
    "xx*x^2 + xy*x*y + yy*y^2 + x*x + y*y + c",
)

register_field(
    ["gauss-bump"],
    GaussBump,
    {"sigma": 0.5, "amp": 1.0, "x0": 0.0, "y0": 0.0},
    "amp * exp(-|x - x0|^2 / (2 sigma^2))",
)

register_field(
    ["cylinder-param"],
    CylinderParam,
    {"r": 1.0, "H": 1.0, "twist": 0.0},
    "(u,v) -> (r cos((u+twist v)/r), r sin((u+twist v)/r), v) on (0,2 pi r)x(0,H)",
)

register_field(
    ["affine-map"],
    AffineMap,
    {
        "ax": 1.0,
        "bx": 0.0,
        "cx": 0.0,
        "ay": 0.0,
        "by": 1.0,
        "cy": 0.0,
        "az": 0.0,
        "bz": 0.0,
        "cz": 0.0,
    },
    "(u,v) -> (ax u + bx v + cx, ay u + by v + cy, az u + bz v + cz)",
)
