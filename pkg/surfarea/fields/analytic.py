"""
Analytic scalar fields f(x, y) and parametrizations f: Omega -> R^3.

All fields evaluate on numpy arrays of any shape and carry exact
derivatives; finite differences are only used by the tests.
"""
import dataclasses
from enum import Enum
import math
from typing import Tuple

import numpy as np

from surfarea.errors import InvalidParameter
from surfarea.geometry import Rectangle


class Smoothness(str, Enum):
    W1INF = "W1inf"
    W2INF = "W2inf"
    ANALYTIC = "analytic"


class ScalarField:
    name: str = "scalar"
    smoothness: Smoothness = Smoothness.ANALYTIC
    valid_domain: Rectangle = Rectangle.square()

    def eval(self, x, y) -> np.ndarray:
        raise NotImplementedError

    def grad(self, x, y) -> Tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def __call__(self, x, y):
        return self.eval(x, y)


class VectorField3:
    name: str = "vector"
    smoothness: Smoothness = Smoothness.ANALYTIC
    valid_domain: Rectangle = Rectangle.square()

    def eval(self, x, y) -> np.ndarray:
        """Values stacked on a leading axis of length 3."""
        raise NotImplementedError

    def jacobian(self, x, y) -> np.ndarray:
        """Jacobian with leading axes (3, 2): [component, d/dx or d/dy]."""
        raise NotImplementedError

    def component(self, k: int) -> ScalarField:
        return ComponentField(self, k)


@dataclasses.dataclass(frozen=True)
class ComponentField(ScalarField):
    parent: VectorField3
    k: int

    @property
    def name(self):
        return f"{self.parent.name}[{self.k}]"

    @property
    def valid_domain(self):
        return self.parent.valid_domain

    def eval(self, x, y):
        return self.parent.eval(x, y)[self.k]

    def grad(self, x, y):
        jac = self.parent.jacobian(x, y)
        return jac[self.k, 0], jac[self.k, 1]


@dataclasses.dataclass(frozen=True)
class CylinderSlice(ScalarField):
    """f(x, y) = sqrt(a^2 - x^2), a slice of a cylinder of radius a."""

    a: float = 1.1
    valid_domain: Rectangle = Rectangle.square()
    name = "cylinder-slice"

    def __post_init__(self):
        reach = max(abs(self.valid_domain.a), abs(self.valid_domain.b))
        if not self.a > reach:
            raise InvalidParameter(
                f"cylinder-slice needs a > {reach:g} to be Lipschitz on the domain, got a={self.a}"
            )

    # a > max|x| keeps every derivative bounded on the closed domain
    smoothness = Smoothness.ANALYTIC

    def eval(self, x, y):
        x = np.asarray(x, dtype=np.float64)
        return np.sqrt(self.a * self.a - x * x) + 0.0 * np.asarray(y)

    def grad(self, x, y):
        x = np.asarray(x, dtype=np.float64)
        gx = -x / np.sqrt(self.a * self.a - x * x)
        return gx + 0.0 * np.asarray(y), np.zeros(np.broadcast(x, y).shape)

    def exact_area(self, domain: Rectangle = None) -> float:
        """Graph area over ``domain``, integrating a / sqrt(a^2 - x^2) in x."""
        dom = domain or self.valid_domain
        a = self.a
        return a * (math.asin(dom.b / a) - math.asin(dom.a / a)) * dom.height


@dataclasses.dataclass(frozen=True)
class AffineField(ScalarField):
    P: float = 0.0
    Q: float = 0.0
    R: float = 0.0
    valid_domain: Rectangle = Rectangle.square()
    name = "affine"

    def eval(self, x, y):
        return self.P * np.asarray(x, dtype=np.float64) + self.Q * np.asarray(y) + self.R

    def grad(self, x, y):
        shape = np.broadcast(x, y).shape
        return np.full(shape, float(self.P)), np.full(shape, float(self.Q))


@dataclasses.dataclass(frozen=True)
class QuadraticField(ScalarField):
    """xx*x^2 + xy*x*y + yy*y^2 + x*x + y*y + c"""

    xx: float = 0.0
    xy: float = 0.0
    yy: float = 0.0
    x: float = 0.0
    y: float = 0.0
    c: float = 0.0
    valid_domain: Rectangle = Rectangle.square()
    name = "quadratic"

    def eval(self, x, y):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        return (
            self.xx * x * x
            + self.xy * x * y
            + self.yy * y * y
            + self.x * x
            + self.y * y
            + self.c
        )

    def grad(self, x, y):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        return 2 * self.xx * x + self.xy * y + self.x, self.xy * x + 2 * self.yy * y + self.y


@dataclasses.dataclass(frozen=True)
class GaussBump(ScalarField):
    sigma: float = 0.5
    amp: float = 1.0
    x0: float = 0.0
    y0: float = 0.0
    valid_domain: Rectangle = Rectangle.square()
    name = "gauss-bump"

    def __post_init__(self):
        if not self.sigma > 0:
            raise InvalidParameter(f"gauss-bump needs sigma > 0, got {self.sigma}")

    def eval(self, x, y):
        dx = np.asarray(x, dtype=np.float64) - self.x0
        dy = np.asarray(y, dtype=np.float64) - self.y0
        return self.amp * np.exp(-(dx * dx + dy * dy) / (2 * self.sigma**2))

    def grad(self, x, y):
        dx = np.asarray(x, dtype=np.float64) - self.x0
        dy = np.asarray(y, dtype=np.float64) - self.y0
        value = self.amp * np.exp(-(dx * dx + dy * dy) / (2 * self.sigma**2))
        scale = -value / self.sigma**2
        return scale * dx, scale * dy


@dataclasses.dataclass(frozen=True)
class CylinderParam(VectorField3):
    """(u, v) -> (r cos(phi), r sin(phi), v) with phi = (u + twist * v) / r.

    Without twist this rolls the rectangle (0, 2 pi r) x (0, H) onto the
    cylinder. The shear by ``twist`` is area preserving: |f_u x f_v| = 1.
    """

    r: float = 1.0
    H: float = 1.0
    twist: float = 0.0
    name = "cylinder-param"

    def __post_init__(self):
        if not (self.r > 0 and self.H > 0):
            raise InvalidParameter(f"cylinder-param needs r > 0 and H > 0, got r={self.r}, H={self.H}")

    @property
    def valid_domain(self):
        return Rectangle(0.0, 2 * math.pi * self.r, 0.0, self.H)

    def _phi(self, u, v):
        return (np.asarray(u, dtype=np.float64) + self.twist * np.asarray(v)) / self.r

    def eval(self, u, v):
        phi = self._phi(u, v)
        v = np.broadcast_to(np.asarray(v, dtype=np.float64), phi.shape)
        return np.stack([self.r * np.cos(phi), self.r * np.sin(phi), v])

    def jacobian(self, u, v):
        phi = self._phi(u, v)
        s, c = np.sin(phi), np.cos(phi)
        zero = np.zeros_like(phi)
        one = np.ones_like(phi)
        return np.stack(
            [
                np.stack([-s, -self.twist * s]),
                np.stack([c, self.twist * c]),
                np.stack([zero, one]),
            ]
        )

    def exact_area(self) -> float:
        return 2 * math.pi * self.r * self.H


@dataclasses.dataclass(frozen=True)
class AffineMap(VectorField3):
    """Component k is a_k * u + b_k * v + c_k."""

    ax: float = 1.0
    bx: float = 0.0
    cx: float = 0.0
    ay: float = 0.0
    by: float = 1.0
    cy: float = 0.0
    az: float = 0.0
    bz: float = 0.0
    cz: float = 0.0
    valid_domain: Rectangle = Rectangle.square()
    name = "affine-map"

    def coefficients(self) -> np.ndarray:
        return np.array(
            [
                [self.ax, self.bx, self.cx],
                [self.ay, self.by, self.cy],
                [self.az, self.bz, self.cz],
            ]
        )

    def eval(self, u, v):
        u = np.asarray(u, dtype=np.float64)
        v = np.asarray(v, dtype=np.float64)
        coef = self.coefficients()
        return np.stack([coef[k, 0] * u + coef[k, 1] * v + coef[k, 2] for k in range(3)])

    def jacobian(self, u, v):
        shape = np.broadcast(u, v).shape
        coef = self.coefficients()
        return np.stack(
            [np.stack([np.full(shape, coef[k, 0]), np.full(shape, coef[k, 1])]) for k in range(3)]
        )


@dataclasses.dataclass(frozen=True)
class GraphEmbedding(VectorField3):
    """(x, y) -> (x, y, f(x, y))"""

    base: ScalarField

    @property
    def name(self):
        return f"graph({self.base.name})"

    @property
    def valid_domain(self):
        return self.base.valid_domain

    def eval(self, x, y):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        z = self.base.eval(x, y)
        return np.stack(np.broadcast_arrays(x, y, z))

    def jacobian(self, x, y):
        gx, gy = self.base.grad(x, y)
        gx, gy = np.broadcast_arrays(gx, gy)
        zero = np.zeros_like(gx)
        one = np.ones_like(gx)
        return np.stack([np.stack([one, zero]), np.stack([zero, one]), np.stack([gx, gy])])


def graph_embedding(f: ScalarField) -> VectorField3:
    return GraphEmbedding(f)
