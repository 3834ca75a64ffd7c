"""Catalog of nonsmooth terms ``h`` with value, prox and domain distance.

Every entry exposes ``__call__(u)`` (extended-real value), ``prox(v, t)``
returning a point of ``argmin_u h(u) + ||u - v||^2 / (2t)``, and
``dist(v)``, the Euclidean distance from ``v`` to ``dom h``. For the
nonconvex entries (sphere, sparsity ball) the prox is a selection.
"""

import numpy as np

from . import _core

INF = float("inf")


class Zero:
    """h = 0."""

    convex = True

    def __call__(self, u):
        return 0.0

    def prox(self, v, t):
        return np.array(v, dtype=float, copy=True)

    def dist(self, v):
        return 0.0


class WeightedL1:
    """h(u) = sum_i w_i |u_i|."""

    convex = True

    def __init__(self, weights):
        self.weights = np.atleast_1d(np.asarray(weights, dtype=float))
        if np.any(self.weights <= 0):
            raise ValueError("l1 weights must be positive")

    def __call__(self, u):
        return float(np.sum(self.weights * np.abs(u)))

    def prox(self, v, t):
        return _core.soft_threshold(np.atleast_1d(v), self.weights * t)

    def dist(self, v):
        return 0.0


class SparsityBall:
    """Indicator of ``{u : ||u||_0 <= s}``; prox is hard thresholding."""

    convex = False

    def __init__(self, s):
        if s < 0:
            raise ValueError("sparsity level must be nonnegative")
        self.s = int(s)

    def __call__(self, u):
        return 0.0 if np.count_nonzero(u) <= self.s else INF

    def prox(self, v, t):
        return _core.hard_threshold(np.atleast_1d(v), self.s)

    def dist(self, v):
        v = np.atleast_1d(np.asarray(v, dtype=float))
        tail = np.sort(np.abs(v))[: max(v.size - self.s, 0)]
        return float(np.linalg.norm(tail))


# Closed sets with exact projections, used directly and inside products.

class Ball:
    convex = True

    def __init__(self, center, radius):
        self.center = np.atleast_1d(np.asarray(center, dtype=float))
        if radius <= 0:
            raise ValueError("ball radius must be positive")
        self.radius = float(radius)

    @property
    def dim(self):
        return self.center.size

    def project(self, v):
        return _core.project_ball(v, self.center, self.radius)

    def dist(self, v):
        return max(float(np.linalg.norm(np.asarray(v) - self.center)) - self.radius, 0.0)

    def contains(self, v, tol=0.0):
        return self.dist(v) <= tol


class Sphere:
    """Sphere ``{u : ||u - center|| = radius}``; projection of the center
    returns ``center + radius * e_1``."""

    convex = False

    def __init__(self, center, radius):
        self.center = np.atleast_1d(np.asarray(center, dtype=float))
        if radius <= 0:
            raise ValueError("sphere radius must be positive")
        self.radius = float(radius)

    @property
    def dim(self):
        return self.center.size

    def project(self, v):
        return _core.project_sphere(v, self.center, self.radius)

    def dist(self, v):
        return abs(float(np.linalg.norm(np.asarray(v) - self.center)) - self.radius)

    def contains(self, v, tol=0.0):
        return self.dist(v) <= tol


class Singleton:
    convex = True

    def __init__(self, point):
        self.point = np.atleast_1d(np.asarray(point, dtype=float))

    @property
    def dim(self):
        return self.point.size

    def project(self, v):
        return self.point.copy()

    def dist(self, v):
        return float(np.linalg.norm(np.asarray(v) - self.point))

    def contains(self, v, tol=0.0):
        return self.dist(v) <= tol


class Indicator:
    """Indicator function of one projectable set."""

    def __init__(self, the_set, tol=1e-12):
        self.set = the_set
        self.tol = tol
        self.convex = the_set.convex

    def __call__(self, u):
        return 0.0 if self.set.contains(u, self.tol) else INF

    def prox(self, v, t):
        return self.set.project(np.atleast_1d(v))

    def dist(self, v):
        return self.set.dist(np.atleast_1d(v))


class ProductIndicator:
    """h(u) = sum_i indicator_{S_i}(u_i) over consecutive blocks of ``u``."""

    def __init__(self, sets, tol=1e-12):
        self.sets = list(sets)
        self.tol = tol
        self.convex = all(s.convex for s in self.sets)
        self._slices = []
        start = 0
        for s in self.sets:
            self._slices.append(slice(start, start + s.dim))
            start += s.dim
        self.dim = start

    def blocks(self, u):
        return [u[sl] for sl in self._slices]

    def __call__(self, u):
        u = np.asarray(u)
        ok = all(s.contains(u[sl], self.tol) for s, sl in zip(self.sets, self._slices))
        return 0.0 if ok else INF

    def prox(self, v, t):
        v = np.asarray(v, dtype=float)
        out = np.empty_like(v)
        for s, sl in zip(self.sets, self._slices):
            out[sl] = s.project(v[sl])
        return out

    def dist(self, v):
        v = np.asarray(v, dtype=float)
        return float(np.sqrt(sum(s.dist(v[sl]) ** 2 for s, sl in zip(self.sets, self._slices))))
