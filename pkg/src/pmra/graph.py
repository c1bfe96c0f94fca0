"""Path spaces of a finite directed graph and the multi-resolution analysis they carry.

Conventions: an edge ``e`` goes from ``s(e)`` to ``r(e)``; a path
``nu_1 nu_2 ...`` is composable when ``s(nu_i) = r(nu_{i+1})``. One-sided
infinite paths are ``c_0 c_1 ...`` and the shift drops ``c_0``. Functions
are cylinder functions: a ``CylinderFunction`` of depth ``d`` depends on
``c_0 .. c_{d-1}``; a ``TwoSidedCylinder`` with window ``(past, future)``
depends on ``c_{-past} .. c_{future-1}`` and is keyed by that edge tuple.

Bank letters are 1-based (``w_1`` is the filter weight), so a frame word is
fresh when its first letter is not 1.
"""
from __future__ import annotations

import cmath
import functools
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .report import CheckResult

Path = tuple[str, ...]

EXACT_EPS = 1e-12


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    rng: str


@dataclass(frozen=True)
class DirectedGraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        if not self.vertices or not self.edges:
            raise ValueError("graph must have at least one vertex and one edge")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex id")
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate edge id")
        vs = set(self.vertices)
        for i, e in enumerate(self.edges):
            for attr in ("src", "rng"):
                if getattr(e, attr) not in vs:
                    raise ValueError(f"edges[{i}].{attr}: unknown vertex {getattr(e, attr)!r}")
        received = {e.rng for e in self.edges}
        emitted = {e.src for e in self.edges}
        for v in self.vertices:
            if v not in received:
                raise ValueError(f"vertex {v!r} is a source (receives no edge); sources are not allowed")
            if v not in emitted:
                raise ValueError(f"vertex {v!r} emits no edge; the shift is undefined through it")

    @functools.cached_property
    def edge(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    def s(self, e: str) -> str:
        return self.edge[e].src

    def r(self, e: str) -> str:
        return self.edge[e].rng

    @functools.cached_property
    def _out(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.src].append(e.id)
        return {v: tuple(es) for v, es in out.items()}

    def out_edges(self, v: str) -> tuple[str, ...]:
        """``s^{-1}(v)``."""
        return self._out[v]

    def outdeg(self, v: str) -> int:
        return len(self._out[v])

    @property
    def max_outdeg(self) -> int:
        return max(self.outdeg(v) for v in self.vertices)

    def paths(self, d: int) -> list[Path]:
        return list(_paths(self, d))

    def prefixes_into(self, v: str, k: int) -> list[Path]:
        """Paths ``nu`` of length ``k`` with ``s(nu) = v``, i.e. those that can precede an edge with range ``v``."""
        if k == 0:
            return [()]
        return [p for p in _paths(self, k) if self.s(p[-1]) == v]

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices),
                "edges": [{"id": e.id, "src": e.src, "rng": e.rng} for e in self.edges]}

    @classmethod
    def from_json(cls, obj) -> "DirectedGraph":
        if not isinstance(obj, Mapping):
            raise ValueError("graph JSON must be an object")
        for key in ("vertices", "edges"):
            if key not in obj:
                raise ValueError(f"graph JSON: missing field '{key}'")
        edges = []
        for i, e in enumerate(obj["edges"]):
            for key in ("id", "src", "rng"):
                if key not in e:
                    raise ValueError(f"graph JSON: edges[{i}].{key} is missing")
            edges.append(Edge(str(e["id"]), str(e["src"]), str(e["rng"])))
        return cls(tuple(str(v) for v in obj["vertices"]), tuple(edges))


@functools.lru_cache(maxsize=None)
def _paths(g: DirectedGraph, d: int) -> tuple[Path, ...]:
    if d < 1:
        raise ValueError("path length must be >= 1")
    if d == 1:
        return tuple((e.id,) for e in g.edges)
    out = []
    for p in _paths(g, d - 1):
        for e in g.edges:
            if g.s(p[-1]) == e.rng:
                out.append(p + (e.id,))
    return tuple(out)


def paths(g: DirectedGraph, d: int) -> list[Path]:
    return g.paths(d)


# ---------------------------------------------------------------------------
# cylinder functions


@dataclass(frozen=True, eq=False)
class CylinderFunction:
    """Locally constant function on the one-sided path space, depth ``>= 1``."""

    graph: DirectedGraph
    depth: int
    values: Mapping[Path, complex]

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("cylinder depth must be >= 1")
        keys = set(self.graph.paths(self.depth))
        vals = {tuple(k): complex(v) for k, v in self.values.items()}
        if set(vals) != keys:
            raise ValueError(f"values must be given on exactly the composable paths of length {self.depth}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, g: DirectedGraph, depth: int, fn: Callable[[Path], complex]) -> "CylinderFunction":
        return cls(g, depth, {p: fn(p) for p in g.paths(depth)})

    @classmethod
    def constant(cls, g: DirectedGraph, c: complex = 1.0, depth: int = 1) -> "CylinderFunction":
        return cls.from_function(g, depth, lambda p: c)

    @classmethod
    def indicator(cls, g: DirectedGraph, nu: Sequence[str]) -> "CylinderFunction":
        """``chi_{Z(nu)}``."""
        nu = tuple(nu)
        return cls.from_function(g, len(nu), lambda p: 1.0 if p == nu else 0.0)

    @classmethod
    def of_range_vertex(cls, g: DirectedGraph, fn: Callable[[str], complex]) -> "CylinderFunction":
        """Vertex function ``c -> fn(r(c_0))`` at depth 1."""
        return cls.from_function(g, 1, lambda p: fn(g.r(p[0])))

    def __call__(self, path: Sequence[str]) -> complex:
        return self.values[tuple(path[: self.depth])]

    def promote(self, depth: int) -> "CylinderFunction":
        if depth < self.depth:
            raise ValueError("cannot promote to a smaller depth")
        if depth == self.depth:
            return self
        return CylinderFunction.from_function(self.graph, depth, self)

    def _binary(self, other, op) -> "CylinderFunction":
        if not isinstance(other, CylinderFunction):
            other = CylinderFunction.constant(self.graph, complex(other))
        if other.graph != self.graph:
            raise ValueError("cylinder functions live on different graphs")
        d = max(self.depth, other.depth)
        return CylinderFunction.from_function(self.graph, d, lambda p: op(self(p), other(p)))

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def conj(self) -> "CylinderFunction":
        return CylinderFunction(self.graph, self.depth, {p: v.conjugate() for p, v in self.values.items()})

    def distance(self, other) -> float:
        diff = self - other
        return max((abs(v) for v in diff.values.values()), default=0.0)

    def as_two_sided(self) -> "TwoSidedCylinder":
        return TwoSidedCylinder(self.graph, 0, self.depth, self.values)


@dataclass(frozen=True, eq=False)
class TwoSidedCylinder:
    """Function of ``c_{-past} .. c_{future-1}`` on the two-sided path space."""

    graph: DirectedGraph
    past: int
    future: int
    values: Mapping[Path, complex]

    def __post_init__(self):
        if self.past < 0 or self.future < 1:
            raise ValueError("window needs past >= 0 and future >= 1")
        keys = set(self.graph.paths(self.past + self.future))
        vals = {tuple(k): complex(v) for k, v in self.values.items()}
        if set(vals) != keys:
            raise ValueError("values must be given on exactly the composable windows")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, g: DirectedGraph, past: int, future: int, fn: Callable[[Path], complex]
                      ) -> "TwoSidedCylinder":
        return cls(g, past, future, {p: fn(p) for p in g.paths(past + future)})

    @classmethod
    def constant(cls, g: DirectedGraph, c: complex = 1.0) -> "TwoSidedCylinder":
        return cls.from_function(g, 0, 1, lambda p: c)

    @classmethod
    def indicator(cls, g: DirectedGraph, past: int, window: Sequence[str]) -> "TwoSidedCylinder":
        window = tuple(window)
        return cls.from_function(g, past, len(window) - past, lambda p: 1.0 if p == window else 0.0)

    def at(self, past_edges: Sequence[str], future_edges: Sequence[str]) -> complex:
        """Value at the point whose coordinates ``c_{-len(past_edges)} ..`` are given."""
        if len(past_edges) < self.past or len(future_edges) < self.future:
            raise ValueError("not enough coordinates to evaluate")
        key = tuple(past_edges[len(past_edges) - self.past:]) + tuple(future_edges[: self.future])
        return self.values[key]

    def on_window(self, past: int, window: Path) -> complex:
        """Value at a window ``c_{-past} ..`` of at least our own extent."""
        return self.at(window[:past], window[past:])

    def promote(self, past: int, future: int) -> "TwoSidedCylinder":
        if past < self.past or future < self.future:
            raise ValueError("cannot promote to a smaller window")
        if (past, future) == (self.past, self.future):
            return self
        return TwoSidedCylinder.from_function(self.graph, past, future, lambda w: self.on_window(past, w))

    def _binary(self, other: "TwoSidedCylinder", op) -> "TwoSidedCylinder":
        if other.graph != self.graph:
            raise ValueError("cylinders live on different graphs")
        P, F = max(self.past, other.past), max(self.future, other.future)
        return TwoSidedCylinder.from_function(
            self.graph, P, F, lambda w: op(self.on_window(P, w), other.on_window(P, w)))

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def scale(self, c: complex) -> "TwoSidedCylinder":
        return TwoSidedCylinder(self.graph, self.past, self.future, {k: c * v for k, v in self.values.items()})

    def act(self, f: CylinderFunction) -> "TwoSidedCylinder":
        """Module action ``(x . f)(c) = x(c) f(c_0 c_1 ..)``."""
        P, F = self.past, max(self.future, f.depth)
        return TwoSidedCylinder.from_function(
            self.graph, P, F, lambda w: self.on_window(P, w) * f(w[P:]))

    def distance(self, other: "TwoSidedCylinder") -> float:
        diff = self - other
        return max((abs(v) for v in diff.values.values()), default=0.0)


def zero_cylinder(g: DirectedGraph, past: int, future: int) -> TwoSidedCylinder:
    return TwoSidedCylinder.from_function(g, past, future, lambda w: 0.0)


# ---------------------------------------------------------------------------
# shift, transfer operator


def graph_alpha(f: CylinderFunction) -> CylinderFunction:
    """``f o sigma``: depth grows by one, value at ``c_0 .. c_d`` is ``f(c_1 .. c_d)``."""
    return CylinderFunction.from_function(f.graph, f.depth + 1, lambda p: f(p[1:]))


def graph_L(f: CylinderFunction) -> CylinderFunction:
    g = f.graph
    depth = max(f.depth - 1, 1)

    def value(c: Path) -> complex:
        v = g.r(c[0])
        es = g.out_edges(v)
        return sum(f((e,) + c) for e in es) / len(es)

    return CylinderFunction.from_function(g, depth, value)


def graph_Lk(f: CylinderFunction, k: int) -> CylinderFunction:
    """Closed form: weighted sum over the length-``k`` paths that can be prepended."""
    if k < 1:
        raise ValueError("k must be >= 1")
    g = f.graph
    depth = max(f.depth - k, 1)

    def value(c: Path) -> complex:
        total = 0j
        for nu in g.prefixes_into(g.r(c[0]), k):
            weight = 1.0
            for e in nu:
                weight /= g.outdeg(g.s(e))
            total += weight * f(nu + c)
        return total

    return CylinderFunction.from_function(g, depth, value)


def graph_Lk_iterated(f: CylinderFunction, k: int) -> CylinderFunction:
    for _ in range(k):
        f = graph_L(f)
    return f


def graph_inner_L(m: CylinderFunction, n: CylinderFunction) -> CylinderFunction:
    """``<m, n>_L = L(conj(m) n)`` in ``M_L``."""
    return graph_L(m.conj() * n)


# ---------------------------------------------------------------------------
# weights and filters


@dataclass(frozen=True, eq=False)
class WeightSystem:
    graph: DirectedGraph
    w: Mapping[str, complex]

    def __post_init__(self):
        vals = {str(k): complex(v) for k, v in self.w.items()}
        missing = [e.id for e in self.graph.edges if e.id not in vals]
        if missing:
            raise ValueError(f"weights missing for edges {missing}")
        object.__setattr__(self, "w", vals)

    def __getitem__(self, e: str) -> complex:
        return self.w[e]

    def vertex_residuals(self) -> dict[str, float]:
        """``sum_{s(e)=v} |w(e)|^2 - |s^{-1}(v)|`` per vertex."""
        g = self.graph
        return {v: sum(abs(self.w[e]) ** 2 for e in g.out_edges(v)) - g.outdeg(v) for v in g.vertices}

    def validate(self, eps: float = EXACT_EPS) -> None:
        zero = [e for e, c in self.w.items() if c == 0]
        if zero:
            raise ValueError(f"weights must be non-zero; zero on {zero}")
        for v, res in self.vertex_residuals().items():
            if abs(res) > eps:
                raise ValueError(f"weight normalisation fails at vertex {v!r} (residual {res:.3e})")

    def w_k(self, nu: Sequence[str]) -> complex:
        """``prod_j w(nu_j) |s^{-1}(s(nu_j))|^{-1/2}`` over a past window."""
        out = 1.0 + 0j
        for e in nu:
            out *= self.w[e] / math.sqrt(self.graph.outdeg(self.graph.s(e)))
        return out


def weights_to_cylinder(g: DirectedGraph, w: Mapping[str, complex]) -> CylinderFunction:
    """``sum_e w(e) chi_{Z(e)}`` without any normalisation check."""
    return CylinderFunction.from_function(g, 1, lambda p: w.get(p[0], 0.0))


def make_filter(w: WeightSystem) -> CylinderFunction:
    w.validate()
    return weights_to_cylinder(w.graph, w.w)


def weight_consistency(w: WeightSystem, k: int, eps: float = EXACT_EPS) -> CheckResult:
    """``sum_{r_j(d)=c} |w_{j+1}(d)|^2 = |w_j(c)|^2`` for every level ``j = 0..k``."""
    g = w.graph
    worst, where = 0.0, None
    for j in range(k + 1):
        anchors: Iterable[tuple[Path, str]]
        if j == 0:
            anchors = [((), v) for v in g.vertices]
        else:
            anchors = [(nu, g.r(nu[0])) for nu in g.paths(j)]
        for nu, v in anchors:
            lhs = sum(abs(w.w_k((e,) + nu)) ** 2 for e in g.out_edges(v))
            err = abs(lhs - abs(w.w_k(nu)) ** 2)
            if err > worst:
                worst, where = err, f"level {j}, vertex {v!r}, window {nu}"
    return CheckResult.gate("weight_consistency", worst, eps, where if worst > eps else None, levels=k)


def measure_mu(w: WeightSystem, anchor: Sequence[str], k: int, f: TwoSidedCylinder) -> complex:
    """``int f dmu^c_k = sum_{nu in E^k, s(nu)=r(c_0)} f(nu c) |w_k(nu)|^2``."""
    if f.past > k:
        raise ValueError(f"function depends on {f.past} past coordinates, more than k={k}")
    anchor = tuple(anchor)
    if len(anchor) < f.future:
        raise ValueError("anchor path is shorter than the function's future depth")
    g = w.graph
    total = 0j
    for nu in g.prefixes_into(g.r(anchor[0]), k):
        total += f.at(nu, anchor) * abs(w.w_k(nu)) ** 2
    return total


def x_inner(x: TwoSidedCylinder, y: TwoSidedCylinder, w: WeightSystem) -> CylinderFunction:
    """``<x, y>(c) = int conj(x) y dmu^c``, exact at the common finite window."""
    if x.graph != y.graph or x.graph != w.graph:
        raise ValueError("graph mismatch")
    g = x.graph
    k = max(x.past, y.past)
    d = max(x.future, y.future)
    weights = {}

    def value(c: Path) -> complex:
        total = 0j
        for nu in g.prefixes_into(g.r(c[0]), k):
            if nu not in weights:
                weights[nu] = abs(w.w_k(nu)) ** 2
            total += x.at(nu, c).conjugate() * y.at(nu, c) * weights[nu]
        return total

    return CylinderFunction.from_function(g, d, value)


# ---------------------------------------------------------------------------
# dilation


def graph_D(x: TwoSidedCylinder, m: CylinderFunction) -> TwoSidedCylinder:
    """``(D x)(c) = m(c_0) x(h(c))`` with ``h`` the shift ``h(c)_i = c_{i+1}``."""
    if m.depth != 1:
        raise ValueError("the dilation needs a depth-1 filter")
    k, d = x.past, x.future
    if k >= 1:
        P, F = k - 1, d + 1
        return TwoSidedCylinder.from_function(x.graph, P, F, lambda win: m(win[P:]) * x.values[win])
    return TwoSidedCylinder.from_function(x.graph, 0, d + 1, lambda win: m(win) * x.values[win[1:]])


def graph_D_inv(x: TwoSidedCylinder, m: CylinderFunction) -> TwoSidedCylinder:
    """``(D^{-1} x)(c) = x(h^{-1}(c)) / m(c_{-1})``; needs non-zero weights."""
    if m.depth != 1:
        raise ValueError("the dilation needs a depth-1 filter")
    k, d = x.past, x.future
    P, F = k + 1, max(d - 1, 1)
    n = k + d

    def value(win: Path) -> complex:
        mv = m(win[k:])
        if mv == 0:
            raise ZeroDivisionError(f"filter vanishes on edge {win[k]!r}; D is not invertible")
        return x.values[win[:n]] / mv

    return TwoSidedCylinder.from_function(x.graph, P, F, value)


def check_dilation_isometry(x: TwoSidedCylinder, y: TwoSidedCylinder, w: WeightSystem,
                            eps: float = EXACT_EPS) -> CheckResult:
    """``L(<D x, D y>) = <x, y>``."""
    m = weights_to_cylinder(w.graph, w.w)
    lhs = graph_L(x_inner(graph_D(x, m), graph_D(y, m), w))
    rhs = x_inner(x, y, w)
    return CheckResult.gate("dilation_isometry", lhs.distance(rhs), eps)


# ---------------------------------------------------------------------------
# orthonormal weight banks


@dataclass(frozen=True, eq=False)
class OrthoWeightBank:
    graph: DirectedGraph
    weights: tuple[Mapping[str, complex], ...]

    def __post_init__(self):
        ws = tuple({str(k): complex(v) for k, v in wn.items()} for wn in self.weights)
        object.__setattr__(self, "weights", ws)

    @property
    def N(self) -> int:
        return len(self.weights)

    def filter_weights(self) -> WeightSystem:
        return WeightSystem(self.graph, self.weights[0])

    def filters(self) -> list[CylinderFunction]:
        return [weights_to_cylinder(self.graph, wn) for wn in self.weights]

    def validation_error(self) -> float:
        """Largest deviation from the per-vertex orthonormality and vanishing requirements."""
        g = self.graph
        worst = 0.0
        for v in g.vertices:
            es = g.out_edges(v)
            deg = len(es)
            cols = np.array([[wn.get(e, 0.0) for e in es] for wn in self.weights[:deg]]) / math.sqrt(deg)
            if cols.shape[0] < deg:
                return math.inf
            worst = max(worst, float(np.max(np.abs(cols.conj() @ cols.T - np.eye(deg)))))
            for wn in self.weights[deg:]:
                worst = max(worst, max((abs(wn.get(e, 0.0)) for e in es), default=0.0))
        return worst

    def validate(self, eps: float = EXACT_EPS) -> None:
        if self.N != self.graph.max_outdeg:
            raise ValueError(f"bank needs N = max out-degree = {self.graph.max_outdeg} weight systems, got {self.N}")
        self.filter_weights().validate(eps)
        err = self.validation_error()
        if err > eps:
            raise ValueError(f"weight vectors are not orthonormal per vertex (defect {err:.3e})")

    def to_json(self) -> dict:
        return {f"w{n + 1}": {e: [c.real, c.imag] for e, c in wn.items()} for n, wn in enumerate(self.weights)}

    @classmethod
    def from_json(cls, g: DirectedGraph, obj) -> "OrthoWeightBank":
        if not isinstance(obj, Mapping) or "w1" not in obj:
            raise ValueError("weights JSON: missing field 'w1'")
        out = []
        n = 1
        while f"w{n}" in obj:
            wn = {}
            for e, val in obj[f"w{n}"].items():
                if e not in g.edge:
                    raise ValueError(f"weights JSON: w{n}.{e}: unknown edge")
                if isinstance(val, (int, float)):
                    wn[e] = complex(val)
                elif len(val) == 2:
                    wn[e] = complex(float(val[0]), float(val[1]))
                else:
                    raise ValueError(f"weights JSON: w{n}.{e}: expected [re, im]")
            out.append(wn)
            n += 1
        for e in g.edges:
            if e.id not in out[0]:
                raise ValueError(f"weights JSON: w1.{e.id} is missing")
        return cls(g, tuple(out))


def S_m(m: CylinderFunction, f: CylinderFunction) -> CylinderFunction:
    return m * graph_alpha(f)


def S_m_star(m: CylinderFunction, f: CylinderFunction) -> CylinderFunction:
    return graph_inner_L(m, f)


def projection_p(g: DirectedGraph, n: int) -> CylinderFunction:
    """``p_n = chi{c : n <= |s^{-1}(r(c))|}``."""
    if not 1 <= n <= g.max_outdeg:
        raise ValueError(f"n must lie in 1..{g.max_outdeg}")
    return CylinderFunction.of_range_vertex(g, lambda v: 1.0 if g.outdeg(v) >= n else 0.0)


def check_bank_inner_products(bank: OrthoWeightBank, eps: float = EXACT_EPS) -> CheckResult:
    """``<m_i, m_j>_L = delta_ij p_i``."""
    ms = bank.filters()
    worst, where = 0.0, None
    for i, j in itertools.product(range(bank.N), repeat=2):
        target = projection_p(bank.graph, i + 1) if i == j else CylinderFunction.constant(bank.graph, 0.0)
        err = graph_inner_L(ms[i], ms[j]).distance(target)
        if err > worst:
            worst, where = err, f"(m{i + 1}, m{j + 1})"
    return CheckResult.gate("bank_inner_products", worst, eps, where if worst > eps else None)


def resolution_of_identity(bank: OrthoWeightBank, depth: int, eps: float = EXACT_EPS) -> CheckResult:
    """``sum_n S_{m_n} S_{m_n}^* f = f`` for every indicator ``f`` of the given depth."""
    g = bank.graph
    ms = bank.filters()
    worst, where = 0.0, None
    for nu in g.paths(depth):
        f = CylinderFunction.indicator(g, nu)
        total = CylinderFunction.constant(g, 0.0)
        for m in ms:
            total = total + S_m(m, S_m_star(m, f))
        err = total.distance(f)
        if err > worst:
            worst, where = err, f"chi_Z{nu}"
    return CheckResult.gate("resolution_of_identity", worst, eps, where if worst > eps else None, depth=depth)


# ---------------------------------------------------------------------------
# intertwining of direct systems


def V_k(x: TwoSidedCylinder, w: Mapping[str, complex], k: int) -> CylinderFunction:
    """``(V_k x)(c) = prod_{j<k} w(c_j) x(sigma_k(c))`` where ``sigma_k`` moves ``c_0`` to slot ``-k``."""
    if x.past > k:
        raise ValueError(f"x has past depth {x.past} > k = {k}")
    x = x.promote(k, x.future)

    def value(c: Path) -> complex:
        out = x.values[c]
        for e in c[:k]:
            out *= w[e]
        return out

    return CylinderFunction.from_function(x.graph, k + x.future, value)


def T_k(f: CylinderFunction, m: CylinderFunction) -> CylinderFunction:
    """``T_k(f) = m alpha(f)``."""
    return m * graph_alpha(f)


def r_k_star(x: TwoSidedCylinder) -> TwoSidedCylinder:
    """``x o r_k``: one more (ignored) past coordinate."""
    return x.promote(x.past + 1, x.future)


def intertwine_check(w: WeightSystem, k: int, future: int = 1, eps: float = EXACT_EPS,
                     v_weights: Mapping[str, complex] | None = None) -> CheckResult:
    """``T_k o V_k = V_{k+1} o r_k^*`` on the indicators of windows ``(k, future)``.

    ``v_weights`` replaces the weights used inside ``V_k`` only, which makes it
    possible to watch the diagram break.
    """
    g = w.graph
    m = weights_to_cylinder(g, w.w)
    vw = dict(w.w if v_weights is None else v_weights)
    worst, where = 0.0, None
    for win in g.paths(k + future):
        x = TwoSidedCylinder.indicator(g, k, win)
        lhs = T_k(V_k(x, vw, k), m)
        rhs = V_k(r_k_star(x), w.w, k + 1)
        err = lhs.distance(rhs)
        if err > worst:
            worst, where = err, f"window {win}"
    return CheckResult.gate("intertwining", worst, eps, where if worst > eps else None, k=k)


# ---------------------------------------------------------------------------
# frames on X_infinity(E)


def graph_fresh_words(N: int, K: int) -> list[tuple[int, ...]]:
    """1-based fresh words (first letter != 1) of length ``0..K``, length-lexicographic."""
    out: list[tuple[int, ...]] = [()]
    for k in range(1, K + 1):
        for first in range(2, N + 1):
            for rest in itertools.product(range(1, N + 1), repeat=k - 1):
                out.append((first,) + rest)
    return out


def word_cylinder(word: Sequence[int], bank: OrthoWeightBank) -> CylinderFunction:
    """``m_{j_1} alpha(m_{j_2}) ... alpha^{k-1}(m_{j_k})`` as a depth-``k`` cylinder."""
    g = bank.graph
    k = len(word)
    if k == 0:
        return CylinderFunction.constant(g, 1.0)

    def value(p: Path) -> complex:
        out = 1.0 + 0j
        for e, j in zip(p, word):
            out *= bank.weights[j - 1].get(e, 0.0)
        return out

    return CylinderFunction.from_function(g, k, value)


def graph_frame_elements(bank: OrthoWeightBank, K: int) -> list[tuple[tuple[int, ...], TwoSidedCylinder]]:
    """``1`` and ``D^{-k}(word cylinder)`` for fresh words of length ``1..K``."""
    m = bank.filters()[0]
    out = []
    for word in graph_fresh_words(bank.N, K):
        x = word_cylinder(word, bank).as_two_sided()
        for _ in range(len(word)):
            x = graph_D_inv(x, m)
        out.append((word, x))
    return out


def graph_frame(bank: OrthoWeightBank, K: int, future: int = 1, eps: float = 1e-10,
                n_random: int = 8, seed: int = 0) -> list[CheckResult]:
    """Frame identity and reconstruction for cylinders with past depth ``<= K``.

    Reconstruction is linear, so the window indicators at ``(K, future)`` cover
    every such cylinder. The frame identity is also run on seeded random
    combinations of them.
    """
    g = bank.graph
    w = bank.filter_weights()
    frame = [x for _, x in graph_frame_elements(bank, K)]
    rng = np.random.default_rng(seed)
    windows = g.paths(K + future)
    tests = [TwoSidedCylinder.indicator(g, K, win) for win in windows]
    for _ in range(n_random):
        vals = rng.standard_normal(len(windows)) + 1j * rng.standard_normal(len(windows))
        tests.append(TwoSidedCylinder(g, K, future, dict(zip(windows, vals))))
    worst_id, worst_rec, where = 0.0, 0.0, None
    for i, x in enumerate(tests):
        coeffs = [x_inner(xj, x, w) for xj in frame]
        total = CylinderFunction.constant(g, 0.0)
        rec = zero_cylinder(g, K, future)
        for xj, c in zip(frame, coeffs):
            total = total + c.conj() * c
            rec = rec + xj.act(c)
        err_id = total.distance(x_inner(x, x, w))
        err_rec = rec.distance(x)
        if max(err_id, err_rec) > max(worst_id, worst_rec):
            where = f"test vector {i}"
        worst_id, worst_rec = max(worst_id, err_id), max(worst_rec, err_rec)
    return [
        CheckResult.gate("graph_frame_identity", worst_id, eps, where if worst_id > eps else None,
                         K=K, frame_size=len(frame), vectors=len(tests)),
        CheckResult.gate("graph_frame_reconstruction", worst_rec, eps, where if worst_rec > eps else None, K=K),
    ]


# ---------------------------------------------------------------------------
# fixtures


def example_graph_g1() -> DirectedGraph:
    """Two vertices ``u, v``; edges ``a: u -> u``, ``b: u -> v``, ``c: v -> u``."""
    return DirectedGraph(("u", "v"), (Edge("a", "u", "u"), Edge("b", "u", "v"), Edge("c", "v", "u")))


def example_bank_g1(g: DirectedGraph | None = None) -> OrthoWeightBank:
    g = g or example_graph_g1()
    return OrthoWeightBank(g, ({"a": 1, "b": 1, "c": 1}, {"a": 1, "b": -1, "c": 0}))


def loop_graph(N: int) -> DirectedGraph:
    """One vertex with ``N`` loops ``e0 .. e{N-1}``."""
    return DirectedGraph(("o",), tuple(Edge(f"e{j}", "o", "o") for j in range(N)))


def fourier_bank(g: DirectedGraph) -> OrthoWeightBank:
    """Per-vertex DFT columns scaled by ``sqrt(deg)``; ``w_1`` is constant 1."""
    N = g.max_outdeg
    weights: list[dict[str, complex]] = [dict() for _ in range(N)]
    for v in g.vertices:
        es = g.out_edges(v)
        deg = len(es)
        for n in range(deg):
            for i, e in enumerate(es):
                weights[n][e] = cmath.exp(2j * math.pi * n * i / deg)
        for n in range(deg, N):
            for e in es:
                weights[n][e] = 0.0
    return OrthoWeightBank(g, tuple(weights))


def random_cylinder(g: DirectedGraph, depth: int, rng: np.random.Generator) -> CylinderFunction:
    ps = g.paths(depth)
    vals = rng.standard_normal(len(ps)) + 1j * rng.standard_normal(len(ps))
    return CylinderFunction(g, depth, dict(zip(ps, vals)))


def random_two_sided(g: DirectedGraph, past: int, future: int, rng: np.random.Generator) -> TwoSidedCylinder:
    ps = g.paths(past + future)
    vals = rng.standard_normal(len(ps)) + 1j * rng.standard_normal(len(ps))
    return TwoSidedCylinder(g, past, future, dict(zip(ps, vals)))
