"""Uniform tensor grids, nodal fields, discrete calculus and norms.

Everything downstream (energies, residuals, quotients, certificates) is
expressed through this module. Two discrete gradients coexist on purpose:

* ``gradient`` -- nodal, central differences inside and one-sided 3-point
  stencils on the boundary. Used for diagnostics and output.
* cell slopes (``cell_grad_sq``) -- per-cell averages of squared edge
  slopes. The W^{1,p} seminorm and every energy integrate these, which is
  what makes the p=2 energy reduce exactly to the usual 3-/5-point
  Laplacian and keeps the seminorm exact on piecewise-affine functions.

Quadrature is the tensor trapezoid rule: interior nodes carry h^d, boundary
nodes half weights per touching face, so the weights sum to meas(Omega)
exactly.  ``divergence`` is the negative adjoint of ``gradient`` under this
inner product, so discrete integration by parts holds to machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp


@dataclass(frozen=True)
class Mesh:
    """Uniform tensor grid over an interval (dim 1) or rectangle (dim 2).

    ``n`` counts interior nodes per axis; the stored arrays cover the full
    grid of ``n_i + 2`` nodes per axis including the Dirichlet boundary.
    """

    extents: tuple[tuple[float, float], ...]
    n: tuple[int, ...]
    # derived, filled in __post_init__
    dim: int = field(init=False)
    h: tuple[float, ...] = field(init=False)
    shape: tuple[int, ...] = field(init=False)
    axes: tuple[np.ndarray, ...] = field(init=False)
    boundary_mask: np.ndarray = field(init=False)
    quad_weights: np.ndarray = field(init=False)
    cell_volume: float = field(init=False)
    measure: float = field(init=False)

    def __post_init__(self):
        extents = tuple((float(a), float(b)) for a, b in self.extents)
        n = tuple(int(m) for m in self.n)
        if len(extents) not in (1, 2) or len(n) != len(extents):
            raise ValueError("mesh supports dim 1 or 2 with matching extents/n")
        if any(m < 1 for m in n):
            raise ValueError("need at least one interior node per axis")
        if any(b <= a for a, b in extents):
            raise ValueError("extents must be increasing intervals")
        object.__setattr__(self, "extents", extents)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "dim", len(n))
        h = tuple((b - a) / (m + 1) for (a, b), m in zip(extents, n))
        object.__setattr__(self, "h", h)
        shape = tuple(m + 2 for m in n)
        object.__setattr__(self, "shape", shape)
        axes = tuple(np.linspace(a, b, m + 2) for (a, b), m in zip(extents, n))
        object.__setattr__(self, "axes", axes)

        mask = np.zeros(shape, dtype=bool)
        for ax in range(self.dim):
            sl = [slice(None)] * self.dim
            sl[ax] = 0
            mask[tuple(sl)] = True
            sl[ax] = -1
            mask[tuple(sl)] = True
        mask.setflags(write=False)
        object.__setattr__(self, "boundary_mask", mask)

        w = np.ones(1)
        for hi, m in zip(h, n):
            w1 = np.full(m + 2, hi)
            w1[0] = w1[-1] = hi / 2
            w = np.multiply.outer(w, w1)
        w = w.reshape(shape)
        w.setflags(write=False)
        object.__setattr__(self, "quad_weights", w)
        object.__setattr__(self, "cell_volume", float(np.prod(h)))
        object.__setattr__(self, "measure", float(np.prod([b - a for a, b in extents])))

    # -- constructors ------------------------------------------------------
    @classmethod
    def interval(cls, a: float, b: float, n: int) -> "Mesh":
        return cls(((a, b),), (n,))

    @classmethod
    def rectangle(cls, xext, yext, n) -> "Mesh":
        if np.isscalar(n):
            n = (int(n), int(n))
        return cls((tuple(xext), tuple(yext)), tuple(n))

    # -- geometry ----------------------------------------------------------
    def coords(self) -> tuple[np.ndarray, ...]:
        """Full coordinate arrays, shape ``self.shape`` each."""
        return tuple(np.meshgrid(*self.axes, indexing="ij")) if self.dim == 2 \
            else (self.axes[0].copy(),)

    @property
    def interior_mask(self) -> np.ndarray:
        return ~self.boundary_mask

    def __eq__(self, other):
        return isinstance(other, Mesh) and self.extents == other.extents and self.n == other.n

    def __hash__(self):
        return hash((self.extents, self.n))


class Field:
    """Immutable nodal scalar function on a :class:`Mesh`.

    A field tagged ``dirichlet`` is exactly zero on every boundary node;
    the constructor validates this (use :meth:`from_function` with
    ``dirichlet=True`` to clamp analytic boundary roundoff to zero).
    """

    __slots__ = ("mesh", "values", "dirichlet")

    def __init__(self, mesh: Mesh, values, dirichlet: bool = False):
        values = np.array(values, dtype=float)
        if values.shape != mesh.shape:
            raise ValueError(f"values shape {values.shape} != mesh shape {mesh.shape}")
        if dirichlet and np.any(values[mesh.boundary_mask] != 0.0):
            raise ValueError("dirichlet field must vanish exactly on boundary nodes")
        values.setflags(write=False)
        object.__setattr__(self, "mesh", mesh)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "dirichlet", bool(dirichlet))

    def __setattr__(self, *a):  # immutable
        raise AttributeError("Field is immutable")

    @classmethod
    def zeros(cls, mesh: Mesh, dirichlet: bool = True) -> "Field":
        return cls(mesh, np.zeros(mesh.shape), dirichlet=dirichlet)

    @classmethod
    def constant(cls, mesh: Mesh, c: float) -> "Field":
        return cls(mesh, np.full(mesh.shape, float(c)), dirichlet=(c == 0.0))

    @classmethod
    def from_function(cls, mesh: Mesh, fn, dirichlet: bool = False) -> "Field":
        """Evaluate ``fn`` on the node coordinates (``fn(x)`` or ``fn(x, y)``)."""
        vals = np.asarray(fn(*mesh.coords()), dtype=float)
        vals = np.broadcast_to(vals, mesh.shape).copy()
        if dirichlet:
            vals[mesh.boundary_mask] = 0.0
        return cls(mesh, vals, dirichlet=dirichlet)

    def with_values(self, values, dirichlet: bool | None = None) -> "Field":
        return Field(self.mesh, values, self.dirichlet if dirichlet is None else dirichlet)

    def as_dirichlet(self) -> "Field":
        vals = self.values.copy()
        vals[self.mesh.boundary_mask] = 0.0
        return Field(self.mesh, vals, dirichlet=True)

    def interior_min(self) -> float:
        return float(self.values[self.mesh.interior_mask].min())

    def __repr__(self):
        tag = "dirichlet " if self.dirichlet else ""
        return f"Field({tag}{'x'.join(map(str, self.mesh.shape))}, max|.|={np.abs(self.values).max():.3g})"


# --------------------------------------------------------------------------
# nodal gradient / adjoint divergence
# --------------------------------------------------------------------------

def gradient(f: Field) -> tuple[np.ndarray, ...]:
    """Nodal gradient: central differences inside, one-sided 3-point at the
    boundary. Exact for affine nodal data at interior nodes."""
    mesh = f.mesh
    if any(m < 3 for m in mesh.n):
        raise ValueError("mesh too coarse: need n >= 3 interior nodes per axis")
    return tuple(np.gradient(f.values, mesh.h[ax], axis=ax, edge_order=2)
                 for ax in range(mesh.dim))


def _gradient_matrix(mesh: Mesh, ax: int) -> sp.csr_matrix:
    npts = mesh.shape[ax]
    h = mesh.h[ax]
    G = sp.lil_matrix((npts, npts))
    for i in range(1, npts - 1):
        G[i, i - 1] = -0.5 / h
        G[i, i + 1] = 0.5 / h
    G[0, 0], G[0, 1], G[0, 2] = -1.5 / h, 2.0 / h, -0.5 / h
    G[-1, -1], G[-1, -2], G[-1, -3] = 1.5 / h, -2.0 / h, 0.5 / h
    G = G.tocsr()
    if mesh.dim == 1:
        return G
    eye = [sp.identity(m, format="csr") for m in mesh.shape]
    ops = [G if k == ax else eye[k] for k in range(mesh.dim)]
    return sp.kron(ops[0], ops[1], format="csr")


def divergence(mesh: Mesh, components) -> np.ndarray:
    """Negative adjoint of :func:`gradient` under the quadrature inner
    product: sum_i w_i div(F)_i u_i = -sum_c <F_c, grad_c u>_w for all u."""
    if len(components) != mesh.dim:
        raise ValueError("one component per axis expected")
    w = mesh.quad_weights.ravel()
    out = np.zeros(mesh.shape).ravel()
    for ax, Fc in enumerate(components):
        Fc = np.asarray(Fc, dtype=float)
        if Fc.shape != mesh.shape:
            raise ValueError("component shape mismatch")
        G = _gradient_matrix(mesh, ax)
        out -= G.T @ (w * Fc.ravel())
    return (out / w).reshape(mesh.shape)


# --------------------------------------------------------------------------
# cell (edge-based) slopes: the quadrature behind energies and W^{1,p}
# --------------------------------------------------------------------------

def cell_slopes(mesh: Mesh, values: np.ndarray):
    """Per-axis edge difference quotients.

    dim 1: ``(Dx,)`` with ``Dx[i] = (z[i+1]-z[i])/h``  (one per cell).
    dim 2: ``(Dx, Dy)`` on x-edges (shape (N1-1, N2)) and y-edges
    (shape (N1, N2-1)).
    """
    if mesh.dim == 1:
        return (np.diff(values) / mesh.h[0],)
    return (np.diff(values, axis=0) / mesh.h[0],
            np.diff(values, axis=1) / mesh.h[1])


def cell_grad_sq(mesh: Mesh, values: np.ndarray) -> np.ndarray:
    """Squared gradient magnitude per cell.

    Each cell averages the squared slopes of its parallel edge pairs, so a
    cell sees the full d-component gradient and the p=2 energy assembles
    the standard 3-/5-point stiffness exactly.
    """
    D = cell_slopes(mesh, values)
    if mesh.dim == 1:
        return D[0] ** 2
    Dx, Dy = D
    return 0.5 * (Dx[:, :-1] ** 2 + Dx[:, 1:] ** 2) + \
        0.5 * (Dy[:-1, :] ** 2 + Dy[1:, :] ** 2)


# --------------------------------------------------------------------------
# norms
# --------------------------------------------------------------------------

def norm_lr(f: Field, r: float) -> float:
    """Quadrature-weighted L^r norm; ``r = inf`` returns max |values|.

    Computed max-factored so large r (Moser ladders reach r ~ 1e3) and tiny
    fields do not underflow.
    """
    if r != np.inf and r < 1:
        raise ValueError("need r >= 1")
    a = np.abs(f.values)
    m = float(a.max())
    if r == np.inf or m == 0.0:
        return m
    s = float(np.sum(f.mesh.quad_weights * (a / m) ** r))
    return m * s ** (1.0 / r)


def norm_w1p(f: Field, p: float) -> float:
    """W^{1,p}_0 seminorm via cell slopes; only a norm on dirichlet fields."""
    if p <= 1:
        raise ValueError("need p > 1")
    if not f.dirichlet:
        raise ValueError("norm_w1p requires a dirichlet field (zero trace)")
    S = cell_grad_sq(f.mesh, f.values)
    m = float(S.max())
    if m == 0.0:
        return 0.0
    s = float(np.sum((S / m) ** (p / 2.0)))
    return m ** 0.5 * (f.mesh.cell_volume * s) ** (1.0 / p)


def norm_x(u: Field, v: Field, p: float, q: float) -> float:
    """Product-space norm ||u||_{1,p} + ||v||_{1,q}."""
    return norm_w1p(u, p) + norm_w1p(v, q)


def integrate(mesh: Mesh, values: np.ndarray) -> float:
    return float(np.sum(mesh.quad_weights * values))


# --------------------------------------------------------------------------
# CSV serialization: header "x[,y],value", row-major, 17 significant digits
# --------------------------------------------------------------------------

def field_to_csv(f: Field, path) -> None:
    mesh = f.mesh
    with open(path, "w") as fh:
        if mesh.dim == 1:
            fh.write("x,value\n")
            for x, v in zip(mesh.axes[0], f.values):
                fh.write(f"{x:.17g},{v:.17g}\n")
        else:
            fh.write("x,y,value\n")
            X, Y = mesh.coords()
            for x, y, v in zip(X.ravel(), Y.ravel(), f.values.ravel()):
                fh.write(f"{x:.17g},{y:.17g},{v:.17g}\n")


def field_from_csv(path, mesh: Mesh | None = None, dirichlet: bool = False) -> Field:
    data = np.genfromtxt(path, delimiter=",", names=True)
    vals = np.atleast_1d(data["value"])
    if mesh is None:
        xs = np.unique(np.atleast_1d(data["x"]))
        if "y" in (data.dtype.names or ()):
            ys = np.unique(np.atleast_1d(data["y"]))
            mesh = Mesh(((xs[0], xs[-1]), (ys[0], ys[-1])), (len(xs) - 2, len(ys) - 2))
        else:
            mesh = Mesh(((xs[0], xs[-1]),), (len(xs) - 2,))
    return Field(mesh, vals.reshape(mesh.shape), dirichlet=dirichlet)
