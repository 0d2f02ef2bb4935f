"""Uniform Cartesian grids over a box and its collar, plus nodal fields.

Interior nodes are the lattice nodes of the closed box (boundary faces
included); the collar is the band of lattice nodes strictly outside the box
within one kernel support radius, where exterior data lives.  Collar width is
rounded up to a whole number of cells so every interior stencil stays inside
interior + collar.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .reports import fmt


@dataclass(frozen=True)
class Grid:
    dim: int
    spacing: float
    box: tuple            # ((a1,b1), ...) per axis
    interior_shape: tuple  # interior node count per axis
    collar_cells: int      # collar width in cells per side

    @property
    def full_shape(self) -> tuple:
        c = 2 * self.collar_cells
        return tuple(n + c for n in self.interior_shape)

    @property
    def interior_slices(self) -> tuple:
        c = self.collar_cells
        return tuple(slice(c, c + n) for n in self.interior_shape)

    @property
    def collar_width(self) -> float:
        return self.collar_cells * self.spacing

    @property
    def n_interior(self) -> int:
        return int(np.prod(self.interior_shape))

    @property
    def n_collar(self) -> int:
        return int(np.prod(self.full_shape)) - self.n_interior

    def axis_coords(self, axis: int, full: bool = False) -> np.ndarray:
        """Node coordinates along one axis (interior by default)."""
        a = self.box[axis][0]
        n = self.interior_shape[axis]
        if full:
            c = self.collar_cells
            return a + self.spacing * (np.arange(n + 2 * c) - c)
        return a + self.spacing * np.arange(n)

    def interior_coords(self) -> np.ndarray:
        """Interior node coordinates: (n,) for 1D, (n1, n2, 2) stacked for 2D."""
        if self.dim == 1:
            return self.axis_coords(0)
        g = np.meshgrid(*(self.axis_coords(i) for i in range(self.dim)), indexing="ij")
        return np.stack(g, axis=-1)

    def full_coords(self) -> np.ndarray:
        if self.dim == 1:
            return self.axis_coords(0, full=True)
        g = np.meshgrid(*(self.axis_coords(i, full=True) for i in range(self.dim)), indexing="ij")
        return np.stack(g, axis=-1)

    def collar_mask(self) -> np.ndarray:
        """Boolean mask over the full lattice; True on collar nodes."""
        mask = np.ones(self.full_shape, dtype=bool)
        mask[self.interior_slices] = False
        return mask


def build_grid(box, h: float, kernel_radius: float) -> Grid:
    """Grid over the closed box with a collar of ceil(kernel_radius/h) cells.

    Box axes must span a positive length; nodes are laid at a + k*h, and the
    far face is included when it lands on the lattice (tolerance 1e-9*h).
    """
    if not h > 0:
        raise ValueError(f"grid spacing must be positive, got {h}")
    if not kernel_radius > 0:
        raise ValueError(f"kernel radius must be positive, got {kernel_radius}")
    box = tuple((float(a), float(b)) for a, b in np.atleast_2d(np.asarray(box, dtype=float)))
    dim = len(box)
    if dim not in (1, 2):
        raise ValueError(f"only 1D and 2D boxes are supported, got {dim} axes")
    shape = []
    for a, b in box:
        if not b > a:
            raise ValueError(f"degenerate box axis ({a}, {b})")
        shape.append(int(np.floor((b - a) / h + 1e-9)) + 1)
    collar_cells = int(np.ceil(kernel_radius / h - 1e-12))
    return Grid(
        dim=dim,
        spacing=float(h),
        box=box,
        interior_shape=tuple(shape),
        collar_cells=collar_cells,
    )


@dataclass
class Field:
    """Nodal values over a grid's full lattice (interior + collar) at time t."""

    grid: Grid
    values: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.full_shape:
            raise ValueError(
                f"field shape {self.values.shape} does not match lattice {self.grid.full_shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")

    @property
    def interior(self) -> np.ndarray:
        return self.values[self.grid.interior_slices]

    def copy(self) -> "Field":
        return Field(self.grid, self.values.copy(), self.t)

    def to_csv(self, path) -> None:
        """Rows of (node coordinates, value) over the full lattice."""
        coords = self.grid.full_coords()
        with open(path, "w") as fh:
            cols = ",".join(f"x{i}" for i in range(self.grid.dim))
            fh.write(f"{cols},value\n")
            if self.grid.dim == 1:
                for x, v in zip(coords, self.values):
                    fh.write(f"{fmt(x)},{fmt(v)}\n")
            else:
                flat_c = coords.reshape(-1, self.grid.dim)
                flat_v = self.values.reshape(-1)
                for xy, v in zip(flat_c, flat_v):
                    fh.write(f"{fmt(xy[0])},{fmt(xy[1])},{fmt(v)}\n")


def field_from(grid: Grid, sampler, t: float = 0.0) -> Field:
    """Sample a callable of position over the full lattice."""
    coords = grid.full_coords()
    values = np.asarray(sampler(coords), dtype=float)
    return Field(grid, np.broadcast_to(values, grid.full_shape).copy(), t)


def zero_field(grid: Grid, t: float = 0.0) -> Field:
    return Field(grid, np.zeros(grid.full_shape), t)
