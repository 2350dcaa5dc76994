"""Boundary reconstruction for 2D sound-soft scatterers.

Thin wrapper over the C++ core: shape library, far-field forward map and
the discrete-curve diagnostics. The heavy lifting (Tikhonov inversion,
factorization method, file formats) lives in the `elastica-scatter` CLI.
"""

try:
    from ._core import (  # noqa: F401
        ShapePoint,
        __version__,
        add_noise,
        bending_energy,
        closure_defect,
        far_field,
        is_simple,
        mobius_energy,
        polygon,
        restore_feasibility,
        shape,
        shape_names,
        turning_number,
    )
except ImportError:  # in-tree build: extension lives on sys.path, not in the package
    from _core import (  # noqa: F401
        ShapePoint,
        __version__,
        add_noise,
        bending_energy,
        closure_defect,
        far_field,
        is_simple,
        mobius_energy,
        polygon,
        restore_feasibility,
        shape,
        shape_names,
        turning_number,
    )

__all__ = [
    "ShapePoint",
    "add_noise",
    "bending_energy",
    "closure_defect",
    "far_field",
    "is_simple",
    "mobius_energy",
    "polygon",
    "restore_feasibility",
    "shape",
    "shape_names",
    "turning_number",
    "__version__",
]
