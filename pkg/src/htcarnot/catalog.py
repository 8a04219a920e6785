"""Built-in group catalog spanning the interesting regimes.

heisenberg3         rank 2, corank 1: the smallest non-abelian case
htype4x3            rank 4, corank 3, S = I: quaternionic, ideal
contact12           rank 4, corank 1, spectrum (1, 2): distinct eigenvalues
degenerate-corank1  rank 4, corank 1, 2-dim kernel: abnormal geodesics exist
"""

from __future__ import annotations

from functools import lru_cache

from .structure import GroupSpec, StructureConstants, build_structure

CATALOG: dict[str, GroupSpec] = {
    "heisenberg3": GroupSpec(rank=2, corank=1, spectrum=((1.0, 1),), kernel_dim=0),
    "htype4x3": GroupSpec(rank=4, corank=3, spectrum=((1.0, 2),), kernel_dim=0),
    "contact12": GroupSpec(rank=4, corank=1, spectrum=((1.0, 1), (2.0, 1)),
                           kernel_dim=0),
    "degenerate-corank1": GroupSpec(rank=4, corank=1, spectrum=((1.0, 1),),
                                    kernel_dim=2),
}


def catalog_names() -> tuple[str, ...]:
    return tuple(CATALOG)


def catalog_spec(name: str) -> GroupSpec:
    try:
        return CATALOG[name]
    except KeyError:
        known = ", ".join(CATALOG)
        raise KeyError(f"unknown catalog group {name!r}; known: {known}") from None


@lru_cache(maxsize=None)
def catalog_structure(name: str) -> StructureConstants:
    """Structure constants for a catalog group; cached, safe to share."""
    return build_structure(catalog_spec(name))
