"""Cusp domain geometry: partition, measures, star-shape certificates."""

from hardydiv.geometry.cusp import (
    CuspDomain,
    contains,
    overlap_measure,
    star_shape_cert,
    subdomain_measure,
    verify_star_shaped,
)

__all__ = [
    "CuspDomain",
    "contains",
    "overlap_measure",
    "star_shape_cert",
    "subdomain_measure",
    "verify_star_shaped",
]
