"""Singular flat surfaces: geodesic arcs, ideal triangulations and disk unfoldings."""

from .errors import *  # noqa: F401,F403
from .surface import (DEFAULT_TOL, Gluing, Surface, Tolerances, TopologySummary, Triangle, Vertex,
                      build_surface, cone_angle, curvature, gauss_bonnet_check, singular_vertices,
                      topology)
from .geodesics import (Arc, CrossingSequence, GeodesicLoop, MultiArc, SpectrumResult,
                        classify_simple_loop, enumerate_arcs, enumerate_loops, geodesic_path,
                        raw_length_spectrum, shortest_arc, shortest_essential_loop, trace_ray,
                        validate_arc)
from .surgery import (CutRecord, EmbeddedPath, barycentric_refine, cut_along, embed_path,
                      refine_at_point, reglue)
from .triangulation import (IdealTriangulation, triangulate, triangulate_disk_with_interior_labels,
                            triangulate_flat_disk, triangulate_mobius, triangulate_sphere,
                            validate_ideal)
from .unfolding import DiskUnfolding, develop_disk, unfold, validate_unfolding
from .io import load_surface, parse_surface, serialize_surface

__version__ = "0.1.0"
