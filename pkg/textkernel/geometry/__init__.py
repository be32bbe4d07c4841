"""Polygons, rasterization, contour tracing and rotated rectangles."""
from textkernel.geometry.contours import trace_contours
from textkernel.geometry.polygon import DegeneratePolygonError, Polygon, mask_iou, rasterize_polygon
from textkernel.geometry.rect import RotatedRect, convex_hull, min_area_rect

__all__ = [
    "DegeneratePolygonError",
    "Polygon",
    "RotatedRect",
    "convex_hull",
    "mask_iou",
    "min_area_rect",
    "rasterize_polygon",
    "trace_contours",
]
