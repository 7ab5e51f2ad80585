"""Plain 2D geometry predicates used by library validation and placement.

Everything here works on (x, y) tuples in meters.  Predicates use exact
float sign tests with no epsilon; inputs produced by manifests and scene
files are nowhere near degenerate, and tests cross-check against a dense
sampling oracle.
"""

from __future__ import annotations

import math

Point2 = tuple[float, float]
Polygon = tuple[Point2, ...]


def cross(o: Point2, a: Point2, b: Point2) -> float:
    """Twice the signed area of triangle (o, a, b); >0 for a CCW turn."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def orientation(o: Point2, a: Point2, b: Point2) -> int:
    """-1 clockwise, 0 collinear, +1 counterclockwise."""
    area = cross(o, a, b)
    if area > 0:
        return 1
    if area < 0:
        return -1
    return 0


def on_segment_closed(p: Point2, q: Point2, r: Point2) -> bool:
    """True if q lies on the closed segment pr; assumes p, q, r collinear."""
    return (
        min(p[0], r[0]) <= q[0] <= max(p[0], r[0])
        and min(p[1], r[1]) <= q[1] <= max(p[1], r[1])
    )


def strictly_between(p: Point2, q: Point2, r: Point2) -> bool:
    """True if q lies on segment pr, excluding both endpoints."""
    if orientation(p, q, r) != 0:
        return False
    if q == p or q == r:
        return False
    return on_segment_closed(p, q, r)


def segments_properly_intersect(
    p1: Point2, p2: Point2, q1: Point2, q2: Point2
) -> bool:
    """True if the open interiors of the two segments cross."""
    o1 = orientation(p1, p2, q1)
    o2 = orientation(p1, p2, q2)
    o3 = orientation(q1, q2, p1)
    o4 = orientation(q1, q2, p2)
    return o1 * o2 < 0 and o3 * o4 < 0


def segments_intersect(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool:
    """Closed-segment intersection, touching endpoints included."""
    if segments_properly_intersect(p1, p2, q1, q2):
        return True
    if orientation(p1, p2, q1) == 0 and on_segment_closed(p1, q1, p2):
        return True
    if orientation(p1, p2, q2) == 0 and on_segment_closed(p1, q2, p2):
        return True
    if orientation(q1, q2, p1) == 0 and on_segment_closed(q1, p1, q2):
        return True
    if orientation(q1, q2, p2) == 0 and on_segment_closed(q1, p2, q2):
        return True
    return False


def point_in_polygon(point: Point2, polygon: Polygon) -> bool:
    """True if the point is inside the polygon or on its boundary."""
    n = len(polygon)
    for i in range(n):
        a, b = polygon[i], polygon[(i + 1) % n]
        if orientation(a, point, b) == 0 and on_segment_closed(a, point, b):
            return True
    # Ray crossing parity for strict interior.
    px, py = point
    inside = False
    for i in range(n):
        ax, ay = polygon[i]
        bx, by = polygon[(i + 1) % n]
        if (ay > py) != (by > py):
            x_at_y = ax + (py - ay) * (bx - ax) / (by - ay)
            if x_at_y > px:
                inside = not inside
    return inside


def polygon_is_simple(polygon: Polygon) -> bool:
    """True for a non-self-intersecting polygon without repeated vertices."""
    n = len(polygon)
    if n < 3:
        return False
    if len(set(polygon)) != n:
        return False
    for i in range(n):
        a1, a2 = polygon[i], polygon[(i + 1) % n]
        for j in range(i + 1, n):
            b1, b2 = polygon[j], polygon[(j + 1) % n]
            shares_vertex = {a1, a2} & {b1, b2}
            if shares_vertex:
                # Adjacent edges may only touch at the shared vertex.
                shared = shares_vertex.pop()
                others = [p for p in (a1, a2, b1, b2) if p != shared]
                if len(others) == 2 and orientation(shared, others[0], others[1]) == 0:
                    if on_segment_closed(shared, others[0], others[1]) or \
                            on_segment_closed(shared, others[1], others[0]):
                        return False
                continue
            if segments_intersect(a1, a2, b1, b2):
                return False
    return True


def occluded(p: Point2, q: Point2, obstacles: list[Polygon] | tuple[Polygon, ...]) -> bool:
    """True iff the open segment pq meets any obstacle interior or boundary.

    The endpoints themselves do not count: a sight line may start or end
    exactly on an obstacle without being occluded by it.
    """
    if p == q:
        return False
    mid = ((p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0)
    for polygon in obstacles:
        n = len(polygon)
        for i in range(n):
            a, b = polygon[i], polygon[(i + 1) % n]
            if segments_properly_intersect(p, q, a, b):
                return True
        for vertex in polygon:
            if strictly_between(p, vertex, q):
                return True
        if point_in_polygon(mid, polygon):
            return True
    return False


def distance(p: Point2, q: Point2) -> float:
    return math.hypot(q[0] - p[0], q[1] - p[1])


def point_along(a: Point2, b: Point2, dist: float) -> Point2:
    """Point at the given distance from a toward b."""
    length = distance(a, b)
    if length == 0.0:
        return a
    t = dist / length
    return (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)


def project_point_to_segment(p: Point2, a: Point2, b: Point2) -> tuple[float, Point2]:
    """Closest point of segment ab to p, as (distance along ab, point)."""
    abx, aby = b[0] - a[0], b[1] - a[1]
    length_sq = abx * abx + aby * aby
    if length_sq == 0.0:
        return 0.0, a
    t = ((p[0] - a[0]) * abx + (p[1] - a[1]) * aby) / length_sq
    t = min(1.0, max(0.0, t))
    return t * math.sqrt(length_sq), (a[0] + abx * t, a[1] + aby * t)


def wrap_angle(angle: float) -> float:
    """Wrap an angle to [-pi, pi)."""
    return (angle + math.pi) % (2.0 * math.pi) - math.pi
