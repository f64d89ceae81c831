"""Read and write triangle meshes as Wavefront OBJ files

Only vertex records (v x y z) and face records (f a b c) are read.
Every other record is ignored and never written.
"""

from pathlib import Path
from typing import List, Tuple

from .exception import ObjParseException
from .mesh import TriangleMesh
from .types import Face, Point


def _parse_vertex(tokens: List[str], line_number: int) -> Point:
    if len(tokens) < 3:
        raise ObjParseException("vertex record needs three coordinates", line_number)
    try:
        x, y, z = (float(token) for token in tokens[:3])
    except ValueError as error:
        raise ObjParseException(f"invalid coordinate in {tokens}", line_number) from error
    return (x, y, z)


def _parse_face(
    tokens: List[str], num_vertices: int, line_number: int
) -> Tuple[int, int, int]:
    if len(tokens) != 3:
        raise ObjParseException(
            f"non-triangular face with {len(tokens)} vertices", line_number
        )
    indices = []
    for token in tokens:
        try:
            index = int(token.split("/")[0])
        except ValueError as error:
            raise ObjParseException(f"invalid face index {token}", line_number) from error
        # negative indices count back from the last vertex read so far
        if index < 0:
            index = num_vertices + index + 1
        indices.append(index - 1)
    return (indices[0], indices[1], indices[2])


def load_obj(path: Path) -> TriangleMesh:
    """Load a triangle mesh from a Wavefront OBJ file

    Args:
        path: Path to the OBJ file

    Returns:
        Mesh with the vertex positions and 0-based faces of the file

    Raises:
        ObjParseException: If a record is malformed, a face is not a triangle,
            or a face index is out of range
        FileNotFoundError: If the file does not exist
    """
    positions: List[Point] = []
    faces: List[Face] = []
    face_lines: List[int] = []
    with open(path, "r", encoding="utf-8") as obj_file:
        for line_number, line in enumerate(obj_file, start=1):
            tokens = line.split("#", 1)[0].split()
            if not tokens:
                continue
            if tokens[0] == "v":
                positions.append(_parse_vertex(tokens[1:], line_number))
            elif tokens[0] == "f":
                faces.append(_parse_face(tokens[1:], len(positions), line_number))
                face_lines.append(line_number)
    num_vertices = len(positions)
    for face, line_number in zip(faces, face_lines):
        if min(face) < 0 or max(face) >= num_vertices:
            message = f"face index out of range: {tuple(v + 1 for v in face)}"
            message += f" with {num_vertices} vertices"
            raise ObjParseException(message, line_number)
        if len(set(face)) < 3:
            raise ObjParseException(f"face repeats a vertex: {face}", line_number)
    return TriangleMesh(positions=positions, faces=faces)


def save_obj(mesh: TriangleMesh, path: Path) -> None:
    """Write a triangle mesh to a Wavefront OBJ file

    Positions are written with 17 significant digits so they read back exactly.

    Args:
        mesh: Triangle mesh
        path: Path of the file to write
    """
    lines = [f"# {mesh.num_vertices} vertices, {mesh.num_faces} faces"]
    for x, y, z in mesh.positions.tolist():
        lines.append(f"v {x:.17g} {y:.17g} {z:.17g}")
    for a, b, c in mesh.faces.tolist():
        lines.append(f"f {a + 1} {b + 1} {c + 1}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
