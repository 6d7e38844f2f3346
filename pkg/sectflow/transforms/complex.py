import logging
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from sectflow.shapes.shape import GridShape


@dataclass(frozen=True, eq=False)
class CubicalComplex:
    """
    Closed cubical complex of a binary shape.

    Attributes:
        vertices (np.ndarray):
            (V, 2) physical coordinates of the lattice vertices.
        edges (np.ndarray):
            (E, 2) vertex indices of every edge.
        faces (np.ndarray):
            (F, 4) vertex indices of every face, counter-clockwise from lower-left.
        radius_R (float):
            Radius of the ball the complex lives in.
    """

    vertices : np.ndarray
    edges    : np.ndarray
    faces    : np.ndarray
    radius_R : float

    @property
    def num_cells(self) -> int:
        return len(self.vertices) + len(self.edges) + len(self.faces)


def build_complex(shape: GridShape) -> CubicalComplex:
    """
    Function to build the cubical complex of a shape: one face per foreground pixel, plus the
    deduplicated edges and vertices of the pixel boundaries.
    """

    pixels = np.argwhere(shape.mask)
    i, j = pixels[:, 0], pixels[:, 1]

    # Corner lattice index (a, b) sits at origin + (a - 1/2, b - 1/2) * pitch
    stride = shape.height + 1
    lower_left = i * stride + j
    lower_right = (i + 1) * stride + j
    upper_right = (i + 1) * stride + (j + 1)
    upper_left = i * stride + (j + 1)
    face_keys = np.column_stack([lower_left, lower_right, upper_right, upper_left])

    vertex_keys, face_vertices = np.unique(face_keys, return_inverse=True)
    face_vertices = face_vertices.reshape(face_keys.shape)

    # Bottom, right, top and left edges of every pixel
    edge_pairs = np.concatenate([
        face_vertices[:, [0, 1]],
        face_vertices[:, [1, 2]],
        face_vertices[:, [3, 2]],
        face_vertices[:, [0, 3]],
    ])
    edges = np.unique(edge_pairs, axis=0)

    pitch = shape.frame.pixel_pitch
    ox, oy = shape.frame.origin
    a, b = np.divmod(vertex_keys, stride)
    vertices = np.column_stack([ox + (a - 0.5) * pitch, oy + (b - 0.5) * pitch])

    logging.debug(f'Built cubical complex with {len(vertices)} vertices, {len(edges)} edges and {len(face_vertices)} faces.')

    return CubicalComplex(
        vertices=vertices,
        edges=edges,
        faces=face_vertices,
        radius_R=shape.frame.radius_R
    )


def euler_characteristic(cubical: CubicalComplex) -> int:
    return len(cubical.vertices) - len(cubical.edges) + len(cubical.faces)


def oracle_euler(shape: GridShape) -> int:
    """
    Function to get components minus holes of a mask by flood fill, independent of the complex.

    Foreground is 8-connected, background is 4-connected; background touching the border is
    not a hole.
    """

    mask = np.asarray(shape.mask, dtype=bool)

    _, components = ndimage.label(mask, structure=np.ones((3, 3), dtype=int))

    background = np.pad(~mask, 1, mode='constant', constant_values=True)
    _, background_components = ndimage.label(background, structure=ndimage.generate_binary_structure(2, 1))

    return int(components) - (int(background_components) - 1)
