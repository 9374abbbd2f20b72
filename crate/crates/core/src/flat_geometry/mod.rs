//! Euclidean geometry of tetrahedra and of the barycentric dual cells built on them.

mod cell;
mod dual;
mod tet;

pub use cell::{
    barycentric_corner_cell, clip_cell, corner_cell_of_points, ConvexCell, VOLUME_FLOOR,
};
pub use dual::{
    edge_neighbourhood, edge_volume, monte_carlo_edge_volume, unfold_star, vertex_dual_volume,
    vertex_volumes, EdgeNeighbourhood, Geometry, IncidentEdge, StarPiece,
};
pub use tet::{
    angle_between_edges, dihedral_angle, dihedral_angles, dihedral_angles_of_points, embed_tet,
    law_of_cosines, tet_volume, TetLengths,
};
